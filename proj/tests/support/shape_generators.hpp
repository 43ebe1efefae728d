#pragma once

// Random SHACL shapes graphs paired with the plain description they were
// generated from, and a brute-force checker that works off that description
// only. Used to cross-check extract_schema + validate_state.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "generators.hpp"
#include "tessera/errors.hpp"
#include "tessera/shapes/schema.hpp"

namespace tessera::testing {

struct GenConstraint {
  rdf::Term path;
  std::uint64_t min = 0;
  std::optional<std::uint64_t> max;
  std::optional<rdf::Term> datatype;
  std::optional<rdf::Term> cls;
  std::optional<std::vector<rdf::Term>> in;
  std::optional<rdf::Term> has_value;
};

struct GenSchema {
  std::map<rdf::Term, std::vector<GenConstraint>> classes;
  rdf::QuadSet quads;
};

struct GenCase {
  GenSchema schema;
  rdf::EntityState state;
  std::set<rdf::Term> types;
  std::map<rdf::Term, std::set<rdf::Term>> lookup;  // missing key: lookup throws
};

inline const std::vector<rdf::Term>& shape_paths() {
  static const std::vector<rdf::Term> v = [] {
    std::vector<rdf::Term> out;
    for (int i = 0; i < 6; ++i) out.push_back(rdf::Term::iri("http://ex.org/p/" + std::to_string(i)));
    return out;
  }();
  return v;
}

inline const std::vector<rdf::Term>& shape_classes() {
  static const std::vector<rdf::Term> v = {rdf::Term::iri("http://ex.org/C/0"),
                                           rdf::Term::iri("http://ex.org/C/1"),
                                           rdf::Term::iri("http://ex.org/C/2")};
  return v;
}

inline const std::vector<rdf::Term>& shape_datatypes() {
  static const std::vector<rdf::Term> v = {
      rdf::Term::iri(std::string(vocab::kXsdString)), rdf::Term::iri(std::string(vocab::kXsdInteger)),
      rdf::Term::iri(std::string(vocab::kRdfLangString))};
  return v;
}

inline const std::vector<rdf::Term>& shape_values() {
  static const std::vector<rdf::Term> v = {
      rdf::Term::literal("a"), rdf::Term::literal("b"), rdf::Term::literal("7", std::string(vocab::kXsdInteger)),
      rdf::Term::literal("x", {}, "en"), rdf::Term::iri("http://ex.org/v/0"), rdf::Term::iri("http://ex.org/v/1"),
      rdf::Term::iri("http://ex.org/v/2"), rdf::Term::iri("http://ex.org/v/unresolvable")};
  return v;
}

inline GenSchema random_schema(Rng& rng) {
  GenSchema g;
  const auto sh = [](const char* local) { return rdf::Term::iri(std::string(vocab::kSh) + local); };
  const auto rdf_iri = [](std::string_view v) { return rdf::Term::iri(std::string(v)); };
  const auto integer = [](std::uint64_t n) {
    return rdf::Term::literal(std::to_string(n), std::string(vocab::kXsdInteger));
  };
  int blank = 0;
  const auto fresh = [&blank] { return rdf::Term::blank("n" + std::to_string(blank++)); };
  const std::size_t n_classes = pick(rng, 3);
  for (std::size_t ci = 0; ci < n_classes; ++ci) {
    const rdf::Term cls = shape_classes()[ci];
    const rdf::Term node = rdf::Term::iri("http://ex.org/shape/" + std::to_string(ci));
    g.quads.emplace(node, rdf_iri(vocab::kRdfType), sh("NodeShape"));
    g.quads.emplace(node, sh("targetClass"), cls);
    auto& entry = g.classes[cls];
    std::vector<rdf::Term> paths = shape_paths();
    std::shuffle(paths.begin(), paths.end(), rng);
    const std::size_t n_props = 1 + pick(rng, 4);
    for (std::size_t k = 0; k < n_props; ++k) {
      GenConstraint c{paths[k]};
      const rdf::Term ps = fresh();
      g.quads.emplace(node, sh("property"), ps);
      g.quads.emplace(ps, sh("path"), c.path);
      if (coin(rng)) {
        c.min = pick(rng, 3);
        g.quads.emplace(ps, sh("minCount"), integer(c.min));
      }
      if (coin(rng)) {
        c.max = c.min + pick(rng, 3);
        g.quads.emplace(ps, sh("maxCount"), integer(*c.max));
      }
      switch (pick(rng, 3)) {
        case 0:
          c.datatype = shape_datatypes()[pick(rng, shape_datatypes().size())];
          g.quads.emplace(ps, sh("datatype"), *c.datatype);
          break;
        case 1:
          c.cls = shape_classes()[pick(rng, shape_classes().size())];
          g.quads.emplace(ps, sh("class"), *c.cls);
          break;
        default:
          break;
      }
      switch (pick(rng, 4)) {
        case 0: {
          std::vector<rdf::Term> in;
          const std::size_t n = pick(rng, 4);
          for (std::size_t i = 0; i < n; ++i) in.push_back(shape_values()[pick(rng, shape_values().size())]);
          rdf::Term head = rdf_iri(vocab::kRdfNil);
          for (auto it = in.rbegin(); it != in.rend(); ++it) {
            const rdf::Term cell = fresh();
            g.quads.emplace(cell, rdf_iri(vocab::kRdfFirst), *it);
            g.quads.emplace(cell, rdf_iri(vocab::kRdfRest), head);
            head = cell;
          }
          g.quads.emplace(ps, sh("in"), head);
          c.in = std::move(in);
          break;
        }
        case 1:
          c.has_value = shape_values()[pick(rng, shape_values().size())];
          g.quads.emplace(ps, sh("hasValue"), *c.has_value);
          if (c.max && *c.max < 1) {
            // hasValue raises minCount to 1; keep the shape consistent.
            g.quads.erase(rdf::Quad(ps, sh("maxCount"), integer(*c.max)));
            c.max = 1;
            g.quads.emplace(ps, sh("maxCount"), integer(1));
          }
          break;
        default:
          break;
      }
      entry.push_back(std::move(c));
    }
  }
  return g;
}

inline GenCase random_validation_case(Rng& rng) {
  GenCase gc{random_schema(rng), rdf::EntityState(rdf::Term::iri("http://ex.org/focus")), {}, {}};
  for (const auto& cls : shape_classes()) {
    if (coin(rng)) gc.types.insert(cls);
  }
  if (coin(rng, 0.2)) gc.types.insert(rdf::Term::iri("http://ex.org/C/unconstrained"));
  for (const auto& v : shape_values()) {
    if (!v.is_iri() || v.value().find("unresolvable") != std::string::npos) continue;
    std::set<rdf::Term> classes;
    for (const auto& cls : shape_classes()) {
      if (coin(rng)) classes.insert(cls);
    }
    gc.lookup[v] = classes;
  }
  const std::size_t n = pick(rng, 10);
  for (std::size_t i = 0; i < n; ++i) {
    gc.state.insert(rdf::Triple(gc.state.entity(), shape_paths()[pick(rng, shape_paths().size())],
                                shape_values()[pick(rng, shape_values().size())]));
  }
  return gc;
}

inline shapes::TypeLookup lookup_of(const GenCase& gc) {
  return [&gc](const rdf::Term& t) {
    const auto it = gc.lookup.find(t);
    if (it == gc.lookup.end()) throw TransportError("no answer for " + t.text());
    return it->second;
  };
}

// Naive checker over GenSchema: scans the triple list for every constraint.
inline std::vector<shapes::Violation> brute_force_validate(const GenCase& gc) {
  using shapes::ViolationKind;
  std::vector<shapes::Violation> out;
  const rdf::Term& focus = gc.state.entity();
  for (const auto& [cls, constraints] : gc.schema.classes) {
    if (!gc.types.count(cls)) continue;
    for (const auto& c : constraints) {
      std::vector<rdf::Term> vals;
      for (const auto& t : gc.state.triples()) {
        if (t.predicate() == c.path) vals.push_back(t.object());
      }
      const std::uint64_t min = c.has_value ? std::max<std::uint64_t>(c.min, 1) : c.min;
      std::optional<std::vector<rdf::Term>> allowed = c.in;
      if (c.has_value) allowed = std::vector<rdf::Term>{*c.has_value};
      if (vals.size() < min) {
        out.push_back({focus, c.path, ViolationKind::MinCount,
                       "expected at least " + std::to_string(min) + " value(s) of " + c.path.text() +
                           " for class " + cls.text() + ", found " + std::to_string(vals.size())});
      }
      if (c.max && vals.size() > *c.max) {
        out.push_back({focus, c.path, ViolationKind::MaxCount,
                       "expected at most " + std::to_string(*c.max) + " value(s) of " + c.path.text() +
                           " for class " + cls.text() + ", found " + std::to_string(vals.size())});
      }
      for (const auto& v : vals) {
        if (c.datatype) {
          const bool ok = v.is_literal() && v.datatype() == c.datatype->value();
          if (!ok) {
            out.push_back({focus, c.path, ViolationKind::Datatype,
                           "value " + v.text() + " of " + c.path.text() +
                               " is not a literal of datatype " + c.datatype->text()});
          }
        }
        if (c.cls) {
          if (v.is_literal()) {
            out.push_back({focus, c.path, ViolationKind::ClassMembership,
                           "value " + v.text() + " of " + c.path.text() +
                               " is a literal, not an instance of " + c.cls->text()});
          } else if (!gc.lookup.count(v)) {
            out.push_back({focus, c.path, ViolationKind::ClassMembership,
                           "could not resolve the classes of " + v.text() + ": no answer for " + v.text()});
          } else if (!gc.lookup.at(v).count(*c.cls)) {
            out.push_back({focus, c.path, ViolationKind::ClassMembership,
                           "value " + v.text() + " of " + c.path.text() + " is not an instance of " +
                               c.cls->text()});
          }
        }
        if (allowed) {
          bool found = false;
          std::string list;
          for (const auto& a : *allowed) {
            if (a == v) found = true;
            list += (list.empty() ? "" : ", ") + a.text();
          }
          if (!found) {
            out.push_back({focus, c.path, ViolationKind::NotInList,
                           "value " + v.text() + " of " + c.path.text() + " is not one of [" + list + "]"});
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const shapes::Violation& a, const shapes::Violation& b) {
    if (a.path != b.path) return a.path < b.path;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.message < b.message;
  });
  return out;
}

}  // namespace tessera::testing
