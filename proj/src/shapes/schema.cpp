#include "tessera/shapes/schema.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "tessera/errors.hpp"
#include "tessera/rdf/vocab.hpp"

namespace tessera::shapes {

namespace {

using Props = std::map<std::string, std::vector<rdf::Term>>;
using Index = std::map<rdf::Term, Props>;

std::string sh(std::string_view local) { return std::string(vocab::kSh) + std::string(local); }

bool in_sh(const std::string& predicate) {
  return predicate.compare(0, vocab::kSh.size(), vocab::kSh) == 0;
}

std::string local(const std::string& predicate) { return "sh:" + predicate.substr(vocab::kSh.size()); }

const std::vector<rdf::Term>& values(const Props& props, std::string_view local_name) {
  static const std::vector<rdf::Term> none;
  const auto it = props.find(sh(local_name));
  return it == props.end() ? none : it->second;
}

std::optional<rdf::Term> single(const rdf::Term& shape, const Props& props, std::string_view local_name) {
  const auto& v = values(props, local_name);
  if (v.empty()) return std::nullopt;
  if (v.size() > 1) throw InvalidShape(shape.text() + " has several values for sh:" + std::string(local_name));
  return v.front();
}

std::uint64_t count_value(const rdf::Term& shape, const rdf::Term& value, std::string_view what) {
  const bool integer_type = value.datatype() == vocab::kXsdInteger ||
                            value.datatype() == std::string(vocab::kXsd) + "nonNegativeInteger";
  std::string_view lex = value.value();
  if (!lex.empty() && lex.front() == '+') lex.remove_prefix(1);
  std::uint64_t n = 0;
  const auto [end, ec] = std::from_chars(lex.data(), lex.data() + lex.size(), n);
  if (!value.is_literal() || !integer_type || lex.empty() || ec != std::errc() ||
      end != lex.data() + lex.size()) {
    throw InvalidShape(shape.text() + ": sh:" + std::string(what) +
                       " must be a non-negative xsd:integer, got " + value.text());
  }
  return n;
}

rdf::Term require_iri(const rdf::Term& shape, const rdf::Term& value, std::string_view what) {
  if (!value.is_iri()) throw InvalidShape(shape.text() + ": sh:" + std::string(what) + " must be an IRI");
  return value;
}

std::vector<rdf::Term> walk_list(const rdf::Term& head, const Index& index) {
  const std::string first = std::string(vocab::kRdfFirst);
  const std::string rest = std::string(vocab::kRdfRest);
  std::vector<rdf::Term> out;
  std::set<rdf::Term> visited;
  rdf::Term node = head;
  while (!(node.is_iri() && node.value() == vocab::kRdfNil)) {
    if (node.is_literal()) throw MalformedList("list node is a literal: " + node.text());
    if (!visited.insert(node).second) throw MalformedList("list revisits " + node.text());
    const auto it = index.find(node);
    if (it == index.end()) throw MalformedList("list node " + node.text() + " has no rdf:first");
    const auto f = it->second.find(first);
    const auto r = it->second.find(rest);
    if (f == it->second.end() || f->second.size() != 1) {
      throw MalformedList("list node " + node.text() + " needs exactly one rdf:first");
    }
    if (r == it->second.end() || r->second.size() != 1) {
      throw MalformedList("list node " + node.text() + " needs exactly one rdf:rest");
    }
    out.push_back(f->second.front());
    node = r->second.front();
  }
  return out;
}

const std::set<std::string>& node_shape_keys() {
  static const std::set<std::string> keys = {sh("targetClass"), sh("property"), sh("name"),
                                             sh("description"), sh("message"), sh("order")};
  return keys;
}

const std::set<std::string>& property_shape_keys() {
  static const std::set<std::string> keys = {
      sh("path"),  sh("minCount"), sh("maxCount"),    sh("datatype"), sh("class"),
      sh("in"),    sh("hasValue"), sh("name"),        sh("description"), sh("message"),
      sh("order")};
  return keys;
}

PropertyConstraint compile_property(const rdf::Term& shape, const Index& index) {
  const auto it = index.find(shape);
  if (it == index.end()) throw InvalidShape("property shape " + shape.text() + " has no triples");
  const Props& props = it->second;
  for (const auto& [pred, objs] : props) {
    if (in_sh(pred) && !property_shape_keys().count(pred)) {
      throw UnsupportedShape(shape.text() + " uses unsupported " + local(pred));
    }
  }
  const auto path = single(shape, props, "path");
  if (!path) throw InvalidShape("property shape " + shape.text() + " has no sh:path");
  if (!path->is_iri()) {
    throw UnsupportedShape(shape.text() + ": only single-IRI sh:path values are supported");
  }
  PropertyConstraint c{*path};
  if (const auto v = single(shape, props, "minCount")) c.min_count = count_value(shape, *v, "minCount");
  if (const auto v = single(shape, props, "maxCount")) c.max_count = count_value(shape, *v, "maxCount");
  if (const auto v = single(shape, props, "datatype")) c.datatype = require_iri(shape, *v, "datatype");
  if (const auto v = single(shape, props, "class")) c.value_class = require_iri(shape, *v, "class");
  if (c.datatype && c.value_class) {
    throw InvalidShape(shape.text() + " sets both sh:datatype and sh:class");
  }
  const auto in = single(shape, props, "in");
  const auto has_value = single(shape, props, "hasValue");
  if (in && has_value) throw InvalidShape(shape.text() + " sets both sh:in and sh:hasValue");
  if (in) c.allowed_values = walk_list(*in, index);
  if (has_value) {
    c.allowed_values = std::vector<rdf::Term>{*has_value};
    c.min_count = std::max<std::uint64_t>(c.min_count, 1);
  }
  if (c.max_count && *c.max_count < c.min_count) {
    throw InvalidShape(shape.text() + ": sh:maxCount " + std::to_string(*c.max_count) +
                       " is below sh:minCount " + std::to_string(c.min_count));
  }
  if (const auto v = single(shape, props, "name")) {
    if (!v->is_literal()) throw InvalidShape(shape.text() + ": sh:name must be a literal");
    c.name = v->value();
  }
  if (const auto v = single(shape, props, "order")) {
    char* end = nullptr;
    const double d = std::strtod(v->value().c_str(), &end);
    if (!v->is_literal() || v->value().empty() || *end != '\0') {
      throw InvalidShape(shape.text() + ": sh:order must be numeric");
    }
    c.order = d;
  }
  return c;
}

std::string value_list_text(const std::vector<rdf::Term>& allowed) {
  std::string out;
  for (const auto& t : allowed) {
    if (!out.empty()) out += ", ";
    out += t.text();
  }
  return out;
}

}  // namespace

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::MinCount: return "MinCount";
    case ViolationKind::MaxCount: return "MaxCount";
    case ViolationKind::Datatype: return "Datatype";
    case ViolationKind::ClassMembership: return "ClassMembership";
    case ViolationKind::NotInList: return "NotInList";
  }
  return "Unknown";
}

FormSchema extract_schema(const rdf::QuadSet& shapes) {
  Index index;
  for (const auto& q : shapes) index[q.subject()][q.predicate().value()].push_back(q.object());

  const rdf::Term node_shape = rdf::Term::iri(sh("NodeShape"));
  const std::string type = std::string(vocab::kRdfType);
  std::set<rdf::Term> property_shapes;
  FormSchema schema;
  for (const auto& [subject, props] : index) {
    const auto types = props.find(type);
    const bool typed = types != props.end() &&
                       std::find(types->second.begin(), types->second.end(), node_shape) != types->second.end();
    const bool targeted = std::any_of(props.begin(), props.end(), [](const auto& kv) {
      return kv.first.rfind(sh("target"), 0) == 0;
    });
    if (!typed && !targeted) continue;
    for (const auto& [pred, objs] : props) {
      if (in_sh(pred) && !node_shape_keys().count(pred)) {
        throw UnsupportedShape(subject.text() + " uses unsupported " + local(pred));
      }
    }
    const auto& targets = values(props, "targetClass");
    std::vector<PropertyConstraint> constraints;
    for (const auto& ps : values(props, "property")) {
      if (ps.is_literal()) throw InvalidShape(subject.text() + ": sh:property must be a node");
      property_shapes.insert(ps);
      constraints.push_back(compile_property(ps, index));
    }
    for (const auto& cls : targets) {
      require_iri(subject, cls, "targetClass");
      auto& entry = schema.classes[cls];
      for (const auto& c : constraints) {
        const bool duplicate = std::any_of(entry.begin(), entry.end(),
                                           [&](const PropertyConstraint& e) { return e.path == c.path; });
        if (duplicate) {
          throw InvalidShape("class " + cls.text() + " constrains " + c.path.text() + " more than once");
        }
        entry.push_back(c);
      }
    }
  }
  // Property shapes that no node shape reaches would otherwise slip through
  // unchecked; reject the unsupported ones all the same.
  for (const auto& [subject, props] : index) {
    if (property_shapes.count(subject) || !props.count(sh("path"))) continue;
    (void)compile_property(subject, index);
  }
  return schema;
}

ValidationReport validate_state(const rdf::EntityState& state, const std::set<rdf::Term>& rdf_types,
                                const FormSchema& schema, const TypeLookup& type_lookup) {
  ValidationReport report;
  const auto add = [&](const rdf::Term& path, ViolationKind kind, std::string message) {
    report.violations.push_back(Violation{state.entity(), path, kind, std::move(message)});
  };
  for (const auto& cls : rdf_types) {
    const auto entry = schema.classes.find(cls);
    if (entry == schema.classes.end()) continue;
    for (const auto& c : entry->second) {
      const std::set<rdf::Term> objects = state.objects(c.path);
      const std::uint64_t n = objects.size();
      if (n < c.min_count) {
        add(c.path, ViolationKind::MinCount,
            "expected at least " + std::to_string(c.min_count) + " value(s) of " + c.path.text() +
                " for class " + cls.text() + ", found " + std::to_string(n));
      }
      if (c.max_count && n > *c.max_count) {
        add(c.path, ViolationKind::MaxCount,
            "expected at most " + std::to_string(*c.max_count) + " value(s) of " + c.path.text() +
                " for class " + cls.text() + ", found " + std::to_string(n));
      }
      for (const auto& v : objects) {
        if (c.datatype && !(v.is_literal() && v.datatype() == c.datatype->value())) {
          add(c.path, ViolationKind::Datatype,
              "value " + v.text() + " of " + c.path.text() + " is not a literal of datatype " +
                  c.datatype->text());
        }
        if (c.value_class) {
          if (v.is_literal()) {
            add(c.path, ViolationKind::ClassMembership,
                "value " + v.text() + " of " + c.path.text() + " is a literal, not an instance of " +
                    c.value_class->text());
          } else {
            try {
              if (!type_lookup(v).count(*c.value_class)) {
                add(c.path, ViolationKind::ClassMembership,
                    "value " + v.text() + " of " + c.path.text() + " is not an instance of " +
                        c.value_class->text());
              }
            } catch (const std::exception& e) {
              add(c.path, ViolationKind::ClassMembership,
                  "could not resolve the classes of " + v.text() + ": " + e.what());
            }
          }
        }
        if (c.allowed_values &&
            std::find(c.allowed_values->begin(), c.allowed_values->end(), v) == c.allowed_values->end()) {
          add(c.path, ViolationKind::NotInList,
              "value " + v.text() + " of " + c.path.text() + " is not one of [" +
                  value_list_text(*c.allowed_values) + "]");
        }
      }
    }
  }
  std::sort(report.violations.begin(), report.violations.end(), [](const Violation& a, const Violation& b) {
    if (a.path != b.path) return a.path < b.path;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.message < b.message;
  });
  return report;
}

}  // namespace tessera::shapes
