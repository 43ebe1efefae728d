#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tessera/rdf/quad.hpp"

namespace tessera::shapes {

struct PropertyConstraint {
  rdf::Term path;
  std::uint64_t min_count = 0;
  std::optional<std::uint64_t> max_count = std::nullopt;
  std::optional<rdf::Term> datatype = std::nullopt;
  std::optional<rdf::Term> value_class = std::nullopt;
  // std::nullopt: unrestricted. An empty list admits nothing.
  std::optional<std::vector<rdf::Term>> allowed_values = std::nullopt;
  // Form hints carried over from sh:name and sh:order.
  std::optional<std::string> name = std::nullopt;
  std::optional<double> order = std::nullopt;

  friend bool operator==(const PropertyConstraint&, const PropertyConstraint&) = default;
};

/// Target class -> constraints, each path at most once per class.
struct FormSchema {
  std::map<rdf::Term, std::vector<PropertyConstraint>> classes;

  bool empty() const noexcept { return classes.empty(); }
  friend bool operator==(const FormSchema&, const FormSchema&) = default;
};

/// Compiles the supported SHACL subset: node shapes with sh:targetClass and
/// sh:property; property shapes with a single-IRI sh:path and sh:minCount,
/// sh:maxCount, sh:datatype, sh:class, sh:in, sh:hasValue. sh:name,
/// sh:description, sh:order and sh:message are accepted as annotations.
///
/// Throws UnsupportedShape for any other sh: construct (sh:or, sh:not,
/// property paths, SPARQL constraints, other targets...), MalformedList for a
/// broken sh:in list, and InvalidShape for ill-typed or contradictory values
/// such as maxCount < minCount or both sh:datatype and sh:class.
FormSchema extract_schema(const rdf::QuadSet& shapes);

enum class ViolationKind { MinCount, MaxCount, Datatype, ClassMembership, NotInList };

std::string_view to_string(ViolationKind kind) noexcept;

struct Violation {
  rdf::Term focus;
  rdf::Term path;
  ViolationKind kind;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;  // sorted by (path, kind, message)

  bool conforms() const noexcept { return violations.empty(); }
};

/// Classes of an arbitrary node, typically backed by the store.
using TypeLookup = std::function<std::set<rdf::Term>(const rdf::Term&)>;

/// Checks `state` against every schema entry whose class is in `rdf_types`.
/// A failing `type_lookup` becomes a ClassMembership violation.
ValidationReport validate_state(const rdf::EntityState& state, const std::set<rdf::Term>& rdf_types,
                                const FormSchema& schema, const TypeLookup& type_lookup);

}  // namespace tessera::shapes
