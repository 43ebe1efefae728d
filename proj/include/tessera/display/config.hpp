#pragma once

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tessera/rdf/quad.hpp"
#include "tessera/store/store.hpp"

namespace tessera::display {

inline constexpr std::string_view kSubjectPlaceholder = "[[subject]]";

struct PropertyDisplay {
  rdf::Term path;
  std::string label;
  bool displayed = true;
  std::optional<std::string> value_query = std::nullopt;
  std::string value_variable = {};  // the one variable value_query selects
  std::optional<rdf::Term> order_predicate = std::nullopt;
};

struct ClassDisplay {
  rdf::Term iri;
  std::string label;
  std::vector<PropertyDisplay> properties;

  const PropertyDisplay* property(const rdf::Term& path) const;
};

struct DisplayConfig {
  std::vector<ClassDisplay> classes;

  const ClassDisplay* find_class(const rdf::Term& iri) const;
  /// First configured property for `path` among `types`, in file order of classes.
  const PropertyDisplay* find_property(const std::set<rdf::Term>& types, const rdf::Term& path) const;
};

/// Layout:
///   classes:
///     - iri: <class IRI>
///       label: <text>
///       properties:
///         - path: <IRI>
///           label: <text>
///           displayed: true|false         # default true
///           value_query: <SPARQL SELECT>  # must contain [[subject]]
///           order_predicate: <IRI>
/// Unknown keys, empty labels, non-absolute IRIs, duplicates, and value
/// queries that do not select exactly one variable raise ConfigError with
/// the YAML path of the offending node, e.g. "classes[0].properties[2].path".
DisplayConfig load_display_config(std::string_view yaml_text);
DisplayConfig load_display_config_file(const std::filesystem::path& path);

/// Name of the single variable a SELECT query projects. Throws ConfigError
/// (with an empty path) for SELECT *, several variables, or non-SELECT text.
std::string selected_variable(std::string_view query);

/// With a value query for (types, path): its answers, lexical values only,
/// with [[subject]] replaced by <entity>. Otherwise the N-Triples text of
/// each object of (entity, path) in `data_graph`.
std::vector<std::string> display_value(store::StoreBackend& store, const rdf::Term& entity,
                                       const rdf::Term& path, const DisplayConfig& config,
                                       const std::set<rdf::Term>& entity_types,
                                       const rdf::GraphName& data_graph);

/// Values of (entity, path) sorted along the order_predicate chain linking
/// them. Throws OrderError (Cycle, Branch, Disconnected).
std::vector<rdf::Term> ordered_values(store::StoreBackend& store, const rdf::Term& entity,
                                      const rdf::Term& path, const rdf::Term& order_predicate,
                                      const rdf::GraphName& data_graph);

/// The chain logic on its own: `links` are (node, successor) pairs; only
/// links between members of `values` count.
std::vector<rdf::Term> order_chain(const std::set<rdf::Term>& values,
                                   const std::vector<std::pair<rdf::Term, rdf::Term>>& links);

}  // namespace tessera::display
