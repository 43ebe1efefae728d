#include "tessera/display/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "tessera/errors.hpp"

namespace tessera::display {

namespace {

std::string where(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) return {};
  return " (line " + std::to_string(m.line + 1) + ")";
}

void check_keys(const YAML::Node& map, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!map.IsMap()) throw ConfigError(path, "expected a mapping" + where(map));
  for (const auto& kv : map) {
    const std::string key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(path.empty() ? key : path + "." + key, "unknown key '" + key + "'" + where(kv.first));
    }
  }
}

std::string scalar(const YAML::Node& parent, const std::string& key, const std::string& path, bool required) {
  const YAML::Node node = parent[key];
  const std::string at = path + "." + key;
  if (!node || node.IsNull()) {
    if (required) throw ConfigError(at, "missing required key" + where(parent));
    return {};
  }
  if (!node.IsScalar()) throw ConfigError(at, "expected a scalar" + where(node));
  return node.Scalar();
}

rdf::Term iri_at(const std::string& text, const std::string& path, const YAML::Node& node) {
  if (!rdf::is_absolute_iri(text)) throw ConfigError(path, "not an absolute IRI: '" + text + "'" + where(node));
  try {
    return rdf::Term::iri(text);
  } catch (const InvalidTerm& e) {
    throw ConfigError(path, e.what() + where(node));
  }
}

std::string label_at(const YAML::Node& parent, const std::string& path) {
  std::string label = scalar(parent, "label", path, true);
  if (label.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ConfigError(path + ".label", "label must not be empty" + where(parent["label"]));
  }
  return label;
}

PropertyDisplay parse_property(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"path", "label", "displayed", "value_query", "order_predicate"});
  PropertyDisplay p{iri_at(scalar(node, "path", path, true), path + ".path", node["path"]),
                    label_at(node, path)};
  if (const YAML::Node d = node["displayed"]; d && !d.IsNull()) {
    try {
      p.displayed = d.as<bool>();
    } catch (const YAML::Exception&) {
      throw ConfigError(path + ".displayed", "expected true or false" + where(d));
    }
  }
  if (const std::string q = scalar(node, "value_query", path, false); !q.empty()) {
    if (q.find(kSubjectPlaceholder) == std::string::npos) {
      throw ConfigError(path + ".value_query", "must contain " + std::string(kSubjectPlaceholder) +
                                                   where(node["value_query"]));
    }
    try {
      p.value_variable = selected_variable(q);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ".value_query", e.what() + where(node["value_query"]));
    }
    p.value_query = q;
  }
  if (const std::string o = scalar(node, "order_predicate", path, false); !o.empty()) {
    p.order_predicate = iri_at(o, path + ".order_predicate", node["order_predicate"]);
  }
  return p;
}

ClassDisplay parse_class(const YAML::Node& node, const std::string& path) {
  check_keys(node, path, {"iri", "label", "properties"});
  ClassDisplay c{iri_at(scalar(node, "iri", path, true), path + ".iri", node["iri"]), label_at(node, path), {}};
  const YAML::Node props = node["properties"];
  if (!props || props.IsNull()) return c;
  if (!props.IsSequence()) throw ConfigError(path + ".properties", "expected a list" + where(props));
  for (std::size_t i = 0; i < props.size(); ++i) {
    const std::string at = path + ".properties[" + std::to_string(i) + "]";
    PropertyDisplay p = parse_property(props[i], at);
    if (c.property(p.path) != nullptr) {
      throw ConfigError(at + ".path", "property " + p.path.text() + " listed twice" + where(props[i]));
    }
    c.properties.push_back(std::move(p));
  }
  return c;
}

// Minimal lexer over the projection of a SELECT query: enough to count the
// projected variables without parsing the rest.
class Projection {
 public:
  explicit Projection(std::string_view q) : q_(q) {}

  std::vector<std::string> variables() {
    skip_prologue();
    if (!keyword("SELECT")) fail("value_query must be a SELECT query");
    space();
    if (!keyword("DISTINCT")) keyword("REDUCED");
    std::vector<std::string> vars;
    int depth = 0;
    bool after_as = false;
    for (;;) {
      space();
      if (i_ >= q_.size()) fail("value_query has no WHERE clause");
      const char c = q_[i_];
      if (depth == 0 && (c == '{' || at_keyword("WHERE") || at_keyword("FROM"))) break;
      if (c == '*' && depth == 0) fail("value_query must name its variable instead of SELECT *");
      if (c == '(') {
        ++depth;
        ++i_;
      } else if (c == ')') {
        if (depth == 0) fail("unbalanced ')' in value_query projection");
        --depth;
        ++i_;
      } else if (c == '"' || c == '\'') {
        skip_string(c);
      } else if (c == '<') {
        while (i_ < q_.size() && q_[i_] != '>') ++i_;
        ++i_;
      } else if (c == '?' || c == '$') {
        ++i_;
        const std::string name = word();
        if (depth == 0 || after_as) vars.push_back(name);
        after_as = false;
      } else if (at_keyword("AS")) {
        i_ += 2;
        after_as = true;
      } else {
        ++i_;
        word();
      }
    }
    return vars;
  }

 private:
  [[noreturn]] static void fail(const std::string& message) { throw ConfigError("", message); }

  void space() {
    while (i_ < q_.size()) {
      if (std::isspace(static_cast<unsigned char>(q_[i_]))) {
        ++i_;
      } else if (q_[i_] == '#') {
        while (i_ < q_.size() && q_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  static bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  std::string word() {
    const std::size_t start = i_;
    while (i_ < q_.size() && word_char(q_[i_])) ++i_;
    return std::string(q_.substr(start, i_ - start));
  }

  bool at_keyword(std::string_view kw) const {
    if (q_.size() - i_ < kw.size()) return false;
    for (std::size_t k = 0; k < kw.size(); ++k) {
      if (std::toupper(static_cast<unsigned char>(q_[i_ + k])) != kw[k]) return false;
    }
    return i_ + kw.size() == q_.size() || !word_char(q_[i_ + kw.size()]);
  }

  bool keyword(std::string_view kw) {
    if (!at_keyword(kw)) return false;
    i_ += kw.size();
    return true;
  }

  void skip_string(char quote) {
    const bool long_form = q_.substr(i_, 3) == std::string(3, quote);
    i_ += long_form ? 3 : 1;
    while (i_ < q_.size()) {
      if (q_[i_] == '\\') {
        i_ += 2;
      } else if (long_form ? q_.substr(i_, 3) == std::string(3, quote) : q_[i_] == quote) {
        i_ += long_form ? 3 : 1;
        return;
      } else {
        ++i_;
      }
    }
    fail("unterminated string in value_query");
  }

  void skip_prologue() {
    for (;;) {
      space();
      if (keyword("PREFIX")) {
        space();
        while (i_ < q_.size() && q_[i_] != '<') ++i_;
        while (i_ < q_.size() && q_[i_] != '>') ++i_;
        ++i_;
      } else if (keyword("BASE")) {
        space();
        while (i_ < q_.size() && q_[i_] != '>') ++i_;
        ++i_;
      } else {
        return;
      }
    }
  }

  std::string_view q_;
  std::size_t i_ = 0;
};

std::string replace_all(std::string text, std::string_view from, const std::string& to) {
  for (std::size_t pos = text.find(from); pos != std::string::npos; pos = text.find(from, pos + to.size())) {
    text.replace(pos, from.size(), to);
  }
  return text;
}

}  // namespace

const PropertyDisplay* ClassDisplay::property(const rdf::Term& path) const {
  for (const auto& p : properties) {
    if (p.path == path) return &p;
  }
  return nullptr;
}

const ClassDisplay* DisplayConfig::find_class(const rdf::Term& iri) const {
  for (const auto& c : classes) {
    if (c.iri == iri) return &c;
  }
  return nullptr;
}

const PropertyDisplay* DisplayConfig::find_property(const std::set<rdf::Term>& types,
                                                    const rdf::Term& path) const {
  for (const auto& c : classes) {
    if (!types.count(c.iri)) continue;
    if (const auto* p = c.property(path)) return p;
  }
  return nullptr;
}

std::string selected_variable(std::string_view query) {
  const auto vars = Projection(query).variables();
  if (vars.size() != 1) {
    throw ConfigError("", "value_query must select exactly one variable, found " + std::to_string(vars.size()));
  }
  return vars.front();
}

DisplayConfig load_display_config(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("", "invalid YAML at line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  DisplayConfig config;
  if (!root || root.IsNull()) return config;
  check_keys(root, "", {"classes"});
  const YAML::Node classes = root["classes"];
  if (!classes || classes.IsNull()) return config;
  if (!classes.IsSequence()) throw ConfigError("classes", "expected a list" + where(classes));
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const std::string at = "classes[" + std::to_string(i) + "]";
    ClassDisplay c = parse_class(classes[i], at);
    if (config.find_class(c.iri) != nullptr) {
      throw ConfigError(at + ".iri", "class " + c.iri.text() + " listed twice" + where(classes[i]));
    }
    config.classes.push_back(std::move(c));
  }
  return config;
}

DisplayConfig load_display_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read display config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_display_config(buf.str());
}

std::vector<std::string> display_value(store::StoreBackend& store, const rdf::Term& entity,
                                       const rdf::Term& path, const DisplayConfig& config,
                                       const std::set<rdf::Term>& entity_types,
                                       const rdf::GraphName& data_graph) {
  std::vector<std::string> out;
  const PropertyDisplay* p = config.find_property(entity_types, path);
  if (p != nullptr && p->value_query) {
    const auto query = replace_all(*p->value_query, kSubjectPlaceholder, entity.text());
    for (const auto& v : store.select(query).values(p->value_variable)) out.push_back(v.value());
    return out;
  }
  for (const auto& o : store.fetch_entity_state(entity, data_graph).objects(path)) out.push_back(o.text());
  return out;
}

std::vector<rdf::Term> order_chain(const std::set<rdf::Term>& values,
                                   const std::vector<std::pair<rdf::Term, rdf::Term>>& links) {
  std::map<rdf::Term, rdf::Term> next;
  std::map<rdf::Term, int> incoming;
  for (const auto& [a, b] : links) {
    if (!values.count(a) || !values.count(b)) continue;
    const auto [it, fresh] = next.emplace(a, b);
    if (!fresh && it->second != b) {
      throw OrderError(OrderError::Kind::Branch,
                       a.text() + " has several successors: " + it->second.text() + ", " + b.text());
    }
    if (fresh) ++incoming[b];
  }
  std::vector<rdf::Term> heads;
  for (const auto& v : values) {
    if (!incoming.count(v)) heads.push_back(v);
  }
  if (values.empty()) return {};
  if (heads.size() > 1) {
    throw OrderError(OrderError::Kind::Disconnected,
                     std::to_string(heads.size()) + " values have no predecessor, e.g. " + heads[0].text() +
                         " and " + heads[1].text());
  }
  if (heads.empty()) throw OrderError(OrderError::Kind::Cycle, "every value has a predecessor");
  std::vector<rdf::Term> out;
  std::set<rdf::Term> seen;
  for (std::optional<rdf::Term> cur = heads.front(); cur;) {
    if (!seen.insert(*cur).second) throw OrderError(OrderError::Kind::Cycle, "chain revisits " + cur->text());
    out.push_back(*cur);
    const auto it = next.find(*cur);
    cur = it == next.end() ? std::nullopt : std::optional<rdf::Term>(it->second);
  }
  if (out.size() != values.size()) {
    throw OrderError(OrderError::Kind::Cycle,
                     std::to_string(values.size() - out.size()) + " value(s) sit on a cycle off the chain");
  }
  return out;
}

std::vector<rdf::Term> ordered_values(store::StoreBackend& store, const rdf::Term& entity,
                                      const rdf::Term& path, const rdf::Term& order_predicate,
                                      const rdf::GraphName& data_graph) {
  const std::set<rdf::Term> values = store.fetch_entity_state(entity, data_graph).objects(path);
  if (values.empty()) return {};
  const auto table = store.select(store::queries::order_links(entity, path, order_predicate, data_graph));
  const std::size_t a = table.column("a"), b = table.column("b");
  std::vector<std::pair<rdf::Term, rdf::Term>> links;
  for (const auto& row : table.rows) {
    if (row[a] && row[b]) links.emplace_back(*row[a], *row[b]);
  }
  return order_chain(values, links);
}

}  // namespace tessera::display
