#include "tessera/store/memory_store.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>
#include <variant>

#include "internal/scanner.hpp"
#include "internal/sparql_terms.hpp"
#include "tessera/errors.hpp"
#include "tessera/rdf/nquads.hpp"

namespace tessera::store {

namespace {

using detail::Scanner;
using detail::TermOrVariable;
using detail::Variable;

struct Pattern {
  enum class GraphKind { Default, Named, Variable };
  TermOrVariable s = Variable{}, p = Variable{}, o = Variable{};
  GraphKind graph_kind = GraphKind::Default;
  std::optional<rdf::Term> graph;
  std::string graph_var;
};

struct OrderKey {
  std::string variable;
  bool descending = false;
};

struct ParsedQuery {
  bool ask = false;
  bool distinct = false;
  bool star = false;
  std::vector<std::string> projection;
  std::vector<Pattern> patterns;
  std::vector<OrderKey> order;
  std::optional<std::size_t> limit;
  std::size_t offset = 0;
};

std::string read_variable(Scanner& in) {
  if (in.peek() != '?' && in.peek() != '$') in.fail("expected a variable");
  in.advance();
  std::string name = in.read_word();
  if (name.empty()) in.fail("empty variable name");
  return name;
}

std::size_t read_count(Scanner& in) {
  const std::string digits = in.read_word();
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) {
        return c >= '0' && c <= '9';
      })) {
    in.fail("expected a non-negative integer");
  }
  return static_cast<std::size_t>(std::stoull(digits));
}

void read_triples_block(Scanner& in, const Pattern& graph_template, std::vector<Pattern>& out) {
  // TriplesBlock with '.', ';' and ',' separators; stops at '}' or GRAPH.
  for (;;) {
    detail::skip_sparql_space(in);
    if (in.peek() == '}' || in.looking_at_keyword("GRAPH")) return;
    if (in.looking_at_keyword("FILTER") || in.looking_at_keyword("OPTIONAL") ||
        in.looking_at_keyword("UNION") || in.looking_at_keyword("BIND") ||
        in.looking_at_keyword("VALUES") || in.looking_at_keyword("MINUS") || in.peek() == '{') {
      throw UnsupportedConstruct("only basic graph patterns are supported");
    }
    Pattern pat = graph_template;
    pat.s = detail::read_sparql_term(in, true);
    for (;;) {
      detail::skip_sparql_space(in);
      pat.p = detail::read_sparql_term(in, true);
      for (;;) {
        detail::skip_sparql_space(in);
        pat.o = detail::read_sparql_term(in, true);
        out.push_back(pat);
        detail::skip_sparql_space(in);
        if (!in.consume(',')) break;
        detail::skip_sparql_space(in);
      }
      if (!in.consume(';')) break;
      detail::skip_sparql_space(in);
      if (in.peek() == '.' || in.peek() == '}') break;
    }
    detail::skip_sparql_space(in);
    if (!in.consume('.')) {
      detail::skip_sparql_space(in);
      if (in.peek() != '}' && !in.looking_at_keyword("GRAPH")) in.fail("expected '.' or '}'");
    }
  }
}

void read_group(Scanner& in, std::vector<Pattern>& out) {
  if (!in.consume('{')) in.fail("expected '{'");
  for (;;) {
    detail::skip_sparql_space(in);
    if (in.consume('}')) return;
    if (in.consume_keyword("GRAPH")) {
      detail::skip_sparql_space(in);
      Pattern tmpl;
      if (in.peek() == '?' || in.peek() == '$') {
        tmpl.graph_kind = Pattern::GraphKind::Variable;
        tmpl.graph_var = read_variable(in);
      } else {
        tmpl.graph_kind = Pattern::GraphKind::Named;
        tmpl.graph = in.read_iri();
      }
      detail::skip_sparql_space(in);
      if (!in.consume('{')) in.fail("expected '{' after GRAPH");
      read_triples_block(in, tmpl, out);
      detail::skip_sparql_space(in);
      if (!in.consume('}')) in.fail("expected '}'");
      detail::skip_sparql_space(in);
      in.consume('.');
      continue;
    }
    if (in.at_end()) in.fail("unterminated group");
    read_triples_block(in, Pattern{}, out);
  }
}

ParsedQuery parse_query(std::string_view text) {
  Scanner in(text);
  ParsedQuery q;
  detail::skip_sparql_space(in);
  if (in.looking_at_keyword("PREFIX") || in.looking_at_keyword("BASE")) {
    throw UnsupportedConstruct("PREFIX and BASE are not supported; use absolute IRIs");
  }
  if (in.consume_keyword("ASK")) {
    q.ask = true;
  } else if (in.consume_keyword("SELECT")) {
    detail::skip_sparql_space(in);
    if (in.consume_keyword("DISTINCT")) q.distinct = true;
    detail::skip_sparql_space(in);
    if (in.consume('*')) {
      q.star = true;
    } else {
      while (in.peek() == '?' || in.peek() == '$') {
        q.projection.push_back(read_variable(in));
        detail::skip_sparql_space(in);
      }
      if (in.peek() == '(') throw UnsupportedConstruct("projection expressions are not supported");
      if (q.projection.empty()) in.fail("expected projected variables");
    }
  } else {
    throw UnsupportedConstruct("only SELECT and ASK queries are supported");
  }
  detail::skip_sparql_space(in);
  if (in.looking_at_keyword("FROM")) throw UnsupportedConstruct("FROM is not supported");
  in.consume_keyword("WHERE");
  detail::skip_sparql_space(in);
  read_group(in, q.patterns);
  for (;;) {
    detail::skip_sparql_space(in);
    if (in.at_end()) break;
    if (in.consume_keyword("ORDER")) {
      detail::skip_sparql_space(in);
      if (!in.consume_keyword("BY")) in.fail("expected BY");
      for (;;) {
        detail::skip_sparql_space(in);
        OrderKey key;
        if (in.looking_at_keyword("ASC") || in.looking_at_keyword("DESC")) {
          key.descending = in.consume_keyword("DESC");
          if (!key.descending) in.consume_keyword("ASC");
          detail::skip_sparql_space(in);
          if (!in.consume('(')) in.fail("expected '('");
          detail::skip_sparql_space(in);
          key.variable = read_variable(in);
          detail::skip_sparql_space(in);
          if (!in.consume(')')) in.fail("expected ')'");
        } else if (in.peek() == '?' || in.peek() == '$') {
          key.variable = read_variable(in);
        } else {
          break;
        }
        q.order.push_back(std::move(key));
      }
      if (q.order.empty()) in.fail("expected an ORDER BY key");
    } else if (in.consume_keyword("LIMIT")) {
      detail::skip_sparql_space(in);
      q.limit = read_count(in);
    } else if (in.consume_keyword("OFFSET")) {
      detail::skip_sparql_space(in);
      q.offset = read_count(in);
    } else if (in.looking_at_keyword("GROUP") || in.looking_at_keyword("HAVING")) {
      throw UnsupportedConstruct("aggregation is not supported");
    } else {
      in.fail("unexpected text after query pattern");
    }
  }
  return q;
}

// SPARQL ORDER BY: unbound < blank < IRI < literal.
int kind_rank(const std::optional<rdf::Term>& t) {
  if (!t) return 0;
  switch (t->kind()) {
    case rdf::Term::Kind::Blank: return 1;
    case rdf::Term::Kind::Iri: return 2;
    case rdf::Term::Kind::Literal: return 3;
  }
  return 4;
}

bool order_less(const std::optional<rdf::Term>& a, const std::optional<rdf::Term>& b) {
  const int ra = kind_rank(a);
  const int rb = kind_rank(b);
  if (ra != rb) return ra < rb;
  if (!a) return false;
  if (a->value() != b->value()) return a->value() < b->value();
  return a->text() < b->text();
}

class Evaluator {
 public:
  using Row = std::vector<std::optional<rdf::Term>>;

  Evaluator(const std::map<rdf::GraphName, MemoryStore::Graph>& graphs, const ParsedQuery& query)
      : graphs_(graphs), query_(query) {
    for (const auto& pat : query.patterns) {
      for (const auto* tv : {&pat.s, &pat.p, &pat.o}) {
        if (const auto* v = std::get_if<Variable>(tv)) slot(v->name);
      }
      if (pat.graph_kind == Pattern::GraphKind::Variable) slot(pat.graph_var);
    }
  }

  std::vector<Row> run() {
    std::vector<Row> solutions;
    Row binding(names_.size());
    join(0, binding, solutions);
    return solutions;
  }

  std::size_t slot(const std::string& name) {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it != names_.end()) return static_cast<std::size_t>(it - names_.begin());
    names_.push_back(name);
    return names_.size() - 1;
  }

  std::optional<std::size_t> find_slot(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  // Binds a variable to `value`, or checks a constant or an existing binding.
  bool unify(const TermOrVariable& tv, const rdf::Term& value, Row& row,
             std::vector<std::size_t>& bound_here) const {
    if (const auto* term = std::get_if<rdf::Term>(&tv)) return *term == value;
    const std::size_t i = *find_slot(std::get<Variable>(tv).name);
    if (row[i]) return *row[i] == value;
    row[i] = value;
    bound_here.push_back(i);
    return true;
  }

  std::optional<rdf::Term> resolved(const TermOrVariable& tv, const Row& row) const {
    if (const auto* term = std::get_if<rdf::Term>(&tv)) return *term;
    return row[*find_slot(std::get<Variable>(tv).name)];
  }

  void match_graph(std::size_t i, const Pattern& pat, const rdf::GraphName& name,
                   const MemoryStore::Graph& graph, Row& row, std::vector<Row>& out) {
    std::vector<std::size_t> bound_here;
    const auto reset = [&] {
      for (std::size_t b : bound_here) row[b].reset();
      bound_here.clear();
    };
    if (pat.graph_kind == Pattern::GraphKind::Variable) {
      if (!unify(Variable{pat.graph_var}, *name, row, bound_here)) return;
    }
    const auto visit = [&](const rdf::Term& subject, const MemoryStore::PredicateObjects& po) {
      const auto p_fixed = resolved(pat.p, row);
      for (const auto& [p, o] : po) {
        if (p_fixed && p != *p_fixed) continue;
        const std::size_t mark = bound_here.size();
        if (unify(pat.s, subject, row, bound_here) && unify(pat.p, p, row, bound_here) &&
            unify(pat.o, o, row, bound_here)) {
          join(i + 1, row, out);
        }
        while (bound_here.size() > mark) {
          row[bound_here.back()].reset();
          bound_here.pop_back();
        }
      }
    };
    if (const auto s_fixed = resolved(pat.s, row)) {
      const auto it = graph.find(*s_fixed);
      if (it != graph.end()) visit(it->first, it->second);
    } else {
      for (const auto& [subject, po] : graph) visit(subject, po);
    }
    reset();
  }

  void join(std::size_t i, Row& row, std::vector<Row>& out) {
    if (i == query_.patterns.size()) {
      out.push_back(row);
      return;
    }
    const Pattern& pat = query_.patterns[i];
    switch (pat.graph_kind) {
      case Pattern::GraphKind::Default: {
        const auto it = graphs_.find(std::nullopt);
        if (it != graphs_.end()) match_graph(i, pat, it->first, it->second, row, out);
        break;
      }
      case Pattern::GraphKind::Named: {
        const auto it = graphs_.find(pat.graph);
        if (it != graphs_.end()) match_graph(i, pat, it->first, it->second, row, out);
        break;
      }
      case Pattern::GraphKind::Variable: {
        const auto& bound = row[*find_slot(pat.graph_var)];
        for (const auto& [name, graph] : graphs_) {
          if (!name || (bound && *bound != *name)) continue;
          match_graph(i, pat, name, graph, row, out);
        }
        break;
      }
    }
  }

  const std::map<rdf::GraphName, MemoryStore::Graph>& graphs_;
  const ParsedQuery& query_;
  std::vector<std::string> names_;
};

template <typename F>
auto rethrow_as_query_error(std::string_view text, F&& f) {
  try {
    return f();
  } catch (const SyntaxError& e) {
    throw QueryError(std::string(e.what()) + " in: " + std::string(text));
  } catch (const UnsupportedConstruct& e) {
    throw QueryError(std::string(e.what()) + " in: " + std::string(text));
  } catch (const InvalidTerm& e) {
    throw QueryError(std::string(e.what()) + " in: " + std::string(text));
  }
}

}  // namespace

MemoryStore::MemoryStore(const rdf::QuadSet& quads) { insert(quads); }

std::unique_ptr<MemoryStore> MemoryStore::persistent(const std::filesystem::path& path) {
  auto store = std::make_unique<MemoryStore>();
  if (std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    store->insert(rdf::parse_nquads(in));
  }
  store->persist_path_ = path;
  return store;
}

SolutionTable MemoryStore::select(std::string_view query) {
  const ParsedQuery q = rethrow_as_query_error(query, [&] { return parse_query(query); });
  if (q.ask) throw QueryError("select() called with an ASK query");

  std::shared_lock lock(mutex_);
  Evaluator eval(graphs_, q);
  std::vector<Evaluator::Row> solutions = eval.run();
  lock.unlock();

  SolutionTable table;
  table.variables = q.star ? eval.names() : q.projection;

  std::vector<std::optional<std::size_t>> order_cols;
  for (const auto& key : q.order) order_cols.push_back(eval.find_slot(key.variable));
  if (!q.order.empty()) {
    std::stable_sort(solutions.begin(), solutions.end(),
                     [&](const Evaluator::Row& a, const Evaluator::Row& b) {
                       for (std::size_t k = 0; k < q.order.size(); ++k) {
                         if (!order_cols[k]) continue;
                         const auto& x = a[*order_cols[k]];
                         const auto& y = b[*order_cols[k]];
                         if (order_less(x, y)) return !q.order[k].descending;
                         if (order_less(y, x)) return q.order[k].descending;
                       }
                       return false;
                     });
  }

  std::vector<std::optional<std::size_t>> cols;
  for (const auto& v : table.variables) cols.push_back(eval.find_slot(v));
  std::set<std::vector<std::string>> seen;
  std::size_t skipped = 0;
  for (const auto& sol : solutions) {
    std::vector<std::optional<rdf::Term>> row;
    for (const auto& c : cols) row.push_back(c ? sol[*c] : std::nullopt);
    if (q.distinct) {
      std::vector<std::string> key;
      for (const auto& cell : row) key.push_back(cell ? cell->text() : std::string());
      if (!seen.insert(std::move(key)).second) continue;
    }
    if (skipped < q.offset) {
      ++skipped;
      continue;
    }
    if (q.limit && table.rows.size() >= *q.limit) break;
    table.rows.push_back(std::move(row));
  }
  return table;
}

bool MemoryStore::ask(std::string_view query) {
  const ParsedQuery q = rethrow_as_query_error(query, [&] { return parse_query(query); });
  if (!q.ask) throw QueryError("ask() called with a SELECT query");
  std::shared_lock lock(mutex_);
  Evaluator eval(graphs_, q);
  return !eval.run().empty();
}

void MemoryStore::update(std::string_view update) {
  const auto ops =
      rethrow_as_query_error(update, [&] { return delta::parse_update_operations(update); });
  std::unique_lock lock(mutex_);
  for (const auto& op : ops) {
    for (const auto& q : op.quads) {
      if (op.kind == delta::UpdateOperation::Kind::InsertData) {
        graphs_[q.graph()][q.subject()].emplace(q.predicate(), q.object());
        continue;
      }
      const auto g = graphs_.find(q.graph());
      if (g == graphs_.end()) continue;
      const auto s = g->second.find(q.subject());
      if (s == g->second.end()) continue;
      s->second.erase({q.predicate(), q.object()});
      if (s->second.empty()) g->second.erase(s);
      if (g->second.empty()) graphs_.erase(g);
    }
  }
  persist_locked();
}

rdf::EntityState MemoryStore::fetch_entity_state(const rdf::Term& entity,
                                                 const rdf::GraphName& graph) {
  std::shared_lock lock(mutex_);
  rdf::EntityState state(entity);
  const auto g = graphs_.find(graph);
  if (g == graphs_.end()) return state;
  const auto s = g->second.find(entity);
  if (s == g->second.end()) return state;
  for (const auto& [p, o] : s->second) state.insert(rdf::Triple(entity, p, o));
  return state;
}

bool MemoryStore::contains(const rdf::Quad& quad) {
  std::shared_lock lock(mutex_);
  const auto g = graphs_.find(quad.graph());
  if (g == graphs_.end()) return false;
  const auto s = g->second.find(quad.subject());
  return s != g->second.end() && s->second.count({quad.predicate(), quad.object()}) != 0;
}

void MemoryStore::insert(const rdf::QuadSet& quads) {
  std::unique_lock lock(mutex_);
  for (const auto& q : quads) graphs_[q.graph()][q.subject()].emplace(q.predicate(), q.object());
  persist_locked();
}

rdf::QuadSet MemoryStore::dump() const {
  std::shared_lock lock(mutex_);
  rdf::QuadSet out;
  for (const auto& [name, graph] : graphs_) {
    for (const auto& [s, po] : graph) {
      for (const auto& [p, o] : po) out.emplace(s, p, o, name);
    }
  }
  return out;
}

std::string MemoryStore::dump_nquads() const { return rdf::serialize_nquads(dump()); }

std::size_t MemoryStore::size() const {
  std::shared_lock lock(mutex_);
  std::size_t n = 0;
  for (const auto& [name, graph] : graphs_) {
    for (const auto& [s, po] : graph) n += po.size();
  }
  return n;
}

void MemoryStore::persist_locked() const {
  if (!persist_path_) return;
  rdf::QuadSet all;
  for (const auto& [name, graph] : graphs_) {
    for (const auto& [s, po] : graph) {
      for (const auto& [p, o] : po) all.emplace(s, p, o, name);
    }
  }
  const auto tmp = std::filesystem::path(persist_path_->string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << rdf::serialize_nquads(all);
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, *persist_path_);
}

}  // namespace tessera::store
