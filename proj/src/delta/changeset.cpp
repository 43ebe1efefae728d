#include "tessera/delta/changeset.hpp"

#include <algorithm>
#include <iterator>

#include "internal/scanner.hpp"
#include "internal/sparql_terms.hpp"
#include "tessera/errors.hpp"

namespace tessera::delta {

namespace {

using detail::Scanner;

void append_block(std::string& out, std::string_view keyword, const rdf::QuadSet& quads) {
  const rdf::GraphName& graph = quads.begin()->graph();
  out += keyword;
  out += " { ";
  if (graph) out += "GRAPH " + graph->text() + " { ";
  for (const auto& q : quads) {
    out += q.subject().text();
    out += ' ';
    out += q.predicate().text();
    out += ' ';
    out += q.object().text();
    out += " . ";
  }
  if (graph) out += "} ";
  out += '}';
}

rdf::Term expect_term(Scanner& in) {
  auto t = detail::read_sparql_term(in, false);
  return std::get<rdf::Term>(std::move(t));
}

void read_triples(Scanner& in, const rdf::GraphName& graph, rdf::QuadSet& out) {
  for (;;) {
    detail::skip_sparql_space(in);
    if (in.peek() == '}') return;
    if (in.looking_at_keyword("GRAPH")) {
      throw UnsupportedConstruct("a DATA block holds either plain triples or a single GRAPH block");
    }
    rdf::Term subject = expect_term(in);
    if (subject.is_literal()) in.fail("literal in subject position");
    detail::skip_sparql_space(in);
    rdf::Term predicate = expect_term(in);
    if (!predicate.is_iri()) in.fail("predicate must be an IRI");
    detail::skip_sparql_space(in);
    if (in.peek() == ',' || in.peek() == ';') {
      in.fail("object expected");
    }
    rdf::Term object = expect_term(in);
    out.insert(rdf::Quad(std::move(subject), std::move(predicate), std::move(object), graph));
    detail::skip_sparql_space(in);
    if (in.peek() == ',' || in.peek() == ';') {
      throw UnsupportedConstruct("predicate and object lists are not supported");
    }
    if (!in.consume('.') && in.peek() != '}') in.fail("expected '.' or '}' after triple");
  }
}

UpdateOperation read_unit(Scanner& in) {
  UpdateOperation op{};
  if (in.consume_keyword("DELETE")) {
    op.kind = UpdateOperation::Kind::DeleteData;
  } else if (in.consume_keyword("INSERT")) {
    op.kind = UpdateOperation::Kind::InsertData;
  } else {
    for (const char* kw : {"PREFIX", "BASE"}) {
      if (in.looking_at_keyword(kw)) throw UnsupportedConstruct("PREFIX and BASE are not supported");
    }
    for (const char* kw : {"WITH", "LOAD", "CLEAR", "DROP", "CREATE", "ADD", "MOVE", "COPY"}) {
      if (in.looking_at_keyword(kw)) {
        throw UnsupportedConstruct(std::string(kw) + " operations are not supported");
      }
    }
    in.fail("expected DELETE DATA or INSERT DATA");
  }
  detail::skip_sparql_space(in);
  if (!in.consume_keyword("DATA")) {
    if (in.looking_at_keyword("WHERE") || in.peek() == '{') {
      throw UnsupportedConstruct("only DELETE DATA / INSERT DATA are supported, not WHERE forms");
    }
    in.fail("expected DATA");
  }
  detail::skip_sparql_space(in);
  if (!in.consume('{')) in.fail("expected '{'");
  detail::skip_sparql_space(in);
  if (in.consume_keyword("GRAPH")) {
    detail::skip_sparql_space(in);
    if (in.peek() == '?' || in.peek() == '$') {
      throw UnsupportedConstruct("variables are not allowed in DATA blocks");
    }
    if (in.peek() == '_') throw UnsupportedConstruct("blank nodes are not supported");
    if (in.peek() != '<') {
      (void)detail::read_sparql_term(in, false);
      in.fail("expected graph IRI");
    }
    rdf::Term graph = in.read_iri();
    detail::skip_sparql_space(in);
    if (!in.consume('{')) in.fail("expected '{' after GRAPH IRI");
    read_triples(in, graph, op.quads);
    if (!in.consume('}')) in.fail("expected '}'");
    detail::skip_sparql_space(in);
    if (in.peek() != '}') {
      throw UnsupportedConstruct("a DATA block holds either plain triples or a single GRAPH block");
    }
  } else {
    read_triples(in, std::nullopt, op.quads);
  }
  if (!in.consume('}')) in.fail("expected '}'");
  return op;
}

}  // namespace

ChangeSet::ChangeSet(rdf::QuadSet deletions, rdf::QuadSet additions)
    : deletions_(std::move(deletions)), additions_(std::move(additions)) {
  const rdf::Quad* first = nullptr;
  for (const auto* half : {&deletions_, &additions_}) {
    for (const auto& q : *half) {
      if (q.has_blank()) throw InvalidChangeSet("blank node in changeset: " + q.subject().text());
      if (first == nullptr) {
        first = &q;
      } else if (q.graph() != first->graph()) {
        throw InvalidChangeSet("changeset spans graphs " + rdf::graph_text(first->graph()) +
                               " and " + rdf::graph_text(q.graph()));
      }
    }
  }
  for (const auto& q : deletions_) {
    if (additions_.count(q) != 0) {
      throw InvalidChangeSet("quad both deleted and added: " + q.subject().text() + " " +
                             q.predicate().text() + " " + q.object().text());
    }
  }
}

std::optional<rdf::GraphName> ChangeSet::graph() const {
  if (!deletions_.empty()) return deletions_.begin()->graph();
  if (!additions_.empty()) return additions_.begin()->graph();
  return std::nullopt;
}

ChangeSet diff(const rdf::EntityState& old_state, const rdf::EntityState& new_state,
               const rdf::GraphName& graph) {
  if (old_state.entity() != new_state.entity()) {
    throw EntityMismatch("cannot diff " + old_state.entity().text() + " against " +
                         new_state.entity().text());
  }
  if (old_state.has_blank() || new_state.has_blank()) {
    throw BlankNodePresent("blank nodes cannot be versioned: " + old_state.entity().text());
  }
  rdf::QuadSet deletions;
  rdf::QuadSet additions;
  for (const auto& t : old_state.triples()) {
    if (!new_state.contains(t)) deletions.emplace(t, graph);
  }
  for (const auto& t : new_state.triples()) {
    if (!old_state.contains(t)) additions.emplace(t, graph);
  }
  return ChangeSet(std::move(deletions), std::move(additions));
}

ChangeSet invert(const ChangeSet& cs) { return ChangeSet(cs.additions(), cs.deletions()); }

std::string to_update_query(const ChangeSet& cs) {
  std::string out;
  if (!cs.deletions().empty()) append_block(out, "DELETE DATA", cs.deletions());
  if (!cs.additions().empty()) {
    if (!out.empty()) out += "; ";
    append_block(out, "INSERT DATA", cs.additions());
  }
  return out;
}

std::vector<UpdateOperation> parse_update_operations(std::string_view text) {
  std::vector<UpdateOperation> ops;
  Scanner in(text);
  detail::skip_sparql_space(in);
  while (!in.at_end()) {
    ops.push_back(read_unit(in));
    detail::skip_sparql_space(in);
    if (in.at_end()) break;
    if (!in.consume(';')) in.fail("expected ';' between update operations");
    detail::skip_sparql_space(in);
  }
  return ops;
}

ChangeSet parse_update_query(std::string_view text) {
  rdf::QuadSet deletions;
  rdf::QuadSet additions;
  for (auto& op : parse_update_operations(text)) {
    auto& target = op.kind == UpdateOperation::Kind::DeleteData ? deletions : additions;
    target.merge(op.quads);
  }
  return ChangeSet(std::move(deletions), std::move(additions));
}

std::string join_updates(const std::vector<std::string>& updates) {
  std::string out;
  for (const auto& u : updates) {
    if (u.empty()) continue;
    if (!out.empty()) out += "; ";
    out += u;
  }
  return out;
}

rdf::EntityState apply_to_state(const rdf::EntityState& state, const ChangeSet& cs) {
  rdf::TripleSet triples = state.triples();
  for (const auto& q : cs.deletions()) triples.erase(q.triple());
  for (const auto& q : cs.additions()) {
    if (q.subject() == state.entity()) triples.insert(q.triple());
  }
  return rdf::EntityState(state.entity(), std::move(triples));
}

rdf::EntityState materialize(const rdf::EntityState& current,
                             const std::vector<std::string>& later_update_queries,
                             const MaterializeOptions& options) {
  rdf::EntityState state = current;
  for (const auto& query : later_update_queries) {
    const ChangeSet inverse = invert(parse_update_query(query));
    for (const auto& q : inverse.deletions()) {
      if (q.subject() != state.entity() || state.contains(q.triple())) continue;
      const std::string message = "history corrupt: " + q.subject().text() + " " +
                                  q.predicate().text() + " " + q.object().text() +
                                  " was added by a later update but is absent";
      if (!options.lenient) throw HistoryCorrupt(message);
      if (options.on_warning) options.on_warning(message);
    }
    state = apply_to_state(state, inverse);
  }
  return state;
}

}  // namespace tessera::delta
