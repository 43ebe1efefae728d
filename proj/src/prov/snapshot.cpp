#include "tessera/prov/snapshot.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>

#include "tessera/errors.hpp"
#include "tessera/rdf/vocab.hpp"

namespace tessera::prov {

namespace {

using namespace std::chrono;

rdf::Term iri(std::string_view v) { return rdf::Term::iri(std::string(v)); }

rdf::Term datetime_literal(Timestamp t) {
  return rdf::Term::literal(format_timestamp(t), std::string(vocab::kXsdDateTime));
}

int digits(std::string_view text, std::size_t pos, std::size_t n) {
  if (pos + n > text.size()) throw SyntaxError("truncated dateTime: " + std::string(text), 1, pos + 1);
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (text[i] < '0' || text[i] > '9') {
      throw SyntaxError("bad dateTime: " + std::string(text), 1, i + 1);
    }
    v = v * 10 + (text[i] - '0');
  }
  return v;
}

void expect(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw SyntaxError("bad dateTime: " + std::string(text), 1, pos + 1);
  }
}

const Snapshot& require_head(const Timeline& existing) {
  if (existing.empty()) throw NoHistory("no snapshots recorded for " + existing.entity.text());
  return existing.head();
}

Revision successor(const Timeline& existing, const rdf::Term& agent, Timestamp t) {
  const Snapshot& head = existing.head();
  Revision r{Snapshot{snapshot_iri(existing.entity, head.number + 1), existing.entity,
                      head.number + 1, t, std::nullopt, agent, std::nullopt, head.snapshot_iri,
                      std::nullopt},
             head, head, {}};
  r.predecessor_after->invalidated_at = t;
  return r;
}

}  // namespace

Timestamp system_now() { return floor<seconds>(system_clock::now()); }

std::string format_timestamp(Timestamp t) {
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(hms.hours().count()),
                int(hms.minutes().count()), int(hms.seconds().count()));
  return buf;
}

Timestamp parse_timestamp(std::string_view text) {
  const int y = digits(text, 0, 4);
  expect(text, 4, '-');
  const int mo = digits(text, 5, 2);
  expect(text, 7, '-');
  const int d = digits(text, 8, 2);
  expect(text, 10, 'T');
  const int h = digits(text, 11, 2);
  expect(text, 13, ':');
  const int mi = digits(text, 14, 2);
  expect(text, 16, ':');
  const int s = digits(text, 17, 2);
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == start) throw SyntaxError("empty fraction in dateTime: " + std::string(text), 1, pos + 1);
  }
  int offset_minutes = 0;
  if (pos < text.size() && text[pos] == 'Z') {
    ++pos;
  } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    const int sign = text[pos] == '-' ? -1 : 1;
    const int oh = digits(text, pos + 1, 2);
    expect(text, pos + 3, ':');
    const int om = digits(text, pos + 4, 2);
    if (oh > 14 || om > 59) throw SyntaxError("bad zone offset: " + std::string(text), 1, pos + 1);
    offset_minutes = sign * (oh * 60 + om);
    pos += 6;
  } else {
    throw SyntaxError("dateTime without a time zone: " + std::string(text), 1, pos + 1);
  }
  if (pos != text.size()) throw SyntaxError("trailing text in dateTime: " + std::string(text), 1, pos + 1);
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  // 24:00:00 is the only allowed hour-24 value.
  if (!ymd.ok() || h > 24 || mi > 59 || s > 59 || (h == 24 && (mi != 0 || s != 0))) {
    throw SyntaxError("dateTime out of range: " + std::string(text), 1, 1);
  }
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} - minutes{offset_minutes};
}

rdf::Term snapshot_iri(const rdf::Term& entity, std::uint64_t n) {
  return rdf::Term::iri(entity.value() + "/prov/se/" + std::to_string(n));
}

rdf::Term prov_graph(const rdf::Term& entity) { return rdf::Term::iri(entity.value() + "/prov/"); }

const Snapshot& Timeline::head() const {
  if (snapshots.empty()) throw NoHistory("no snapshots recorded for " + entity.text());
  return snapshots.back();
}

const Snapshot& Timeline::at(std::uint64_t n) const {
  if (n < 1 || n > snapshots.size()) {
    throw UnknownVersion("version " + std::to_string(n) + " of " + entity.text() +
                         " does not exist (head is " + std::to_string(snapshots.size()) + ")");
  }
  return snapshots[n - 1];
}

delta::ChangeSet Revision::provenance_change() const {
  const rdf::Term graph = prov_graph(snapshot.entity);
  rdf::QuadSet before = predecessor_before ? snapshot_to_quads(*predecessor_before, graph) : rdf::QuadSet{};
  rdf::QuadSet after = predecessor_after ? snapshot_to_quads(*predecessor_after, graph) : rdf::QuadSet{};
  const rdf::QuadSet own = snapshot_to_quads(snapshot, graph);
  after.insert(own.begin(), own.end());
  rdf::QuadSet deletions, additions;
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                      std::inserter(deletions, deletions.end()));
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                      std::inserter(additions, additions.end()));
  return delta::ChangeSet(std::move(deletions), std::move(additions));
}

std::string Revision::update_request() const {
  return delta::join_updates({delta::to_update_query(data_change),
                              delta::to_update_query(provenance_change())});
}

Revision record_creation(const Timeline& existing, const rdf::EntityState& state,
                         const rdf::Term& agent, const std::optional<rdf::Term>& source,
                         Timestamp t) {
  if (!existing.empty()) {
    throw AlreadyVersioned(existing.entity.text() + " already has " +
                           std::to_string(existing.snapshots.size()) + " snapshot(s)");
  }
  if (state.entity() != existing.entity) {
    throw EntityMismatch("state of " + state.entity().text() + " given for " + existing.entity.text());
  }
  if (state.empty()) throw EmptyDiff("nothing to create: " + state.entity().text() + " has no triples");
  if (state.has_blank()) throw BlankNodePresent("blank nodes cannot be versioned: " + state.entity().text());
  return Revision{Snapshot{snapshot_iri(state.entity(), 1), state.entity(), 1, t, std::nullopt,
                           agent, source, std::nullopt, std::nullopt},
                  std::nullopt, std::nullopt, {}};
}

Revision record_modification(const Timeline& existing, const rdf::EntityState& old_state,
                             const rdf::EntityState& new_state, const rdf::GraphName& data_graph,
                             const rdf::Term& agent, const std::optional<rdf::Term>& source,
                             Timestamp t) {
  require_head(existing);
  if (old_state.entity() != existing.entity) {
    throw EntityMismatch("state of " + old_state.entity().text() + " given for " + existing.entity.text());
  }
  delta::ChangeSet cs = delta::diff(old_state, new_state, data_graph);
  if (cs.empty()) throw EmptyDiff("no changes to " + existing.entity.text());
  Revision r = successor(existing, agent, t);
  r.snapshot.primary_source = source;
  r.snapshot.update_query = delta::to_update_query(cs);
  r.data_change = std::move(cs);
  return r;
}

Revision record_restore(const Timeline& existing, const rdf::EntityState& current,
                        const Snapshot& target, const rdf::EntityState& restored_state,
                        const rdf::GraphName& data_graph, const rdf::Term& agent, Timestamp t) {
  require_head(existing);
  if (target.entity != existing.entity || restored_state.entity() != existing.entity) {
    throw EntityMismatch("snapshot " + target.snapshot_iri.text() + " does not belong to " +
                         existing.entity.text());
  }
  delta::ChangeSet cs = delta::diff(current, restored_state, data_graph);
  if (cs.empty()) {
    throw EmptyDiff(existing.entity.text() + " already matches " + target.snapshot_iri.text());
  }
  Revision r = successor(existing, agent, t);
  r.snapshot.primary_source = target.snapshot_iri;
  r.snapshot.update_query = delta::to_update_query(cs);
  r.data_change = std::move(cs);
  return r;
}

Revision record_deletion(const Timeline& existing, const rdf::EntityState& current,
                         const rdf::GraphName& data_graph, const rdf::Term& agent, Timestamp t) {
  require_head(existing);
  if (current.empty()) throw EmptyDiff(existing.entity.text() + " has no triples to delete");
  delta::ChangeSet cs = delta::diff(current, rdf::EntityState(current.entity()), data_graph);
  Revision r = successor(existing, agent, t);
  r.snapshot.invalidated_at = t;
  r.snapshot.update_query = delta::to_update_query(cs);
  r.data_change = std::move(cs);
  return r;
}

rdf::QuadSet snapshot_to_quads(const Snapshot& s, const rdf::Term& graph) {
  rdf::QuadSet out;
  const auto add = [&](std::string_view p, const rdf::Term& o) {
    out.emplace(s.snapshot_iri, iri(p), o, graph);
  };
  add(vocab::kRdfType, iri(vocab::kProvEntity));
  add(vocab::kProvSpecializationOf, s.entity);
  add(vocab::kProvGeneratedAtTime, datetime_literal(s.generated_at));
  if (s.invalidated_at) add(vocab::kProvInvalidatedAtTime, datetime_literal(*s.invalidated_at));
  add(vocab::kProvWasAttributedTo, s.agent);
  if (s.primary_source) add(vocab::kProvHasPrimarySource, *s.primary_source);
  if (s.derived_from) add(vocab::kProvWasDerivedFrom, *s.derived_from);
  if (s.update_query) add(vocab::kOcoHasUpdateQuery, rdf::Term::literal(*s.update_query));
  return out;
}

Timeline timeline_from_quads(const rdf::Term& entity, const rdf::QuadSet& quads) {
  std::map<rdf::Term, std::map<std::string, std::vector<rdf::Term>>> by_subject;
  for (const auto& q : quads) by_subject[q.subject()][q.predicate().value()].push_back(q.object());

  const std::string prefix = entity.value() + "/prov/se/";
  std::map<std::uint64_t, Snapshot> found;
  for (const auto& [subject, props] : by_subject) {
    const auto spec = props.find(std::string(vocab::kProvSpecializationOf));
    if (spec == props.end() ||
        std::find(spec->second.begin(), spec->second.end(), entity) == spec->second.end()) {
      continue;
    }
    const std::string& name = subject.value();
    const auto fail = [&](const std::string& why) -> void {
      throw HistoryCorrupt("snapshot " + subject.text() + ": " + why);
    };
    if (spec->second.size() != 1) fail("specializes more than one entity");
    if (!subject.is_iri() || name.compare(0, prefix.size(), prefix) != 0) {
      fail("IRI does not follow " + prefix + "<n>");
    }
    const std::string_view tail = std::string_view(name).substr(prefix.size());
    std::uint64_t n = 0;
    const auto [end, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), n);
    if (ec != std::errc() || end != tail.data() + tail.size() || n == 0 || tail.front() == '0') {
      fail("IRI does not end in a snapshot number");
    }

    const auto one = [&](std::string_view pred, bool required) -> std::optional<rdf::Term> {
      const auto it = props.find(std::string(pred));
      if (it == props.end()) {
        if (required) fail("missing <" + std::string(pred) + ">");
        return std::nullopt;
      }
      if (it->second.size() != 1) fail("several values for <" + std::string(pred) + ">");
      return it->second.front();
    };
    const auto time = [&](std::string_view pred, bool required) -> std::optional<Timestamp> {
      const auto term = one(pred, required);
      if (!term) return std::nullopt;
      if (!term->is_literal()) fail("<" + std::string(pred) + "> is not a literal");
      try {
        return parse_timestamp(term->value());
      } catch (const SyntaxError& e) {
        fail(e.what());
      }
      return std::nullopt;
    };

    const auto type = props.find(std::string(vocab::kRdfType));
    if (type == props.end() ||
        std::find(type->second.begin(), type->second.end(), iri(vocab::kProvEntity)) == type->second.end()) {
      fail("not typed prov:Entity");
    }
    Snapshot s{subject, entity, n, *time(vocab::kProvGeneratedAtTime, true),
               time(vocab::kProvInvalidatedAtTime, false), *one(vocab::kProvWasAttributedTo, true),
               one(vocab::kProvHasPrimarySource, false), one(vocab::kProvWasDerivedFrom, false),
               std::nullopt};
    if (const auto q = one(vocab::kOcoHasUpdateQuery, false)) {
      if (!q->is_literal()) fail("update query is not a literal");
      s.update_query = q->value();
    }
    if (s.agent.is_blank()) fail("agent is a blank node");
    if (!found.emplace(n, std::move(s)).second) fail("duplicate snapshot number");
  }

  Timeline timeline{entity, {}};
  std::uint64_t expected = 1;
  for (auto& [n, s] : found) {
    const auto fail = [&](const std::string& why) {
      throw HistoryCorrupt("timeline of " + entity.text() + ": " + why);
    };
    if (n != expected) fail("snapshot " + std::to_string(expected) + " is missing");
    if (n == 1) {
      if (s.derived_from) fail("creation snapshot has a predecessor");
      if (s.update_query) fail("creation snapshot has an update query");
    } else {
      const Snapshot& prev = timeline.snapshots.back();
      if (s.derived_from != prev.snapshot_iri) {
        fail("snapshot " + std::to_string(n) + " is not derived from snapshot " + std::to_string(n - 1));
      }
      if (!s.update_query) fail("snapshot " + std::to_string(n) + " has no update query");
      if (prev.invalidated_at != s.generated_at) {
        fail("snapshot " + std::to_string(n - 1) + " is not invalidated when snapshot " +
             std::to_string(n) + " is generated");
      }
    }
    if (s.invalidated_at && *s.invalidated_at < s.generated_at) {
      fail("snapshot " + std::to_string(n) + " is invalidated before it is generated");
    }
    timeline.snapshots.push_back(std::move(s));
    ++expected;
  }
  return timeline;
}

Timeline load_timeline(store::StoreBackend& store, const rdf::Term& entity) {
  const rdf::Term graph = prov_graph(entity);
  const store::SolutionTable table = store.select(store::queries::graph_triples(graph));
  const std::size_t s = table.column("s"), p = table.column("p"), o = table.column("o");
  rdf::QuadSet quads;
  for (const auto& row : table.rows) {
    if (row[s] && row[p] && row[o]) quads.emplace(*row[s], *row[p], *row[o], graph);
  }
  return timeline_from_quads(entity, quads);
}

rdf::EntityState state_at(const Timeline& timeline, const rdf::EntityState& current,
                          std::uint64_t n, const delta::MaterializeOptions& options) {
  (void)timeline.at(n);
  std::vector<std::string> later;
  for (std::uint64_t k = timeline.snapshots.size(); k > n; --k) {
    later.push_back(*timeline.snapshots[k - 1].update_query);
  }
  return delta::materialize(current, later, options);
}

rdf::EntityState state_at(store::StoreBackend& store, const rdf::Term& entity,
                          const rdf::GraphName& data_graph, std::uint64_t n,
                          const delta::MaterializeOptions& options) {
  const Timeline timeline = load_timeline(store, entity);
  if (timeline.empty()) throw UnknownVersion(entity.text() + " has no recorded versions");
  return state_at(timeline, store::fetch_entity_state(store, entity, data_graph), n, options);
}

}  // namespace tessera::prov
