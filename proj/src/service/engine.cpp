#include "tessera/service/engine.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>

#include "tessera/errors.hpp"
#include "tessera/rdf/vocab.hpp"

namespace tessera::service {

namespace {

const rdf::Term& rdf_type() {
  static const rdf::Term t = rdf::Term::iri(std::string(vocab::kRdfType));
  return t;
}

std::string local_name(const rdf::Term& iri) {
  const std::string& v = iri.value();
  const auto cut = v.find_last_of("/#:");
  std::string name = cut == std::string::npos ? v : v.substr(cut + 1);
  return name.empty() ? "entity" : name;
}

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ApiError&) {
    throw;
  } catch (const UnknownVersion& e) {
    throw ApiError(404, "not_found", e.what());
  } catch (const NoHistory& e) {
    throw ApiError(404, "not_found", e.what());
  } catch (const EmptyDiff& e) {
    throw ApiError(400, "empty_diff", e.what());
  } catch (const AlreadyVersioned& e) {
    throw ApiError(409, "conflict", e.what());
  } catch (const BlankNodePresent& e) {
    throw ApiError(400, "blank_node", e.what());
  } catch (const InvalidTerm& e) {
    throw ApiError(400, "bad_request", e.what());
  } catch (const EntityMismatch& e) {
    throw ApiError(400, "bad_request", e.what());
  } catch (const HistoryCorrupt& e) {
    throw ApiError(500, "history_corrupt", e.what());
  } catch (const TransportError& e) {
    throw ApiError(502, "store_unavailable", e.what());
  } catch (const QueryError& e) {
    throw ApiError(502, "store_rejected_query", e.what());
  }
}

}  // namespace

class Engine::EntityLock {
 public:
  explicit EntityLock(std::shared_ptr<std::mutex> m) : mutex_(std::move(m)), lock_(*mutex_) {}

 private:
  std::shared_ptr<std::mutex> mutex_;
  std::unique_lock<std::mutex> lock_;
};

Engine::Engine(store::StoreBackend& store, shapes::FormSchema schema, display::DisplayConfig display,
               EngineOptions options)
    : store_(store), schema_(std::move(schema)), display_(std::move(display)), options_(std::move(options)) {
  if (!options_.clock) options_.clock = prov::system_now;
  while (!options_.base_iri.empty() && options_.base_iri.back() == '/') options_.base_iri.pop_back();
}

std::shared_ptr<std::mutex> Engine::lock_for(const rdf::Term& entity) {
  std::lock_guard guard(locks_mutex_);
  if (locks_.size() > 4096) {
    for (auto it = locks_.begin(); it != locks_.end();) {
      it = it->second.expired() ? locks_.erase(it) : std::next(it);
    }
  }
  auto& slot = locks_[entity];
  auto m = slot.lock();
  if (!m) {
    m = std::make_shared<std::mutex>();
    slot = m;
  }
  return m;
}

delta::MaterializeOptions Engine::materialize_options() const {
  return {options_.lenient, [](const std::string& w) { spdlog::warn("{}", w); }};
}

prov::Timeline Engine::timeline_or_404(const rdf::Term& entity) {
  prov::Timeline tl = prov::load_timeline(store_, entity);
  if (tl.empty()) throw ApiError(404, "not_found", entity.text() + " has no recorded history");
  return tl;
}

rdf::EntityState Engine::current_state(const rdf::Term& entity) {
  return store::fetch_entity_state(store_, entity, options_.data_graph);
}

rdf::EntityState Engine::build_state(const rdf::Term& entity, const PredicateObjectList& pairs) const {
  rdf::EntityState state(entity);
  for (const auto& [p, o] : pairs) {
    if (o.is_blank()) throw ApiError(400, "blank_node", "blank node objects cannot be versioned: " + o.text());
    state.insert(rdf::Triple(entity, p, o));
  }
  return state;
}

std::set<rdf::Term> Engine::types_of(const rdf::Term& node) {
  const auto values = store_.select(store::queries::types_of(node, options_.data_graph)).values("c");
  return {values.begin(), values.end()};
}

std::vector<shapes::Violation> Engine::validate(const rdf::EntityState& state) {
  const auto types = state.objects(rdf_type());
  return shapes::validate_state(state, types, schema_, [this](const rdf::Term& t) { return types_of(t); })
      .violations;
}

void Engine::write(const std::string& update) {
  if (!update.empty()) store_.update(update);
}

rdf::Term Engine::mint(const rdf::Term& cls) {
  std::lock_guard guard(mint_mutex_);
  for (;;) {
    const rdf::Term candidate =
        rdf::Term::iri(options_.base_iri + "/" + local_name(cls) + "/" + std::to_string(next_id_++));
    if (prov::load_timeline(store_, candidate).empty() &&
        store_.fetch_entity_state(candidate, options_.data_graph).empty()) {
      return candidate;
    }
  }
}

prov::Snapshot Engine::create_entity(const CreateRequest& req) {
  return guarded([&] {
    if (!req.cls.is_iri()) throw ApiError(400, "bad_request", "class must be an IRI");
    const rdf::Term entity = req.entity ? *req.entity : mint(req.cls);
    if (!entity.is_iri()) throw ApiError(400, "bad_request", "entity must be an IRI");
    EntityLock lock(lock_for(entity));
    const prov::Timeline tl = prov::load_timeline(store_, entity);
    if (!tl.empty()) throw ApiError(409, "conflict", entity.text() + " is already versioned");
    if (!store_.fetch_entity_state(entity, options_.data_graph).empty()) {
      throw ApiError(409, "conflict", entity.text() + " already has data");
    }
    rdf::EntityState state = build_state(entity, req.state);
    state.insert(rdf::Triple(entity, rdf_type(), req.cls));
    if (auto violations = validate(state); !violations.empty()) {
      throw ApiError(422, "invalid", "the new entity violates the shapes", std::move(violations));
    }
    prov::Revision rev = prov::record_creation(tl, state, req.agent, req.primary_source, options_.clock());
    rev.data_change = delta::diff(rdf::EntityState(entity), state, options_.data_graph);
    write(rev.update_request());
    return rev.snapshot;
  });
}

prov::Snapshot Engine::submit_edit(const EditRequest& req) {
  return guarded([&] {
    EntityLock lock(lock_for(req.entity));
    const prov::Timeline tl = timeline_or_404(req.entity);
    if (tl.deleted()) throw ApiError(404, "not_found", req.entity.text() + " is deleted");
    if (tl.head().number != req.base_version) {
      throw ApiError(409, "conflict",
                     "edit based on version " + std::to_string(req.base_version) + " but head is " +
                         std::to_string(tl.head().number));
    }
    const rdf::EntityState next = build_state(req.entity, req.new_state);
    if (auto violations = validate(next); !violations.empty()) {
      throw ApiError(422, "invalid", "the edit violates the shapes", std::move(violations));
    }
    const rdf::EntityState current = current_state(req.entity);
    const prov::Revision rev = prov::record_modification(tl, current, next, options_.data_graph, req.agent,
                                                         req.primary_source, options_.clock());
    write(rev.update_request());
    return rev.snapshot;
  });
}

prov::Snapshot Engine::delete_entity(const rdf::Term& entity, const rdf::Term& agent,
                                     std::optional<std::uint64_t> base_version) {
  return guarded([&] {
    EntityLock lock(lock_for(entity));
    const prov::Timeline tl = timeline_or_404(entity);
    if (tl.deleted()) throw ApiError(404, "not_found", entity.text() + " is already deleted");
    if (base_version && *base_version != tl.head().number) {
      throw ApiError(409, "conflict",
                     "delete based on version " + std::to_string(*base_version) + " but head is " +
                         std::to_string(tl.head().number));
    }
    const prov::Revision rev =
        prov::record_deletion(tl, current_state(entity), options_.data_graph, agent, options_.clock());
    write(rev.update_request());
    return rev.snapshot;
  });
}

RestoreResult Engine::restore_version(const rdf::Term& entity, std::uint64_t target, const rdf::Term& agent) {
  return guarded([&] {
    EntityLock lock(lock_for(entity));
    const prov::Timeline tl = timeline_or_404(entity);
    if (target < 1 || target >= tl.head().number) {
      throw ApiError(404, "not_found",
                     "version " + std::to_string(target) + " is not an earlier version of " + entity.text() +
                         " (head is " + std::to_string(tl.head().number) + ")");
    }
    const rdf::EntityState current = current_state(entity);
    const rdf::EntityState restored = prov::state_at(tl, current, target, materialize_options());
    const prov::Revision rev = prov::record_restore(tl, current, tl.at(target), restored, options_.data_graph,
                                                    agent, options_.clock());
    RestoreResult result{rev.snapshot, validate(restored)};
    write(rev.update_request());
    return result;
  });
}

std::vector<TimelineEntry> Engine::get_timeline(const rdf::Term& entity) {
  return guarded([&] {
    const prov::Timeline tl = timeline_or_404(entity);
    std::vector<TimelineEntry> out;
    for (const auto& s : tl.snapshots) {
      TimelineEntry e{s, 0, 0};
      if (s.update_query) {
        const delta::ChangeSet cs = delta::parse_update_query(*s.update_query);
        e.added_count = cs.additions().size();
        e.deleted_count = cs.deletions().size();
      } else {
        e.added_count = prov::state_at(tl, current_state(entity), 1, materialize_options()).size();
      }
      out.push_back(std::move(e));
    }
    return out;
  });
}

EntityView Engine::get_entity(const rdf::Term& entity) {
  return guarded([&] {
    const prov::Timeline tl = prov::load_timeline(store_, entity);
    rdf::EntityState state = store_.fetch_entity_state(entity, options_.data_graph);
    if (tl.empty() && state.empty()) throw ApiError(404, "not_found", entity.text() + " is unknown");
    EntityView view{entity, std::nullopt, tl.deleted(), state.objects(rdf_type()), state, {}};
    if (!tl.empty()) view.version = tl.head().number;

    std::vector<rdf::Term> paths;
    for (const auto& c : display_.classes) {
      if (!view.types.count(c.iri)) continue;
      for (const auto& p : c.properties) {
        if (std::find(paths.begin(), paths.end(), p.path) != paths.end()) continue;
        if (p.value_query || !state.objects(p.path).empty()) paths.push_back(p.path);
      }
    }
    std::set<rdf::Term> rest;
    for (const auto& t : state.triples()) rest.insert(t.predicate());
    for (const auto& p : rest) {
      if (std::find(paths.begin(), paths.end(), p) == paths.end()) paths.push_back(p);
    }

    for (const auto& path : paths) {
      const display::PropertyDisplay* cfg = display_.find_property(view.types, path);
      if (cfg != nullptr && !cfg->displayed) continue;
      PropertyView pv{path, cfg != nullptr ? cfg->label : local_name(path), {}, std::nullopt, std::nullopt};
      pv.values = display::display_value(store_, entity, path, display_, view.types, options_.data_graph);
      if (cfg != nullptr && cfg->order_predicate) {
        try {
          pv.ordered = display::ordered_values(store_, entity, path, *cfg->order_predicate, options_.data_graph);
        } catch (const OrderError& e) {
          pv.order_error = e.what();
        }
      }
      view.properties.push_back(std::move(pv));
    }
    return view;
  });
}

std::pair<prov::Snapshot, rdf::EntityState> Engine::get_version(const rdf::Term& entity, std::uint64_t n) {
  return guarded([&] {
    const prov::Timeline tl = timeline_or_404(entity);
    const prov::Snapshot& s = tl.at(n);
    return std::make_pair(s, prov::state_at(tl, current_state(entity), n, materialize_options()));
  });
}

std::string Engine::diff_versions(const rdf::Term& entity, std::uint64_t m, std::uint64_t n) {
  return guarded([&] {
    if (m >= n) throw ApiError(400, "bad_request", "diff needs M < N");
    const prov::Timeline tl = timeline_or_404(entity);
    (void)tl.at(m);
    (void)tl.at(n);
    const rdf::EntityState current = current_state(entity);
    const auto opts = materialize_options();
    return delta::to_update_query(delta::diff(prov::state_at(tl, current, m, opts),
                                              prov::state_at(tl, current, n, opts), options_.data_graph));
  });
}

std::vector<ClassCount> Engine::list_classes() {
  return guarded([&] {
    std::map<rdf::Term, std::set<rdf::Term>> members;
    const auto table = store_.select(store::queries::typed_subjects(options_.data_graph));
    const std::size_t s = table.column("s"), c = table.column("c");
    for (const auto& row : table.rows) {
      if (row[s] && row[c]) members[*row[c]].insert(*row[s]);
    }
    for (const auto& cfg : display_.classes) members[cfg.iri];
    for (const auto& [cls, constraints] : schema_.classes) members[cls];
    std::vector<ClassCount> out;
    for (const auto& [cls, subjects] : members) {
      const auto* cfg = display_.find_class(cls);
      out.push_back({cls, cfg != nullptr ? cfg->label : local_name(cls), subjects.size()});
    }
    return out;
  });
}

EntityPage Engine::list_entities(const rdf::Term& cls, std::size_t offset, std::size_t limit) {
  return guarded([&] {
    EntityPage page;
    page.items = store_.select(store::queries::instances(cls, options_.data_graph, offset, limit + 1)).values("s");
    if (page.items.size() > limit) {
      page.items.erase(page.items.begin() + static_cast<std::ptrdiff_t>(limit), page.items.end());
      page.has_more = true;
    }
    return page;
  });
}

ImportSummary Engine::import_quads(const rdf::QuadSet& quads, const rdf::Term& agent,
                                   const std::optional<rdf::Term>& source) {
  return guarded([&] {
    std::map<rdf::Term, rdf::EntityState> states;
    for (const auto& q : quads) {
      if (q.has_blank()) {
        throw ApiError(400, "blank_node", "blank nodes cannot be versioned: " + q.subject().text() + " " +
                                              q.predicate().text() + " " + q.object().text());
      }
      states.try_emplace(q.subject(), q.subject()).first->second.insert(q.triple());
    }
    for (const auto& [entity, state] : states) {
      if (!prov::load_timeline(store_, entity).empty()) {
        throw ApiError(409, "conflict", entity.text() + " is already versioned; nothing was imported");
      }
    }
    // Batches keep request bodies bounded; each batch is one update request.
    constexpr std::size_t kBatch = 200;
    auto it = states.begin();
    while (it != states.end()) {
      std::vector<std::shared_ptr<std::mutex>> mutexes;
      std::vector<std::unique_ptr<EntityLock>> held;
      std::vector<std::string> updates;
      rdf::QuadSet additions;
      for (std::size_t n = 0; n < kBatch && it != states.end(); ++n, ++it) {
        const auto& [entity, imported] = *it;
        held.push_back(std::make_unique<EntityLock>(lock_for(entity)));
        rdf::EntityState full = current_state(entity);
        for (const auto& t : imported.triples()) {
          if (!full.contains(t)) additions.emplace(t, options_.data_graph);
          full.insert(t);
        }
        const prov::Revision rev =
            prov::record_creation(prov::Timeline{entity, {}}, full, agent, source, options_.clock());
        updates.push_back(delta::to_update_query(rev.provenance_change()));
      }
      updates.insert(updates.begin(), delta::to_update_query(delta::ChangeSet({}, std::move(additions))));
      write(delta::join_updates(updates));
    }
    return ImportSummary{states.size(), quads.size()};
  });
}

rdf::Term agent_from_header(const std::optional<std::string>& header) {
  if (!header || header->empty()) return rdf::Term::literal("anonymous");
  if (rdf::is_absolute_iri(*header)) {
    try {
      return rdf::Term::iri(*header);
    } catch (const InvalidTerm&) {
    }
  }
  return rdf::Term::literal(*header);
}

}  // namespace tessera::service
