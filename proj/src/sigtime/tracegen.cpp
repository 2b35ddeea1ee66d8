#include "sigtime/tracegen.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sigtime/metrics.hpp"

namespace sigtime {

namespace {

struct PendingEvent {
  PortId port;
  TimeNs tag_ns = 0;
  std::string path;
  long upstream = -1;  // index into the pending list, -1 for none
  bool sever_link = false;
  std::uint64_t final_k = 0;
};

const PathGenConfig* find_config(const GenSpec& spec, const std::string& id) {
  for (const PathGenConfig& c : spec.paths)
    if (c.path == id) return &c;
  return nullptr;
}

void validate_genspec(const SystemModel& model, const GenSpec& spec) {
  if (!spec.seed)
    throw Error(ErrorCode::MissingData, "generation spec carries no seed");
  if (spec.duration_ns < 0)
    throw Error(ErrorCode::Validation, "generation duration must be non-negative");
  std::set<std::string> seen;
  for (const PathGenConfig& c : spec.paths) {
    const SignalPath* path = model.find_path(c.path);
    if (!path)
      throw Error(ErrorCode::UnknownReference, "genspec references unknown path '" + c.path + "'");
    if (!seen.insert(c.path).second)
      throw Error(ErrorCode::Validation, "genspec configures path '" + c.path + "' twice");
    if (c.period_ns <= 0)
      throw Error(ErrorCode::Validation, "path '" + c.path + "': sampling period must be positive");
    if (c.jitter_ns < 0 || c.jitter_ns >= c.period_ns)
      throw Error(ErrorCode::Validation,
                  "path '" + c.path + "': jitter bound must satisfy 0 <= jitter < period");
    if (c.hop_latency.lower < 0 || !c.hop_latency.well_ordered() ||
        is_unbounded(c.hop_latency.upper))
      throw Error(ErrorCode::Validation,
                  "path '" + c.path + "': per-hop latency range must be finite and non-negative");
    if (c.drop_probability < 0.0 || c.drop_probability > 1.0)
      throw Error(ErrorCode::Validation,
                  "path '" + c.path + "': drop probability must lie in [0, 1]");
    if (c.align_terminal_with) {
      const PathGenConfig* master = find_config(spec, *c.align_terminal_with);
      if (!master || master->path == c.path)
        throw Error(ErrorCode::Validation,
                    "path '" + c.path + "': align_terminal_with must name another configured path");
      if (master->align_terminal_with)
        throw Error(ErrorCode::Validation,
                    "path '" + c.path + "': alignment master must not itself be aligned");
      // Keep aligned sampling tags ordered: latency spread must stay
      // below the master's minimal terminal gap.
      TimeNs spread = (c.hop_latency.upper - c.hop_latency.lower) *
                      static_cast<TimeNs>(path->interfaces.size());
      if (spread >= master->period_ns - master->jitter_ns)
        throw Error(ErrorCode::Validation,
                    "path '" + c.path + "': per-hop latency spread too wide to align with '" +
                        *c.align_terminal_with + "'");
    }
  }
}

}  // namespace

GeneratedTrace generate_trace(const SystemModel& model, const GenSpec& spec) {
  validate_genspec(model, spec);

  std::vector<PendingEvent> pending;
  std::vector<GroundTruthChain> truth;
  std::size_t dropped = 0;

  // Terminal tags of each generated chain, per path, for alignment.
  std::map<std::string, std::vector<TimeNs>> terminal_tags;

  auto generate_path = [&](std::size_t config_index) {
    const PathGenConfig& cfg = spec.paths[config_index];
    const SignalPath& path = *model.find_path(cfg.path);
    const std::size_t hops = path.interfaces.size();
    SplitMix64 rng(*spec.seed ^ (0x100000001B3ull * (config_index + 1)));

    std::vector<TimeNs> master_terminals;
    if (cfg.align_terminal_with) master_terminals = terminal_tags[*cfg.align_terminal_with];

    std::size_t chain_count = 0;
    if (cfg.align_terminal_with) {
      chain_count = master_terminals.size();
    } else {
      for (TimeNs nominal = 0; nominal < spec.duration_ns; nominal += cfg.period_ns)
        ++chain_count;
    }

    for (std::size_t chain = 0; chain < chain_count; ++chain) {
      std::vector<TimeNs> tags(hops, 0);
      if (cfg.align_terminal_with) {
        // Draw hop latencies, then place the chain so its terminal tag
        // matches the master's.
        TimeNs total = 0;
        std::vector<TimeNs> hop_latencies;
        for (std::size_t i = 1; i < hops; ++i) {
          hop_latencies.push_back(rng.uniform(cfg.hop_latency.lower, cfg.hop_latency.upper));
          total += hop_latencies.back();
        }
        tags[0] = master_terminals[chain] - total;
        for (std::size_t i = 1; i < hops; ++i) tags[i] = tags[i - 1] + hop_latencies[i - 1];
      } else {
        tags[0] = static_cast<TimeNs>(chain) * cfg.period_ns + rng.uniform(0, cfg.jitter_ns);
        for (std::size_t i = 1; i < hops; ++i)
          tags[i] = tags[i - 1] + rng.uniform(cfg.hop_latency.lower, cfg.hop_latency.upper);
      }
      terminal_tags[cfg.path].push_back(tags[hops - 1]);

      bool drop = hops >= 2 && rng.uniform01() < cfg.drop_probability;
      std::size_t sever_at = 0;
      if (drop) {
        sever_at = static_cast<std::size_t>(rng.uniform(1, static_cast<TimeNs>(hops - 1)));
        ++dropped;
      }

      long upstream = -1;
      for (std::size_t i = 0; i < hops; ++i) {
        PendingEvent e;
        e.port = path.interfaces[i];
        e.tag_ns = tags[i];
        e.path = cfg.path;
        e.upstream = i == 0 ? -1 : upstream;
        e.sever_link = drop && i == sever_at;
        pending.push_back(e);
        upstream = static_cast<long>(pending.size()) - 1;
      }

      if (!drop) {
        GroundTruthChain gt;
        gt.path = cfg.path;
        gt.k = pending.size() - 1;  // provisional: pending index of the terminal, fixed below
        gt.latency_ns = tags[hops - 1] - tags[0];
        gt.age_ns = gt.latency_ns + path.total_delay_ns();
        gt.logical_ns = tags[0] - path.total_delay_ns();
        truth.push_back(gt);
      }
    }
  };

  for (std::size_t i = 0; i < spec.paths.size(); ++i)
    if (!spec.paths[i].align_terminal_with) generate_path(i);
  for (std::size_t i = 0; i < spec.paths.size(); ++i)
    if (spec.paths[i].align_terminal_with) generate_path(i);

  // Assign final per-interface indices by tag order (stable on ties).
  std::map<PortId, std::vector<std::size_t>> per_interface;
  for (std::size_t i = 0; i < pending.size(); ++i)
    per_interface[pending[i].port].push_back(i);
  for (auto& [port, list] : per_interface) {
    (void)port;
    std::stable_sort(list.begin(), list.end(), [&pending](std::size_t a, std::size_t b) {
      return pending[a].tag_ns < pending[b].tag_ns;
    });
    for (std::size_t i = 0; i < list.size(); ++i) pending[list[i]].final_k = i + 1;
  }

  std::vector<Event> events;
  events.reserve(pending.size());
  for (const PendingEvent& pe : pending) {
    Event e;
    e.signal = pe.port;
    e.k = pe.final_k;
    e.tag_ns = pe.tag_ns;
    if (pe.upstream >= 0 && !pe.sever_link) {
      const PendingEvent& up = pending[static_cast<std::size_t>(pe.upstream)];
      e.link = ChainLink{pe.path, up.port, up.final_k};
    }
    events.push_back(std::move(e));
  }

  // Rewrite the provisional terminal references to final indices.
  for (GroundTruthChain& gt : truth)
    gt.k = pending[gt.k].final_k;
  std::sort(truth.begin(), truth.end(), [](const GroundTruthChain& a, const GroundTruthChain& b) {
    if (a.path != b.path) return a.path < b.path;
    return a.k < b.k;
  });

  return {Trace(std::move(events)), std::move(truth), dropped};
}

namespace {

struct WorkingTrace {
  std::vector<Event> events;
  std::vector<bool> dead;

  explicit WorkingTrace(const Trace& t) : events(t.all_events()), dead(events.size(), false) {}

  long find(const PortId& port, std::uint64_t k) const {
    for (std::size_t i = 0; i < events.size(); ++i)
      if (!dead[i] && events[i].signal == port && events[i].k == k)
        return static_cast<long>(i);
    return -1;
  }

  /// Removes the event and everything causally downstream of it, then
  /// reindexes every touched interface and remaps surviving links.
  void remove_cascading(std::size_t index) {
    std::set<std::pair<PortId, std::uint64_t>> removed;
    std::vector<std::size_t> queue{index};
    while (!queue.empty()) {
      std::size_t cur = queue.back();
      queue.pop_back();
      if (dead[cur]) continue;
      dead[cur] = true;
      removed.insert({events[cur].signal, events[cur].k});
      for (std::size_t i = 0; i < events.size(); ++i) {
        if (dead[i] || !events[i].link) continue;
        if (removed.count({events[i].link->port, events[i].link->k}))
          queue.push_back(i);
      }
    }

    // New consecutive indices per interface.
    std::map<PortId, std::vector<std::size_t>> per_interface;
    for (std::size_t i = 0; i < events.size(); ++i)
      if (!dead[i]) per_interface[events[i].signal].push_back(i);
    std::map<std::pair<PortId, std::uint64_t>, std::uint64_t> renumber;
    for (auto& [port, list] : per_interface) {
      std::sort(list.begin(), list.end(), [this](std::size_t a, std::size_t b) {
        return events[a].k < events[b].k;
      });
      for (std::size_t i = 0; i < list.size(); ++i)
        renumber[{port, events[list[i]].k}] = i + 1;
    }
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (dead[i]) continue;
      if (events[i].link) {
        auto it = renumber.find({events[i].link->port, events[i].link->k});
        events[i].link->k = it->second;  // target survives: cascade removed the rest
      }
      events[i].k = renumber.at({events[i].signal, events[i].k});
    }
  }

  Trace finish() const {
    std::vector<Event> out;
    for (std::size_t i = 0; i < events.size(); ++i)
      if (!dead[i]) out.push_back(events[i]);
    return Trace(std::move(out));
  }
};

const SignalPath& pick_path(const Trace& trace, const SystemModel& model, SplitMix64& rng,
                            bool need_resampling_read) {
  std::vector<const SignalPath*> candidates;
  for (const std::string& id : trace.referenced_paths()) {
    const SignalPath* path = model.find_path(id);
    if (!path) continue;
    if (need_resampling_read) {
      bool has = false;
      for (std::size_t i = 1; i < path->interfaces.size(); ++i) {
        const Port* p = model.find_port(path->interfaces[i]);
        if (p && p->resampling && is_read_kind(p->kind)) has = true;
      }
      if (!has) continue;
    }
    candidates.push_back(path);
  }
  if (candidates.empty())
    throw Error(ErrorCode::InvalidArgument,
                need_resampling_read
                    ? "trace references no path with a resampling read interface"
                    : "trace references no known path");
  return *candidates[static_cast<std::size_t>(rng.next() % candidates.size())];
}

std::uint64_t pick_interior_index(const std::vector<Event>& events, SplitMix64& rng) {
  if (events.size() < 3)
    throw Error(ErrorCode::InvalidArgument, "trace too small to perturb");
  // Interior index: both a predecessor and a successor remain.
  return 2 + rng.next() % (events.size() - 2);
}

}  // namespace

InjectedTrace inject_violation(const Trace& trace, const SystemModel& model,
                               RequirementKind kind, TimeNs magnitude,
                               std::uint64_t seed) {
  InjectionRecord record;
  record.kind = kind;
  if (magnitude == 0) return {trace, record};
  if (magnitude < 0)
    throw Error(ErrorCode::InvalidArgument, "injection magnitude must be non-negative");

  SplitMix64 rng(seed);
  WorkingTrace work(trace);

  switch (kind) {
    case RequirementKind::DataAge: {
      const SignalPath& path = pick_path(trace, model, rng, false);
      auto chains = extract_causal_chains(trace, path).chains;
      if (chains.empty())
        throw Error(ErrorCode::InvalidArgument, "trace has no complete chain to perturb");
      std::vector<const CausalChain*> safe;
      for (const CausalChain& c : chains) {
        const EventRef& t = c.terminal_event();
        const Event* next = trace.find_event(t.port, t.k + 1);
        if (next && next->tag_ns < t.tag_ns + magnitude) continue;
        bool consumer_conflict = false;
        for (const auto& [signal, list] : trace.signals()) {
          (void)signal;
          for (const Event& e : list)
            if (e.link && e.link->port == t.port && e.link->k == t.k &&
                e.tag_ns < t.tag_ns + magnitude)
              consumer_conflict = true;
        }
        if (!consumer_conflict) safe.push_back(&c);
      }
      if (safe.empty())
        throw Error(ErrorCode::InvalidArgument,
                    "no terminal event can be delayed by the requested magnitude");
      const CausalChain& chosen = *safe[static_cast<std::size_t>(rng.next() % safe.size())];
      long idx = work.find(chosen.terminal_event().port, chosen.terminal_event().k);
      work.events[static_cast<std::size_t>(idx)].tag_ns += magnitude;
      record.path = path.id;
      record.interface = chosen.terminal_event().port;
      record.k = chosen.terminal_index();
      break;
    }
    case RequirementKind::Synchronicity: {
      const SignalPath& path = pick_path(trace, model, rng, false);
      auto chains = extract_causal_chains(trace, path).chains;
      if (chains.empty())
        throw Error(ErrorCode::InvalidArgument, "trace has no complete chain to perturb");
      std::vector<const CausalChain*> safe;
      for (const CausalChain& c : chains) {
        const EventRef& s = c.sampling_event();
        if (s.k == 1) {
          safe.push_back(&c);
          continue;
        }
        const Event* prev = trace.find_event(s.port, s.k - 1);
        if (prev && prev->tag_ns <= s.tag_ns - magnitude) safe.push_back(&c);
      }
      if (safe.empty())
        throw Error(ErrorCode::InvalidArgument,
                    "no sampling event can be advanced by the requested magnitude");
      const CausalChain& chosen = *safe[static_cast<std::size_t>(rng.next() % safe.size())];
      long idx = work.find(chosen.sampling_event().port, chosen.sampling_event().k);
      work.events[static_cast<std::size_t>(idx)].tag_ns -= magnitude;
      record.path = path.id;
      record.interface = chosen.sampling_event().port;
      record.k = chosen.terminal_index();
      break;
    }
    case RequirementKind::SamplingRate: {
      const SignalPath& path = pick_path(trace, model, rng, false);
      auto chains = extract_causal_chains(trace, path).chains;
      if (chains.size() < 2)
        throw Error(ErrorCode::InvalidArgument, "need at least two chains to open a rate gap");
      std::size_t pick = 1 + static_cast<std::size_t>(rng.next() % (chains.size() - 1));
      const CausalChain& chosen = chains[pick];
      // Shift the whole suffix at every interface of the path: exactly
      // one logical-rate entry widens.
      for (const EventRef& ref : chosen.events) {
        for (Event& e : work.events) {
          if (e.signal == ref.port && e.k >= ref.k) e.tag_ns += magnitude;
        }
      }
      record.path = path.id;
      record.interface = chosen.sampling_event().port;
      record.k = chosen.terminal_index();
      break;
    }
    case RequirementKind::BandLimit: {
      const SignalPath& path = pick_path(trace, model, rng, false);
      const std::vector<Event>* terminals = trace.events_of(path.subject_interface());
      if (!terminals)
        throw Error(ErrorCode::InvalidArgument, "no events at the path's subject interface");
      std::uint64_t k = pick_interior_index(*terminals, rng);
      long idx = work.find(path.subject_interface(), k);
      work.remove_cascading(static_cast<std::size_t>(idx));
      record.path = path.id;
      record.interface = path.subject_interface();
      record.k = k;
      break;
    }
    case RequirementKind::NoAliasing: {
      const SignalPath& path = pick_path(trace, model, rng, true);
      PortId target;
      for (std::size_t i = 1; i < path.interfaces.size(); ++i) {
        const Port* p = model.find_port(path.interfaces[i]);
        if (p && p->resampling && is_read_kind(p->kind)) {
          target = path.interfaces[i];
          break;
        }
      }
      const std::vector<Event>* events = trace.events_of(target);
      if (!events)
        throw Error(ErrorCode::InvalidArgument, "no events at the resampling interface");
      std::uint64_t k = pick_interior_index(*events, rng);
      long idx = work.find(target, k);
      work.remove_cascading(static_cast<std::size_t>(idx));
      record.path = path.id;
      record.interface = target;
      record.k = k;
      break;
    }
  }

  Trace result = work.finish();
  if (has_errors(validate_trace(result)))
    throw Error(ErrorCode::InvalidArgument,
                "injection would break trace invariants (entangled paths)");
  return {std::move(result), record};
}

}  // namespace sigtime
