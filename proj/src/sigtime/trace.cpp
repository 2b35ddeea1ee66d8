#include "sigtime/trace.hpp"

#include <algorithm>
#include <set>

namespace sigtime {

Trace::Trace(std::vector<Event> events) {
  for (Event& e : events) signals_[e.signal].push_back(std::move(e));
  for (auto& [signal, list] : signals_) {
    (void)signal;
    std::stable_sort(list.begin(), list.end(),
                     [](const Event& a, const Event& b) { return a.k < b.k; });
  }
}

const std::vector<Event>* Trace::events_of(const PortId& signal) const {
  auto it = signals_.find(signal);
  return it == signals_.end() ? nullptr : &it->second;
}

const Event* Trace::find_event(const PortId& signal, std::uint64_t k) const {
  const std::vector<Event>* list = events_of(signal);
  if (!list) return nullptr;
  auto it = std::lower_bound(list->begin(), list->end(), k,
                             [](const Event& e, std::uint64_t key) { return e.k < key; });
  if (it == list->end() || it->k != k) return nullptr;
  return &*it;
}

std::vector<std::string> Trace::referenced_paths() const {
  std::set<std::string> ids;
  for (const auto& [signal, list] : signals_) {
    (void)signal;
    for (const Event& e : list)
      if (e.link) ids.insert(e.link->path);
  }
  return {ids.begin(), ids.end()};
}

std::size_t Trace::event_count() const {
  std::size_t n = 0;
  for (const auto& [signal, list] : signals_) {
    (void)signal;
    n += list.size();
  }
  return n;
}

std::vector<Event> Trace::all_events() const {
  std::vector<Event> out;
  out.reserve(event_count());
  for (const auto& [signal, list] : signals_) {
    (void)signal;
    out.insert(out.end(), list.begin(), list.end());
  }
  std::stable_sort(out.begin(), out.end(), [](const Event& a, const Event& b) {
    if (a.tag_ns != b.tag_ns) return a.tag_ns < b.tag_ns;
    if (a.signal != b.signal) return a.signal < b.signal;
    return a.k < b.k;
  });
  return out;
}

std::vector<Diagnostic> validate_trace(const Trace& trace) {
  std::vector<Diagnostic> diags;
  auto error = [&diags](std::string msg) {
    diags.push_back({Severity::Error, std::move(msg)});
  };

  for (const auto& [signal, list] : trace.signals()) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::uint64_t expected = i + 1;
      if (list[i].k != expected) {
        error("signal " + to_string(signal) + ": event indices must be consecutive from 1 (found " +
              std::to_string(list[i].k) + " at position " + std::to_string(expected) + ")");
        break;
      }
      if (i > 0 && list[i].tag_ns < list[i - 1].tag_ns)
        error("signal " + to_string(signal) + " event " + std::to_string(list[i].k) +
              ": tags must be non-decreasing in k");
    }
  }

  for (const auto& [signal, list] : trace.signals()) {
    for (const Event& e : list) {
      if (!e.link) continue;
      const Event* target = trace.find_event(e.link->port, e.link->k);
      if (!target) {
        error("signal " + to_string(signal) + " event " + std::to_string(e.k) +
              ": link to missing event " + to_string(e.link->port) + " k=" +
              std::to_string(e.link->k));
        continue;
      }
      if (e.tag_ns < target->tag_ns)
        error("signal " + to_string(signal) + " event " + std::to_string(e.k) +
              ": causal order violated, tag precedes its linked predecessor");
    }
  }

  // Cycle check over the link relation; each walk is bounded by the
  // total event count.
  std::size_t n = trace.event_count();
  for (const auto& [signal, list] : trace.signals()) {
    for (const Event& e : list) {
      const Event* cur = &e;
      std::size_t steps = 0;
      while (cur && cur->link) {
        cur = trace.find_event(cur->link->port, cur->link->k);
        if (++steps > n) {
          error("signal " + to_string(signal) + " event " + std::to_string(e.k) +
                ": chain-link cycle");
          break;
        }
      }
    }
  }
  return diags;
}

std::vector<Diagnostic> validate_chain(const CausalChain& chain,
                                       const SignalPath& path,
                                       const SystemModel& model) {
  std::vector<Diagnostic> diags;
  auto error = [&diags](std::string msg) {
    diags.push_back({Severity::Error, std::move(msg)});
  };

  if (chain.path_id != path.id)
    error("chain names path '" + chain.path_id + "', expected '" + path.id + "'");
  if (chain.events.size() != path.interfaces.size()) {
    error("chain must carry exactly one event per path interface");
    return diags;
  }
  for (std::size_t i = 0; i < chain.events.size(); ++i) {
    if (chain.events[i].port != path.interfaces[i])
      error("chain event " + std::to_string(i) + " sits on " +
            to_string(chain.events[i].port) + ", expected " +
            to_string(path.interfaces[i]));
    if (i > 0 && chain.events[i].tag_ns < chain.events[i - 1].tag_ns)
      error("chain tags must be non-decreasing along the path");
  }
  const Port* first = model.find_port(chain.events.front().port);
  if (!first || first->kind != PortKind::Sampling)
    error("chain must start at a sampling port");
  return diags;
}

ChainExtraction extract_causal_chains(const Trace& trace, const SignalPath& path) {
  ChainExtraction out;
  if (path.interfaces.empty()) return out;

  const std::vector<Event>* terminals = trace.events_of(path.subject_interface());
  if (!terminals) return out;

  for (const Event& terminal : *terminals) {
    CausalChain chain;
    chain.path_id = path.id;
    chain.events.resize(path.interfaces.size());
    chain.events.back() = {terminal.signal, terminal.k, terminal.tag_ns};

    std::set<std::pair<PortId, std::uint64_t>> visited;
    visited.insert({terminal.signal, terminal.k});

    const Event* cur = &terminal;
    bool complete = true;
    for (std::size_t i = path.interfaces.size(); i-- > 1;) {
      if (!cur->link) {
        out.skipped.push_back({terminal.k, "event at " + to_string(cur->signal) + " k=" +
                                               std::to_string(cur->k) + " has no chain link"});
        complete = false;
        break;
      }
      const ChainLink& link = *cur->link;
      if (link.path != path.id) {
        out.skipped.push_back({terminal.k, "link names path '" + link.path + "', expected '" +
                                               path.id + "'"});
        complete = false;
        break;
      }
      if (link.port != path.interfaces[i - 1]) {
        out.skipped.push_back({terminal.k, "link points at " + to_string(link.port) +
                                               ", expected interface " +
                                               to_string(path.interfaces[i - 1])});
        complete = false;
        break;
      }
      const Event* upstream = trace.find_event(link.port, link.k);
      if (!upstream) {
        out.skipped.push_back({terminal.k, "link target " + to_string(link.port) + " k=" +
                                               std::to_string(link.k) + " is missing"});
        complete = false;
        break;
      }
      if (!visited.insert({upstream->signal, upstream->k}).second)
        throw Error(ErrorCode::Malformed,
                    "chain-link cycle reached from " + to_string(terminal.signal) +
                        " k=" + std::to_string(terminal.k));
      if (upstream->tag_ns > cur->tag_ns) {
        out.skipped.push_back({terminal.k, "causal order violated at " + to_string(link.port) +
                                               " k=" + std::to_string(link.k)});
        complete = false;
        break;
      }
      chain.events[i - 1] = {upstream->signal, upstream->k, upstream->tag_ns};
      cur = upstream;
    }
    if (complete) out.chains.push_back(std::move(chain));
  }
  return out;
}

}  // namespace sigtime
