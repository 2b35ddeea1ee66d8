#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sigtime/model.hpp"
#include "sigtime/types.hpp"

namespace sigtime {

/// Reference to the causally preceding event on the same signal path.
struct ChainLink {
  std::string path;
  PortId port;
  std::uint64_t k = 0;

  bool operator==(const ChainLink&) const = default;
};

/// One occurrence at an interface: value, tag (physical timestamp) and,
/// when known, the link to its upstream cause. The logical timestamp is
/// computed, never stored.
struct Event {
  PortId signal;
  std::uint64_t k = 1;
  TimeNs tag_ns = 0;
  std::optional<double> value;
  std::optional<ChainLink> link;
};

/// Immutable recorded trace, events grouped per signal and ordered by
/// event index.
class Trace {
 public:
  Trace() = default;
  explicit Trace(std::vector<Event> events);

  const std::map<PortId, std::vector<Event>>& signals() const { return signals_; }

  const std::vector<Event>* events_of(const PortId& signal) const;
  const Event* find_event(const PortId& signal, std::uint64_t k) const;

  /// Path ids named by chain links, sorted and deduplicated.
  std::vector<std::string> referenced_paths() const;

  std::size_t event_count() const;

  /// All events flattened back out, ordered by (tag, signal, k).
  std::vector<Event> all_events() const;

 private:
  std::map<PortId, std::vector<Event>> signals_;
};

/// Structural trace invariants: per-signal indices consecutive from 1,
/// tags non-decreasing in k, links resolvable, causal tag order, no link
/// cycles.
std::vector<Diagnostic> validate_trace(const Trace& trace);

/// Lightweight copy of the identifying fields of one chain member.
struct EventRef {
  PortId port;
  std::uint64_t k = 0;
  TimeNs tag_ns = 0;
};

/// One event per interface of a signal path, causally linking a sampling
/// event to the terminal event.
struct CausalChain {
  std::string path_id;
  std::vector<EventRef> events;  // path order: sampling first

  const EventRef& sampling_event() const { return events.front(); }
  const EventRef& terminal_event() const { return events.back(); }
  std::uint64_t terminal_index() const { return events.back().k; }
};

/// Invariants of one extracted chain against its path (re-validation).
std::vector<Diagnostic> validate_chain(const CausalChain& chain,
                                       const SignalPath& path,
                                       const SystemModel& model);

struct SkippedTerminal {
  std::uint64_t k = 0;
  std::string reason;
};

struct ChainExtraction {
  std::vector<CausalChain> chains;  // ascending terminal index
  std::vector<SkippedTerminal> skipped;
};

/// One chain per terminal event with complete link ancestry back to the
/// path's sampling interface; terminals with broken ancestry land in the
/// skipped list. Throws Error{Malformed} on a chain-link cycle.
ChainExtraction extract_causal_chains(const Trace& trace, const SignalPath& path);

}  // namespace sigtime
