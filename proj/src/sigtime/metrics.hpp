#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "sigtime/model.hpp"
#include "sigtime/trace.hpp"
#include "sigtime/types.hpp"

namespace sigtime {

enum class PropertyKind { Latency, EventDistance, DataAge, Synchronicity, SamplingRate };

const char* to_string(PropertyKind k);

/// Per-event values of one signal property, keyed by event index.
/// Indices without a defined value (k = 1 where a predecessor is
/// required) are simply absent.
struct PropertySeries {
  PropertyKind kind = PropertyKind::Latency;
  std::map<std::uint64_t, TimeNs> values;

  bool empty() const { return values.empty(); }
};

/// [min, max] over the defined entries. Throws Error{MissingData} on an
/// empty series.
Bounds summarize(const PropertySeries& series);

/// Logical timestamp of the chain's terminal event: the sampling tag
/// shifted back by the path's accumulated algorithmic delay.
TimeNs logical_timestamp(const CausalChain& chain, const SystemModel& model);

/// Tag difference between the terminal and sampling events of a chain;
/// non-negative by the chain tag-ordering invariant.
TimeNs latency(const CausalChain& chain);

/// Tag distance between consecutive events of one signal; entry k covers
/// the step from k-1 to k, so k = 1 is omitted.
PropertySeries event_distance(std::span<const Event> signal_events);

/// Terminal tag minus logical timestamp; equals latency plus the path's
/// total delay.
TimeNs data_age(const CausalChain& chain, const SystemModel& model);

/// Difference of the two chains' logical timestamps for values produced
/// simultaneously. The chains pair only when their terminal events carry
/// the same index and tags equal within epsilon; otherwise throws
/// Error{Pairing}.
TimeNs synchronicity(const CausalChain& chain_a, const CausalChain& chain_b,
                     const SystemModel& model, TimeNs epsilon_ns = 0);

/// Logical-timestamp distance between consecutive chains of one path.
/// Chains must be ordered by terminal index and consecutive; throws
/// Error{InvalidArgument} otherwise.
PropertySeries sampling_rate(std::span<const CausalChain> chains,
                             const SystemModel& model);

/// Forward pass of the band-limit recurrence along a path: the limit
/// starts from the declared content limit at the sampling port and is
/// maxed with every observed period and declared filter cutoff it
/// passes. Keys of `read_periods` are interfaces: entries for read
/// interfaces (sampling/input/actuation) are required (missing one
/// throws Error{MissingData}); entries for outputs are optional and
/// default to the producing read's period. Returns the propagated limit
/// at every interface.
std::map<PortId, TimeNs> band_limit_propagate(
    const SystemModel& model, const SignalPath& path, TimeNs sampling_band_limit_ns,
    const std::map<PortId, TimeNs>& read_periods);

struct AliasingViolation {
  PortId producer;
  PortId consumer;
  TimeNs band_limit_ns = 0;
  TimeNs period_ns = 0;
};

/// Every adjacent producer/reader pair on the path whose reader period
/// exceeds the producer's band limit. Pairs whose reader has no entry in
/// `read_periods` are skipped (no evidence).
std::vector<AliasingViolation> detect_aliasing(
    const SystemModel& model, const SignalPath& path,
    const std::map<PortId, TimeNs>& band_limits,
    const std::map<PortId, TimeNs>& read_periods);

/// Observed logical sampling rates at one interface of a path: per-event
/// series plus the maximum (the worst case used for aliasing checks).
struct ObservedPeriods {
  /// Per interface: Δt series keyed by the later event's local index.
  std::map<PortId, PropertySeries> series;
  /// Per interface: maximum observed logical rate, present only where at
  /// least one consecutive pair was measurable.
  std::map<PortId, TimeNs> max_period;
};

/// Measures the logical sampling rate at every interface of the path
/// from the trace. An event's logical timestamp is resolved by walking
/// its link ancestry back to the path's sampling interface; events with
/// broken ancestry contribute nothing.
ObservedPeriods measure_logical_periods(const Trace& trace, const SignalPath& path);

struct MeasuredSeries {
  PropertyKind kind = PropertyKind::Latency;
  PortId signal;
  /// Governing path id(s); empty for the path-independent tag distance.
  std::vector<std::string> paths;
  PropertySeries series;
};

struct MeasureReport {
  std::vector<MeasuredSeries> series;
  std::vector<std::string> notes;
};

/// All measurable properties of one subject interface: latency, tag
/// distance, data age and logical sampling rate per governing path, plus
/// synchronicity against `pair_subject` when given.
MeasureReport measure_subject(const Trace& trace, const SystemModel& model,
                              const PortId& subject,
                              const std::optional<PortId>& pair_subject,
                              TimeNs epsilon_ns = 0);

}  // namespace sigtime
