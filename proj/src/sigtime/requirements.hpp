#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sigtime/model.hpp"
#include "sigtime/types.hpp"

namespace sigtime {

enum class RequirementKind { DataAge, Synchronicity, SamplingRate, BandLimit, NoAliasing };

const char* to_string(RequirementKind k);

/// Bounded constraint on one of the five signal properties.
struct SignalRequirement {
  std::string id;
  RequirementKind kind = RequirementKind::DataAge;
  PortId subject;
  /// Second subject, synchronicity only. `subjects: [a, b]` bounds the
  /// logical-timestamp difference t_a - t_b.
  std::optional<PortId> subject2;
  /// Absent for no-aliasing requirements.
  std::optional<Bounds> bounds;
};

enum class ConstraintKind {
  LatencyBound,             // latency of each chain of one path
  RelativeLatencyBound,     // latency difference of two paired chains
  ConsecutiveLatencyBound,  // tag distance minus latency difference, per consecutive chains
  SamplingPeriodBound,      // observed logical sampling rate at one interface
};

const char* to_string(ConstraintKind k);

struct ConstraintTarget {
  /// Governing path ids. One entry, except RelativeLatencyBound which
  /// carries [minuend path, subtrahend path].
  std::vector<std::string> paths;
  /// Period bounds: the constrained read interface.
  std::optional<PortId> port;
  /// No-aliasing period bounds: the producing interface whose band limit
  /// caps the reader's period.
  std::optional<PortId> producer;
};

struct Provenance {
  std::string requirement;
  int proposition = 0;
};

struct TimingConstraint {
  std::string id;  // stable handle for violation reports
  ConstraintKind kind = ConstraintKind::LatencyBound;
  ConstraintTarget target;
  Bounds bounds;
  Provenance provenance;
};

struct TransformReport {
  std::vector<TimingConstraint> constraints;
  std::vector<Diagnostic> diagnostics;
};

/// Bounded data age on each path of the subject becomes a latency bound
/// shifted down by the path's total delay. An upper bound below zero is
/// unsatisfiable and reported as a diagnostic.
TransformReport transform_data_age(const SignalRequirement& req, const SystemModel& model);

/// Bounded synchronicity of subjects (a, b) becomes a bound on the
/// latency difference h_b - h_a, shifted by the delay difference, for
/// every pair of governing paths.
TransformReport transform_synchronicity(const SignalRequirement& req,
                                        const SystemModel& model);

/// Bounded logical sampling rate becomes the same bound on the tag
/// distance minus the latency difference of consecutive chains.
TransformReport transform_sampling_rate(const SignalRequirement& req,
                                        const SystemModel& model);

/// A band-limit lower bound becomes a sampling-period bound at the
/// subject. A finite upper bound is only enforceable by a filter; paths
/// without a filter of cutoff <= upper get a diagnostic.
TransformReport transform_band_limit(const SignalRequirement& req,
                                     const SystemModel& model);

/// Per path: period bounds for the resampling boundaries (the sampling
/// interface, every interface marked resampling, and the subject), each
/// capped by the band limit of the stream feeding it. Serialized bounds
/// hold the static floor from declared data; checking re-propagates with
/// observed periods.
TransformReport transform_no_aliasing(const SignalRequirement& req,
                                      const SystemModel& model);

TransformReport transform_requirement(const SignalRequirement& req,
                                      const SystemModel& model);

/// Concatenation of the per-requirement reports in stable order;
/// per-requirement errors become diagnostics instead of aborting the
/// whole report.
TransformReport transform_all(const std::vector<SignalRequirement>& requirements,
                              const SystemModel& model);

}  // namespace sigtime
