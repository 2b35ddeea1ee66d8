#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigtime/model.hpp"
#include "sigtime/requirements.hpp"
#include "sigtime/trace.hpp"
#include "sigtime/types.hpp"

namespace sigtime {

/// Portable seeded generator (splitmix64 mixing); identical sequences on
/// every platform, which keeps generated traces byte-reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [lo, hi], inclusive.
  TimeNs uniform(TimeNs lo, TimeNs hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<TimeNs>(next() %
                                    static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct PathGenConfig {
  std::string path;
  TimeNs period_ns = 10'000'000;
  TimeNs jitter_ns = 0;  // added to nominal sampling tags, must stay below the period
  Bounds hop_latency{0, 0};
  double drop_probability = 0.0;
  /// Copies the terminal tags of another configured path so the two
  /// produce simultaneous values (synchronicity pairing).
  std::optional<std::string> align_terminal_with;
};

struct GenSpec {
  /// Absent means the caller must supply one (the CLI draws and prints
  /// it); generation itself refuses to guess.
  std::optional<std::uint64_t> seed;
  TimeNs duration_ns = 0;
  std::vector<PathGenConfig> paths;
};

/// True per-chain values recorded while generating, the independent
/// ground truth for the measured metrics.
struct GroundTruthChain {
  std::string path;
  std::uint64_t k = 0;  // terminal event index
  TimeNs latency_ns = 0;
  TimeNs age_ns = 0;
  TimeNs logical_ns = 0;
};

struct GeneratedTrace {
  Trace trace;
  std::vector<GroundTruthChain> ground_truth;  // complete chains only
  std::size_t dropped = 0;                     // chains with a severed link
};

/// Periodic sampling with jitter, uniform per-hop latencies, constant
/// declared delays. A drop severs one chain link (the event stays, its
/// ancestry breaks). Deterministic for a given spec. Throws
/// Error{Validation|UnknownReference} on bad specs.
GeneratedTrace generate_trace(const SystemModel& model, const GenSpec& spec);

struct InjectionRecord {
  RequirementKind kind = RequirementKind::DataAge;
  std::string path;
  PortId interface;
  std::uint64_t k = 0;  // event index the violation lands on
};

struct InjectedTrace {
  Trace trace;
  InjectionRecord record;
};

/// Perturbs exactly one instance of the given requirement kind:
///   data age       - one terminal event is delayed by `magnitude`
///   synchronicity  - one chain's sampling event is moved earlier
///   sampling rate  - one whole chain suffix is shifted later (one gap)
///   band limit     - one terminal event is removed (one doubled period)
///   no aliasing    - one event at a resampling interface is removed
///                    together with its downstream sub-chain
/// Magnitude 0 returns the trace unchanged. Throws Error{InvalidArgument}
/// when the trace is too small to perturb.
InjectedTrace inject_violation(const Trace& trace, const SystemModel& model,
                               RequirementKind kind, TimeNs magnitude,
                               std::uint64_t seed);

}  // namespace sigtime
