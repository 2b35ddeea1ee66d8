#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sigtime {

/// All tags, logical timestamps, delays, durations and band limits are
/// exact signed 64-bit nanosecond counts. Differences never overflow for
/// traces shorter than ~292 years.
using TimeNs = std::int64_t;

/// Sentinel for unbounded durations and open upper bounds. Compares
/// greater than every finite value under plain integer comparison.
inline constexpr TimeNs kUnboundedNs = INT64_MAX;

constexpr bool is_unbounded(TimeNs v) { return v == kUnboundedNs; }

enum class PortKind { Input, Output, Sampling, Actuation };

/// Sampling, input and actuation ports consume values (the sampling port
/// reads the physical environment); output ports produce them.
constexpr bool is_read_kind(PortKind k) { return k != PortKind::Output; }

const char* to_string(PortKind k);

/// Structural port address: component id plus port index.
struct PortId {
  std::string component;
  int port = 0;

  auto operator<=>(const PortId&) const = default;
};

inline std::string to_string(const PortId& id) {
  return id.component + ":" + std::to_string(id.port);
}

/// Inclusive interval over nanosecond values. An upper end of
/// kUnboundedNs means the interval is open above.
struct Bounds {
  TimeNs lower = 0;
  TimeNs upper = kUnboundedNs;

  bool contains(TimeNs v) const { return v >= lower && v <= upper; }
  bool well_ordered() const { return lower <= upper; }

  /// Both ends shifted by delta; an unbounded end stays unbounded.
  Bounds shifted(TimeNs delta) const {
    Bounds out;
    out.lower = lower + delta;
    out.upper = is_unbounded(upper) ? kUnboundedNs : upper + delta;
    return out;
  }

  bool operator==(const Bounds&) const = default;
};

enum class ErrorCode {
  Parse,             // malformed document
  Validation,        // invariant violation blocking an operation
  UnknownReference,  // dangling component/port/path/requirement reference
  Pairing,           // synchronicity pairing rule violated
  MissingData,       // e.g. no observed period for a read interface
  Malformed,         // malformed trace structure (link cycles, ...)
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

enum class Severity { Info, Warning, Error };

const char* to_string(Severity s);

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::Error) return true;
  return false;
}

}  // namespace sigtime
