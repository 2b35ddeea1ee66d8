#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sigtime/metrics.hpp"
#include "sigtime/model.hpp"
#include "sigtime/requirements.hpp"
#include "sigtime/trace.hpp"
#include "sigtime/types.hpp"

namespace sigtime {

enum class Status { Pass, Fail, Inconclusive };

const char* to_string(Status s);

/// One bound violation, reproducible from the raw trace: the measured
/// value at the named instance falls outside the recorded bound.
struct Violation {
  std::string id;        // requirement or constraint id
  std::string instance;  // human-readable locator (interface, pair, ...)
  std::uint64_t k = 0;   // event index the violation is attributed to
  TimeNs measured_ns = 0;
  Bounds bound;
};

struct Verdict {
  Status status = Status::Inconclusive;
  std::vector<Violation> violations;
  std::size_t evaluated_count = 0;
  std::vector<std::string> notes;
};

/// FAIL iff violations non-empty, INCONCLUSIVE iff nothing was evaluable.
Verdict make_verdict(std::vector<Violation> violations, std::size_t evaluated,
                     std::vector<std::string> notes = {});

/// Combined verdict over several constraints: any FAIL wins, else any
/// PASS, else INCONCLUSIVE.
Verdict combine_verdicts(const std::vector<Verdict>& verdicts);

/// Evaluates a requirement by computing the underlying signal property
/// per event (logical timestamps for age/synchronicity/rate, band-limit
/// propagation plus aliasing detection otherwise) and testing the bounds
/// inclusively.
Verdict check_requirement_direct(const Trace& trace, const SignalRequirement& req,
                                 const SystemModel& model, TimeNs epsilon_ns = 0);

/// Evaluates one transformed timing constraint against the trace using
/// tags and latencies only.
Verdict check_constraint(const Trace& trace, const TimingConstraint& constraint,
                         const SystemModel& model, TimeNs epsilon_ns = 0);

/// Design-time variants driven by a per-interface period map instead of
/// a trace. Defined for period-based requirement kinds and constraints.
Verdict check_requirement_direct_with_periods(const SignalRequirement& req,
                                              const SystemModel& model,
                                              const std::map<PortId, TimeNs>& periods);
Verdict check_constraint_with_periods(const TimingConstraint& constraint,
                                      const SystemModel& model,
                                      const std::map<PortId, TimeNs>& periods);

struct Agreement {
  std::string requirement_id;
  Verdict direct;
  Verdict transformed;
  bool agree = false;
};

/// Runs both routes for one requirement against the same trace. For
/// age/synchronicity/rate requirements agreement means equal status; for
/// band-limit/no-aliasing it means the transformed failure, if any, is
/// confirmed by the direct route. Throws Error{InvalidArgument} when the
/// report carries no entry for the requirement.
Agreement check_agreement(const Trace& trace, const SignalRequirement& req,
                          const TransformReport& report, const SystemModel& model,
                          TimeNs epsilon_ns = 0);

struct CheckEntry {
  std::string id;
  std::string source;  // "requirement" or "constraint"
  Verdict verdict;
};

struct CheckReport {
  std::vector<CheckEntry> verdicts;
  std::vector<Agreement> agreements;
  std::vector<Diagnostic> diagnostics;

  /// FAIL beats INCONCLUSIVE beats PASS; an empty report is
  /// inconclusive.
  Status overall() const;
};

/// Full pipeline for one trace: transforms every requirement, checks the
/// direct route, every derived constraint, and the per-requirement
/// agreement. Requirement-level errors become diagnostics, never aborts.
CheckReport run_check(const Trace& trace,
                      const std::vector<SignalRequirement>& requirements,
                      const SystemModel& model, TimeNs epsilon_ns = 0);

}  // namespace sigtime
