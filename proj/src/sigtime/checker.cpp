#include "sigtime/checker.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

namespace sigtime {

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

Verdict make_verdict(std::vector<Violation> violations, std::size_t evaluated,
                     std::vector<std::string> notes) {
  Verdict v;
  v.violations = std::move(violations);
  v.evaluated_count = evaluated;
  v.notes = std::move(notes);
  if (!v.violations.empty())
    v.status = Status::Fail;
  else
    v.status = evaluated == 0 ? Status::Inconclusive : Status::Pass;
  return v;
}

Verdict combine_verdicts(const std::vector<Verdict>& verdicts) {
  Verdict out;
  bool any_pass = false, any_fail = false;
  for (const Verdict& v : verdicts) {
    out.evaluated_count += v.evaluated_count;
    out.violations.insert(out.violations.end(), v.violations.begin(), v.violations.end());
    out.notes.insert(out.notes.end(), v.notes.begin(), v.notes.end());
    any_pass |= v.status == Status::Pass;
    any_fail |= v.status == Status::Fail;
  }
  out.status = any_fail ? Status::Fail : (any_pass ? Status::Pass : Status::Inconclusive);
  return out;
}

namespace {

std::map<std::uint64_t, const CausalChain*> chains_by_terminal(
    const std::vector<CausalChain>& chains) {
  std::map<std::uint64_t, const CausalChain*> out;
  for (const CausalChain& c : chains) out[c.terminal_index()] = &c;
  return out;
}

/// Complete period map over the path's read interfaces, zero where the
/// trace gives no evidence.
struct PeriodEvidence {
  ObservedPeriods observed;
  std::map<PortId, TimeNs> complete;
};

PeriodEvidence gather_periods(const Trace& trace, const SignalPath& path) {
  PeriodEvidence out;
  out.observed = measure_logical_periods(trace, path);
  for (const PortId& port : path.interfaces) {
    auto it = out.observed.max_period.find(port);
    out.complete[port] = it == out.observed.max_period.end() ? 0 : it->second;
  }
  return out;
}

TimeNs declared_or_zero(const SystemModel& model, const SignalPath& path,
                        std::vector<std::string>& notes) {
  auto declared = model.sampling_band_limit_ns(path.sampling_interface());
  if (!declared) {
    notes.push_back("path '" + path.id + "': sampling interface " +
                    to_string(path.sampling_interface()) +
                    " declares no band limit, treated as 0");
    return 0;
  }
  return *declared;
}

/// Violations for every observed period entry at `port` exceeding
/// `limit`, attributed to the later event of the pair.
void period_violations(const std::string& id, const std::string& instance,
                       const ObservedPeriods& observed, const PortId& port,
                       TimeNs limit, std::vector<Violation>& out) {
  auto series = observed.series.find(port);
  if (series == observed.series.end()) return;
  for (const auto& [k, value] : series->second.values)
    if (value > limit) out.push_back({id, instance, k, value, Bounds{0, limit}});
}

Verdict check_data_age_direct(const Trace& trace, const SignalRequirement& req,
                              const SystemModel& model) {
  Bounds bounds = req.bounds.value();
  std::vector<Violation> violations;
  std::size_t evaluated = 0;
  for (const SignalPath* path : resolve_signal_paths(model, req.subject)) {
    for (const CausalChain& chain : extract_causal_chains(trace, *path).chains) {
      TimeNs age = data_age(chain, model);
      ++evaluated;
      if (!bounds.contains(age))
        violations.push_back({req.id, "data age on path '" + path->id + "'",
                              chain.terminal_index(), age, bounds});
    }
  }
  return make_verdict(std::move(violations), evaluated);
}

Verdict check_synchronicity_direct(const Trace& trace, const SignalRequirement& req,
                                   const SystemModel& model, TimeNs epsilon_ns) {
  Bounds bounds = req.bounds.value();
  std::vector<Violation> violations;
  std::size_t evaluated = 0;
  for (const SignalPath* pa : resolve_signal_paths(model, req.subject)) {
    for (const SignalPath* pb : resolve_signal_paths(model, *req.subject2)) {
      auto chains_a = extract_causal_chains(trace, *pa).chains;
      auto chains_b = extract_causal_chains(trace, *pb).chains;
      auto by_k_b = chains_by_terminal(chains_b);
      for (const CausalChain& a : chains_a) {
        auto it = by_k_b.find(a.terminal_index());
        if (it == by_k_b.end()) continue;
        const CausalChain& b = *it->second;
        if (std::llabs(a.terminal_event().tag_ns - b.terminal_event().tag_ns) >
            epsilon_ns)
          continue;  // not simultaneous, no pairing
        TimeNs sync = logical_timestamp(a, model) - logical_timestamp(b, model);
        ++evaluated;
        if (!bounds.contains(sync))
          violations.push_back({req.id,
                                "synchronicity of paths '" + pa->id + "','" + pb->id + "'",
                                a.terminal_index(), sync, bounds});
      }
    }
  }
  return make_verdict(std::move(violations), evaluated);
}

Verdict check_sampling_rate_direct(const Trace& trace, const SignalRequirement& req,
                                   const SystemModel& model) {
  Bounds bounds = req.bounds.value();
  std::vector<Violation> violations;
  std::size_t evaluated = 0;
  for (const SignalPath* path : resolve_signal_paths(model, req.subject)) {
    auto chains = extract_causal_chains(trace, *path).chains;
    auto by_k = chains_by_terminal(chains);
    for (const CausalChain& chain : chains) {
      auto prev = by_k.find(chain.terminal_index() - 1);
      if (prev == by_k.end()) continue;
      TimeNs rate =
          logical_timestamp(chain, model) - logical_timestamp(*prev->second, model);
      ++evaluated;
      if (!bounds.contains(rate))
        violations.push_back({req.id, "logical sampling rate on path '" + path->id + "'",
                              chain.terminal_index(), rate, bounds});
    }
  }
  return make_verdict(std::move(violations), evaluated);
}

Verdict check_band_limit_direct_for_path(
    const SignalRequirement& req, const SystemModel& model, const SignalPath& path,
    const std::map<PortId, TimeNs>& periods, const ObservedPeriods* observed,
    bool subject_has_evidence, std::vector<std::string> notes) {
  TimeNs required = req.bounds.value().lower;
  TimeNs declared = declared_or_zero(model, path, notes);

  std::vector<Violation> violations;
  if (!subject_has_evidence)
    return make_verdict({}, 0, std::move(notes));

  auto limits = band_limit_propagate(model, path, declared, periods);
  TimeNs at_subject = limits.at(path.subject_interface());
  if (at_subject > required) {
    // Witnesses: every term of the max-recurrence exceeding the bound.
    if (declared > required)
      violations.push_back({req.id, "declared band limit at " +
                                        to_string(path.sampling_interface()),
                            0, declared, Bounds{0, required}});
    for (const PortId& port : path.interfaces) {
      TimeNs cutoff = model.filter_cutoff_ns(port);
      if (cutoff > required)
        violations.push_back(
            {req.id, "filter cutoff at " + to_string(port), 0, cutoff, Bounds{0, required}});
      if (observed)
        period_violations(req.id, "observed period at " + to_string(port), *observed,
                          port, required, violations);
      else {
        auto it = periods.find(port);
        if (it != periods.end() && it->second > required)
          violations.push_back({req.id, "period at " + to_string(port), 0, it->second,
                                Bounds{0, required}});
      }
    }
    if (violations.empty())  // keep the verdict reproducible even if no term is singled out
      violations.push_back({req.id,
                            "band limit at " + to_string(path.subject_interface()), 0,
                            at_subject, Bounds{0, required}});
  }
  return make_verdict(std::move(violations), 1, std::move(notes));
}

Verdict check_no_aliasing_direct_for_path(
    const SignalRequirement& req, const SystemModel& model, const SignalPath& path,
    const std::map<PortId, TimeNs>& periods, const ObservedPeriods* observed,
    std::size_t pair_evidence, std::vector<std::string> notes) {
  TimeNs declared = declared_or_zero(model, path, notes);
  auto limits = band_limit_propagate(model, path, declared, periods);

  std::map<PortId, TimeNs> reader_periods = periods;
  if (observed) {
    // Only measured readers count as evidence.
    reader_periods.clear();
    for (const auto& [port, value] : observed->max_period) reader_periods[port] = value;
  }

  std::vector<Violation> violations;
  for (const AliasingViolation& v :
       detect_aliasing(model, path, limits, reader_periods)) {
    std::string instance = "aliasing pair (" + to_string(v.producer) + " -> " +
                           to_string(v.consumer) + ") on path '" + path.id + "'";
    if (observed) {
      period_violations(req.id, instance, *observed, v.consumer, v.band_limit_ns,
                        violations);
    } else {
      violations.push_back({req.id, instance, 0, v.period_ns, Bounds{0, v.band_limit_ns}});
    }
  }
  return make_verdict(std::move(violations), pair_evidence, std::move(notes));
}

std::size_t adjacent_reader_pairs_with_evidence(
    const SystemModel& model, const SignalPath& path,
    const std::map<PortId, TimeNs>& reader_periods) {
  std::size_t n = 0;
  for (std::size_t i = 0; i + 1 < path.interfaces.size(); ++i) {
    const Port* p = model.find_port(path.interfaces[i]);
    const Port* c = model.find_port(path.interfaces[i + 1]);
    if (p && c && p->kind == PortKind::Output && is_read_kind(c->kind) &&
        reader_periods.count(path.interfaces[i + 1]))
      ++n;
  }
  return n;
}

}  // namespace

Verdict check_requirement_direct(const Trace& trace, const SignalRequirement& req,
                                 const SystemModel& model, TimeNs epsilon_ns) {
  switch (req.kind) {
    case RequirementKind::DataAge:
      return check_data_age_direct(trace, req, model);
    case RequirementKind::Synchronicity:
      return check_synchronicity_direct(trace, req, model, epsilon_ns);
    case RequirementKind::SamplingRate:
      return check_sampling_rate_direct(trace, req, model);
    case RequirementKind::BandLimit: {
      std::vector<Verdict> per_path;
      for (const SignalPath* path : resolve_signal_paths(model, req.subject)) {
        PeriodEvidence ev = gather_periods(trace, *path);
        bool subject_measured =
            ev.observed.max_period.count(path->subject_interface()) > 0;
        per_path.push_back(check_band_limit_direct_for_path(
            req, model, *path, ev.complete, &ev.observed, subject_measured, {}));
      }
      return combine_verdicts(per_path);
    }
    case RequirementKind::NoAliasing: {
      std::vector<Verdict> per_path;
      for (const SignalPath* path : resolve_signal_paths(model, req.subject)) {
        PeriodEvidence ev = gather_periods(trace, *path);
        std::size_t pairs =
            adjacent_reader_pairs_with_evidence(model, *path, ev.observed.max_period);
        per_path.push_back(check_no_aliasing_direct_for_path(
            req, model, *path, ev.complete, &ev.observed, pairs, {}));
      }
      return combine_verdicts(per_path);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown requirement kind");
}

Verdict check_requirement_direct_with_periods(const SignalRequirement& req,
                                              const SystemModel& model,
                                              const std::map<PortId, TimeNs>& periods) {
  switch (req.kind) {
    case RequirementKind::BandLimit: {
      std::vector<Verdict> per_path;
      for (const SignalPath* path : resolve_signal_paths(model, req.subject))
        per_path.push_back(check_band_limit_direct_for_path(
            req, model, *path, periods, nullptr,
            periods.count(path->subject_interface()) > 0, {}));
      return combine_verdicts(per_path);
    }
    case RequirementKind::NoAliasing: {
      std::vector<Verdict> per_path;
      for (const SignalPath* path : resolve_signal_paths(model, req.subject)) {
        std::size_t pairs = adjacent_reader_pairs_with_evidence(model, *path, periods);
        per_path.push_back(check_no_aliasing_direct_for_path(req, model, *path, periods,
                                                             nullptr, pairs, {}));
      }
      return combine_verdicts(per_path);
    }
    default:
      throw Error(ErrorCode::InvalidArgument,
                  "period-driven direct checks cover band-limit and no-aliasing only");
  }
}

namespace {

const SignalPath& target_path(const TimingConstraint& c, const SystemModel& model,
                              std::size_t index = 0) {
  if (c.target.paths.size() <= index)
    throw Error(ErrorCode::UnknownReference,
                "constraint '" + c.id + "' names no target path");
  const SignalPath* path = model.find_path(c.target.paths[index]);
  if (!path)
    throw Error(ErrorCode::UnknownReference, "constraint '" + c.id +
                                                 "' targets unknown path '" +
                                                 c.target.paths[index] + "'");
  return *path;
}

Verdict check_latency_bound(const Trace& trace, const TimingConstraint& c,
                            const SystemModel& model) {
  const SignalPath& path = target_path(c, model);
  std::vector<Violation> violations;
  std::size_t evaluated = 0;
  for (const CausalChain& chain : extract_causal_chains(trace, path).chains) {
    TimeNs h = latency(chain);
    ++evaluated;
    if (!c.bounds.contains(h))
      violations.push_back({c.id, "latency on path '" + path.id + "'",
                            chain.terminal_index(), h, c.bounds});
  }
  return make_verdict(std::move(violations), evaluated);
}

Verdict check_relative_latency_bound(const Trace& trace, const TimingConstraint& c,
                                     const SystemModel& model, TimeNs epsilon_ns) {
  const SignalPath& minuend = target_path(c, model, 0);
  const SignalPath& subtrahend = target_path(c, model, 1);
  auto chains_m = extract_causal_chains(trace, minuend).chains;
  auto chains_s = extract_causal_chains(trace, subtrahend).chains;
  auto by_k_s = chains_by_terminal(chains_s);
  std::vector<Violation> violations;
  std::size_t evaluated = 0;
  for (const CausalChain& m : chains_m) {
    auto it = by_k_s.find(m.terminal_index());
    if (it == by_k_s.end()) continue;
    const CausalChain& s = *it->second;
    if (std::llabs(m.terminal_event().tag_ns - s.terminal_event().tag_ns) > epsilon_ns)
      continue;
    TimeNs diff = latency(m) - latency(s);
    ++evaluated;
    if (!c.bounds.contains(diff))
      violations.push_back({c.id,
                            "latency difference '" + minuend.id + "' - '" + subtrahend.id + "'",
                            m.terminal_index(), diff, c.bounds});
  }
  return make_verdict(std::move(violations), evaluated);
}

Verdict check_consecutive_latency_bound(const Trace& trace, const TimingConstraint& c,
                                        const SystemModel& model) {
  const SignalPath& path = target_path(c, model);
  auto chains = extract_causal_chains(trace, path).chains;
  auto by_k = chains_by_terminal(chains);
  std::vector<Violation> violations;
  std::size_t evaluated = 0;
  for (const CausalChain& chain : chains) {
    auto prev = by_k.find(chain.terminal_index() - 1);
    if (prev == by_k.end()) continue;
    TimeNs tag_distance =
        chain.terminal_event().tag_ns - prev->second->terminal_event().tag_ns;
    TimeNs latency_change = latency(chain) - latency(*prev->second);
    TimeNs value = tag_distance - latency_change;
    ++evaluated;
    if (!c.bounds.contains(value))
      violations.push_back({c.id, "rate via tags on path '" + path.id + "'",
                            chain.terminal_index(), value, c.bounds});
  }
  return make_verdict(std::move(violations), evaluated);
}

Verdict check_sampling_period_bound(const TimingConstraint& c, const SystemModel& model,
                                    const std::map<PortId, TimeNs>& periods,
                                    const ObservedPeriods* observed) {
  const SignalPath& path = target_path(c, model);
  if (!c.target.port)
    throw Error(ErrorCode::UnknownReference,
                "constraint '" + c.id + "' names no target interface");
  const PortId& port = *c.target.port;

  auto measured_it = periods.find(port);
  bool has_evidence =
      observed ? observed->max_period.count(port) > 0 : measured_it != periods.end();
  if (!has_evidence) return make_verdict({}, 0);
  TimeNs measured =
      observed ? observed->max_period.at(port) : measured_it->second;

  TimeNs upper = c.bounds.upper;
  if (c.target.producer) {
    // No-aliasing bound: the cap is the band limit of the feeding
    // stream, re-propagated with the observed periods (the serialized
    // bound is the declared-data floor).
    std::vector<std::string> notes;
    TimeNs declared = declared_or_zero(model, path, notes);
    auto limits = band_limit_propagate(model, path, declared, periods);
    upper = limits.at(*c.target.producer);
    std::size_t evaluated = observed && observed->series.count(port)
                                ? observed->series.at(port).values.size()
                                : 1;
    std::vector<Violation> violations;
    if (!Bounds{c.bounds.lower, upper}.contains(measured)) {
      std::string instance = "period at " + to_string(port) + " vs band limit at " +
                             to_string(*c.target.producer);
      if (measured > upper && observed)
        period_violations(c.id, instance, *observed, port, upper, violations);
      if (violations.empty())
        violations.push_back(
            {c.id, instance, 0, measured, Bounds{c.bounds.lower, upper}});
    }
    return make_verdict(std::move(violations), evaluated, std::move(notes));
  }

  std::size_t evaluated = observed && observed->series.count(port)
                              ? observed->series.at(port).values.size()
                              : 1;
  std::vector<Violation> violations;
  if (!Bounds{c.bounds.lower, upper}.contains(measured)) {
    std::string instance = "period at " + to_string(port);
    if (measured > upper && observed)
      period_violations(c.id, instance, *observed, port, upper, violations);
    if (violations.empty())
      violations.push_back({c.id, instance, 0, measured, Bounds{c.bounds.lower, upper}});
  }
  return make_verdict(std::move(violations), evaluated);
}

}  // namespace

Verdict check_constraint(const Trace& trace, const TimingConstraint& constraint,
                         const SystemModel& model, TimeNs epsilon_ns) {
  switch (constraint.kind) {
    case ConstraintKind::LatencyBound:
      return check_latency_bound(trace, constraint, model);
    case ConstraintKind::RelativeLatencyBound:
      return check_relative_latency_bound(trace, constraint, model, epsilon_ns);
    case ConstraintKind::ConsecutiveLatencyBound:
      return check_consecutive_latency_bound(trace, constraint, model);
    case ConstraintKind::SamplingPeriodBound: {
      const SignalPath& path = target_path(constraint, model);
      PeriodEvidence ev = gather_periods(trace, path);
      return check_sampling_period_bound(constraint, model, ev.complete, &ev.observed);
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown constraint kind");
}

Verdict check_constraint_with_periods(const TimingConstraint& constraint,
                                      const SystemModel& model,
                                      const std::map<PortId, TimeNs>& periods) {
  if (constraint.kind != ConstraintKind::SamplingPeriodBound)
    throw Error(ErrorCode::InvalidArgument,
                "period-driven checks cover sampling-period bounds only");
  return check_sampling_period_bound(constraint, model, periods, nullptr);
}

Agreement check_agreement(const Trace& trace, const SignalRequirement& req,
                          const TransformReport& report, const SystemModel& model,
                          TimeNs epsilon_ns) {
  Agreement out;
  out.requirement_id = req.id;
  out.direct = check_requirement_direct(trace, req, model, epsilon_ns);

  std::vector<Verdict> per_constraint;
  for (const TimingConstraint& c : report.constraints)
    if (c.provenance.requirement == req.id)
      per_constraint.push_back(check_constraint(trace, c, model, epsilon_ns));
  out.transformed = combine_verdicts(per_constraint);
  if (per_constraint.empty())
    out.transformed.notes.push_back("no transformed constraints for requirement '" +
                                    req.id + "'");

  bool exact = req.kind == RequirementKind::DataAge ||
               req.kind == RequirementKind::Synchronicity ||
               req.kind == RequirementKind::SamplingRate;
  if (exact)
    out.agree = out.direct.status == out.transformed.status;
  else
    out.agree = out.transformed.status != Status::Fail || out.direct.status == Status::Fail;
  return out;
}

Status CheckReport::overall() const {
  bool any_fail = false, any_inconclusive = false, any_pass = false;
  for (const CheckEntry& e : verdicts) {
    any_fail |= e.verdict.status == Status::Fail;
    any_inconclusive |= e.verdict.status == Status::Inconclusive;
    any_pass |= e.verdict.status == Status::Pass;
  }
  if (any_fail) return Status::Fail;
  if (any_inconclusive || !any_pass) return Status::Inconclusive;
  return Status::Pass;
}

CheckReport run_check(const Trace& trace,
                      const std::vector<SignalRequirement>& requirements,
                      const SystemModel& model, TimeNs epsilon_ns) {
  CheckReport report;
  TransformReport transformed = transform_all(requirements, model);
  report.diagnostics = transformed.diagnostics;

  std::set<std::string> seen;
  for (const SignalRequirement& req : requirements) {
    if (!seen.insert(req.id).second) continue;  // duplicate, already diagnosed
    try {
      Agreement agreement = check_agreement(trace, req, transformed, model, epsilon_ns);
      report.verdicts.push_back({req.id, "requirement", agreement.direct});
      for (const TimingConstraint& c : transformed.constraints) {
        if (c.provenance.requirement != req.id) continue;
        report.verdicts.push_back(
            {c.id, "constraint", check_constraint(trace, c, model, epsilon_ns)});
      }
      report.agreements.push_back(std::move(agreement));
    } catch (const Error& e) {
      report.diagnostics.push_back(
          {Severity::Error, "requirement '" + req.id + "': " + e.what()});
      Verdict v = make_verdict({}, 0, {e.what()});
      report.verdicts.push_back({req.id, "requirement", v});
    }
  }
  return report;
}

}  // namespace sigtime
