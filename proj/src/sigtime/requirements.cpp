#include "sigtime/requirements.hpp"

#include <algorithm>
#include <set>

#include "sigtime/metrics.hpp"

namespace sigtime {

const char* to_string(RequirementKind k) {
  switch (k) {
    case RequirementKind::DataAge: return "data_age";
    case RequirementKind::Synchronicity: return "synchronicity";
    case RequirementKind::SamplingRate: return "sampling_rate";
    case RequirementKind::BandLimit: return "band_limit";
    case RequirementKind::NoAliasing: return "no_aliasing";
  }
  return "?";
}

const char* to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::LatencyBound: return "latency_bound";
    case ConstraintKind::RelativeLatencyBound: return "relative_latency_bound";
    case ConstraintKind::ConsecutiveLatencyBound: return "consecutive_latency_bound";
    case ConstraintKind::SamplingPeriodBound: return "sampling_period_bound";
  }
  return "?";
}

namespace {

Bounds require_bounds(const SignalRequirement& req) {
  if (!req.bounds)
    throw Error(ErrorCode::Validation,
                "requirement '" + req.id + "' carries no bounds");
  if (!req.bounds->well_ordered())
    throw Error(ErrorCode::Validation,
                "requirement '" + req.id + "': lower bound exceeds upper bound");
  return *req.bounds;
}

std::vector<const SignalPath*> paths_for(const SignalRequirement& req,
                                         const PortId& subject,
                                         const SystemModel& model) {
  auto paths = resolve_signal_paths(model, subject);
  if (paths.empty())
    throw Error(ErrorCode::UnknownReference,
                "requirement '" + req.id + "': no signal path ends at " +
                    to_string(subject));
  return paths;
}

}  // namespace

TransformReport transform_data_age(const SignalRequirement& req,
                                   const SystemModel& model) {
  TransformReport report;
  Bounds age = require_bounds(req);
  for (const SignalPath* path : paths_for(req, req.subject, model)) {
    TimeNs delay = path->total_delay_ns();
    TimingConstraint c;
    c.id = req.id + "/" + path->id;
    c.kind = ConstraintKind::LatencyBound;
    c.target.paths = {path->id};
    c.bounds = age.shifted(-delay);
    c.provenance = {req.id, 1};
    if (!is_unbounded(c.bounds.upper) && c.bounds.upper < 0)
      report.diagnostics.push_back(
          {Severity::Warning, "constraint '" + c.id +
                                  "' is unsatisfiable: derived latency upper bound " +
                                  std::to_string(c.bounds.upper) +
                                  " ns is negative (path delay exceeds the allowed age)"});
    report.constraints.push_back(std::move(c));
  }
  return report;
}

TransformReport transform_synchronicity(const SignalRequirement& req,
                                        const SystemModel& model) {
  TransformReport report;
  Bounds sync = require_bounds(req);
  if (!req.subject2)
    throw Error(ErrorCode::Validation,
                "requirement '" + req.id + "': synchronicity needs two subjects");
  auto paths_a = paths_for(req, req.subject, model);
  auto paths_b = paths_for(req, *req.subject2, model);
  for (const SignalPath* pa : paths_a) {
    for (const SignalPath* pb : paths_b) {
      // Bounds on t_a - t_b translate, under the equal-tag pairing rule,
      // into bounds on h_b - h_a shifted by the delay difference.
      TimeNs delay_diff = pb->total_delay_ns() - pa->total_delay_ns();
      TimingConstraint c;
      c.id = req.id + "/" + pb->id + "-" + pa->id;
      c.kind = ConstraintKind::RelativeLatencyBound;
      c.target.paths = {pb->id, pa->id};  // minuend, subtrahend
      c.bounds = sync.shifted(-delay_diff);
      c.provenance = {req.id, 2};
      report.constraints.push_back(std::move(c));
    }
  }
  return report;
}

TransformReport transform_sampling_rate(const SignalRequirement& req,
                                        const SystemModel& model) {
  TransformReport report;
  Bounds rate = require_bounds(req);
  for (const SignalPath* path : paths_for(req, req.subject, model)) {
    TimingConstraint c;
    c.id = req.id + "/" + path->id;
    c.kind = ConstraintKind::ConsecutiveLatencyBound;
    c.target.paths = {path->id};
    c.bounds = rate;
    c.provenance = {req.id, 3};
    report.constraints.push_back(std::move(c));
  }
  return report;
}

TransformReport transform_band_limit(const SignalRequirement& req,
                                     const SystemModel& model) {
  TransformReport report;
  Bounds limit = require_bounds(req);
  if (limit.lower < 0)
    throw Error(ErrorCode::Validation,
                "requirement '" + req.id + "': band limits are non-negative durations");
  for (const SignalPath* path : paths_for(req, req.subject, model)) {
    TimingConstraint c;
    c.id = req.id + "/" + path->id;
    c.kind = ConstraintKind::SamplingPeriodBound;
    c.target.paths = {path->id};
    c.target.port = req.subject;
    c.bounds = Bounds{0, limit.lower};  // sample at least as fast as the finest required content
    c.provenance = {req.id, 4};
    report.constraints.push_back(std::move(c));

    if (!is_unbounded(limit.upper)) {
      bool has_filter = false;
      for (const PortId& port : path->interfaces) {
        const Port* decl = model.find_port(port);
        if (!decl || decl->kind != PortKind::Output) continue;
        const Component* comp = model.find_component(port.component);
        if (comp && comp->output_filters.count(port.port) &&
            model.filter_cutoff_ns(port) <= limit.upper) {
          has_filter = true;
          break;
        }
      }
      if (!has_filter)
        report.diagnostics.push_back(
            {Severity::Warning, "requirement '" + req.id + "', path '" + path->id +
                                    "': upper band limit cannot be enforced, no filter "
                                    "with cutoff <= " +
                                    std::to_string(limit.upper) + " ns in the path"});
    }
  }
  return report;
}

TransformReport transform_no_aliasing(const SignalRequirement& req,
                                      const SystemModel& model) {
  TransformReport report;
  if (req.bounds)
    report.diagnostics.push_back(
        {Severity::Warning, "requirement '" + req.id + "': no-aliasing carries no bounds, ignored"});
  for (const SignalPath* path : paths_for(req, req.subject, model)) {
    auto declared = model.sampling_band_limit_ns(path->sampling_interface());
    if (!declared)
      throw Error(ErrorCode::MissingData,
                  "requirement '" + req.id + "': sampling interface " +
                      to_string(path->sampling_interface()) + " of path '" + path->id +
                      "' declares no band limit");

    // Static floor of the band limit at each interface: declared filter
    // cutoffs and the declared content limit only (all periods zero).
    std::map<PortId, TimeNs> zero_periods;
    for (const PortId& port : path->interfaces) zero_periods[port] = 0;
    auto static_limits = band_limit_propagate(model, *path, *declared, zero_periods);

    // Resampling boundaries: the sampling interface, every read marked
    // resampling, and the subject itself. Only reads re-discretize.
    std::vector<std::size_t> boundary;
    for (std::size_t i = 0; i < path->interfaces.size(); ++i) {
      const Port* decl = model.find_port(path->interfaces[i]);
      bool member = i == 0 || i + 1 == path->interfaces.size() ||
                    (decl && decl->resampling && is_read_kind(decl->kind));
      if (member) boundary.push_back(i);
    }

    for (std::size_t b = 1; b < boundary.size(); ++b) {
      std::size_t pos = boundary[b];
      const PortId& consumer = path->interfaces[pos];
      const PortId& producer = path->interfaces[pos - 1];
      TimingConstraint c;
      c.id = req.id + "/" + path->id + "/" + to_string(consumer);
      c.kind = ConstraintKind::SamplingPeriodBound;
      c.target.paths = {path->id};
      c.target.port = consumer;
      c.target.producer = producer;
      c.bounds = Bounds{0, static_limits.at(producer)};
      c.provenance = {req.id, 5};
      report.constraints.push_back(std::move(c));
    }
  }
  return report;
}

TransformReport transform_requirement(const SignalRequirement& req,
                                      const SystemModel& model) {
  switch (req.kind) {
    case RequirementKind::DataAge: return transform_data_age(req, model);
    case RequirementKind::Synchronicity: return transform_synchronicity(req, model);
    case RequirementKind::SamplingRate: return transform_sampling_rate(req, model);
    case RequirementKind::BandLimit: return transform_band_limit(req, model);
    case RequirementKind::NoAliasing: return transform_no_aliasing(req, model);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown requirement kind");
}

TransformReport transform_all(const std::vector<SignalRequirement>& requirements,
                              const SystemModel& model) {
  TransformReport report;
  std::set<std::string> ids;
  for (const SignalRequirement& req : requirements) {
    if (!ids.insert(req.id).second) {
      report.diagnostics.push_back(
          {Severity::Error, "duplicate requirement id '" + req.id + "'"});
      continue;
    }
    try {
      TransformReport one = transform_requirement(req, model);
      for (auto& c : one.constraints) report.constraints.push_back(std::move(c));
      for (auto& d : one.diagnostics) report.diagnostics.push_back(std::move(d));
    } catch (const Error& e) {
      report.diagnostics.push_back({Severity::Error, e.what()});
    }
  }
  return report;
}

}  // namespace sigtime
