#include "sigtime/metrics.hpp"

#include <algorithm>
#include <cstdlib>

namespace sigtime {

const char* to_string(PropertyKind k) {
  switch (k) {
    case PropertyKind::Latency: return "latency";
    case PropertyKind::EventDistance: return "event_distance";
    case PropertyKind::DataAge: return "data_age";
    case PropertyKind::Synchronicity: return "synchronicity";
    case PropertyKind::SamplingRate: return "sampling_rate";
  }
  return "?";
}

Bounds summarize(const PropertySeries& series) {
  if (series.values.empty())
    throw Error(ErrorCode::MissingData, "cannot summarize an empty series");
  Bounds b{INT64_MAX, INT64_MIN};
  for (const auto& [k, v] : series.values) {
    (void)k;
    b.lower = std::min(b.lower, v);
    b.upper = std::max(b.upper, v);
  }
  return b;
}

namespace {

const SignalPath& path_of(const CausalChain& chain, const SystemModel& model) {
  const SignalPath* path = model.find_path(chain.path_id);
  if (!path)
    throw Error(ErrorCode::UnknownReference,
                "chain references unknown path '" + chain.path_id + "'");
  return *path;
}

}  // namespace

TimeNs logical_timestamp(const CausalChain& chain, const SystemModel& model) {
  return chain.sampling_event().tag_ns - path_of(chain, model).total_delay_ns();
}

TimeNs latency(const CausalChain& chain) {
  return chain.terminal_event().tag_ns - chain.sampling_event().tag_ns;
}

PropertySeries event_distance(std::span<const Event> signal_events) {
  PropertySeries series{PropertyKind::EventDistance, {}};
  for (std::size_t i = 1; i < signal_events.size(); ++i)
    series.values[signal_events[i].k] =
        signal_events[i].tag_ns - signal_events[i - 1].tag_ns;
  return series;
}

TimeNs data_age(const CausalChain& chain, const SystemModel& model) {
  return chain.terminal_event().tag_ns - logical_timestamp(chain, model);
}

TimeNs synchronicity(const CausalChain& chain_a, const CausalChain& chain_b,
                     const SystemModel& model, TimeNs epsilon_ns) {
  const EventRef& ta = chain_a.terminal_event();
  const EventRef& tb = chain_b.terminal_event();
  if (ta.k != tb.k)
    throw Error(ErrorCode::Pairing,
                "synchronicity pairing requires equal terminal indices (" +
                    std::to_string(ta.k) + " vs " + std::to_string(tb.k) + ")");
  if (std::llabs(ta.tag_ns - tb.tag_ns) > epsilon_ns)
    throw Error(ErrorCode::Pairing,
                "terminal tags differ by " + std::to_string(ta.tag_ns - tb.tag_ns) +
                    " ns, more than the pairing tolerance " +
                    std::to_string(epsilon_ns) + " ns");
  return logical_timestamp(chain_a, model) - logical_timestamp(chain_b, model);
}

PropertySeries sampling_rate(std::span<const CausalChain> chains,
                             const SystemModel& model) {
  PropertySeries series{PropertyKind::SamplingRate, {}};
  for (std::size_t i = 1; i < chains.size(); ++i) {
    if (chains[i].path_id != chains[i - 1].path_id)
      throw Error(ErrorCode::InvalidArgument,
                  "sampling rate needs chains from a single path");
    if (chains[i].terminal_index() != chains[i - 1].terminal_index() + 1)
      throw Error(ErrorCode::InvalidArgument,
                  "sampling rate needs consecutive terminal indices, got " +
                      std::to_string(chains[i - 1].terminal_index()) + " then " +
                      std::to_string(chains[i].terminal_index()));
    series.values[chains[i].terminal_index()] =
        logical_timestamp(chains[i], model) - logical_timestamp(chains[i - 1], model);
  }
  return series;
}

std::map<PortId, TimeNs> band_limit_propagate(
    const SystemModel& model, const SignalPath& path, TimeNs sampling_band_limit_ns,
    const std::map<PortId, TimeNs>& read_periods) {
  std::map<PortId, TimeNs> limits;
  TimeNs limit = sampling_band_limit_ns;
  TimeNs last_read_period = 0;

  auto period_of = [&read_periods](const PortId& port) {
    auto it = read_periods.find(port);
    if (it == read_periods.end())
      throw Error(ErrorCode::MissingData,
                  "no observed period for read interface " + to_string(port));
    return it->second;
  };

  for (std::size_t i = 0; i < path.interfaces.size(); ++i) {
    const PortId& port = path.interfaces[i];
    const Port* decl = model.find_port(port);
    PortKind kind = decl ? decl->kind : PortKind::Input;
    if (i == 0 || is_read_kind(kind)) {
      // Reads bound the limit by their own sampling period; the path's
      // first interface reads the physical environment.
      last_read_period = period_of(port);
      limit = std::max(limit, last_read_period);
    } else {
      // The produced stream runs at its own observed rate (the producing
      // read's period when the output publishes every value) and is
      // additionally bounded by any declared filter cutoff.
      auto own = read_periods.find(port);
      TimeNs output_period =
          own == read_periods.end() ? last_read_period
                                    : std::max(own->second, last_read_period);
      limit = std::max({limit, model.filter_cutoff_ns(port), output_period});
    }
    limits[port] = limit;
  }
  return limits;
}

std::vector<AliasingViolation> detect_aliasing(
    const SystemModel& model, const SignalPath& path,
    const std::map<PortId, TimeNs>& band_limits,
    const std::map<PortId, TimeNs>& read_periods) {
  std::vector<AliasingViolation> violations;
  for (std::size_t i = 0; i + 1 < path.interfaces.size(); ++i) {
    const PortId& producer = path.interfaces[i];
    const PortId& consumer = path.interfaces[i + 1];
    const Port* pd = model.find_port(producer);
    const Port* cd = model.find_port(consumer);
    if (!pd || !cd || pd->kind != PortKind::Output || !is_read_kind(cd->kind)) continue;
    auto period = read_periods.find(consumer);
    if (period == read_periods.end()) continue;  // no evidence for this reader
    auto limit = band_limits.find(producer);
    if (limit == band_limits.end())
      throw Error(ErrorCode::MissingData,
                  "no band limit for producer " + to_string(producer));
    if (!(limit->second >= period->second))
      violations.push_back({producer, consumer, limit->second, period->second});
  }
  return violations;
}

MeasureReport measure_subject(const Trace& trace, const SystemModel& model,
                              const PortId& subject,
                              const std::optional<PortId>& pair_subject,
                              TimeNs epsilon_ns) {
  if (!model.find_port(subject))
    throw Error(ErrorCode::UnknownReference, "unknown port " + to_string(subject));
  MeasureReport report;

  if (const std::vector<Event>* events = trace.events_of(subject)) {
    MeasuredSeries dist{PropertyKind::EventDistance, subject, {}, event_distance(*events)};
    report.series.push_back(std::move(dist));
  } else {
    report.notes.push_back("no events recorded at " + to_string(subject));
  }

  auto chains_of = [&](const SignalPath& path) {
    ChainExtraction ex = extract_causal_chains(trace, path);
    if (!ex.skipped.empty())
      report.notes.push_back("path '" + path.id + "': " + std::to_string(ex.skipped.size()) +
                             " terminal event(s) without complete ancestry skipped");
    return ex.chains;
  };

  std::vector<const SignalPath*> paths = resolve_signal_paths(model, subject);
  for (const SignalPath* path : paths) {
    auto chains = chains_of(*path);
    MeasuredSeries lat{PropertyKind::Latency, subject, {path->id}, {PropertyKind::Latency, {}}};
    MeasuredSeries age{PropertyKind::DataAge, subject, {path->id}, {PropertyKind::DataAge, {}}};
    MeasuredSeries rate{PropertyKind::SamplingRate, subject, {path->id},
                        {PropertyKind::SamplingRate, {}}};
    std::map<std::uint64_t, TimeNs> logical;
    for (const CausalChain& chain : chains) {
      lat.series.values[chain.terminal_index()] = latency(chain);
      age.series.values[chain.terminal_index()] = data_age(chain, model);
      logical[chain.terminal_index()] = logical_timestamp(chain, model);
    }
    for (const auto& [k, t] : logical) {
      auto prev = logical.find(k - 1);
      if (prev != logical.end()) rate.series.values[k] = t - prev->second;
    }
    report.series.push_back(std::move(lat));
    report.series.push_back(std::move(age));
    report.series.push_back(std::move(rate));
  }

  if (pair_subject) {
    for (const SignalPath* pa : paths) {
      for (const SignalPath* pb : resolve_signal_paths(model, *pair_subject)) {
        auto chains_a = chains_of(*pa);
        auto chains_b = chains_of(*pb);
        std::map<std::uint64_t, const CausalChain*> by_k;
        for (const CausalChain& b : chains_b) by_k[b.terminal_index()] = &b;
        MeasuredSeries sync{PropertyKind::Synchronicity, subject, {pa->id, pb->id},
                            {PropertyKind::Synchronicity, {}}};
        for (const CausalChain& a : chains_a) {
          auto it = by_k.find(a.terminal_index());
          if (it == by_k.end()) continue;
          if (std::llabs(a.terminal_event().tag_ns - it->second->terminal_event().tag_ns) >
              epsilon_ns)
            continue;
          sync.series.values[a.terminal_index()] =
              logical_timestamp(a, model) - logical_timestamp(*it->second, model);
        }
        report.series.push_back(std::move(sync));
      }
    }
  }
  return report;
}

ObservedPeriods measure_logical_periods(const Trace& trace, const SignalPath& path) {
  ObservedPeriods out;
  for (std::size_t pos = 0; pos < path.interfaces.size(); ++pos) {
    const PortId& port = path.interfaces[pos];
    const std::vector<Event>* events = trace.events_of(port);
    if (!events) continue;

    TimeNs prefix_delay = path.prefix_delay_ns(pos);

    // Logical timestamp per local event index, where ancestry resolves.
    std::map<std::uint64_t, TimeNs> logical;
    for (const Event& e : *events) {
      const Event* cur = &e;
      bool ok = true;
      for (std::size_t i = pos; i-- > 0;) {
        if (!cur->link || cur->link->path != path.id ||
            cur->link->port != path.interfaces[i]) {
          ok = false;
          break;
        }
        cur = trace.find_event(cur->link->port, cur->link->k);
        if (!cur) {
          ok = false;
          break;
        }
      }
      if (ok) logical[e.k] = cur->tag_ns - prefix_delay;
    }

    PropertySeries series{PropertyKind::SamplingRate, {}};
    for (auto it = logical.begin(); it != logical.end(); ++it) {
      auto prev = logical.find(it->first - 1);
      if (prev != logical.end())
        series.values[it->first] = it->second - prev->second;
    }
    if (!series.values.empty()) {
      out.max_period[port] = summarize(series).upper;
      out.series[port] = std::move(series);
    }
  }
  return out;
}

}  // namespace sigtime
