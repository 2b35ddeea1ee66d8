// Acceptance suite: one line per criterion, non-zero exit on any failure.
// Runs against the same library the tool ships; expected values come from
// independent routes (ground-truth sidecars, tag arithmetic, iterated
// fixed points) rather than the code paths under test.

#include <chrono>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "sigtime/checker.hpp"
#include "sigtime/json_io.hpp"
#include "sigtime/metrics.hpp"
#include "sigtime/requirements.hpp"
#include "sigtime/tracegen.hpp"
#include "test_support.hpp"

using namespace sigtime;
using namespace sigtime::testing;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << name
            << " — " << detail << "\n";
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SignalRequirement make_req(const char* id, RequirementKind kind, PortId subject,
                           std::optional<Bounds> bounds = {},
                           std::optional<PortId> subject2 = {}) {
  SignalRequirement r;
  r.id = id;
  r.kind = kind;
  r.subject = std::move(subject);
  r.subject2 = std::move(subject2);
  r.bounds = bounds;
  return r;
}

// ---- criterion 1: exact metric identities over generated chains -------

void criterion_1() {
  auto start = std::chrono::steady_clock::now();
  SplitMix64 rng(0xC1);
  std::size_t chains_checked = 0, rate_pairs = 0, failures = 0;

  for (int round = 0; round < 250; ++round) {
    Scenario s = random_scenario(rng, round % 3 == 0);
    GeneratedTrace gen = generate_trace(s.model, s.spec);
    const SignalPath& path = *s.model.find_path("p");
    TimeNs delay = path.total_delay_ns();

    auto chains = extract_causal_chains(gen.trace, path).chains;
    std::map<std::uint64_t, const CausalChain*> by_k;
    for (const CausalChain& chain : chains) {
      // age = latency + accumulated delay, exactly.
      if (data_age(chain, s.model) != latency(chain) + delay) ++failures;
      ++chains_checked;
      by_k[chain.terminal_index()] = &chain;
    }
    for (const CausalChain& chain : chains) {
      auto prev = by_k.find(chain.terminal_index() - 1);
      if (prev == by_k.end()) continue;
      // logical rate = tag distance minus latency change, exactly.
      TimeNs direct =
          logical_timestamp(chain, s.model) - logical_timestamp(*prev->second, s.model);
      TimeNs via_tags = (chain.terminal_event().tag_ns -
                         prev->second->terminal_event().tag_ns) -
                        (latency(chain) - latency(*prev->second));
      if (direct != via_tags) ++failures;
      ++rate_pairs;
    }
  }

  double elapsed = seconds_since(start);
  report(1, "metric identities",
         failures == 0 && chains_checked >= 1000 && rate_pairs >= 500 && elapsed < 10.0,
         std::to_string(chains_checked) + " chains, " + std::to_string(rate_pairs) +
             " rate pairs, " + std::to_string(failures) + " failures, " +
             std::to_string(elapsed) + " s");
}

// ---- criterion 2: transformation soundness for the exact kinds --------

void criterion_2() {
  auto start = std::chrono::steady_clock::now();
  SplitMix64 rng(0xC2);
  std::size_t disagreements = 0, fails_seen = 0, passes_seen = 0;
  const int per_kind = 1000;

  auto tally = [&](const Agreement& a) {
    if (!a.agree) ++disagreements;
    if (a.direct.status == Status::Fail) ++fails_seen;
    if (a.direct.status == Status::Pass) ++passes_seen;
  };

  for (int i = 0; i < per_kind; ++i) {
    Scenario s = random_scenario(rng, i % 4 == 0);
    GeneratedTrace gen = generate_trace(s.model, s.spec);
    PortId subject = s.model.find_path("p")->subject_interface();

    TimeNs lo = rng.uniform(0, ms(30));
    SignalRequirement age = make_req("age", RequirementKind::DataAge, subject,
                                     Bounds{lo, lo + rng.uniform(0, ms(30))});
    tally(check_agreement(gen.trace, age, transform_requirement(age, s.model), s.model));

    TimeNs rlo = rng.uniform(0, ms(80));
    SignalRequirement rate = make_req("rate", RequirementKind::SamplingRate, subject,
                                      Bounds{rlo, rlo + rng.uniform(0, ms(60))});
    tally(check_agreement(gen.trace, rate, transform_requirement(rate, s.model), s.model));
  }

  for (int i = 0; i < per_kind; ++i) {
    Scenario s = random_paired_scenario(rng);
    GeneratedTrace gen = generate_trace(s.model, s.spec);
    PortId a = s.model.find_path("p")->subject_interface();
    PortId b = s.model.find_path("q")->subject_interface();
    TimeNs lo = rng.uniform(-ms(25), ms(10));
    SignalRequirement sync = make_req("sync", RequirementKind::Synchronicity, a,
                                      Bounds{lo, lo + rng.uniform(0, ms(30))}, b);
    tally(check_agreement(gen.trace, sync, transform_requirement(sync, s.model), s.model));
  }

  double elapsed = seconds_since(start);
  report(2, "transformation soundness (props 1-3)",
         disagreements == 0 && elapsed < 60.0,
         std::to_string(3 * per_kind) + " pairs, " + std::to_string(disagreements) +
             " disagreements (" + std::to_string(fails_seen) + " fail / " +
             std::to_string(passes_seen) + " pass outcomes), " +
             std::to_string(elapsed) + " s");
}

// ---- criterion 3: necessity of the period bounds (props 4-5) ----------

void criterion_3() {
  SplitMix64 rng(0xC3);
  std::size_t configs = 0, transformed_failures = 0, counterexamples = 0;

  while (configs < 500) {
    Scenario s = random_scenario(rng);
    const SignalPath& path = *s.model.find_path("p");
    PortId subject = path.subject_interface();

    // Realizable period map: the logical rate starts at the sampling
    // period and can only widen where a read re-discretizes the stream;
    // outputs carry their producing read's rate.
    std::map<PortId, TimeNs> periods;
    TimeNs rate = rng.uniform(ms(1), ms(30));
    for (const PortId& port : path.interfaces) {
      const Port* decl = s.model.find_port(port);
      if (decl && is_read_kind(decl->kind) && decl->resampling &&
          rng.uniform01() < 0.6)
        rate += rng.uniform(0, ms(30));
      periods[port] = rate;
    }
    ++configs;

    std::vector<SignalRequirement> reqs;
    TimeNs floor = rng.uniform(0, ms(60));
    reqs.push_back(make_req("band", RequirementKind::BandLimit, subject,
                            Bounds{floor, kUnboundedNs}));
    reqs.push_back(make_req("alias", RequirementKind::NoAliasing, subject));

    for (const SignalRequirement& req : reqs) {
      TransformReport transformed = transform_requirement(req, s.model);
      bool any_transformed_fail = false;
      for (const TimingConstraint& c : transformed.constraints) {
        if (check_constraint_with_periods(c, s.model, periods).status == Status::Fail)
          any_transformed_fail = true;
      }
      if (!any_transformed_fail) continue;
      ++transformed_failures;
      if (check_requirement_direct_with_periods(req, s.model, periods).status !=
          Status::Fail)
        ++counterexamples;
    }
  }

  report(3, "necessity (props 4-5)", counterexamples == 0 && transformed_failures > 50,
         std::to_string(configs) + " configurations, " +
             std::to_string(transformed_failures) + " transformed failures, " +
             std::to_string(counterexamples) + " counterexamples");
}

// ---- criterion 4: injected violations are detected at their index -----

void criterion_4() {
  SystemModel model = linear_model(1, {0, 0, ms(2), 0}, ms(10), {}, {true});
  GenSpec spec;
  spec.seed = 0xC4;
  spec.duration_ns = ms(200);
  PathGenConfig cfg;
  cfg.path = "p";
  cfg.period_ns = ms(10);
  cfg.hop_latency = {ms(1), ms(1)};
  spec.paths = {cfg};
  GeneratedTrace baseline = generate_trace(model, spec);
  PortId subject = model.find_path("p")->subject_interface();

  // Paired model for synchronicity: one-hop branches, delays 3 ms vs 0.
  std::vector<Component> comps;
  SignalPath pa, pb;
  for (const char* prefix : {"a", "b"}) {
    Component c;
    c.id = std::string(prefix) + "0";
    c.ports = {Port{{c.id, 0}, PortKind::Sampling, true, {}},
               Port{{c.id, 1}, PortKind::Output, false, {}}};
    comps.push_back(c);
  }
  pa = SignalPath{"p", {{"a0", 0}, {"a0", 1}}, {0, ms(3)}};
  pb = SignalPath{"q", {{"b0", 0}, {"b0", 1}}, {0, 0}};
  SystemModel paired = SystemModel::build(comps, {pa, pb});
  GenSpec paired_spec;
  paired_spec.seed = 0xC5;
  paired_spec.duration_ns = ms(600);
  PathGenConfig master;
  master.path = "p";
  master.period_ns = ms(30);
  master.hop_latency = {ms(1), ms(1)};
  PathGenConfig aligned;
  aligned.path = "q";
  aligned.period_ns = ms(30);
  aligned.hop_latency = {ms(2), ms(2)};
  aligned.align_terminal_with = "p";
  paired_spec.paths = {master, aligned};
  GeneratedTrace paired_baseline = generate_trace(paired, paired_spec);

  struct Case {
    RequirementKind kind;
    SignalRequirement req;
    const SystemModel* model;
    const Trace* trace;
    TimeNs magnitude;
  };
  std::vector<Case> cases = {
      {RequirementKind::DataAge,
       make_req("age", RequirementKind::DataAge, subject, Bounds{0, ms(6)}), &model,
       &baseline.trace, ms(4)},
      {RequirementKind::SamplingRate,
       make_req("rate", RequirementKind::SamplingRate, subject, Bounds{ms(9), ms(11)}),
       &model, &baseline.trace, ms(5)},
      {RequirementKind::Synchronicity,
       make_req("sync", RequirementKind::Synchronicity, {"a0", 1}, Bounds{-ms(3), -ms(1)},
                PortId{"b0", 1}),
       &paired, &paired_baseline.trace, ms(5)},
      {RequirementKind::BandLimit,
       make_req("band", RequirementKind::BandLimit, subject, Bounds{ms(10), kUnboundedNs}),
       &model, &baseline.trace, ms(1)},
      {RequirementKind::NoAliasing,
       make_req("alias", RequirementKind::NoAliasing, subject), &model, &baseline.trace,
       ms(1)},
  };

  const int trials = 50;
  std::size_t detected = 0, expected = 0;
  std::string first_miss;

  for (const Case& c : cases) {
    // Baseline must pass, otherwise detection means nothing.
    Verdict before = check_requirement_direct(*c.trace, c.req, *c.model);
    if (before.status != Status::Pass) {
      first_miss = "baseline not passing for " + std::string(to_string(c.kind));
      expected += trials;
      continue;
    }
    for (int t = 0; t < trials; ++t) {
      ++expected;
      InjectedTrace injected =
          inject_violation(*c.trace, *c.model, c.kind, c.magnitude, 1000 + t);
      Verdict after = check_requirement_direct(injected.trace, c.req, *c.model);
      bool at_index = after.status == Status::Fail && !after.violations.empty();
      for (const Violation& v : after.violations)
        if (v.k != injected.record.k) at_index = false;

      bool transformed_ok = true;
      if (c.kind == RequirementKind::DataAge || c.kind == RequirementKind::SamplingRate ||
          c.kind == RequirementKind::Synchronicity) {
        TransformReport tr = transform_requirement(c.req, *c.model);
        transformed_ok = false;
        for (const TimingConstraint& tc : tr.constraints)
          if (check_constraint(injected.trace, tc, *c.model).status == Status::Fail)
            transformed_ok = true;
      }

      if (at_index && transformed_ok)
        ++detected;
      else if (first_miss.empty())
        first_miss = std::string(to_string(c.kind)) + " trial " + std::to_string(t);
    }
  }

  report(4, "injected-violation detection", detected == expected && expected == 5 * trials,
         std::to_string(detected) + "/" + std::to_string(expected) + " detected" +
             (first_miss.empty() ? "" : " (first miss: " + first_miss + ")"));
}

// ---- criterion 5: forward pass equals the iterated fixed point --------

void criterion_5() {
  SplitMix64 rng(0xC5);
  std::size_t paths_checked = 0, mismatches = 0, monotonicity_breaks = 0;

  for (int round = 0; round < 100; ++round) {
    Scenario s = random_scenario(rng);
    const SignalPath& path = *s.model.find_path("p");
    std::map<PortId, TimeNs> periods;
    for (const PortId& port : path.interfaces) periods[port] = rng.uniform(0, ms(50));
    TimeNs source = rng.uniform(0, ms(60));

    auto forward = band_limit_propagate(s.model, path, source, periods);

    // Oracle: seed every interface with its local floor, then sweep the
    // adjacency in reverse until nothing changes.
    std::size_t n = path.interfaces.size();
    std::vector<TimeNs> local(n, 0);
    TimeNs last_read = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Port* decl = s.model.find_port(path.interfaces[i]);
      if (i == 0) {
        last_read = periods.at(path.interfaces[i]);
        local[i] = std::max(source, last_read);
      } else if (decl && is_read_kind(decl->kind)) {
        last_read = periods.at(path.interfaces[i]);
        local[i] = last_read;
      } else {
        TimeNs own = std::max(periods.at(path.interfaces[i]), last_read);
        local[i] = std::max(s.model.filter_cutoff_ns(path.interfaces[i]), own);
      }
    }
    std::vector<TimeNs> iterated = local;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = n; i-- > 1;) {
        TimeNs next = std::max(iterated[i], iterated[i - 1]);
        if (next != iterated[i]) {
          iterated[i] = next;
          changed = true;
        }
      }
    }

    ++paths_checked;
    TimeNs prev = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (forward.at(path.interfaces[i]) != iterated[i]) ++mismatches;
      if (forward.at(path.interfaces[i]) < prev) ++monotonicity_breaks;
      prev = forward.at(path.interfaces[i]);
    }
  }

  report(5, "band-limit fixed point",
         mismatches == 0 && monotonicity_breaks == 0 && paths_checked == 100,
         std::to_string(paths_checked) + " paths, " + std::to_string(mismatches) +
             " mismatches, " + std::to_string(monotonicity_breaks) +
             " monotonicity breaks");
}

// ---- criterion 6: determinism and golden stability ---------------------

void criterion_6() {
  SystemModel model = load_fixture_model("model_pipeline.json");
  GenSpec spec = parse_genspec(read_file(fixture_path("genspec_seed42.json")));

  std::string run1 = serialize_trace(generate_trace(model, spec).trace);
  std::string run2 = serialize_trace(generate_trace(model, spec).trace);
  GeneratedTrace gen = generate_trace(model, spec);
  std::string sidecar = serialize_sidecar(gen.ground_truth, *spec.seed);

  bool deterministic = run1 == run2;
  bool golden_trace = run1 == read_file(fixture_path("golden_trace_seed42.json"));
  bool golden_sidecar =
      sidecar == read_file(fixture_path("golden_trace_seed42.sidecar.json"));

  auto reqs = parse_requirements(read_file(fixture_path("requirements_fixture.json")));
  bool golden_constraints = serialize_transform_report(transform_all(reqs, model)) ==
                            read_file(fixture_path("golden_constraints.json"));
  bool golden_measure =
      serialize_measure_report(measure_subject(gen.trace, model, {"ctl", 1},
                                               PortId{"ctl2", 1})) ==
      read_file(fixture_path("golden_measure.json"));

  report(6, "determinism and golden stability",
         deterministic && golden_trace && golden_sidecar && golden_constraints &&
             golden_measure,
         std::string("rerun ") + (deterministic ? "identical" : "differs") +
             ", golden trace " + (golden_trace ? "stable" : "drifted") + ", sidecar " +
             (golden_sidecar ? "stable" : "drifted") + ", constraints " +
             (golden_constraints ? "stable" : "drifted") + ", measure " +
             (golden_measure ? "stable" : "drifted"));
}

// ---- criterion 7: worked example regression -----------------------------

void criterion_7() {
  SystemModel pipeline = load_fixture_model("model_pipeline.json");
  auto reqs = parse_requirements(read_file(fixture_path("requirements_fixture.json")));
  TransformReport report_all = transform_all(reqs, pipeline);

  bool prop1_ok = false;
  for (const TimingConstraint& c : report_all.constraints) {
    if (c.provenance.requirement == "age_main") {
      // age in [2 ms, 5 ms] over the 1 ms path: latency in [1 ms, 4 ms].
      prop1_ok = c.kind == ConstraintKind::LatencyBound && c.bounds == Bounds{ms(1), ms(4)};
    }
  }

  SystemModel bandlimit = load_fixture_model("model_bandlimit.json");
  const SignalPath& flow = *bandlimit.find_path("flow");
  std::map<PortId, TimeNs> periods{{{"src", 0}, ms(10)}, {{"proc", 0}, ms(20)}};
  auto limits = band_limit_propagate(bandlimit, flow, ms(10), periods);
  bool recurrence_ok =
      limits.at({"src", 1}) == ms(40) && limits.at({"proc", 0}) == ms(40);
  bool aliasing_ok = detect_aliasing(bandlimit, flow, limits, periods).empty();

  report(7, "worked example regression", prop1_ok && recurrence_ok && aliasing_ok,
         std::string("prop-1 bounds ") + (prop1_ok ? "exact" : "WRONG") +
             ", band limit at the read " +
             std::to_string(limits.at({"proc", 0}) / 1000000) + " ms" +
             (aliasing_ok ? ", no aliasing" : ", UNEXPECTED aliasing"));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
