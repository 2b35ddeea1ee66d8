#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sigtime/requirements.hpp"
#include "test_support.hpp"

using namespace sigtime;
using namespace sigtime::testing;

namespace {

SignalRequirement req(const char* id, RequirementKind kind, PortId subject,
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

}  // namespace

TEST_CASE("data age transforms to a latency bound shifted by the path delay") {
  SystemModel model = load_fixture_model("model_pipeline.json");

  SUBCASE("worked example: age in [2,5] ms over a 1 ms path gives h in [1,4] ms") {
    auto report = transform_data_age(
        req("r", RequirementKind::DataAge, {"ctl", 1}, Bounds{ms(2), ms(5)}), model);
    REQUIRE(report.constraints.size() == 1);
    const TimingConstraint& c = report.constraints[0];
    CHECK(c.kind == ConstraintKind::LatencyBound);
    CHECK(c.bounds == Bounds{ms(1), ms(4)});
    CHECK(c.target.paths == std::vector<std::string>{"main"});
    CHECK(c.provenance.requirement == "r");
    CHECK(c.provenance.proposition == 1);
    CHECK(report.diagnostics.empty());
  }

  SUBCASE("zero delay is the identity transformation") {
    auto report = transform_data_age(
        req("r", RequirementKind::DataAge, {"ctl2", 1}, Bounds{0, ms(5)}), model);
    REQUIRE(report.constraints.size() == 1);
    CHECK(report.constraints[0].bounds == Bounds{0, ms(5)});
  }

  SUBCASE("delay beyond the allowed age is diagnosed as unsatisfiable") {
    auto report = transform_data_age(
        req("r", RequirementKind::DataAge, {"ctl", 1}, Bounds{0, ms(0)}), model);
    REQUIRE(report.constraints.size() == 1);
    CHECK(report.constraints[0].bounds.upper == -ms(1));
    REQUIRE(report.diagnostics.size() == 1);
    CHECK(report.diagnostics[0].message.find("unsatisfiable") != std::string::npos);
  }

  SUBCASE("unbounded upper age stays unbounded") {
    auto report = transform_data_age(
        req("r", RequirementKind::DataAge, {"ctl", 1}, Bounds{ms(2), kUnboundedNs}), model);
    CHECK(is_unbounded(report.constraints.at(0).bounds.upper));
    CHECK(report.constraints.at(0).bounds.lower == ms(1));
  }

  SUBCASE("no signal path for the subject is an error") {
    CHECK_THROWS_AS(transform_data_age(
                        req("r", RequirementKind::DataAge, {"sense", 1}, Bounds{0, ms(1)}),
                        model),
                    Error);
  }
}

TEST_CASE("synchronicity transforms to a relative latency bound") {
  SystemModel model = load_fixture_model("model_pipeline.json");

  SUBCASE("equal delays cancel") {
    auto report = transform_synchronicity(
        req("r", RequirementKind::Synchronicity, {"ctl2", 1}, Bounds{-ms(1), ms(1)},
            PortId{"ctl2", 1}),
        model);
    REQUIRE(report.constraints.size() == 1);
    CHECK(report.constraints[0].bounds == Bounds{-ms(1), ms(1)});
    CHECK(report.constraints[0].provenance.proposition == 2);
  }

  SUBCASE("worked example: d_a = 1 ms vs d_b = 0 shifts by +1 ms") {
    // Subjects (a = main terminal with d 1 ms, b = aux terminal with d 0):
    // bounds on h_b - h_a are [lo - (d_b - d_a), hi - (d_b - d_a)].
    auto report = transform_synchronicity(
        req("r", RequirementKind::Synchronicity, {"ctl", 1}, Bounds{-ms(1), ms(1)},
            PortId{"ctl2", 1}),
        model);
    REQUIRE(report.constraints.size() == 1);
    const TimingConstraint& c = report.constraints[0];
    CHECK(c.kind == ConstraintKind::RelativeLatencyBound);
    CHECK(c.bounds == Bounds{0, ms(2)});
    CHECK(c.target.paths == std::vector<std::string>{"aux", "main"});
  }

  SUBCASE("exact-sync degenerate bounds survive the shift") {
    auto report = transform_synchronicity(
        req("r", RequirementKind::Synchronicity, {"ctl2", 1}, Bounds{0, 0},
            PortId{"ctl2", 1}),
        model);
    CHECK(report.constraints.at(0).bounds == Bounds{0, 0});
  }
}

TEST_CASE("sampling rate transforms to a consecutive latency bound, same bounds") {
  SystemModel model = load_fixture_model("model_pipeline.json");
  auto report = transform_sampling_rate(
      req("r", RequirementKind::SamplingRate, {"ctl", 1}, Bounds{ms(9), ms(11)}), model);
  REQUIRE(report.constraints.size() == 1);
  CHECK(report.constraints[0].kind == ConstraintKind::ConsecutiveLatencyBound);
  CHECK(report.constraints[0].bounds == Bounds{ms(9), ms(11)});
  CHECK(report.constraints[0].provenance.proposition == 3);
}

TEST_CASE("band limit transforms to a sampling-period bound at the subject") {
  SystemModel model = load_fixture_model("model_bandlimit.json");

  SUBCASE("lower bound becomes the period cap; no filter demand when unbounded above") {
    auto report = transform_band_limit(
        req("r", RequirementKind::BandLimit, {"proc", 1}, Bounds{ms(20), kUnboundedNs}),
        model);
    REQUIRE(report.constraints.size() == 1);
    const TimingConstraint& c = report.constraints[0];
    CHECK(c.kind == ConstraintKind::SamplingPeriodBound);
    CHECK(c.bounds == Bounds{0, ms(20)});
    CHECK(c.target.port == PortId{"proc", 1});
    CHECK(c.provenance.proposition == 4);
    CHECK(report.diagnostics.empty());
  }

  SUBCASE("finite upper bound satisfied by a declared filter") {
    auto report = transform_band_limit(
        req("r", RequirementKind::BandLimit, {"proc", 1}, Bounds{ms(20), ms(50)}), model);
    CHECK(report.diagnostics.empty());  // cutoff 40 ms <= 50 ms
  }

  SUBCASE("finite upper bound without a usable filter is diagnosed") {
    auto report = transform_band_limit(
        req("r", RequirementKind::BandLimit, {"proc", 1}, Bounds{ms(20), ms(30)}), model);
    REQUIRE(report.diagnostics.size() == 1);  // cutoff 40 ms > 30 ms
    CHECK(report.diagnostics[0].message.find("no filter") != std::string::npos);
  }

  SUBCASE("negative lower bound is rejected") {
    CHECK_THROWS_AS(
        transform_band_limit(
            req("r", RequirementKind::BandLimit, {"proc", 1}, Bounds{-1, ms(1)}), model),
        Error);
  }
}

TEST_CASE("no-aliasing emits one period bound per resampling boundary") {
  SystemModel model = load_fixture_model("model_bandlimit.json");

  SUBCASE("resampling read plus subject: two boundaries") {
    auto report =
        transform_no_aliasing(req("r", RequirementKind::NoAliasing, {"proc", 1}), model);
    REQUIRE(report.constraints.size() == 2);

    // Boundary at the resampling read: capped by the filtered stream.
    CHECK(report.constraints[0].target.port == PortId{"proc", 0});
    CHECK(report.constraints[0].target.producer == PortId{"src", 1});
    CHECK(report.constraints[0].bounds.upper == ms(40));
    CHECK(report.constraints[0].provenance.proposition == 5);

    // Boundary at the subject itself.
    CHECK(report.constraints[1].target.port == PortId{"proc", 1});
    CHECK(report.constraints[1].target.producer == PortId{"proc", 0});
    CHECK(report.constraints[1].bounds.upper == ms(40));
  }

  SUBCASE("smallest boundary set: sampling straight to subject") {
    SystemModel minimal = linear_model(0, {0, 0}, ms(20));
    auto report =
        transform_no_aliasing(req("r", RequirementKind::NoAliasing, {"c0", 1}), minimal);
    REQUIRE(report.constraints.size() == 1);
    CHECK(report.constraints[0].target.port == PortId{"c0", 1});
    CHECK(report.constraints[0].target.producer == PortId{"c0", 0});
    CHECK(report.constraints[0].bounds.upper == ms(20));
  }

  SUBCASE("missing declared band limit at the sampling interface is an error") {
    SystemModel bare = linear_model(0, {0, 0});
    CHECK_THROWS_AS(
        transform_no_aliasing(req("r", RequirementKind::NoAliasing, {"c0", 1}), bare),
        Error);
  }
}

TEST_CASE("transform fans out over every path of the subject") {
  SystemModel model = load_fixture_model("model_diamond.json");
  auto report = transform_data_age(
      req("r", RequirementKind::DataAge, {"fuse", 2}, Bounds{ms(2), ms(5)}), model);
  REQUIRE(report.constraints.size() == 2);
  CHECK(report.constraints[0].target.paths == std::vector<std::string>{"via_a"});
  CHECK(report.constraints[0].bounds == Bounds{ms(1), ms(4)});  // 1 ms delay
  CHECK(report.constraints[1].target.paths == std::vector<std::string>{"via_b"});
  CHECK(report.constraints[1].bounds == Bounds{ms(2), ms(5)});  // no delay
}

TEST_CASE("bound widening never shrinks the derived interval") {
  SystemModel model = load_fixture_model("model_pipeline.json");
  SplitMix64 rng(13);
  for (int round = 0; round < 200; ++round) {
    TimeNs lo = rng.uniform(-ms(20), ms(20));
    TimeNs hi = lo + rng.uniform(0, ms(20));
    TimeNs widen = rng.uniform(0, ms(10));
    Bounds narrow{lo, hi};
    Bounds wide{lo - widen, hi + widen};

    auto narrow_report = transform_data_age(
        req("r", RequirementKind::DataAge, {"ctl", 1}, narrow), model);
    auto wide_report = transform_data_age(
        req("r", RequirementKind::DataAge, {"ctl", 1}, wide), model);
    CHECK(wide_report.constraints[0].bounds.lower <= narrow_report.constraints[0].bounds.lower);
    CHECK(wide_report.constraints[0].bounds.upper >= narrow_report.constraints[0].bounds.upper);
  }
}

TEST_CASE("transform_all: stable order, aggregated diagnostics, total provenance") {
  SystemModel model = load_fixture_model("model_pipeline.json");

  SUBCASE("empty list gives an empty report") {
    auto report = transform_all({}, model);
    CHECK(report.constraints.empty());
    CHECK(report.diagnostics.empty());
  }

  SUBCASE("the fixture set yields constraints for all five kinds") {
    auto reqs = parse_requirements(read_file(fixture_path("requirements_fixture.json")));
    auto report = transform_all(reqs, model);
    CHECK(report.constraints.size() == 6);
    for (const TimingConstraint& c : report.constraints) {
      CHECK(!c.provenance.requirement.empty());
      CHECK(c.provenance.proposition >= 1);
      CHECK(c.provenance.proposition <= 5);
    }
  }

  SUBCASE("duplicate requirement ids are diagnosed") {
    auto r1 = req("dup", RequirementKind::DataAge, {"ctl", 1}, Bounds{0, ms(5)});
    auto report = transform_all({r1, r1}, model);
    CHECK(report.constraints.size() == 1);
    REQUIRE(report.diagnostics.size() == 1);
    CHECK(report.diagnostics[0].message.find("duplicate") != std::string::npos);
  }

  SUBCASE("unknown subjects become diagnostics, not aborts") {
    auto bad = req("bad", RequirementKind::DataAge, {"ghost", 0}, Bounds{0, ms(5)});
    auto good = req("good", RequirementKind::DataAge, {"ctl", 1}, Bounds{0, ms(5)});
    auto report = transform_all({bad, good}, model);
    CHECK(report.constraints.size() == 1);
    REQUIRE(report.diagnostics.size() == 1);
    CHECK(report.diagnostics[0].severity == Severity::Error);
  }
}
