#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sigtime/trace.hpp"
#include "test_support.hpp"

using namespace sigtime;
using namespace sigtime::testing;

namespace {

// Three-interface path with fully linked chains, matching
// model_pipeline's "main" path prefix layout (sense:0 -> sense:1 ->
// ctl:0 -> ctl:1).
Event ev(const char* comp, int port, std::uint64_t k, TimeNs tag) {
  return Event{{comp, port}, k, tag, {}, {}};
}

Event linked(const char* comp, int port, std::uint64_t k, TimeNs tag, const char* path,
             const char* up_comp, int up_port, std::uint64_t up_k) {
  Event e = ev(comp, port, k, tag);
  e.link = ChainLink{path, {up_comp, up_port}, up_k};
  return e;
}

std::vector<Event> chain_events(std::uint64_t k, TimeNs base, bool with_links = true) {
  std::vector<Event> events;
  events.push_back(ev("sense", 0, k, base));
  Event e1 = linked("sense", 1, k, base + 1, "main", "sense", 0, k);
  Event e2 = linked("ctl", 0, k, base + 2, "main", "sense", 1, k);
  Event e3 = linked("ctl", 1, k, base + 3, "main", "ctl", 0, k);
  if (!with_links) e2.link.reset();
  events.push_back(e1);
  events.push_back(e2);
  events.push_back(e3);
  return events;
}

}  // namespace

TEST_CASE("extraction: fully linked terminals yield one chain each") {
  std::vector<Event> events;
  for (std::uint64_t k = 1; k <= 5; ++k) {
    auto chain = chain_events(k, static_cast<TimeNs>(k) * 100);
    events.insert(events.end(), chain.begin(), chain.end());
  }
  Trace trace(std::move(events));
  CHECK(validate_trace(trace).empty());

  SystemModel model = load_fixture_model("model_pipeline.json");
  const SignalPath& path = *model.find_path("main");
  ChainExtraction ex = extract_causal_chains(trace, path);
  REQUIRE(ex.chains.size() == 5);
  CHECK(ex.skipped.empty());
  for (const CausalChain& c : ex.chains) {
    CHECK(c.events.size() == 4);
    CHECK(validate_chain(c, path, model).empty());
  }
  // Deterministic ascending terminal order.
  for (std::size_t i = 1; i < ex.chains.size(); ++i)
    CHECK(ex.chains[i - 1].terminal_index() < ex.chains[i].terminal_index());
}

TEST_CASE("extraction: broken ancestry lands in the skipped list") {
  std::vector<Event> events;
  auto good = chain_events(1, 100);
  auto broken = chain_events(2, 200, false);  // ctl:0 lacks its link
  events.insert(events.end(), good.begin(), good.end());
  events.insert(events.end(), broken.begin(), broken.end());
  Trace trace(std::move(events));

  SystemModel model = load_fixture_model("model_pipeline.json");
  ChainExtraction ex = extract_causal_chains(trace, *model.find_path("main"));
  REQUIRE(ex.chains.size() == 1);
  CHECK(ex.chains[0].terminal_index() == 1);
  REQUIRE(ex.skipped.size() == 1);
  CHECK(ex.skipped[0].k == 2);
  CHECK(ex.skipped[0].reason.find("no chain link") != std::string::npos);
}

TEST_CASE("extraction: two terminals may share one sampling ancestor") {
  // Both ctl:1 events k=1 and k=2 trace back to the single sampling
  // event; chains are per terminal event.
  std::vector<Event> events;
  events.push_back(ev("sense", 0, 1, 0));
  events.push_back(linked("sense", 1, 1, 1, "main", "sense", 0, 1));
  events.push_back(linked("ctl", 0, 1, 2, "main", "sense", 1, 1));
  events.push_back(linked("ctl", 1, 1, 3, "main", "ctl", 0, 1));
  events.push_back(linked("ctl", 1, 2, 4, "main", "ctl", 0, 1));
  Trace trace(std::move(events));
  CHECK(validate_trace(trace).empty());

  SystemModel model = load_fixture_model("model_pipeline.json");
  ChainExtraction ex = extract_causal_chains(trace, *model.find_path("main"));
  REQUIRE(ex.chains.size() == 2);
  CHECK(ex.chains[0].sampling_event().k == 1);
  CHECK(ex.chains[1].sampling_event().k == 1);
}

TEST_CASE("validate_trace flags the named invariants") {
  SUBCASE("non-consecutive indices") {
    Trace trace({ev("sense", 0, 2, 0)});
    auto diags = validate_trace(trace);
    REQUIRE(!diags.empty());
    CHECK(diags[0].message.find("consecutive") != std::string::npos);
  }

  SUBCASE("decreasing tags") {
    Trace trace({ev("sense", 0, 1, 100), ev("sense", 0, 2, 50)});
    auto diags = validate_trace(trace);
    REQUIRE(!diags.empty());
    CHECK(diags[0].message.find("non-decreasing") != std::string::npos);
  }

  SUBCASE("dangling link") {
    Trace trace({linked("ctl", 1, 1, 10, "main", "ctl", 0, 7)});
    auto diags = validate_trace(trace);
    REQUIRE(!diags.empty());
    CHECK(diags[0].message.find("missing event") != std::string::npos);
  }

  SUBCASE("causal order violation") {
    std::vector<Event> events;
    events.push_back(ev("sense", 0, 1, 100));
    events.push_back(linked("sense", 1, 1, 50, "main", "sense", 0, 1));
    auto diags = validate_trace(Trace(std::move(events)));
    REQUIRE(!diags.empty());
    CHECK(diags[0].message.find("causal order") != std::string::npos);
  }

  SUBCASE("link cycle") {
    // Two events at equal tags pointing at each other.
    std::vector<Event> events;
    events.push_back(linked("sense", 0, 1, 0, "main", "sense", 1, 1));
    events.push_back(linked("sense", 1, 1, 0, "main", "sense", 0, 1));
    auto diags = validate_trace(Trace(std::move(events)));
    bool cycle = false;
    for (const auto& d : diags)
      if (d.message.find("cycle") != std::string::npos) cycle = true;
    CHECK(cycle);
  }
}

TEST_CASE("find_event and grouping") {
  std::vector<Event> events;
  auto chain = chain_events(1, 100);
  events.insert(events.end(), chain.begin(), chain.end());
  Trace trace(std::move(events));
  REQUIRE(trace.find_event({"ctl", 0}, 1) != nullptr);
  CHECK(trace.find_event({"ctl", 0}, 1)->tag_ns == 102);
  CHECK(trace.find_event({"ctl", 0}, 2) == nullptr);
  CHECK(trace.find_event({"ghost", 0}, 1) == nullptr);
  CHECK(trace.referenced_paths() == std::vector<std::string>{"main"});
}
