#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jto/conet.hpp"
#include "jto/error.hpp"
#include "jto/synth.hpp"
#include "support.hpp"

using namespace jto;
using conet::OffenderGraph;

namespace {

CoEventRecord event(std::string id, EventType type, std::vector<std::string> people, bool drug = false) {
  CoEventRecord e;
  e.event_id = std::move(id);
  e.type = type;
  e.date = "2016-01-01";
  e.participants = std::move(people);
  e.drug_related = drug;
  return e;
}

PersonRecord person(std::string id, bool gang, int violent) { return {std::move(id), gang, violent}; }

}  // namespace

TEST_CASE("single arrest pair") {
  const std::vector<CoEventRecord> ev{event("E1", EventType::arrest, {"P1", "P2"})};
  const auto g = conet::build_graph(ev);
  CHECK(g.node_count() == 2);
  REQUIRE(g.edge_count() == 1);
  const auto* e = g.edge("P1", "P2");
  REQUIRE(e);
  CHECK(e->arrest_count == 1);
  CHECK(e->fir_count == 0);
  CHECK(e->supporting_events == std::vector<std::string>{"E1"});
}

TEST_CASE("field interview with three people expands to a clique") {
  const std::vector<CoEventRecord> ev{event("E1", EventType::field_interview, {"P1", "P2", "P3"})};
  const auto g = conet::build_graph(ev);
  CHECK(g.edge_count() == 3);
  for (auto [a, b] : {std::pair{"P1", "P2"}, {"P1", "P3"}, {"P2", "P3"}}) {
    REQUIRE(g.edge(a, b));
    CHECK(g.edge(a, b)->fir_count == 1);
  }
}

TEST_CASE("repeated pair aggregates on one edge") {
  const std::vector<CoEventRecord> ev{event("E1", EventType::arrest, {"P1", "P2"}, true),
                                      event("E2", EventType::field_interview, {"P2", "P1"}, false)};
  const auto g = conet::build_graph(ev);
  REQUIRE(g.edge_count() == 1);
  const auto* e = g.edge("P2", "P1");
  CHECK(e == g.edge("P1", "P2"));
  CHECK(e->arrest_count == 1);
  CHECK(e->fir_count == 1);
  CHECK(e->drug_related);
}

TEST_CASE("solo events add nodes but no edges") {
  const std::vector<CoEventRecord> ev{event("E1", EventType::field_interview, {"P1"})};
  const auto g = conet::build_graph(ev);
  CHECK(g.node_count() == 1);
  CHECK(g.edge_count() == 0);
}

TEST_CASE("chain S-A-B-C classifies one edge per degree") {
  const std::vector<CoEventRecord> ev{event("E1", EventType::arrest, {"S", "A"}),
                                      event("E2", EventType::field_interview, {"A", "B"}),
                                      event("E3", EventType::field_interview, {"B", "C"}),
                                      event("E4", EventType::field_interview, {"C", "D"})};
  const auto g = conet::build_graph(ev);
  const auto s = conet::degree_counts(g, {"S"}, 3);
  CHECK(s.counts[0] == std::vector<std::size_t>{1, 0, 0});
  CHECK(s.counts[1] == std::vector<std::size_t>{0, 1, 1});
  CHECK(s.excluded == 1);
  CHECK(s.column_total(1) == 1);
  CHECK(s.column_total(2) == 1);
  CHECK(s.column_total(3) == 1);
  CHECK(s.grand_total() == 3);
}

TEST_CASE("seeding every node makes every edge first degree") {
  std::mt19937_64 rng(8);
  const auto rg = testing::random_graph(40, 0.1, rng);
  const auto g = conet::build_graph(testing::graph_events(rg));
  std::set<std::string> all(g.node_ids().begin(), g.node_ids().end());
  const auto s = conet::degree_counts(g, all, 3);
  CHECK(s.column_total(1) == g.edge_count());
  CHECK(s.excluded == 0);
}

TEST_CASE("degree counts reject empty or unknown seeds") {
  const std::vector<CoEventRecord> ev{event("E1", EventType::arrest, {"P1", "P2"})};
  const auto g = conet::build_graph(ev);
  CHECK_THROWS_AS(conet::degree_counts(g, {}, 3), DataError);
  CHECK_THROWS_AS(conet::degree_counts(g, {"P9"}, 3), DataError);
}

TEST_CASE("property: degree counts equal a brute-force oracle on 100 random graphs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 20 + rng() % 181;
    const auto rg = testing::random_graph(n, 0.05, rng);
    const auto g = conet::build_graph(testing::graph_events(rg));
    std::vector<std::size_t> seeds;
    std::set<std::string> seed_ids;
    const std::size_t k = 1 + rng() % 10;
    while (seeds.size() < k) {
      const std::size_t s = rng() % n;
      if (seed_ids.insert("N" + std::to_string(s)).second) seeds.push_back(s);
    }
    const auto oracle = testing::brute_force_degrees(rg, seeds, 3);
    const auto got = conet::degree_counts(g, seed_ids, 3);
    CHECK(got.counts[0] == oracle.counts[0]);
    CHECK(got.counts[1] == oracle.counts[1]);
    CHECK(got.excluded == oracle.excluded);
    CHECK(got.grand_total() + got.excluded == g.edge_count());
    CHECK(got.row_total(0) + got.row_total(1) == got.grand_total());
  }
}

TEST_CASE("hop distances match Floyd-Warshall") {
  std::mt19937_64 rng(77);
  const auto rg = testing::random_graph(120, 0.03, rng);
  const auto g = conet::build_graph(testing::graph_events(rg));
  const auto d = testing::all_pairs_hops(rg);
  const auto src = *g.index_of("N0");
  const std::vector<OffenderGraph::Index> sources{src};
  const auto hops = conet::hop_distances(g, sources, 1000);
  for (std::size_t i = 0; i < rg.n; ++i) {
    const auto idx = *g.index_of("N" + std::to_string(i));
    if (std::isinf(d[0][i])) CHECK_FALSE(hops[idx].has_value());
    else CHECK(hops[idx] == static_cast<std::size_t>(d[0][i]));
  }
}

TEST_CASE("drug filter") {
  const std::vector<CoEventRecord> none{event("E1", EventType::arrest, {"P1", "P2"})};
  CHECK(conet::filter_drug_edges(conet::build_graph(none)).edge_count() == 0);
  CHECK(conet::filter_drug_edges(conet::build_graph(none)).node_count() == 0);

  const std::vector<CoEventRecord> all{event("E1", EventType::arrest, {"P1", "P2"}, true),
                                       event("E2", EventType::field_interview, {"P2", "P3", "P4"}, true)};
  const auto g = conet::build_graph(all);
  const auto f = conet::filter_drug_edges(g);
  CHECK(f.edges().size() == g.edges().size());
  for (const auto& [key, attr] : g.edges()) CHECK(*f.edge(g.id(key.first), g.id(key.second)) == attr);

  std::mt19937_64 rng(5);
  auto events = testing::graph_events(testing::random_graph(80, 0.08, rng));
  for (auto& e : events) e.drug_related = rng() % 4 == 0;
  const auto once = conet::filter_drug_edges(conet::build_graph(events));
  const auto twice = conet::filter_drug_edges(once);
  CHECK(once.edges().size() == twice.edges().size());
  CHECK(once.node_count() == twice.node_count());
}

TEST_CASE("prolific thresholds are conjunctive") {
  const std::vector<CoEventRecord> ev{
      event("E1", EventType::arrest, {"A", "B"}, true), event("E2", EventType::arrest, {"A", "C"}, true),
      event("E3", EventType::arrest, {"B", "C"}, true), event("E4", EventType::field_interview, {"B", "D"}, true),
      event("E5", EventType::arrest, {"D", "C"}, false)};
  const std::vector<PersonRecord> people{person("A", false, 0), person("B", false, 3), person("C", true, 1),
                                         person("D", false, 5)};
  const auto drug = conet::filter_drug_edges(conet::build_graph(ev));
  const auto sel = conet::select_prolific(drug, people, ev);
  // A: 2 drug arrests but no violent prior. B: 2 arrests (FIR not counted).
  // D: one drug FIR only.
  CHECK(sel.person_ids == std::vector<std::string>{"B", "C"});
  conet::ProlificThresholds strict{3, 1};
  CHECK(conet::select_prolific(drug, people, ev, strict).person_ids.empty());
}

TEST_CASE("one drug arrest is not enough") {
  const std::vector<CoEventRecord> ev{event("E1", EventType::arrest, {"A", "B"}, true)};
  const std::vector<PersonRecord> people{person("A", false, 3), person("B", false, 3)};
  CHECK(conet::select_prolific(conet::build_graph(ev), people, ev).person_ids.empty());
}

TEST_CASE("property: adding drug arrests never shrinks the prolific set") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    auto events = testing::graph_events(testing::random_graph(60, 0.08, rng));
    for (auto& e : events) e.drug_related = rng() % 2 == 0;
    std::vector<PersonRecord> people;
    for (int i = 0; i < 60; ++i) people.push_back(person("N" + std::to_string(i), false, static_cast<int>(rng() % 3)));
    const auto before = conet::select_prolific(conet::build_graph(events), people, events).person_ids;
    events.push_back(event("X", EventType::arrest, {"N" + std::to_string(rng() % 60), "N" + std::to_string(rng() % 60)},
                           true));
    if (events.back().participants[0] == events.back().participants[1]) events.back().participants.pop_back();
    const auto after = conet::select_prolific(conet::build_graph(events), people, events).person_ids;
    CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
  }
}

TEST_CASE("gang connection degree") {
  const std::vector<CoEventRecord> ev{event("E1", EventType::field_interview, {"G", "A"}),
                                      event("E2", EventType::field_interview, {"A", "B"}),
                                      event("E3", EventType::field_interview, {"X", "Y"})};
  const std::vector<PersonRecord> people{person("G", true, 0), person("A", false, 0), person("B", false, 0),
                                         person("X", false, 0), person("Y", false, 0)};
  const auto g = conet::build_graph(ev);
  const std::vector<std::string> query{"A", "B", "G", "X"};
  const auto d = conet::gang_connection_degree(g, query, people, 3);
  CHECK(d.at("G") == 0u);
  CHECK(d.at("A") == 1u);
  CHECK(d.at("B") == 2u);
  CHECK_FALSE(d.at("X").has_value());
}

TEST_CASE("calibrated fixture reproduces the network funnel") {
  const auto data = synth::calibrated_fixture();
  const auto g = conet::build_graph(data.events);
  CHECK(g.edge_count() == 28096);
  const auto drug = conet::filter_drug_edges(g);
  CHECK(drug.edge_count() == 1742);
  const auto sel = conet::select_prolific(drug, data.persons, data.events);
  CHECK(sel.person_ids.size() == 147);
  CHECK(sel.person_ids == data.intended_prolific);
  const auto gang = conet::gang_connection_degree(g, sel.person_ids, data.persons);
  CHECK(std::count_if(gang.begin(), gang.end(), [](auto& kv) { return kv.second == 0u; }) == 32);
  const std::set<std::string> seeds(sel.person_ids.begin(), sel.person_ids.end());
  const auto s = conet::degree_counts(g, seeds);
  CHECK(s.counts[0] == std::vector<std::size_t>{3025, 1472, 574});
  CHECK(s.counts[1] == std::vector<std::size_t>{15033, 5974, 2018});
  CHECK(s.row_total(0) == 5071);
  CHECK(s.row_total(1) == 23025);
  CHECK(s.grand_total() == 28096);
}
