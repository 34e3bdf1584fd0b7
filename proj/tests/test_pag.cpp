#include <catch2/catch_amalgamated.hpp>

#include "failop/failop.hpp"
#include "support/fixtures.hpp"
#include "support/random_models.hpp"

using namespace failop;

namespace {

std::set<std::string> ids(std::initializer_list<const char*> list) {
  std::set<std::string> s;
  for (const char* x : list) s.insert(x);
  return s;
}

SystemModel two_nodes_same_supply() {
  SystemModel m;
  m.frt = 50'000;
  Feature f;
  f.id = "f1";
  f.realized_by = {"s1"};
  m.features.push_back(f);
  Aswc s;
  s.id = "s1";
  s.wcet = 100;
  s.asil = 1;
  s.fail_op = 1;
  s.min_ftt = 10'000;
  s.features = {"f1"};
  m.aswcs.push_back(s);
  for (const char* id : {"n1", "n2"}) {
    ExecutionNode e;
    e.id = id;
    e.kind = NodeKind::central;
    e.total_time_budget = 1000;
    e.power_supply = PowerSupply::red;
    m.nodes.push_back(e);
  }
  REQUIRE(validate_model(m).empty());
  return m;
}

}  // namespace

TEST_CASE("one-fault graph of the demo platform", "[pag]") {
  SystemModel m = fixtures::sealed_demo_model();
  Pag pag = build_pag(m, 1);

  REQUIRE(pag.vertices.size() == 7);
  REQUIRE(pag.edges.size() == 6);
  CHECK(pag.root().alive == ids({"e1", "e2", "e3", "e4"}));

  CHECK(pag.find_vertex(ids({"e2", "e3", "e4"})) != nullptr);
  CHECK(pag.find_vertex(ids({"e1", "e3", "e4"})) != nullptr);
  CHECK(pag.find_vertex(ids({"e1", "e2", "e4"})) != nullptr);
  CHECK(pag.find_vertex(ids({"e1", "e2", "e3"})) != nullptr);
  CHECK(pag.find_vertex(ids({"e2", "e4"})) != nullptr);  // red supply lost
  CHECK(pag.find_vertex(ids({"e1", "e3"})) != nullptr);  // blue supply lost

  int isolations = 0, supply_losses = 0;
  for (const auto& e : pag.edges) {
    CHECK(e.from == 0);
    if (e.cause.kind == PagCause::Kind::isolation)
      ++isolations;
    else
      ++supply_losses;
  }
  CHECK(isolations == 4);
  CHECK(supply_losses == 2);
}

TEST_CASE("graph edge cases", "[pag]") {
  SECTION("single node: root only") {
    SystemModel m = two_nodes_same_supply();
    m.nodes.pop_back();
    m.clusters.clear();
    m.sealed = false;
    REQUIRE(validate_model(m).empty());
    Pag pag = build_pag(m, 3);
    CHECK(pag.vertices.size() == 1);
    CHECK(pag.edges.empty());
  }

  SECTION("two nodes on one supply: no supply edges, singletons are leaves") {
    SystemModel m = two_nodes_same_supply();
    Pag pag = build_pag(m, 2);
    REQUIRE(pag.vertices.size() == 3);
    REQUIRE(pag.edges.size() == 2);
    for (const auto& e : pag.edges) CHECK(e.cause.kind == PagCause::Kind::isolation);
  }

  SECTION("max_faults below one is rejected") {
    SystemModel m = two_nodes_same_supply();
    CHECK_THROWS_AS(build_pag(m, 0), std::invalid_argument);
  }
}

TEST_CASE("merged vertices keep the minimum fault depth", "[pag]") {
  SystemModel m = fixtures::sealed_demo_model();
  Pag pag = build_pag(m, 2);
  // {e2,e4} is one supply loss away from the root, even though two
  // isolations also reach it
  const PagVertex* v = pag.find_vertex(ids({"e2", "e4"}));
  REQUIRE(v != nullptr);
  CHECK(v->fault_depth == 1);

  int incoming = 0;
  for (const auto& e : pag.edges)
    if (pag.vertices[e.to].alive == v->alive) ++incoming;
  CHECK(incoming >= 3);  // supply loss from root plus isolation chains
}

TEST_CASE("graph growth stays within the subset bound and stays acyclic", "[pag]") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SystemModel m = random_models::generate_sealed(seed);
    int max_faults = 3;
    Pag pag = build_pag(m, max_faults);
    CAPTURE(seed, m.central_count());

    std::size_t n = m.central_count();
    std::size_t bound = 2;
    for (std::size_t k = 0; k <= static_cast<std::size_t>(max_faults) && k <= n; ++k) {
      std::size_t c = 1;
      for (std::size_t i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
      bound += c;
    }
    CHECK(pag.vertices.size() <= bound);

    for (const auto& e : pag.edges) {
      const auto& from = pag.vertices[e.from].alive;
      const auto& to = pag.vertices[e.to].alive;
      CHECK(to.size() < from.size());
      CHECK(std::includes(from.begin(), from.end(), to.begin(), to.end()));
      CHECK(pag.vertices[e.to].fault_depth <= pag.vertices[e.from].fault_depth + 1);
    }
    for (const auto& v : pag.vertices) CHECK(v.fault_depth <= max_faults);
  }
}

TEST_CASE("analyze resolves the demo degradation story", "[pag]") {
  SystemModel m = fixtures::sealed_demo_model();
  Pag pag = analyze(m, 1, fixtures::demo_initial_config());
  REQUIRE(pag.resolved);

  CHECK(pag.root().result->priority_sum == 40);
  CHECK(pag.root().lost_features.empty());

  const PagVertex* v = pag.find_vertex(ids({"e2", "e3", "e4"}));
  REQUIRE(v != nullptr);
  CHECK(v->result->priority_sum == 29);
  CHECK(v->lost_features == std::vector<std::string>{"f3"});

  // the transition edge carries the loss
  for (const auto& e : pag.edges) {
    if (pag.vertices[e.to].alive != v->alive) continue;
    CHECK(e.priority_delta == -11);
    CHECK(e.lost_features == std::vector<std::string>{"f3"});
    CHECK(e.lost_clusters == std::vector<std::string>{"sc3"});
  }
}

TEST_CASE("sc5 keeps a master on every vertex of the depth-3 graph", "[pag]") {
  SystemModel m = fixtures::sealed_demo_model();
  Pag pag = analyze(m, 3, fixtures::demo_initial_config());
  for (const auto& v : pag.vertices) {
    CAPTURE(v.id);
    const ClusterPlacement* p = v.result->config.find("sc5");
    REQUIRE(p != nullptr);
    CHECK(p->master_present());
  }
}

TEST_CASE("priority sums fall and lost features grow along every edge", "[pag]") {
  SystemModel m = fixtures::sealed_demo_model();
  Pag pag = analyze(m, 3, fixtures::demo_initial_config());
  for (const auto& e : pag.edges) {
    const PagVertex& from = pag.vertices[e.from];
    const PagVertex& to = pag.vertices[e.to];
    CHECK(to.result->priority_sum <= from.result->priority_sum);
    std::set<std::string> lost_from(from.lost_features.begin(), from.lost_features.end());
    for (const auto& f : lost_from) {
      bool still_lost = std::find(to.lost_features.begin(), to.lost_features.end(), f) !=
                        to.lost_features.end();
      CHECK(still_lost);
    }
  }
}

TEST_CASE("feature survivability from the resolved graph", "[pag]") {
  SystemModel m = fixtures::sealed_demo_model();
  Pag pag = analyze(m, 3, fixtures::demo_initial_config());

  CHECK(survivable_faults(pag, "f5") == 3);  // fail-op 3 manual-driving cluster
  CHECK(survivable_faults(pag, "f3") == 0);  // dies with the first isolation of e1
  CHECK(survivable_faults(pag, "f4") == 1);  // fail-op 1
  // single-copy clusters die with their node
  CHECK(survivable_faults(pag, "f1") == 0);
  CHECK(survivable_faults(pag, "f2") == 0);
}

TEST_CASE("analyze without an initial deployment solves the root itself", "[pag]") {
  SystemModel m = fixtures::sealed_demo_model();
  Pag pag = analyze(m, 1);
  CHECK(pag.root().result->priority_sum == 40);
  CHECK(pag.root().result->optimal);
  const PagVertex* v = pag.find_vertex(ids({"e2", "e3", "e4"}));
  REQUIRE(v != nullptr);
  CHECK(v->result->priority_sum == 29);
}

TEST_CASE("analyze rejects an invalid initial deployment", "[pag]") {
  SystemModel m = fixtures::sealed_demo_model();
  DeploymentConfig bad = fixtures::demo_initial_config();
  bad.find("sc5")->master = "e4";  // same supply as the slave on e2... and over budget
  bad.find("sc5")->slave = "e2";
  CHECK_THROWS_AS(analyze(m, 1, bad), ConfigError);
}

TEST_CASE("reports and DOT are deterministic", "[pag]") {
  SystemModel m = fixtures::sealed_demo_model();
  Pag a = analyze(m, 2, fixtures::demo_initial_config());
  Pag b = analyze(m, 2, fixtures::demo_initial_config());
  CHECK(degradation_report(m, a).dump(2) == degradation_report(m, b).dump(2));
  CHECK(to_dot(a) == to_dot(b));
}

TEST_CASE("DOT follows the labeling convention", "[pag]") {
  SystemModel m = fixtures::sealed_demo_model();
  Pag pag = analyze(m, 1, fixtures::demo_initial_config());
  std::string dot = to_dot(pag);

  CHECK(dot.find("digraph pag {") != std::string::npos);
  CHECK(dot.find("e1 e2 e3 e4") != std::string::npos);  // vertex label: alive ids
  CHECK(dot.find("P=40") != std::string::npos);
  CHECK(dot.find("P=29") != std::string::npos);
  CHECK(dot.find("lost: f3") != std::string::npos);
  CHECK(dot.find("[label=\"e1\"]") != std::string::npos);  // isolation edge
  CHECK(dot.find("[label=\"R\"]") != std::string::npos);   // red supply loss
  CHECK(dot.find("[label=\"B\"]") != std::string::npos);

  // unresolved graphs carry no sums
  std::string bare = to_dot(build_pag(m, 1));
  CHECK(bare.find("P=") == std::string::npos);
}

TEST_CASE("degradation_report requires a resolved graph", "[pag]") {
  SystemModel m = fixtures::sealed_demo_model();
  Pag pag = build_pag(m, 1);
  CHECK_THROWS_AS(degradation_report(m, pag), std::invalid_argument);
  CHECK(pag_to_json(pag)["vertices"].size() == 7);
}
