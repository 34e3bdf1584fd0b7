#include <catch2/catch_amalgamated.hpp>

#include "failop/failop.hpp"
#include "support/fixtures.hpp"
#include "support/smtlib_eval.hpp"

using namespace failop;

namespace {

// Boolean assignment the emitted script's variables take under a config.
smteval::Env assignment_for(const SystemModel& m, const DeploymentConfig& config) {
  smteval::Env env;
  for (const auto& sc : m.clusters) {
    const ClusterPlacement* p = config.find(sc.id);
    for (auto ni : m.central_by_id) {
      const std::string& e = m.nodes[ni].id;
      env["act_" + sc.id + "_" + e] = p && p->allocated.count(e) ? 1 : 0;
      env["master_" + sc.id + "_" + e] = p && p->master == e ? 1 : 0;
      env["slave_" + sc.id + "_" + e] = p && p->slave == e ? 1 : 0;
    }
  }
  return env;
}

// Two-node platform, one hot fail-operational cluster and one plain one;
// small enough for exhaustive evaluation of the emitted scripts.
SystemModel tiny_model(PowerSupply second_supply, Micros budget1 = 2000, Micros budget2 = 2000) {
  SystemModel m;
  m.frt = 50'000;
  auto aswc = [&](const char* id, int asil, int fail_op, Micros wcet, Micros min_ftt,
                  const char* fid) {
    Aswc s;
    s.id = id;
    s.asil = asil;
    s.fail_op = fail_op;
    s.wcet = wcet;
    s.min_ftt = min_ftt;
    s.features = {fid};
    m.aswcs.push_back(std::move(s));
    Feature f;
    f.id = fid;
    f.realized_by = {id};
    m.features.push_back(std::move(f));
  };
  aswc("a1", 4, 1, 900, 20'000, "f1");
  aswc("a2", 1, 0, 800, 100'000, "f2");

  auto node = [&](const char* id, Micros budget, PowerSupply supply) {
    ExecutionNode e;
    e.id = id;
    e.kind = NodeKind::central;
    e.total_time_budget = budget;
    e.power_supply = supply;
    m.nodes.push_back(std::move(e));
  };
  node("n1", budget1, PowerSupply::red);
  node("n2", budget2, second_supply);
  auto vs = validate_model(m);
  REQUIRE(vs.empty());
  return m;
}

void check_script_matches_native(const SolveRequest& req, int lo, int hi) {
  for (int target = lo; target <= hi; ++target) {
    std::string script = emit_smtlib(req, target);
    smteval::Script sc = smteval::load(script);
    CAPTURE(target, script);
    bool script_sat = smteval::satisfiable_by_enumeration(sc);
    bool native_sat = satisfiable(req, target);
    CHECK(script_sat == native_sat);
  }
}

}  // namespace

TEST_CASE("emitted script declares the placement variables", "[smtlib]") {
  SystemModel m = fixtures::sealed_demo_model();
  SolveRequest req;
  req.model = &m;
  std::string script = emit_smtlib(req, 40);

  for (const char* cluster : {"sc1", "sc2", "sc3", "sc4", "sc5"})
    for (const char* node : {"e1", "e2", "e3", "e4"})
      for (const char* kind : {"act", "master", "slave"}) {
        std::string decl = std::string("(declare-const ") + kind + "_" + cluster + "_" + node +
                           " Bool)";
        INFO(decl);
        CHECK(script.find(decl) != std::string::npos);
      }
  CHECK(script.find("(declare-const prio_sum Int)") != std::string::npos);
  CHECK(script.find("(assert (>= prio_sum 40))") != std::string::npos);
  CHECK(script.find("(check-sat)") != std::string::npos);

  smteval::Script parsed = smteval::load(script);
  CHECK(parsed.bool_vars.size() == 5 * 4 * 3);
  CHECK(parsed.has_check_sat);
}

TEST_CASE("the solver's deployment satisfies the emitted script", "[smtlib]") {
  SystemModel m = fixtures::sealed_demo_model();

  SECTION("initial deployment at the optimal target") {
    SolveRequest req;
    req.model = &m;
    SolveResult r = solve(req);
    smteval::Script sc = smteval::load(emit_smtlib(req, 40));
    CHECK(smteval::holds(sc, assignment_for(m, r.config)));
    // and fails the unreachable target
    smteval::Script above = smteval::load(emit_smtlib(req, 41));
    CHECK_FALSE(smteval::holds(above, assignment_for(m, r.config)));
  }

  SECTION("follow-up deployment after isolating e1") {
    SolveRequest req;
    req.model = &m;
    req.previous = fixtures::demo_initial_config();
    req.scenario = fixtures::isolate({"e1"}, 1);
    SolveResult r = solve(req);
    REQUIRE(r.priority_sum == 29);
    smteval::Script sc = smteval::load(emit_smtlib(req, 29));
    CHECK(smteval::holds(sc, assignment_for(m, r.config)));
    smteval::Script sc30 = smteval::load(emit_smtlib(req, 30));
    CHECK_FALSE(smteval::holds(sc30, assignment_for(m, r.config)));
    // the hand-written initial deployment satisfies the root problem
    SolveRequest root;
    root.model = &m;
    smteval::Script root_sc = smteval::load(emit_smtlib(root, 40));
    CHECK(smteval::holds(root_sc, assignment_for(m, fixtures::demo_initial_config())));
  }
}

TEST_CASE("script satisfiability equals native satisfiability (exhaustive)", "[smtlib]") {
  SECTION("diverse supplies") {
    SystemModel m = tiny_model(PowerSupply::blue);
    SolveRequest req;
    req.model = &m;
    check_script_matches_native(req, 0, max_priority_cap(m, req.scenario) + 1);
  }

  SECTION("single supply disables slaves via diversity") {
    SystemModel m = tiny_model(PowerSupply::red);
    SolveRequest req;
    req.model = &m;
    check_script_matches_native(req, 0, max_priority_cap(m, req.scenario) + 1);
  }

  SECTION("tight budget forces deactivation") {
    SystemModel m = tiny_model(PowerSupply::blue, 1000, 1000);
    SolveRequest req;
    req.model = &m;
    check_script_matches_native(req, 0, max_priority_cap(m, req.scenario) + 1);
  }

  SECTION("follow-up with frozen allocations") {
    SystemModel m = tiny_model(PowerSupply::blue);
    SolveRequest initial;
    initial.model = &m;
    SolveResult r = solve(initial);

    SolveRequest follow;
    follow.model = &m;
    follow.previous = r.config;
    follow.scenario = fixtures::isolate({"n1"}, 1);
    check_script_matches_native(follow, 0, max_priority_cap(m, follow.scenario) + 1);
  }

  SECTION("cold-standby cluster") {
    SystemModel m = tiny_model(PowerSupply::blue);
    // lift min_ftt above the recovery time: slave becomes a cold one
    SystemModel cold = m;
    cold.aswcs[0].min_ftt = 80'000;
    cold.clusters.clear();
    cold.sealed = false;
    REQUIRE(validate_model(cold).empty());
    SolveRequest req;
    req.model = &cold;
    check_script_matches_native(req, 0, max_priority_cap(cold, req.scenario) + 1);
  }
}

TEST_CASE("follow-up script freezes allocations and forces promotion", "[smtlib]") {
  SystemModel m = fixtures::sealed_demo_model();
  SolveRequest req;
  req.model = &m;
  req.previous = fixtures::demo_initial_config();
  req.scenario = fixtures::isolate({"e1"}, 1);
  std::string script = emit_smtlib(req, 29);

  // sc1 was only allocated on e4; everything else is pinned false
  CHECK(script.find("(assert act_sc1_e4)") != std::string::npos);
  CHECK(script.find("(assert (not act_sc1_e1))") != std::string::npos);
  CHECK(script.find("(assert (not act_sc1_e2))") != std::string::npos);
  // sc4's master lost on e1, hot slave on e2 survives: master pinned to e2
  CHECK(script.find("(assert (not master_sc4_e3))") != std::string::npos);
  CHECK(script.find("(assert (not master_sc4_e4))") != std::string::npos);
  CHECK(script.find("(assert (not master_sc4_e2))") == std::string::npos);
}
