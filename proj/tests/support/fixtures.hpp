#pragma once

// The shared demo platform: 5 features realized by 8 ASWCs on a
// four-node duplex platform (two nodes per power supply, 4000 us budget
// each), plus a hand-written valid initial deployment for it.

#include <stdexcept>

#include "failop/failop.hpp"

namespace fixtures {

inline failop::SystemModel demo_model() {
  using namespace failop;
  SystemModel m;
  m.frt = 50'000;

  auto feature = [&](const char* id, const char* name, std::vector<std::string> by) {
    Feature f;
    f.id = id;
    f.name = name;
    f.realized_by = std::move(by);
    m.features.push_back(std::move(f));
  };
  feature("f1", "Infotainment", {"s1"});
  feature("f2", "EnergyManagement", {"s2", "s3"});
  feature("f3", "AssistA", {"s4", "s5"});
  feature("f4", "AssistB", {"s5"});
  feature("f5", "ManualDriving", {"s6", "s7", "s8"});

  auto aswc = [&](const char* id, const char* name, Micros wcet, int asil, int fail_op,
                  Micros min_ftt, std::vector<std::string> fs) {
    Aswc s;
    s.id = id;
    s.name = name;
    s.wcet = wcet;
    s.asil = asil;
    s.fail_op = fail_op;
    s.min_ftt = min_ftt;
    s.features = std::move(fs);
    m.aswcs.push_back(std::move(s));
  };
  aswc("s1", "Infotainment", 2000, 0, 0, 100'000, {"f1"});
  aswc("s2", "RangeEstimation", 700, 1, 0, 100'000, {"f2"});
  aswc("s3", "EfficiencyAssistant", 300, 1, 0, 100'000, {"f2"});
  aswc("s4", "DriverAssist1", 1700, 3, 0, 100'000, {"f3"});
  aswc("s5", "DriverAssist2", 1000, 4, 1, 20'000, {"f3", "f4"});
  aswc("s6", "ManualAccelerate", 1000, 4, 3, 20'000, {"f5"});
  aswc("s7", "ManualBrake", 1000, 4, 3, 20'000, {"f5"});
  aswc("s8", "ManualSteer", 500, 4, 3, 20'000, {"f5"});

  auto node = [&](const char* id, const char* name, PowerSupply supply) {
    ExecutionNode e;
    e.id = id;
    e.name = name;
    e.kind = NodeKind::central;
    e.total_time_budget = 4000;
    e.power_supply = supply;
    m.nodes.push_back(std::move(e));
  };
  node("e1", "DCC1", PowerSupply::red);
  node("e2", "DCC2", PowerSupply::blue);
  node("e3", "DCC3", PowerSupply::red);
  node("e4", "DCC4", PowerSupply::blue);
  return m;
}

inline failop::SystemModel sealed_demo_model() {
  failop::SystemModel m = demo_model();
  auto violations = failop::validate_model(m);
  if (!violations.empty()) throw std::logic_error("demo model failed validation");
  return m;
}

/// A valid initial deployment with priority sum 40: masters everywhere,
/// hot slaves for sc4 and sc5, supply-diverse master/slave pairs.
inline failop::DeploymentConfig demo_initial_config() {
  using namespace failop;
  DeploymentConfig config;
  auto place = [&](const char* cluster, std::set<std::string> alloc, const char* master,
                   const char* slave, SlaveMode mode) {
    ClusterPlacement p;
    p.cluster_id = cluster;
    p.allocated = std::move(alloc);
    if (master) p.master = master;
    if (slave) p.slave = slave;
    p.slave_mode = mode;
    config.placements.push_back(std::move(p));
  };
  place("sc1", {"e4"}, "e4", nullptr, SlaveMode::none);
  place("sc2", {"e4"}, "e4", nullptr, SlaveMode::none);
  place("sc3", {"e3"}, "e3", nullptr, SlaveMode::none);
  place("sc4", {"e1", "e2"}, "e1", "e2", SlaveMode::hot);
  place("sc5", {"e1", "e2", "e3", "e4"}, "e2", "e1", SlaveMode::hot);
  config.priority_sum = 40;
  return config;
}

inline failop::FaultScenario isolate(std::set<std::string> nodes, int fault_count) {
  failop::FaultScenario s;
  s.isolated_nodes = std::move(nodes);
  s.fault_count = fault_count;
  return s;
}

}  // namespace fixtures
