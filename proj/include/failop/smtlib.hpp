#pragma once

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "failop/config.hpp"
#include "failop/model.hpp"
#include "failop/solver.hpp"

namespace failop {

namespace detail {

inline std::string smt_ident(const std::string& id) {
  std::string out;
  for (char c : id)
    out += (std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

inline std::string smt_sum(const std::vector<std::string>& terms) {
  if (terms.empty()) return "0";
  if (terms.size() == 1) return terms[0];
  std::string s = "(+";
  for (const auto& t : terms) s += " " + t;
  return s + ")";
}

inline std::string smt_or(const std::vector<std::string>& terms) {
  if (terms.empty()) return "false";
  if (terms.size() == 1) return terms[0];
  std::string s = "(or";
  for (const auto& t : terms) s += " " + t;
  return s + ")";
}

}  // namespace detail

/// Emits the deployment problem as a self-contained SMT-LIB 2 script over
/// booleans and integers, asserting that the priority sum reaches
/// target_sum. One boolean per (cluster, central node) for allocation,
/// master and slave roles; peripheral nodes carry no variables. The
/// script's sat/unsat verdict agrees with satisfiable(request, target_sum).
inline std::string emit_smtlib(const SolveRequest& request, int target_sum) {
  if (!request.model || !request.model->sealed)
    throw std::invalid_argument("emit_smtlib: model not validated");
  const SystemModel& model = *request.model;
  const FaultScenario& scenario = request.scenario;

  struct Node {
    std::string id, sym;
    Micros budget;
    PowerSupply supply;
    bool alive;
  };
  std::vector<Node> nodes;
  for (auto ni : model.central_by_id) {
    const ExecutionNode& e = model.nodes[ni];
    nodes.push_back({e.id, detail::smt_ident(e.id), e.total_time_budget, e.power_supply,
                     !scenario.is_isolated(e.id)});
  }

  std::ostringstream out;
  out << "(set-logic QF_LIA)\n";
  out << "; deployment validity at priority-sum target " << target_sum << "\n";
  out << "; fault state: " << scenario.isolated_nodes.size() << " isolated node(s), fault_count "
      << scenario.fault_count << (request.previous ? ", follow-up" : ", initial") << "\n";

  auto var = [](const char* kind, const std::string& c, const std::string& e) {
    return std::string(kind) + "_" + c + "_" + e;
  };

  for (auto ci : model.clusters_by_id) {
    const AswcCluster& sc = model.clusters[ci];
    std::string c = detail::smt_ident(sc.id);
    for (const auto& n : nodes) {
      out << "(declare-const " << var("act", c, n.sym) << " Bool)\n";
      out << "(declare-const " << var("master", c, n.sym) << " Bool)\n";
      out << "(declare-const " << var("slave", c, n.sym) << " Bool)\n";
    }
  }
  out << "(declare-const prio_sum Int)\n";

  std::vector<std::string> sum_terms;

  for (auto ci : model.clusters_by_id) {
    const AswcCluster& sc = model.clusters[ci];
    std::string c = detail::smt_ident(sc.id);
    SlaveMode mode = sc.hot_standby_slave_req ? SlaveMode::hot : SlaveMode::cold;
    bool may_slave = slave_allowed(sc, scenario, mode);
    const ClusterPlacement* prev = request.previous ? request.previous->find(sc.id) : nullptr;

    out << "; cluster " << sc.id << ": wcets " << sc.sum_wcets << " us, master "
        << sc.prio_master() << " pts, " << to_string(mode) << " slave "
        << (mode == SlaveMode::hot ? sc.prio_hot_slave() : 0) << " pts\n";

    std::vector<std::string> master_vars, slave_vars, master_count, slave_count, act_count;
    for (const auto& n : nodes) {
      master_vars.push_back(var("master", c, n.sym));
      slave_vars.push_back(var("slave", c, n.sym));
      master_count.push_back("(ite " + var("master", c, n.sym) + " 1 0)");
      slave_count.push_back("(ite " + var("slave", c, n.sym) + " 1 0)");
      act_count.push_back("(ite " + var("act", c, n.sym) + " 1 0)");
      out << "(assert (=> " << var("master", c, n.sym) << " " << var("act", c, n.sym) << "))\n";
      out << "(assert (=> " << var("slave", c, n.sym) << " " << var("act", c, n.sym) << "))\n";
      out << "(assert (not (and " << var("master", c, n.sym) << " " << var("slave", c, n.sym)
          << ")))\n";
    }
    out << "(assert (<= " << detail::smt_sum(master_count) << " 1))\n";
    out << "(assert (<= " << detail::smt_sum(slave_count) << " 1))\n";
    out << "(assert (=> " << detail::smt_or(slave_vars) << " " << detail::smt_or(master_vars)
        << "))\n";

    // no activation on isolated nodes; a cold slave is passive
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].alive) continue;
      out << "(assert (not " << master_vars[i] << "))\n";
      if (mode == SlaveMode::hot) out << "(assert (not " << slave_vars[i] << "))\n";
    }

    // master and slave on different power supplies
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = 0; j < nodes.size(); ++j)
        if (i != j && nodes[i].supply == nodes[j].supply)
          out << "(assert (not (and " << master_vars[i] << " " << slave_vars[j] << ")))\n";

    if (!may_slave)
      for (const auto& sv : slave_vars) out << "(assert (not " << sv << "))\n";

    if (!request.previous) {
      // prescribed allocation count, supply spread for fail-operational clusters
      std::size_t want = required_alloc_count(sc, model);
      out << "(assert (= " << detail::smt_sum(act_count) << " " << want << "))\n";
      if (sc.fail_op >= 1 && model.both_supplies_present) {
        for (PowerSupply supply : {PowerSupply::red, PowerSupply::blue}) {
          std::vector<std::string> of_supply;
          for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].supply == supply) of_supply.push_back(var("act", c, nodes[i].sym));
          out << "(assert " << detail::smt_or(of_supply) << ")\n";
        }
      }
    } else {
      // allocations frozen: previous minus isolated
      for (const auto& n : nodes) {
        bool keep = prev && prev->allocated.count(n.id) && n.alive;
        out << "(assert " << (keep ? var("act", c, n.sym) : "(not " + var("act", c, n.sym) + ")")
            << ")\n";
      }
      // lost master hands over to the surviving hot slave
      if (prev && prev->master && scenario.is_isolated(*prev->master) &&
          prev->slave_mode == SlaveMode::hot && prev->slave && !scenario.is_isolated(*prev->slave)) {
        for (const auto& n : nodes)
          if (n.id != *prev->slave)
            out << "(assert (not " << var("master", c, n.sym) << "))\n";
      }
    }

    for (const auto& n : nodes) {
      sum_terms.push_back("(ite " + var("master", c, n.sym) + " " +
                          std::to_string(sc.prio_master()) + " 0)");
      if (mode == SlaveMode::hot)
        sum_terms.push_back("(ite " + var("slave", c, n.sym) + " " +
                            std::to_string(sc.prio_hot_slave()) + " 0)");
    }
  }

  // per-node execution budget over active instances
  for (const auto& n : nodes) {
    if (!n.alive) continue;
    std::vector<std::string> load;
    for (auto ci : model.clusters_by_id) {
      const AswcCluster& sc = model.clusters[ci];
      std::string c = detail::smt_ident(sc.id);
      load.push_back("(ite " + var("master", c, n.sym) + " " + std::to_string(sc.sum_wcets) +
                     " 0)");
      if (sc.hot_standby_slave_req)
        load.push_back("(ite " + var("slave", c, n.sym) + " " + std::to_string(sc.sum_wcets) +
                       " 0)");
    }
    out << "; budget of node " << n.id << "\n";
    out << "(assert (<= " << detail::smt_sum(load) << " " << n.budget << "))\n";
  }

  out << "(assert (= prio_sum " << detail::smt_sum(sum_terms) << "))\n";
  out << "(assert (>= prio_sum " << target_sum << "))\n";
  out << "(check-sat)\n";
  return out.str();
}

}  // namespace failop
