#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "failop/config.hpp"
#include "failop/model.hpp"
#include "failop/violation.hpp"

namespace failop {

/// Required allocation count for a cluster: one in-memory copy per
/// survivable fault plus the master, capped by the platform size.
inline std::size_t required_alloc_count(const AswcCluster& cluster, const SystemModel& model) {
  return std::min<std::size_t>(static_cast<std::size_t>(cluster.fail_op) + 1, model.central_count());
}

/// Execution-time demand on one node: the sum of sum_wcets over clusters
/// actively placed there (master or hot slave). Passive copies and cold
/// slaves cost nothing. Throws std::invalid_argument for unknown or
/// peripheral nodes.
inline Micros used_time_budget(const SystemModel& model, const DeploymentConfig& config,
                               const std::string& node_id) {
  const ExecutionNode* node = model.find_node(node_id);
  if (!node) throw std::invalid_argument("unknown node '" + node_id + "'");
  if (node->kind != NodeKind::central)
    throw std::invalid_argument("node '" + node_id + "' is not a central node");
  Micros used = 0;
  for (const auto& p : config.placements) {
    const AswcCluster* sc = model.find_cluster(p.cluster_id);
    if (!sc) continue;
    if (p.active_nodes().count(node_id)) used += sc->sum_wcets;
  }
  return used;
}

/// Objective value of a deployment: every present master earns its
/// cluster's master points, every present hot slave its hot-slave points.
inline int compute_priority_sum(const SystemModel& model, const DeploymentConfig& config) {
  int sum = 0;
  for (const auto& p : config.placements) {
    const AswcCluster* sc = model.find_cluster(p.cluster_id);
    if (!sc) continue;
    if (p.master_present()) sum += sc->prio_master();
    if (p.hot_slave_present()) sum += sc->prio_hot_slave();
  }
  return sum;
}

/// A feature is provided iff every ASWC realizing it sits in a cluster
/// whose master is established.
inline std::map<std::string, bool> feature_availability(const SystemModel& model,
                                                        const DeploymentConfig& config) {
  std::map<std::string, bool> out;
  for (const auto& f : model.features) {
    bool provided = true;
    for (const auto& sid : f.realized_by) {
      const AswcCluster* sc = model.cluster_of_aswc(sid);
      const ClusterPlacement* p = sc ? config.find(sc->id) : nullptr;
      if (!p || !p->master_present()) {
        provided = false;
        break;
      }
    }
    out[f.id] = provided;
  }
  return out;
}

namespace detail {

inline std::string join_ids(const std::set<std::string>& ids) {
  std::string s = "{";
  for (const auto& id : ids) s += (s.size() > 1 ? "," : "") + id;
  return s + "}";
}

}  // namespace detail

/// Checks a deployment against the full constraint catalog for the given
/// fault state and returns every violated rule. `previous` switches the
/// allocation rules: without it the configuration is an initial one
/// (allocation counts are prescribed), with it allocations must equal the
/// previous ones minus the isolated nodes and a lost master must hand
/// over to a surviving hot slave.
inline std::vector<Violation> check_config(const SystemModel& model, const FaultScenario& scenario,
                                           const DeploymentConfig& config,
                                           const DeploymentConfig* previous = nullptr) {
  std::vector<Violation> out;

  // Reference errors first; the catalog checks need resolvable ids.
  std::set<std::string> seen_clusters;
  for (const auto& p : config.placements) {
    if (!model.find_cluster(p.cluster_id)) {
      out.push_back({ViolationCode::DANGLING_REF, p.cluster_id, "",
                     "placement references unknown cluster '" + p.cluster_id + "'"});
      continue;
    }
    if (!seen_clusters.insert(p.cluster_id).second)
      out.push_back({ViolationCode::DUPLICATE_ID, p.cluster_id, "",
                     "more than one placement for cluster '" + p.cluster_id + "'"});
    auto check_node = [&](const std::string& nid, const char* role) {
      if (!model.find_node(nid))
        out.push_back({ViolationCode::DANGLING_REF, p.cluster_id, nid,
                       std::string(role) + " references unknown node '" + nid + "'"});
    };
    for (const auto& nid : p.allocated) check_node(nid, "allocation");
    if (p.master) check_node(*p.master, "master");
    if (p.slave) check_node(*p.slave, "slave");
  }
  for (const auto& nid : scenario.isolated_nodes)
    if (!model.find_node(nid))
      out.push_back({ViolationCode::DANGLING_REF, "", nid,
                     "scenario references unknown node '" + nid + "'"});
  if (!out.empty()) return out;

  static const ClusterPlacement kEmpty{};
  auto placement_for = [&](const AswcCluster& sc) -> const ClusterPlacement& {
    const ClusterPlacement* p = config.find(sc.id);
    return p ? *p : kEmpty;
  };

  for (auto ci : model.clusters_by_id) {
    const AswcCluster& sc = model.clusters[ci];
    const ClusterPlacement& p = placement_for(sc);

    // structural placement invariants
    if (p.master && !p.allocated.count(*p.master))
      out.push_back({ViolationCode::PLACEMENT_INVALID, sc.id, *p.master,
                     "master node not in allocation set"});
    if (p.slave && !p.allocated.count(*p.slave))
      out.push_back({ViolationCode::PLACEMENT_INVALID, sc.id, *p.slave,
                     "slave node not in allocation set"});
    if (p.master && p.slave && *p.master == *p.slave)
      out.push_back({ViolationCode::PLACEMENT_INVALID, sc.id, *p.master,
                     "master and slave on the same node"});
    if (p.slave.has_value() != (p.slave_mode != SlaveMode::none))
      out.push_back({ViolationCode::PLACEMENT_INVALID, sc.id, "",
                     p.slave ? "slave node set but slave_mode is none"
                             : "slave_mode set but no slave node"});
    if (p.slave && !p.master)
      out.push_back({ViolationCode::PLACEMENT_INVALID, sc.id, *p.slave,
                     "slave present without a master"});

    // ACTIVE_ON_ISOLATED
    for (const auto& nid : p.active_nodes())
      if (scenario.is_isolated(nid))
        out.push_back({ViolationCode::ACTIVE_ON_ISOLATED, sc.id, nid,
                       "cluster is active on isolated node '" + nid + "'"});

    // SUPPLY_DIVERSITY: applies to both slave modes, so a cold slave
    // also survives a supply loss.
    if (p.master && p.slave) {
      const ExecutionNode* m = model.find_node(*p.master);
      const ExecutionNode* s = model.find_node(*p.slave);
      if (m && s && m->power_supply == s->power_supply)
        out.push_back({ViolationCode::SUPPLY_DIVERSITY, sc.id, "",
                       "master on '" + *p.master + "' and slave on '" + *p.slave +
                           "' share the " + to_string(m->power_supply) + " supply"});
    }

    // SLAVE_NOT_ALLOWED: cluster-level allowance; the mode itself is
    // policed by SLAVE_MODE_MISMATCH
    if (p.slave && !slave_allowed(sc, scenario))
      out.push_back({ViolationCode::SLAVE_NOT_ALLOWED, sc.id, *p.slave,
                     "slave not allowed at fault_count " + std::to_string(scenario.fault_count) +
                         " (fail_op " + std::to_string(sc.fail_op) + ")"});

    // SLAVE_MODE_MISMATCH
    if (p.slave && p.slave_mode == SlaveMode::hot && !sc.hot_standby_slave_req)
      out.push_back({ViolationCode::SLAVE_MODE_MISMATCH, sc.id, "",
                     "hot slave for a cluster that requires none"});
    if (p.slave && p.slave_mode == SlaveMode::cold && sc.hot_standby_slave_req)
      out.push_back({ViolationCode::SLAVE_MODE_MISMATCH, sc.id, "",
                     "cold slave for a cluster that requires a hot one"});

    // ALLOC_ON_PERIPHERAL
    for (const auto& nid : p.allocated) {
      const ExecutionNode* e = model.find_node(nid);
      if (e && e->kind != NodeKind::central)
        out.push_back({ViolationCode::ALLOC_ON_PERIPHERAL, sc.id, nid,
                       "allocation on peripheral node '" + nid + "'"});
    }

    if (!previous) {
      // ALLOC_COUNT: prescribed size, plus supply spread for
      // fail-operational clusters so a future slave can stay diverse.
      std::size_t want = required_alloc_count(sc, model);
      if (p.allocated.size() != want)
        out.push_back({ViolationCode::ALLOC_COUNT, sc.id, "",
                       "allocation " + detail::join_ids(p.allocated) + " has " +
                           std::to_string(p.allocated.size()) + " nodes, required " +
                           std::to_string(want)});
      if (sc.fail_op >= 1 && model.both_supplies_present) {
        bool red = false, blue = false;
        for (const auto& nid : p.allocated) {
          const ExecutionNode* e = model.find_node(nid);
          if (e && e->kind == NodeKind::central)
            (e->power_supply == PowerSupply::red ? red : blue) = true;
        }
        if (!red || !blue)
          out.push_back({ViolationCode::ALLOC_COUNT, sc.id, "",
                         "allocation " + detail::join_ids(p.allocated) +
                             " must cover both power supplies"});
      }
    } else {
      // CONTINUITY_ALLOC: allocations are frozen across a transition;
      // only isolations remove copies.
      const ClusterPlacement* pp = previous->find(sc.id);
      std::set<std::string> want;
      if (pp)
        for (const auto& nid : pp->allocated)
          if (!scenario.is_isolated(nid)) want.insert(nid);
      if (p.allocated != want)
        out.push_back({ViolationCode::CONTINUITY_ALLOC, sc.id, "",
                       "allocation " + detail::join_ids(p.allocated) + " differs from previous minus isolated " +
                           detail::join_ids(want)});

      // PROMOTION: a master lost to isolation hands over to the
      // surviving hot slave; dropping the master entirely stays legal.
      if (pp && pp->master && scenario.is_isolated(*pp->master) && pp->slave_mode == SlaveMode::hot &&
          pp->slave && !scenario.is_isolated(*pp->slave) && p.master && *p.master != *pp->slave)
        out.push_back({ViolationCode::PROMOTION, sc.id, *p.master,
                       "master must move to surviving hot slave node '" + *pp->slave + "'"});
    }
  }

  // BUDGET_EXCEEDED on non-isolated central nodes
  for (auto ni : model.central_by_id) {
    const ExecutionNode& e = model.nodes[ni];
    if (scenario.is_isolated(e.id)) continue;
    Micros used = used_time_budget(model, config, e.id);
    if (used > e.total_time_budget)
      out.push_back({ViolationCode::BUDGET_EXCEEDED, "", e.id,
                     "used " + std::to_string(used) + " us > total " +
                         std::to_string(e.total_time_budget) + " us"});
  }

  return out;
}

}  // namespace failop
