#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "failop/model.hpp"

namespace failop {

enum class SlaveMode { none, hot, cold };

inline const char* to_string(SlaveMode m) {
  switch (m) {
    case SlaveMode::none: return "none";
    case SlaveMode::hot: return "hot";
    case SlaveMode::cold: return "cold";
  }
  return "none";
}

/// Per-cluster placement: the allocation set (in-memory copies) plus the
/// designated master and slave. Active nodes are the master and, for hot
/// slaves, the slave; everything else in the allocation is passive.
struct ClusterPlacement {
  std::string cluster_id;
  std::set<std::string> allocated;
  std::optional<std::string> master;
  std::optional<std::string> slave;
  SlaveMode slave_mode = SlaveMode::none;

  bool master_present() const { return master.has_value(); }
  bool hot_slave_present() const { return slave.has_value() && slave_mode == SlaveMode::hot; }

  std::set<std::string> active_nodes() const {
    std::set<std::string> a;
    if (master) a.insert(*master);
    if (hot_slave_present()) a.insert(*slave);
    return a;
  }
  std::set<std::string> passive_nodes() const {
    std::set<std::string> p = allocated;
    for (const auto& n : active_nodes()) p.erase(n);
    return p;
  }

  bool operator==(const ClusterPlacement&) const = default;
};

/// Whether a cluster may carry a slave of the given mode in the given
/// fault state. A hot slave needs the hot-standby requirement and a
/// remaining fail-operational obligation; a cold slave needs a
/// fail-operational cluster whose recovery-time headroom rules the hot
/// variant out, again with obligation remaining. Once fault_count
/// reaches fail_op the surviving master alone satisfies the requirement.
inline bool slave_allowed(const AswcCluster& cluster, const FaultScenario& scenario, SlaveMode mode) {
  switch (mode) {
    case SlaveMode::hot:
      return cluster.hot_standby_slave_req && cluster.fail_op > scenario.fault_count;
    case SlaveMode::cold:
      return cluster.fail_op > 0 && !cluster.hot_standby_slave_req &&
             cluster.fail_op > scenario.fault_count;
    case SlaveMode::none:
      return false;
  }
  return false;
}

/// Mode-agnostic form: may the cluster carry the slave type its
/// properties call for?
inline bool slave_allowed(const AswcCluster& cluster, const FaultScenario& scenario) {
  return slave_allowed(cluster, scenario,
                       cluster.hot_standby_slave_req ? SlaveMode::hot : SlaveMode::cold);
}

/// A complete deployment: one placement per cluster, ordered by cluster id.
/// priority_sum caches the objective value; recompute with
/// compute_priority_sum to cross-check.
struct DeploymentConfig {
  std::vector<ClusterPlacement> placements;
  int priority_sum = 0;

  const ClusterPlacement* find(const std::string& cluster_id) const {
    for (const auto& p : placements)
      if (p.cluster_id == cluster_id) return &p;
    return nullptr;
  }
  ClusterPlacement* find(const std::string& cluster_id) {
    for (auto& p : placements)
      if (p.cluster_id == cluster_id) return &p;
    return nullptr;
  }

  void sort_by_cluster() {
    std::sort(placements.begin(), placements.end(),
              [](const ClusterPlacement& a, const ClusterPlacement& b) {
                return a.cluster_id < b.cluster_id;
              });
  }

  bool operator==(const DeploymentConfig&) const = default;
};

}  // namespace failop
