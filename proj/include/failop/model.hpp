#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "failop/violation.hpp"

namespace failop {

/// All durations are integral microseconds.
using Micros = std::int64_t;

constexpr Micros kDefaultFrtUs = 50'000;

/// Safety integrity levels, encoded 0..4 (0 = QM, 1..4 = A..D).
constexpr int kAsilQm = 0;
constexpr int kAsilD = 4;

enum class PowerSupply { red, blue };
enum class NodeKind { central, peripheral };

inline const char* to_string(PowerSupply s) { return s == PowerSupply::red ? "red" : "blue"; }
inline const char* to_string(NodeKind k) { return k == NodeKind::central ? "central" : "peripheral"; }

/// A user-recognizable vehicle feature, realized by one or more software
/// components.
struct Feature {
  std::string id;
  std::string name;
  std::vector<std::string> realized_by;  // ASWC ids, ordered
};

/// Application software component: the deployable unit contributing to
/// one or more features.
struct Aswc {
  std::string id;
  std::string name;
  Micros wcet = 0;     // worst-case execution time per cycle
  int asil = 0;        // 0..4
  int fail_op = 0;     // faults after which the component must still run
  Micros min_ftt = 0;  // smallest fault-tolerance time across safety goals
  std::vector<std::string> features;  // feature ids, ordered
};

/// Group of ASWCs sharing (asil, fail_op); the unit of deployment.
/// Derived fields are filled by derive_cluster_properties.
struct AswcCluster {
  std::string id;
  std::vector<std::string> members;  // ASWC ids, ordered
  int asil = 0;
  int fail_op = 0;
  Micros min_ftt = 0;
  Micros sum_wcets = 0;
  bool hot_standby_slave_req = false;
  // Optional explicit priorities from the input; defaults are derived.
  std::optional<int> prio_points_master;
  std::optional<int> prio_points_hot_slave;

  int prio_master() const { return prio_points_master.value_or(0); }
  int prio_hot_slave() const { return prio_points_hot_slave.value_or(0); }
};

struct ExecutionNode {
  std::string id;
  std::string name;
  NodeKind kind = NodeKind::central;
  Micros total_time_budget = 0;  // per-cycle execution budget; central only
  PowerSupply power_supply = PowerSupply::red;
};

/// Communication link between two nodes. Carried as data; no deployment
/// rule consumes it.
struct Link {
  std::string a;
  std::string b;
};

/// A fault state: the central nodes isolated so far and how many
/// fault-containment-region failures produced them.
struct FaultScenario {
  std::set<std::string> isolated_nodes;
  int fault_count = 0;

  bool is_isolated(const std::string& node_id) const {
    return isolated_nodes.count(node_id) > 0;
  }
};

/// The complete system description. Call validate_model once after
/// construction; a sealed model is immutable and safe to share across
/// threads.
struct SystemModel {
  std::vector<Feature> features;
  std::vector<Aswc> aswcs;
  std::vector<AswcCluster> clusters;  // explicit in input, or derived
  std::vector<ExecutionNode> nodes;
  std::vector<Link> links;
  Micros frt = kDefaultFrtUs;  // platform fault-recovery time

  // Filled by validate_model.
  bool sealed = false;
  std::unordered_map<std::string, std::size_t> feature_index;
  std::unordered_map<std::string, std::size_t> aswc_index;
  std::unordered_map<std::string, std::size_t> cluster_index;
  std::unordered_map<std::string, std::size_t> node_index;
  std::vector<std::size_t> central_by_id;  // central node indices, id ascending
  std::vector<std::size_t> clusters_by_id; // cluster indices, id ascending
  std::unordered_map<std::string, std::size_t> aswc_cluster_of;  // ASWC id -> cluster index
  bool both_supplies_present = false;      // among central nodes

  const Feature* find_feature(const std::string& id) const {
    auto it = feature_index.find(id);
    return it == feature_index.end() ? nullptr : &features[it->second];
  }
  const Aswc* find_aswc(const std::string& id) const {
    auto it = aswc_index.find(id);
    return it == aswc_index.end() ? nullptr : &aswcs[it->second];
  }
  const AswcCluster* find_cluster(const std::string& id) const {
    auto it = cluster_index.find(id);
    return it == cluster_index.end() ? nullptr : &clusters[it->second];
  }
  const ExecutionNode* find_node(const std::string& id) const {
    auto it = node_index.find(id);
    return it == node_index.end() ? nullptr : &nodes[it->second];
  }
  const AswcCluster* cluster_of_aswc(const std::string& aswc_id) const {
    auto it = aswc_cluster_of.find(aswc_id);
    return it == aswc_cluster_of.end() ? nullptr : &clusters[it->second];
  }
  std::size_t central_count() const { return central_by_id.size(); }
};

/// Groups ASWCs by (asil, fail_op). One cluster per non-empty group, ids
/// "sc1", "sc2", ... assigned in ascending order of first-member
/// appearance; members keep input order.
inline std::vector<AswcCluster> derive_clusters(const std::vector<Aswc>& aswcs) {
  std::vector<AswcCluster> out;
  std::map<std::pair<int, int>, std::size_t> group_of;  // (asil, fail_op) -> index in out
  for (const auto& s : aswcs) {
    auto key = std::make_pair(s.asil, s.fail_op);
    auto it = group_of.find(key);
    if (it == group_of.end()) {
      AswcCluster sc;
      sc.id = "sc" + std::to_string(out.size() + 1);
      sc.asil = s.asil;
      sc.fail_op = s.fail_op;
      out.push_back(std::move(sc));
      it = group_of.emplace(key, out.size() - 1).first;
    }
    out[it->second].members.push_back(s.id);
  }
  return out;
}

/// Fills the derived cluster fields from its members: asil/fail_op
/// (checked homogeneous), min_ftt = min over members, sum_wcets = sum,
/// hot_standby_slave_req = fail_op > 0 && min_ftt < frt, and the default
/// priorities master = asil + fail_op + 2, hot slave = asil + fail_op + 1
/// unless explicit values were supplied.
inline std::vector<Violation> derive_cluster_properties(AswcCluster& cluster,
                                                        const std::vector<const Aswc*>& members,
                                                        Micros frt) {
  std::vector<Violation> violations;
  if (members.empty()) {
    violations.push_back({ViolationCode::EMPTY_CLUSTER, cluster.id, "", "cluster has no members"});
    return violations;
  }
  cluster.asil = members.front()->asil;
  cluster.fail_op = members.front()->fail_op;
  cluster.min_ftt = members.front()->min_ftt;
  cluster.sum_wcets = 0;
  for (const Aswc* s : members) {
    if (s->asil != cluster.asil || s->fail_op != cluster.fail_op) {
      violations.push_back({ViolationCode::CLUSTER_NOT_HOMOGENEOUS, cluster.id, "",
                            "member " + s->id + " has (asil=" + std::to_string(s->asil) +
                                ", fail_op=" + std::to_string(s->fail_op) + "), cluster has (asil=" +
                                std::to_string(cluster.asil) + ", fail_op=" + std::to_string(cluster.fail_op) + ")"});
    }
    cluster.min_ftt = std::min(cluster.min_ftt, s->min_ftt);
    cluster.sum_wcets += s->wcet;
  }
  if (!violations.empty()) return violations;
  cluster.hot_standby_slave_req = cluster.fail_op > 0 && cluster.min_ftt < frt;
  if (!cluster.prio_points_master)
    cluster.prio_points_master = cluster.asil + cluster.fail_op + 2;
  if (!cluster.prio_points_hot_slave)
    cluster.prio_points_hot_slave = cluster.asil + cluster.fail_op + 1;
  return violations;
}

namespace detail {

inline void check_duration(std::vector<Violation>& out, Micros value, const std::string& what,
                           const std::string& cluster_id, const std::string& node_id) {
  if (value <= 0)
    out.push_back({ViolationCode::NON_POSITIVE_DURATION, cluster_id, node_id,
                   what + " = " + std::to_string(value) + " us, must be > 0"});
}

}  // namespace detail

/// Checks every model invariant and, when all hold, seals the model:
/// clusters are derived (if absent) or verified (if explicit), cluster
/// properties and index maps are filled. Returns every violation found;
/// the model is sealed iff the returned list is empty.
inline std::vector<Violation> validate_model(SystemModel& model) {
  std::vector<Violation> out;
  model.sealed = false;

  // id uniqueness
  auto check_unique = [&out](const auto& items, const char* what) {
    std::set<std::string> seen;
    for (const auto& item : items)
      if (!seen.insert(item.id).second)
        out.push_back({ViolationCode::DUPLICATE_ID, "", "",
                       std::string(what) + " id '" + item.id + "' appears more than once"});
  };
  check_unique(model.features, "feature");
  check_unique(model.aswcs, "aswc");
  check_unique(model.nodes, "node");
  check_unique(model.clusters, "cluster");

  std::set<std::string> feature_ids, aswc_ids, node_ids;
  for (const auto& f : model.features) feature_ids.insert(f.id);
  for (const auto& s : model.aswcs) aswc_ids.insert(s.id);
  for (const auto& e : model.nodes) node_ids.insert(e.id);

  detail::check_duration(out, model.frt, "frt", "", "");

  for (const auto& f : model.features) {
    if (f.realized_by.empty())
      out.push_back({ViolationCode::EMPTY_FEATURE, "", "", "feature '" + f.id + "' is realized by no aswc"});
    std::set<std::string> seen;
    for (const auto& sid : f.realized_by) {
      if (!aswc_ids.count(sid))
        out.push_back({ViolationCode::DANGLING_REF, "", "",
                       "feature '" + f.id + "' references unknown aswc '" + sid + "'"});
      if (!seen.insert(sid).second)
        out.push_back({ViolationCode::DUPLICATE_ID, "", "",
                       "feature '" + f.id + "' lists aswc '" + sid + "' twice"});
    }
  }

  for (const auto& s : model.aswcs) {
    detail::check_duration(out, s.wcet, "wcet of aswc '" + s.id + "'", "", "");
    detail::check_duration(out, s.min_ftt, "min_ftt of aswc '" + s.id + "'", "", "");
    if (s.asil < kAsilQm || s.asil > kAsilD)
      out.push_back({ViolationCode::ASIL_OUT_OF_RANGE, "", "",
                     "aswc '" + s.id + "' has asil " + std::to_string(s.asil) + ", expected 0..4"});
    if (s.fail_op < 0)
      out.push_back({ViolationCode::NEGATIVE_FAIL_OP, "", "",
                     "aswc '" + s.id + "' has fail_op " + std::to_string(s.fail_op)});
    std::set<std::string> seen;
    for (const auto& fid : s.features) {
      if (!feature_ids.count(fid))
        out.push_back({ViolationCode::DANGLING_REF, "", "",
                       "aswc '" + s.id + "' references unknown feature '" + fid + "'"});
      if (!seen.insert(fid).second)
        out.push_back({ViolationCode::DUPLICATE_ID, "", "",
                       "aswc '" + s.id + "' lists feature '" + fid + "' twice"});
    }
  }

  // chi consistency: s in realized_by(f) <=> f in features(s)
  for (const auto& f : model.features) {
    for (const auto& sid : f.realized_by) {
      if (!aswc_ids.count(sid)) continue;
      const auto& s = *std::find_if(model.aswcs.begin(), model.aswcs.end(),
                                    [&](const Aswc& a) { return a.id == sid; });
      if (std::find(s.features.begin(), s.features.end(), f.id) == s.features.end())
        out.push_back({ViolationCode::CHI_INCONSISTENT, "", "",
                       "feature '" + f.id + "' lists aswc '" + sid + "' but the aswc omits the feature"});
    }
  }
  for (const auto& s : model.aswcs) {
    for (const auto& fid : s.features) {
      if (!feature_ids.count(fid)) continue;
      const auto& f = *std::find_if(model.features.begin(), model.features.end(),
                                    [&](const Feature& x) { return x.id == fid; });
      if (std::find(f.realized_by.begin(), f.realized_by.end(), s.id) == f.realized_by.end())
        out.push_back({ViolationCode::CHI_INCONSISTENT, "", "",
                       "aswc '" + s.id + "' lists feature '" + fid + "' but the feature omits the aswc"});
    }
  }

  std::size_t central = 0;
  for (const auto& e : model.nodes) {
    if (e.kind == NodeKind::central) {
      ++central;
      detail::check_duration(out, e.total_time_budget, "total_time_budget of node '" + e.id + "'", "", e.id);
    }
  }
  if (central == 0)
    out.push_back({ViolationCode::NO_CENTRAL_NODE, "", "", "model has no central execution node"});
  if (central > 64)
    out.push_back({ViolationCode::NODE_LIMIT, "", "",
                   "model has " + std::to_string(central) + " central nodes, engine supports at most 64"});

  for (const auto& l : model.links) {
    if (!node_ids.count(l.a))
      out.push_back({ViolationCode::DANGLING_REF, "", "", "link references unknown node '" + l.a + "'"});
    if (!node_ids.count(l.b))
      out.push_back({ViolationCode::DANGLING_REF, "", "", "link references unknown node '" + l.b + "'"});
  }

  // explicit clusters: membership resolves, partition holds, priorities positive
  if (!model.clusters.empty()) {
    std::map<std::string, std::vector<std::string>> owner;  // aswc -> cluster ids
    for (const auto& sc : model.clusters) {
      if (sc.members.empty())
        out.push_back({ViolationCode::EMPTY_CLUSTER, sc.id, "", "cluster has no members"});
      for (const auto& sid : sc.members) {
        if (!aswc_ids.count(sid)) {
          out.push_back({ViolationCode::DANGLING_REF, sc.id, "",
                         "cluster '" + sc.id + "' references unknown aswc '" + sid + "'"});
          continue;
        }
        owner[sid].push_back(sc.id);
      }
      if (sc.prio_points_master && *sc.prio_points_master <= 0)
        out.push_back({ViolationCode::NON_POSITIVE_PRIORITY, sc.id, "",
                       "prio_points_master = " + std::to_string(*sc.prio_points_master)});
      if (sc.prio_points_hot_slave && *sc.prio_points_hot_slave <= 0)
        out.push_back({ViolationCode::NON_POSITIVE_PRIORITY, sc.id, "",
                       "prio_points_hot_slave = " + std::to_string(*sc.prio_points_hot_slave)});
    }
    for (const auto& s : model.aswcs) {
      auto it = owner.find(s.id);
      if (it == owner.end())
        out.push_back({ViolationCode::CLUSTER_PARTITION, "", "",
                       "aswc '" + s.id + "' belongs to no cluster"});
      else if (it->second.size() > 1) {
        std::string list;
        for (const auto& c : it->second) list += (list.empty() ? "" : ", ") + c;
        out.push_back({ViolationCode::CLUSTER_PARTITION, "", "",
                       "aswc '" + s.id + "' belongs to clusters " + list});
      }
    }
  }

  if (!out.empty()) return out;

  if (model.clusters.empty()) model.clusters = derive_clusters(model.aswcs);

  // index maps
  model.feature_index.clear();
  model.aswc_index.clear();
  model.cluster_index.clear();
  model.node_index.clear();
  model.aswc_cluster_of.clear();
  for (std::size_t i = 0; i < model.features.size(); ++i) model.feature_index[model.features[i].id] = i;
  for (std::size_t i = 0; i < model.aswcs.size(); ++i) model.aswc_index[model.aswcs[i].id] = i;
  for (std::size_t i = 0; i < model.nodes.size(); ++i) model.node_index[model.nodes[i].id] = i;

  for (std::size_t i = 0; i < model.clusters.size(); ++i) {
    auto& sc = model.clusters[i];
    model.cluster_index[sc.id] = i;
    std::vector<const Aswc*> members;
    for (const auto& sid : sc.members) {
      members.push_back(&model.aswcs[model.aswc_index[sid]]);
      model.aswc_cluster_of[sid] = i;
    }
    auto vs = derive_cluster_properties(sc, members, model.frt);
    out.insert(out.end(), vs.begin(), vs.end());
  }
  if (!out.empty()) return out;

  model.central_by_id.clear();
  for (std::size_t i = 0; i < model.nodes.size(); ++i)
    if (model.nodes[i].kind == NodeKind::central) model.central_by_id.push_back(i);
  std::sort(model.central_by_id.begin(), model.central_by_id.end(),
            [&](std::size_t a, std::size_t b) { return model.nodes[a].id < model.nodes[b].id; });

  model.clusters_by_id.resize(model.clusters.size());
  for (std::size_t i = 0; i < model.clusters.size(); ++i) model.clusters_by_id[i] = i;
  std::sort(model.clusters_by_id.begin(), model.clusters_by_id.end(),
            [&](std::size_t a, std::size_t b) { return model.clusters[a].id < model.clusters[b].id; });

  bool red = false, blue = false;
  for (auto i : model.central_by_id)
    (model.nodes[i].power_supply == PowerSupply::red ? red : blue) = true;
  model.both_supplies_present = red && blue;

  model.sealed = true;
  return out;
}

}  // namespace failop
