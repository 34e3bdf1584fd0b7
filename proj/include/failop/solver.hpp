#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <climits>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "failop/config.hpp"
#include "failop/constraints.hpp"
#include "failop/model.hpp"

namespace failop {

/// One deployment problem: a model, a fault state, and optionally the
/// configuration that was active before the fault. With a previous
/// configuration the solver computes a follow-up deployment (allocations
/// frozen, lost masters handed to surviving hot slaves); without one it
/// synthesizes an initial deployment including the allocation sets.
struct SolveRequest {
  const SystemModel* model = nullptr;
  FaultScenario scenario;
  std::optional<DeploymentConfig> previous;
  /// Caller-asserted upper bound on the achievable priority sum; the
  /// target sweep starts at min(objective_cap, max_priority_cap).
  std::optional<int> objective_cap;
};

struct SolveStats {
  std::int64_t elapsed_us = 0;
  std::uint64_t nodes_explored = 0;
};

struct SolveResult {
  DeploymentConfig config;
  int priority_sum = 0;
  bool optimal = false;
  /// Descending targets probed by the solver, each with its verdict.
  std::vector<std::pair<int, bool>> checked_targets;
  SolveStats stats;
};

/// Admissible upper bound on the priority sum: every master plus every
/// hot slave that is still allowed at the scenario's fault count.
inline int max_priority_cap(const SystemModel& model, const FaultScenario& scenario) {
  int cap = 0;
  for (const auto& sc : model.clusters) {
    cap += sc.prio_master();
    if (slave_allowed(sc, scenario, SlaveMode::hot)) cap += sc.prio_hot_slave();
  }
  return cap;
}

namespace detail {

/// Finite-domain search space over compact central-node indices
/// (id-ascending, so index order equals id order).
struct SearchSpace {
  const SystemModel* model = nullptr;

  std::vector<std::string> node_ids;
  std::vector<Micros> budgets;
  std::vector<PowerSupply> supplies;
  std::vector<bool> alive;
  std::size_t n = 0;

  struct Candidate {
    int master = -1;  // compact index, -1 = absent
    int slave = -1;
    SlaveMode mode = SlaveMode::none;
    std::uint64_t alloc = 0;
    int points = 0;
    bool changed = false;  // (master, slave, mode) differs from previous
  };

  struct ClusterDomain {
    const AswcCluster* sc = nullptr;
    std::vector<Candidate> candidates;
    int max_points = 0;
  };

  std::vector<ClusterDomain> clusters;  // cluster-id ascending
  std::vector<int> suffix_max;          // suffix_max[i] = max points from cluster i on
  bool has_previous = false;
  std::uint64_t nodes_explored = 0;

  int compact_index(const std::string& node_id) const {
    for (std::size_t i = 0; i < n; ++i)
      if (node_ids[i] == node_id) return static_cast<int>(i);
    return -1;
  }
};

inline std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

/// Deterministic allocation completion for initial deployments: start
/// from the active nodes, cover a missing power supply for
/// fail-operational clusters, then fill with the smallest node ids
/// (alive nodes before isolated ones) up to the prescribed size.
inline std::uint64_t complete_allocation(const SearchSpace& sp, std::uint64_t mask, int fail_op,
                                         std::size_t want) {
  auto count = [&]() { return static_cast<std::size_t>(__builtin_popcountll(mask)); };
  if (fail_op >= 1 && sp.model->both_supplies_present) {
    for (PowerSupply supply : {PowerSupply::red, PowerSupply::blue}) {
      bool covered = false;
      for (std::size_t i = 0; i < sp.n && !covered; ++i)
        if ((mask & bit(static_cast<int>(i))) && sp.supplies[i] == supply) covered = true;
      if (covered) continue;
      int pick = -1;
      for (std::size_t i = 0; i < sp.n; ++i)
        if (sp.supplies[i] == supply && sp.alive[i]) { pick = static_cast<int>(i); break; }
      if (pick < 0)
        for (std::size_t i = 0; i < sp.n; ++i)
          if (sp.supplies[i] == supply) { pick = static_cast<int>(i); break; }
      if (pick >= 0) mask |= bit(pick);
    }
  }
  for (int pass = 0; pass < 2 && count() < want; ++pass) {
    bool want_alive = pass == 0;
    for (std::size_t i = 0; i < sp.n && count() < want; ++i)
      if (sp.alive[i] == want_alive) mask |= bit(static_cast<int>(i));
  }
  if (count() != want) throw std::logic_error("allocation completion failed");
  return mask;
}

inline bool candidate_less(const SearchSpace::Candidate& a, const SearchSpace::Candidate& b,
                           std::size_t n) {
  auto rank = [n](int node) { return node >= 0 ? node : static_cast<int>(n); };
  if (rank(a.master) != rank(b.master)) return rank(a.master) < rank(b.master);
  if (rank(a.slave) != rank(b.slave)) return rank(a.slave) < rank(b.slave);
  if (a.mode != b.mode) return static_cast<int>(a.mode) < static_cast<int>(b.mode);
  // lexicographic comparison of the allocation sets as ascending id sequences
  std::uint64_t ax = a.alloc, bx = b.alloc;
  while (ax || bx) {
    if (!ax) return false;
    if (!bx) return true;
    int ai = __builtin_ctzll(ax), bi = __builtin_ctzll(bx);
    if (ai != bi) return ai < bi;
    ax &= ax - 1;
    bx &= bx - 1;
  }
  return false;
}

inline SearchSpace build_search_space(const SolveRequest& req) {
  if (!req.model) throw std::invalid_argument("solve: no model");
  const SystemModel& model = *req.model;
  if (!model.sealed) throw std::invalid_argument("solve: model not validated");
  if (req.scenario.fault_count < 0) throw std::invalid_argument("solve: negative fault_count");

  SearchSpace sp;
  sp.model = &model;
  sp.n = model.central_by_id.size();
  for (auto ni : model.central_by_id) {
    const ExecutionNode& e = model.nodes[ni];
    sp.node_ids.push_back(e.id);
    sp.budgets.push_back(e.total_time_budget);
    sp.supplies.push_back(e.power_supply);
    sp.alive.push_back(!req.scenario.is_isolated(e.id));
  }
  for (const auto& nid : req.scenario.isolated_nodes) {
    const ExecutionNode* e = model.find_node(nid);
    if (!e) throw std::invalid_argument("solve: scenario isolates unknown node '" + nid + "'");
    if (e->kind != NodeKind::central)
      throw std::invalid_argument("solve: scenario isolates non-central node '" + nid + "'");
  }
  sp.has_previous = req.previous.has_value();
  if (sp.has_previous) {
    for (const auto& p : req.previous->placements) {
      if (!model.find_cluster(p.cluster_id))
        throw std::invalid_argument("solve: previous references unknown cluster '" + p.cluster_id + "'");
      for (const auto& nid : p.allocated)
        if (sp.compact_index(nid) < 0)
          throw std::invalid_argument("solve: previous allocation on unknown or non-central node '" +
                                      nid + "'");
      if (p.master && sp.compact_index(*p.master) < 0)
        throw std::invalid_argument("solve: previous master on unknown or non-central node '" +
                                    *p.master + "'");
      if (p.slave && sp.compact_index(*p.slave) < 0)
        throw std::invalid_argument("solve: previous slave on unknown or non-central node '" +
                                    *p.slave + "'");
    }
  }

  for (auto ci : model.clusters_by_id) {
    const AswcCluster& sc = model.clusters[ci];
    SearchSpace::ClusterDomain dom;
    dom.sc = &sc;

    const ClusterPlacement* prev =
        sp.has_previous ? req.previous->find(sc.id) : nullptr;
    int prev_master = prev && prev->master ? sp.compact_index(*prev->master) : -1;
    int prev_slave = prev && prev->slave ? sp.compact_index(*prev->slave) : -1;
    SlaveMode prev_mode = prev ? prev->slave_mode : SlaveMode::none;

    SlaveMode mode = sc.hot_standby_slave_req ? SlaveMode::hot : SlaveMode::cold;
    bool may_slave = slave_allowed(sc, req.scenario, mode);

    std::uint64_t frozen_alloc = 0;
    if (sp.has_previous && prev)
      for (const auto& nid : prev->allocated) {
        int idx = sp.compact_index(nid);
        if (idx >= 0 && sp.alive[idx]) frozen_alloc |= bit(idx);
      }

    // the master's node is forced after a lost master with a surviving
    // hot slave; deactivating the cluster remains possible
    int forced_master = -1;
    bool master_forced = false;
    if (sp.has_previous && prev && prev_master >= 0 && !sp.alive[prev_master] &&
        prev_mode == SlaveMode::hot && prev_slave >= 0 && sp.alive[prev_slave]) {
      master_forced = true;
      forced_master = prev_slave;
    }

    std::vector<int> master_domain;
    for (std::size_t i = 0; i < sp.n; ++i) {
      int m = static_cast<int>(i);
      if (!sp.alive[i]) continue;
      if (sp.has_previous && !(frozen_alloc & bit(m))) continue;
      if (master_forced && m != forced_master) continue;
      master_domain.push_back(m);
    }
    master_domain.push_back(-1);

    auto prev_triple_equal = [&](int m, int s, SlaveMode md) {
      return m == prev_master && s == prev_slave && md == (prev ? prev_mode : SlaveMode::none);
    };

    for (int m : master_domain) {
      std::vector<std::pair<int, SlaveMode>> slave_domain;
      if (m >= 0 && may_slave) {
        for (std::size_t i = 0; i < sp.n; ++i) {
          int s = static_cast<int>(i);
          if (s == m || !sp.alive[i]) continue;
          if (sp.has_previous && !(frozen_alloc & bit(s))) continue;
          if (sp.supplies[s] == sp.supplies[m]) continue;
          slave_domain.push_back({s, mode});
        }
      }
      slave_domain.push_back({-1, SlaveMode::none});

      for (auto [s, md] : slave_domain) {
        SearchSpace::Candidate c;
        c.master = m;
        c.slave = s;
        c.mode = md;
        if (sp.has_previous) {
          c.alloc = frozen_alloc;
        } else {
          std::uint64_t active = 0;
          if (m >= 0) active |= bit(m);
          if (s >= 0) active |= bit(s);
          c.alloc = complete_allocation(sp, active, sc.fail_op,
                                        std::min<std::size_t>(static_cast<std::size_t>(sc.fail_op) + 1,
                                                              sp.n));
        }
        c.points = (m >= 0 ? sc.prio_master() : 0) +
                   (s >= 0 && md == SlaveMode::hot ? sc.prio_hot_slave() : 0);
        c.changed = !prev_triple_equal(m, s, md);
        dom.candidates.push_back(c);
      }
    }

    std::sort(dom.candidates.begin(), dom.candidates.end(),
              [&sp](const auto& a, const auto& b) { return candidate_less(a, b, sp.n); });
    for (const auto& c : dom.candidates) dom.max_points = std::max(dom.max_points, c.points);
    sp.clusters.push_back(std::move(dom));
  }

  sp.suffix_max.assign(sp.clusters.size() + 1, 0);
  for (std::size_t i = sp.clusters.size(); i-- > 0;)
    sp.suffix_max[i] = sp.suffix_max[i + 1] + sp.clusters[i].max_points;
  return sp;
}

/// Depth-first search for the lexicographically first complete
/// assignment with priority sum >= target. Candidate order makes the
/// first hit the tie-break winner.
struct SatSearch {
  SearchSpace& sp;
  int target;
  std::vector<Micros> used;
  std::vector<const SearchSpace::Candidate*> chosen;
  bool found = false;

  explicit SatSearch(SearchSpace& space, int t)
      : sp(space), target(t), used(space.n, 0), chosen(space.clusters.size(), nullptr) {}

  bool fits(const SearchSpace::Candidate& c, Micros wcets) const {
    if (c.master >= 0 && used[c.master] + wcets > sp.budgets[c.master]) return false;
    if (c.slave >= 0 && c.mode == SlaveMode::hot && used[c.slave] + wcets > sp.budgets[c.slave])
      return false;
    return true;
  }
  void apply(const SearchSpace::Candidate& c, Micros wcets, int sign) {
    if (c.master >= 0) used[c.master] += sign * wcets;
    if (c.slave >= 0 && c.mode == SlaveMode::hot) used[c.slave] += sign * wcets;
  }

  bool run(std::size_t i, int sum) {
    ++sp.nodes_explored;
    if (sum + sp.suffix_max[i] < target) return false;
    if (i == sp.clusters.size()) return true;
    Micros wcets = sp.clusters[i].sc->sum_wcets;
    for (const auto& c : sp.clusters[i].candidates) {
      if (!fits(c, wcets)) continue;
      apply(c, wcets, +1);
      chosen[i] = &c;
      if (run(i + 1, sum + c.points)) return true;
      apply(c, wcets, -1);
      chosen[i] = nullptr;
    }
    return false;
  }
};

/// Among assignments that reach exactly the optimal sum, find the one
/// with the fewest changed clusters; visiting order breaks remaining
/// ties lexicographically.
struct MinChangeSearch {
  SearchSpace& sp;
  int target;
  std::vector<Micros> used;
  std::vector<const SearchSpace::Candidate*> chosen;
  std::vector<const SearchSpace::Candidate*> best;
  int best_changes = INT_MAX;
  bool have_best = false;

  explicit MinChangeSearch(SearchSpace& space, int t)
      : sp(space), target(t), used(space.n, 0), chosen(space.clusters.size(), nullptr),
        best(space.clusters.size(), nullptr) {}

  void run(std::size_t i, int sum, int changes) {
    ++sp.nodes_explored;
    if (have_best && (changes >= best_changes || best_changes == 0)) return;
    if (sum + sp.suffix_max[i] < target) return;
    if (i == sp.clusters.size()) {
      best = chosen;
      best_changes = changes;
      have_best = true;
      return;
    }
    Micros wcets = sp.clusters[i].sc->sum_wcets;
    for (const auto& c : sp.clusters[i].candidates) {
      if (c.master >= 0 && used[c.master] + wcets > sp.budgets[c.master]) continue;
      if (c.slave >= 0 && c.mode == SlaveMode::hot && used[c.slave] + wcets > sp.budgets[c.slave])
        continue;
      if (c.master >= 0) used[c.master] += wcets;
      if (c.slave >= 0 && c.mode == SlaveMode::hot) used[c.slave] += wcets;
      chosen[i] = &c;
      run(i + 1, sum + c.points, changes + (c.changed ? 1 : 0));
      if (c.master >= 0) used[c.master] -= wcets;
      if (c.slave >= 0 && c.mode == SlaveMode::hot) used[c.slave] -= wcets;
      chosen[i] = nullptr;
    }
  }
};

inline DeploymentConfig assemble_config(const SearchSpace& sp,
                                        const std::vector<const SearchSpace::Candidate*>& chosen,
                                        int priority_sum) {
  DeploymentConfig config;
  for (std::size_t i = 0; i < sp.clusters.size(); ++i) {
    const auto& c = *chosen[i];
    ClusterPlacement p;
    p.cluster_id = sp.clusters[i].sc->id;
    for (std::size_t b = 0; b < sp.n; ++b)
      if (c.alloc & bit(static_cast<int>(b))) p.allocated.insert(sp.node_ids[b]);
    if (c.master >= 0) p.master = sp.node_ids[c.master];
    if (c.slave >= 0) p.slave = sp.node_ids[c.slave];
    p.slave_mode = c.mode;
    config.placements.push_back(std::move(p));
  }
  config.priority_sum = priority_sum;
  return config;
}

}  // namespace detail

/// Decides whether any valid deployment for the request reaches the
/// target priority sum.
inline bool satisfiable(const SolveRequest& request, int target) {
  detail::SearchSpace sp = detail::build_search_space(request);
  if (target > sp.suffix_max[0]) return false;
  detail::SatSearch search(sp, target);
  return search.run(0, 0);
}

/// Computes an optimal valid deployment: maximal priority sum, then (for
/// follow-ups) minimal number of clusters whose (master, slave, mode)
/// changed, then lexicographic order over cluster ids and node ids. The
/// optimum is located by a descending-target satisfiability sweep; each
/// probed target is recorded in checked_targets.
inline SolveResult solve(const SolveRequest& request) {
  auto t0 = std::chrono::steady_clock::now();
  detail::SearchSpace sp = detail::build_search_space(request);

  SolveResult result;
  int cap = max_priority_cap(*request.model, request.scenario);
  int start = std::max(0, std::min(cap, request.objective_cap.value_or(cap)));

  std::vector<const detail::SearchSpace::Candidate*> chosen;
  int optimum = 0;
  for (int target = start;; --target) {
    detail::SatSearch search(sp, target);
    bool sat = search.run(0, 0);
    result.checked_targets.emplace_back(target, sat);
    if (sat) {
      optimum = target;
      chosen = search.chosen;
      break;
    }
    // the all-passive deployment reaches sum 0, so the sweep terminates
    if (target <= 0) throw std::logic_error("target sweep failed to find the trivial deployment");
  }

  if (sp.has_previous) {
    detail::MinChangeSearch search(sp, optimum);
    search.run(0, 0, 0);
    if (!search.have_best) throw std::logic_error("tie-break search lost the optimum");
    chosen = search.best;
  }

  result.config = detail::assemble_config(sp, chosen, optimum);
  result.priority_sum = optimum;
  result.optimal = true;
  result.stats.nodes_explored = sp.nodes_explored;
  result.stats.elapsed_us =
      std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

}  // namespace failop
