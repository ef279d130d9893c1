#include "doflab/zf_verify.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "doflab/errors.hpp"
#include "doflab/matching.hpp"

namespace doflab {

namespace {

std::string mt_bs(int mt, int bs) {
  return "(MT " + std::to_string(mt) + ", BS " + std::to_string(bs) + ")";
}

void require_in_range(int index, int K, const char* what) {
  if (index < 1 || index > K) {
    throw StructuralError(std::string("plan refers to ") + what + " " + std::to_string(index) +
                          " outside [1, " + std::to_string(K) + "]");
  }
}

void require_plan_indices(const UplinkPlan& plan, int K) {
  for (int mt : plan.active_mts) require_in_range(mt, K, "MT");
  for (const auto& [mt, bs] : plan.decoding_pairs) {
    require_in_range(mt, K, "MT");
    require_in_range(bs, K, "BS");
  }
  for (const ShareEdge& e : plan.shares) {
    require_in_range(e.from_bs, K, "BS");
    require_in_range(e.to_bs, K, "BS");
    require_in_range(e.mt, K, "MT");
  }
}

void require_plan_indices(const DownlinkPlan& plan, int K) {
  for (int mt : plan.active_receivers) require_in_range(mt, K, "MT");
  for (const auto& [mt, set] : plan.transmit_sets) {
    require_in_range(mt, K, "MT");
    for (int bs : set) require_in_range(bs, K, "BS");
  }
}

void require_association(const CellAssociation& assoc, const Topology& topology) {
  if (assoc.users() != topology.users()) {
    throw StructuralError("association covers " + std::to_string(assoc.users()) +
                          " MTs but the network has K=" + std::to_string(topology.users()));
  }
  for (int mt = 1; mt <= assoc.users(); ++mt) {
    for (int bs : assoc.of(mt)) require_in_range(bs, assoc.users(), "BS");
  }
}

// dependencies[i] = MTs whose messages must be decoded before W_i.
std::map<int, std::vector<int>> uplink_dependencies(const UplinkPlan& plan,
                                                    const Topology& topology) {
  std::map<int, std::vector<int>> deps;
  for (const auto& [i, j] : plan.decoding_pairs) {
    if (!plan.active_mts.contains(i)) continue;
    auto& list = deps[i];
    const Interval reach = topology.reached_range(j);
    for (int k = reach.first; k <= reach.last; ++k) {
      if (k != i && plan.active_mts.contains(k)) list.push_back(k);
    }
  }
  return deps;
}

// Kahn's algorithm, highest ready MT first. Returns the order and the MTs left
// on a cycle.
std::pair<std::vector<int>, std::vector<int>> topological_order(
    const std::map<int, std::vector<int>>& deps) {
  std::map<int, int> pending;
  std::map<int, std::vector<int>> dependents;
  for (const auto& [i, list] : deps) {
    pending[i] += 0;
    for (int k : list) {
      if (!deps.contains(k)) continue;  // missing pair, reported elsewhere
      ++pending[i];
      dependents[k].push_back(i);
    }
  }
  std::set<int> ready;
  for (const auto& [i, n] : pending) {
    if (n == 0) ready.insert(i);
  }
  std::vector<int> order;
  while (!ready.empty()) {
    const int i = *ready.rbegin();
    ready.erase(std::prev(ready.end()));
    order.push_back(i);
    for (int d : dependents[i]) {
      if (--pending[d] == 0) ready.insert(d);
    }
  }
  std::vector<int> stuck;
  for (const auto& [i, n] : pending) {
    if (n > 0) stuck.push_back(i);
  }
  return {order, stuck};
}

void fill_counts(DofReport& report, const IndexSet& active, const Topology& topology,
                 int block) {
  const int K = topology.users();
  report.users = K;
  report.achieved_dof = static_cast<int>(active.size());
  report.per_user_ratio = Rational(report.achieved_dof, K);
  report.subnetwork_size = block > 0 ? block : K;
  for (const Interval& iv : topology.subnetwork_partition(report.subnetwork_size)) {
    int n = 0;
    for (int i = iv.first; i <= iv.last; ++i) n += active.contains(i) ? 1 : 0;
    report.per_subnetwork.push_back(n);
  }
  int running = 0;
  for (int j = 1; j <= K; ++j) {
    running += active.contains(j) ? 1 : 0;
    report.prefix_active.push_back(running);
  }
}

}  // namespace

DofReport check_uplink(const UplinkPlan& plan, const CellAssociation& assoc,
                       const Topology& topology, const CheckOptions& options) {
  const int K = topology.users();
  require_plan_indices(plan, K);
  require_association(assoc, topology);

  DofReport report;
  report.session = Session::uplink;
  auto& v = report.violations;

  // (0) pair bookkeeping
  for (int mt : plan.active_mts) {
    if (!plan.decoding_pairs.contains(mt)) {
      v.push_back({0, mt, 0, "active MT " + std::to_string(mt) + " has no decoding pair"});
    }
  }
  std::map<int, int> decoder;  // active MT -> BS
  for (const auto& [mt, bs] : plan.decoding_pairs) {
    if (!plan.active_mts.contains(mt)) {
      v.push_back({0, mt, bs, "decoding pair " + mt_bs(mt, bs) + " for an inactive MT"});
    } else {
      decoder[mt] = bs;
    }
  }

  // (1) decoding BS connected and associated
  for (const auto& [mt, bs] : decoder) {
    if (!topology.connected(mt, bs)) {
      v.push_back({1, mt, bs, "decoding pair " + mt_bs(mt, bs) + ": BS not connected to MT"});
    }
    if (!assoc.of(mt).contains(bs)) {
      v.push_back({1, mt, bs, "decoding pair " + mt_bs(mt, bs) + ": BS not in C_" +
                                  std::to_string(mt)});
    }
  }

  // (2) one message per BS
  std::map<int, std::vector<int>> decoded_at;
  for (const auto& [mt, bs] : decoder) decoded_at[bs].push_back(mt);
  for (const auto& [bs, mts] : decoded_at) {
    for (std::size_t n = 1; n < mts.size(); ++n) {
      v.push_back({2, mts[n], bs, "BS " + std::to_string(bs) + " decodes both W_" +
                                      std::to_string(mts[0]) + " and W_" +
                                      std::to_string(mts[n])});
    }
  }

  // share edges: source is the decoding BS, endpoints inside C_mt
  for (const ShareEdge& e : plan.shares) {
    const auto it = decoder.find(e.mt);
    if (it == decoder.end()) {
      v.push_back({0, e.mt, e.from_bs, "share of W_" + std::to_string(e.mt) +
                                           " for an MT that is not decoded"});
      continue;
    }
    if (it->second != e.from_bs) {
      v.push_back({0, e.mt, e.from_bs, "share of W_" + std::to_string(e.mt) + " leaves BS " +
                                           std::to_string(e.from_bs) +
                                           " instead of its decoding BS " +
                                           std::to_string(it->second)});
    }
    for (int bs : {e.from_bs, e.to_bs}) {
      if (!assoc.of(e.mt).contains(bs)) {
        v.push_back({5, e.mt, bs, "share of W_" + std::to_string(e.mt) + " uses BS " +
                                      std::to_string(bs) + " outside C_" + std::to_string(e.mt)});
      }
    }
  }

  // (3) cancellation closure
  for (const auto& [i, j] : decoder) {
    const Interval reach = topology.reached_range(j);
    for (int k = reach.first; k <= reach.last; ++k) {
      if (k == i || !plan.active_mts.contains(k)) continue;
      const auto dk = decoder.find(k);
      if (dk == decoder.end()) continue;  // already reported under (0)
      if (!assoc.of(k).contains(j)) {
        v.push_back({3, k, j, "W_" + std::to_string(k) + " interferes at decoding BS " +
                                  std::to_string(j) + " which is not in C_" + std::to_string(k)});
      } else if (!plan.shares.contains(ShareEdge{dk->second, j, k})) {
        v.push_back({3, k, j, "W_" + std::to_string(k) + " interferes at decoding BS " +
                                  std::to_string(j) + " but is never shared to it"});
      }
    }
  }

  // (4) acyclic decode dependencies
  UplinkPlan decoded_only;
  decoded_only.active_mts = plan.active_mts;
  for (const auto& [mt, bs] : decoder) decoded_only.decoding_pairs[mt] = bs;
  decoded_only.shares = plan.shares;
  auto [order, stuck] = topological_order(uplink_dependencies(decoded_only, topology));
  for (int mt : stuck) {
    v.push_back({4, mt, decoder.at(mt), "W_" + std::to_string(mt) +
                                            " lies on a cyclic decode dependency"});
  }
  if (stuck.empty()) report.decode_order = std::move(order);

  // (5) budget
  for (int mt = 1; mt <= K; ++mt) {
    const auto size = assoc.of(mt).size();
    if (static_cast<int>(size) > assoc.budget()) {
      v.push_back({5, mt, 0, "|C_" + std::to_string(mt) + "| = " + std::to_string(size) +
                                 " exceeds Nc = " + std::to_string(assoc.budget())});
    }
  }

  report.accepted = v.empty();
  fill_counts(report, plan.active_mts, topology, options.subnetwork_size);
  const auto diag =
      uplink_subnetwork_diagnostics(decoded_only, topology, report.subnetwork_size);
  report.borrowed = diag.borrowed;
  report.blocked = diag.blocked;
  return report;
}

DofReport check_downlink(const DownlinkPlan& plan, const CellAssociation& assoc,
                         const Topology& topology, const CheckOptions& options) {
  const int K = topology.users();
  require_plan_indices(plan, K);
  require_association(assoc, topology);

  DofReport report;
  report.session = Session::downlink;
  auto& v = report.violations;

  std::map<int, const IndexSet*> served;
  for (const auto& [mt, set] : plan.transmit_sets) {
    if (set.empty()) continue;
    served[mt] = &set;
    for (int bs : set) {
      if (!assoc.of(mt).contains(bs)) {
        v.push_back({0, mt, bs, "BS " + std::to_string(bs) + " transmits W_" +
                                    std::to_string(mt) + " but is not in C_" +
                                    std::to_string(mt)});
      }
    }
    if (!plan.active_receivers.contains(mt)) {
      v.push_back({0, mt, 0, "W_" + std::to_string(mt) + " is transmitted to an inactive receiver"});
    }
  }

  for (int j : plan.active_receivers) {
    const auto it = served.find(j);
    if (it == served.end()) {
      v.push_back({1, j, 0, "active receiver " + std::to_string(j) + " is not served"});
      continue;
    }
    const bool reached = std::any_of(it->second->begin(), it->second->end(),
                                     [&](int bs) { return topology.connected(j, bs); });
    if (!reached) {
      v.push_back({1, j, 0, "no BS transmitting W_" + std::to_string(j) +
                                " is connected to MT " + std::to_string(j)});
      v.push_back({3, j, 0, "receiver " + std::to_string(j) + " is outside V for W_" +
                                std::to_string(j)});
    }
  }

  for (const auto& [i, set] : served) {
    const std::vector<int> transmitters(set->begin(), set->end());
    std::vector<int> receivers;
    for (int r : plan.active_receivers) {
      if (std::any_of(transmitters.begin(), transmitters.end(),
                      [&](int t) { return topology.connected(r, t); })) {
        receivers.push_back(r);
      }
    }
    BipartiteGraph g;
    g.left = static_cast<int>(receivers.size());
    g.right = static_cast<int>(transmitters.size());
    g.adjacency.resize(g.left);
    for (int l = 0; l < g.left; ++l) {
      for (int t = 0; t < g.right; ++t) {
        if (topology.connected(receivers[l], transmitters[t])) g.adjacency[l].push_back(t);
      }
    }
    const Matching m = maximum_matching(g);
    if (m.covers_left()) {
      MatchingCertificate cert{i, {}};
      for (int l = 0; l < g.left; ++l) {
        cert.pairs.emplace_back(receivers[l], transmitters[m.mate_of_left[l]]);
      }
      report.certificates.push_back(std::move(cert));
      continue;
    }
    HallWitness w{i, {}, {}};
    if (const auto hall = hall_violation(g, m)) {
      for (int l : hall->left_set) w.receivers.push_back(receivers[l]);
      for (int t : hall->neighbourhood) w.transmitters.push_back(transmitters[t]);
    }
    std::string msg = "W_" + std::to_string(i) + ": " + std::to_string(receivers.size()) +
                      " active receivers reached by " + std::to_string(transmitters.size()) +
                      " transmitters; receivers {";
    for (std::size_t n = 0; n < w.receivers.size(); ++n) {
      msg += (n ? "," : "") + std::to_string(w.receivers[n]);
    }
    msg += "} see only " + std::to_string(w.transmitters.size()) + " of them";
    v.push_back({2, i, 0, std::move(msg)});
    report.hall_witnesses.push_back(std::move(w));
  }

  for (int mt = 1; mt <= K; ++mt) {
    const auto size = assoc.of(mt).size();
    if (static_cast<int>(size) > assoc.budget()) {
      v.push_back({0, mt, 0, "|C_" + std::to_string(mt) + "| = " + std::to_string(size) +
                                 " exceeds Nc = " + std::to_string(assoc.budget())});
    }
  }

  std::stable_sort(v.begin(), v.end(),
                   [](const Violation& a, const Violation& b) { return a.condition < b.condition; });
  report.accepted = v.empty();
  fill_counts(report, plan.active_receivers, topology, options.subnetwork_size);
  return report;
}

std::vector<PairOfPairs> ordering_violations(const UplinkPlan& plan) {
  std::vector<PairOfPairs> out;
  for (const auto& a : plan.decoding_pairs) {
    for (const auto& b : plan.decoding_pairs) {
      if (a.first > b.first && a.second <= b.second) {
        out.push_back({{a.first, a.second}, {b.first, b.second}});
      }
    }
  }
  return out;
}

bool set_budget_bound(const CellAssociation& assoc, const Topology& topology, Interval window,
                      const UplinkPlan& plan) {
  topology.require_index(window.first, "window start");
  topology.require_index(window.last, "window end");
  int inside = 0;
  for (const auto& [mt, bs] : plan.decoding_pairs) {
    if (window.contains(mt) && window.contains(bs)) ++inside;
  }
  return inside <= assoc.budget();
}

std::optional<std::vector<int>> uplink_decode_order(const UplinkPlan& plan,
                                                    const Topology& topology) {
  for (int mt : plan.active_mts) {
    if (!plan.decoding_pairs.contains(mt)) return std::nullopt;
  }
  auto [order, stuck] = topological_order(uplink_dependencies(plan, topology));
  if (!stuck.empty()) return std::nullopt;
  return order;
}

SubnetworkDiagnostics uplink_subnetwork_diagnostics(const UplinkPlan& plan,
                                                    const Topology& topology, int block) {
  const auto blocks = topology.subnetwork_partition(block);
  SubnetworkDiagnostics out;
  out.borrowed.assign(blocks.size(), 0);
  out.blocked.assign(blocks.size(), 0);
  std::set<int> decoding_bs;
  for (const auto& [mt, bs] : plan.decoding_pairs) decoding_bs.insert(bs);

  for (std::size_t k = 1; k < blocks.size(); ++k) {
    const Interval cur = blocks[k];
    const Interval prev = blocks[k - 1];
    for (const auto& [mt, bs] : plan.decoding_pairs) {
      if (plan.active_mts.contains(mt) && cur.contains(mt) && prev.contains(bs)) {
        ++out.borrowed[k];
      }
    }
    for (int b = prev.first; b <= prev.last; ++b) {
      if (decoding_bs.contains(b)) continue;
      const Interval reach = topology.reached_range(b);
      bool blocked = false;
      for (int m = std::max(reach.first, cur.first); m <= std::min(reach.last, cur.last); ++m) {
        if (!plan.active_mts.contains(m)) continue;
        const auto dm = plan.decoding_pairs.find(m);
        if (dm == plan.decoding_pairs.end() ||
            !plan.shares.contains(ShareEdge{dm->second, b, m})) {
          blocked = true;
          break;
        }
      }
      out.blocked[k] += blocked ? 1 : 0;
    }
  }
  return out;
}

}  // namespace doflab
