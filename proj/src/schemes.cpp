#include "doflab/schemes.hpp"

#include <algorithm>
#include <string>

#include "doflab/errors.hpp"

namespace doflab {

namespace {

void require_parameters(int L, int Nc) {
  if (L < 0) throw DomainError("L must be non-negative, got " + std::to_string(L));
  if (Nc < 1) throw DomainError("Nc must be at least 1, got " + std::to_string(Nc));
}

IndexSet range_set(int first, int last) {
  IndexSet out;
  for (int j = first; j <= last; ++j) out.insert(out.end(), j);
  return out;
}

bool inside(const IndexSet& set, int K) {
  return set.empty() || (*set.begin() >= 1 && *set.rbegin() <= K);
}

void require_size(int K, int needed, const std::string& what) {
  if (K < needed) {
    throw InstanceTooSmall(what + " needs K >= " + std::to_string(needed) + ", got K=" +
                           std::to_string(K));
  }
}

// Shares W_k from its decoding BS to every other decoding BS it reaches.
void add_required_shares(UplinkPlan& plan, const Topology& topology) {
  std::map<int, int> decoded_at;  // BS -> MT
  for (const auto& [mt, bs] : plan.decoding_pairs) decoded_at[bs] = mt;
  for (const auto& [mt, bs] : plan.decoding_pairs) {
    const Interval r = topology.connected_range(mt);
    for (int d = r.first; d <= r.last; ++d) {
      if (d != bs && decoded_at.contains(d)) plan.shares.insert({bs, d, mt});
    }
  }
}

DeclaredDof declare(PuDofValue asymptotic, int K, int block, int per_block, int finite) {
  return {asymptotic, block, per_block, K / block, finite};
}

void add_pair(UplinkPlan& plan, int mt, int bs) {
  plan.active_mts.insert(mt);
  plan.decoding_pairs[mt] = bs;
}

// Full coverage: every MT decoded at its own BS, highest index first.
void fill_full_coverage_uplink(int K, const Topology& topology, SetMap& sets, UplinkPlan& plan) {
  for (int i = 1; i <= K; ++i) {
    const IndexSet connected = topology.connected_bs(i);
    sets[i].insert(connected.begin(), connected.end());
    add_pair(plan, i, i);
  }
  add_required_shares(plan, topology);
}

// Sparse block of 2Nc+L pairs: first Nc MTs decoded at BSs 1..Nc, last Nc
// MTs decoded L positions up at BSs Nc+1..2Nc.
void fill_sparse_uplink(int K, int L, int Nc, SetMap& sets, UplinkPlan& plan) {
  const int block = 2 * Nc + L;
  for (int base = 0; base < K; base += block) {
    for (int i = 1; i <= Nc; ++i) {
      const int mt = base + i;
      if (mt > K) break;
      IndexSet c = range_set(base + 1, mt);
      sets[mt].insert(c.begin(), c.end());
      add_pair(plan, mt, mt);
    }
    for (int i = Nc + L + 1; i <= block; ++i) {
      const int mt = base + i;
      if (mt > K) break;
      IndexSet c = range_set(mt - L, base + 2 * Nc);
      sets[mt].insert(c.begin(), c.end());
      add_pair(plan, mt, mt - L);
    }
  }
}

// Block of L+2 pairs, last Nc+1 MTs active.
void fill_middle_uplink(int K, int L, int Nc, SetMap& sets, UplinkPlan& plan) {
  const int block = L + 2;
  const int first_active = L + 2 - Nc;  // decoded at the block's first BS
  const int top = L + 3 - Nc;           // lowest BS decoding its own MT
  for (int base = 0; base < K; base += block) {
    // Local BS index b maps to base + b; b <= 0 is in the preceding block.
    auto preceding = [&](int lowest_local) {
      IndexSet out;
      if (base == 0) return out;
      for (int b = lowest_local; b <= 0; ++b) out.insert(base + b);
      return out;
    };
    if (base + first_active <= K) {
      const int mt = base + first_active;
      IndexSet c = preceding(first_active - L);
      c.insert(base + 1);
      sets[mt] = c;
      add_pair(plan, mt, base + 1);
    }
    for (int i = top; i <= L + 1; ++i) {
      const int mt = base + i;
      if (mt > K) break;
      IndexSet c = range_set(base + top, mt);
      c.insert(base + 1);
      const IndexSet p = preceding(i - L);
      c.insert(p.begin(), p.end());
      sets[mt] = c;
      add_pair(plan, mt, mt);
    }
    if (base + L + 2 <= K) {
      const int mt = base + L + 2;
      sets[mt] = range_set(base + top, mt);
      add_pair(plan, mt, mt);
    }
  }
}

}  // namespace

PuDofValue tau_d_zf(int L, int Nc) {
  require_parameters(L, Nc);
  return {2 * Nc, 2 * Nc + L};
}

PuDofValue tau_u_zf(int L, int Nc) {
  require_parameters(L, Nc);
  if (Nc >= L + 1) return {1};
  if (2 * Nc >= L) return {Nc + 1, L + 2};
  return {2 * Nc, 2 * Nc + L};
}

FullCoverageShape full_coverage_shape(int L, int Nc) {
  require_parameters(L, Nc);
  if (Nc <= L) {
    throw DomainError("full-coverage downlink requires Nc ≥ L+1, got L=" + std::to_string(L) +
                      ", Nc=" + std::to_string(Nc));
  }
  const int epsilon = (L + 2) / 2;
  const int kappa = epsilon + Nc - (L + 1);
  return {epsilon, kappa, 2 * kappa + L};
}

PuDofValue gamma_d(int L, int Nc) {
  const FullCoverageShape shape = full_coverage_shape(L, Nc);
  return {2 * shape.kappa, 2 * shape.kappa + L};
}

PuDofValue tau_avg_lower(int L, int Nc) {
  require_parameters(L, Nc);
  if (Nc >= L + 1) return (Rational(1) + gamma_d(L, Nc)) / Rational(2);
  return {2 * Nc, 2 * Nc + L};
}

PuDofValue tau_wyner(int Nc) {
  require_parameters(1, Nc);
  if (Nc == 1) return {2, 3};
  return {4 * Nc - 3, 4 * Nc - 2};
}

UplinkRegime uplink_regime(int L, int Nc) {
  require_parameters(L, Nc);
  if (Nc >= L + 1) return UplinkRegime::full_coverage;
  if (2 * Nc >= L) return UplinkRegime::middle;
  return UplinkRegime::sparse;
}

SchemeBundle build_downlink_scheme(int K, int L, int Nc) {
  require_parameters(L, Nc);
  const int block = 2 * Nc + L;
  require_size(K, block, "downlink scheme");
  const Topology topology(K, L);

  SetMap sets;
  DownlinkPlan plan;
  auto assign = [&](int mt, IndexSet c) {
    if (mt > K || !inside(c, K)) return;
    sets[mt] = c;
    plan.transmit_sets[mt] = std::move(c);
    plan.active_receivers.insert(mt);
  };
  for (int base = 0; base < K; base += block) {
    for (int i = 1; i <= Nc; ++i) assign(base + i, range_set(base + i, base + Nc));
    for (int i = Nc + L + 1; i <= block; ++i) {
      assign(base + i, range_set(base + Nc + 1, base + i - L));
    }
  }
  const int finite = static_cast<int>(plan.active_receivers.size());
  SchemeBundle bundle{topology, CellAssociation(K, Nc, sets), std::nullopt, plan, std::nullopt,
                      declare(tau_d_zf(L, Nc), K, block, 2 * Nc, finite)};
  return bundle;
}

SchemeBundle build_uplink_scheme(int K, int L, int Nc) {
  require_parameters(L, Nc);
  require_size(K, L + 2, "uplink scheme");
  const Topology topology(K, L);

  SetMap sets;
  UplinkPlan plan;
  int block = 1;
  int per_block = 1;
  switch (uplink_regime(L, Nc)) {
    case UplinkRegime::full_coverage:
      fill_full_coverage_uplink(K, topology, sets, plan);
      break;
    case UplinkRegime::middle:
      block = L + 2;
      per_block = Nc + 1;
      fill_middle_uplink(K, L, Nc, sets, plan);
      add_required_shares(plan, topology);
      break;
    case UplinkRegime::sparse:
      block = 2 * Nc + L;
      per_block = 2 * Nc;
      fill_sparse_uplink(K, L, Nc, sets, plan);
      add_required_shares(plan, topology);
      break;
  }
  const int finite = static_cast<int>(plan.active_mts.size());
  return SchemeBundle{topology, CellAssociation(K, Nc, sets), plan, std::nullopt,
                      declare(tau_u_zf(L, Nc), K, block, per_block, finite), std::nullopt};
}

SchemeBundle build_joint_scheme(int K, int L, int Nc) {
  require_parameters(L, Nc);
  if (Nc <= L) {
    const int block = 2 * Nc + L;
    require_size(K, block, "joint scheme (Nc <= L)");
    const Topology topology(K, L);
    SetMap sets;
    UplinkPlan up;
    DownlinkPlan down;
    for (int base = 0; base < K; base += block) {
      const IndexSet a_bs = range_set(base + 1, base + Nc);
      const IndexSet b_bs = range_set(base + Nc + 1, base + 2 * Nc);
      for (int i = 1; i <= Nc; ++i) {
        const int mt = base + i;
        if (mt > K || !inside(a_bs, K)) break;
        sets[mt] = a_bs;
        add_pair(up, mt, mt);
        down.transmit_sets[mt] = range_set(mt, base + Nc);
        down.active_receivers.insert(mt);
      }
      for (int i = Nc + L + 1; i <= block; ++i) {
        const int mt = base + i;
        if (mt > K) break;
        sets[mt] = b_bs;
        add_pair(up, mt, mt - L);
        down.transmit_sets[mt] = range_set(base + Nc + 1, mt - L);
        down.active_receivers.insert(mt);
      }
    }
    add_required_shares(up, topology);
    const PuDofValue value{2 * Nc, 2 * Nc + L};
    const int n_up = static_cast<int>(up.active_mts.size());
    const int n_down = static_cast<int>(down.active_receivers.size());
    return SchemeBundle{topology,
                        CellAssociation(K, Nc, sets),
                        up,
                        down,
                        declare(value, K, block, 2 * Nc, n_up),
                        declare(value, K, block, 2 * Nc, n_down)};
  }

  const FullCoverageShape shape = full_coverage_shape(L, Nc);
  const int block = shape.block;
  require_size(K, std::max(L + 2, block), "joint scheme (Nc >= L+1)");
  const Topology topology(K, L);
  const int e = shape.epsilon;
  const int k = shape.kappa;
  const int s2_first = (L % 2 == 1) ? 2 * e + k : 2 * e + k - 1;

  SetMap sets;
  UplinkPlan up;
  fill_full_coverage_uplink(K, topology, sets, up);

  SetMap extra;
  for (int mt = 1; mt <= K; ++mt) extra[mt] = {};
  DownlinkPlan down;
  auto assign = [&](int mt, const IndexSet& c) {
    if (mt > K || !inside(c, K)) return;
    extra[mt] = c;
    sets[mt].insert(c.begin(), c.end());
    down.transmit_sets[mt] = c;
    down.active_receivers.insert(mt);
  };
  for (int base = 0; base < K; base += block) {
    const IndexSet s1_bs = range_set(base + 1, base + k);
    const IndexSet s2_bs = range_set(base + e + k, base + e + 2 * k - 1);
    for (int i = e; i <= e + k - 1; ++i) assign(base + i, s1_bs);
    for (int i = s2_first; i <= s2_first + k - 1; ++i) assign(base + i, s2_bs);
  }
  const int n_up = static_cast<int>(up.active_mts.size());
  const int n_down = static_cast<int>(down.active_receivers.size());
  return SchemeBundle{topology,
                      CellAssociation(K, Nc, sets, extra),
                      up,
                      down,
                      declare(Rational(1), K, 1, 1, n_up),
                      declare(gamma_d(L, Nc), K, block, 2 * k, n_down)};
}

}  // namespace doflab
