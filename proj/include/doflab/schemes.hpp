#pragma once

#include <optional>

#include "doflab/association.hpp"
#include "doflab/plans.hpp"
#include "doflab/rational.hpp"
#include "doflab/topology.hpp"

namespace doflab {

// Closed-form zero-forcing puDoF values. All are exact rationals.

// Downlink-only: 2Nc / (2Nc + L).
PuDofValue tau_d_zf(int L, int Nc);

// Uplink-only: 1 when Nc >= L+1, (Nc+1)/(L+2) when L <= 2Nc and Nc <= L,
// 2Nc/(2Nc+L) when 2Nc < L.
PuDofValue tau_u_zf(int L, int Nc);

// Downlink component under a full-coverage association, Nc >= L+1:
// 2k/(2k+L) with e = ceil((L+1)/2), k = e + Nc - (L+1).
PuDofValue gamma_d(int L, int Nc);

// Achievable average uplink-downlink puDoF.
PuDofValue tau_avg_lower(int L, int Nc);

// Average puDoF of the L = 1 network: 2/3 for Nc = 1, (4Nc-3)/(4Nc-2) above.
PuDofValue tau_wyner(int Nc);

// Parameters of the full-coverage joint construction.
struct FullCoverageShape {
  int epsilon;  // ceil((L+1)/2)
  int kappa;    // epsilon + Nc - (L+1)
  int block;    // 2*kappa + L
};
FullCoverageShape full_coverage_shape(int L, int Nc);

// What a construction claims for one session.
struct DeclaredDof {
  PuDofValue asymptotic;
  int subnetwork_size = 0;
  int per_subnetwork = 0;        // active nodes in each complete subnetwork
  int complete_subnetworks = 0;
  int finite_count = 0;          // exact count for this K, partial blocks included
};

enum class UplinkRegime { full_coverage, middle, sparse };

struct SchemeBundle {
  Topology topology;
  CellAssociation association;
  std::optional<UplinkPlan> uplink_plan;
  std::optional<DownlinkPlan> downlink_plan;
  std::optional<DeclaredDof> uplink;
  std::optional<DeclaredDof> downlink;
};

UplinkRegime uplink_regime(int L, int Nc);

// Two MISO broadcast channels per block of 2Nc+L pairs. Requires K >= 2Nc+L.
SchemeBundle build_downlink_scheme(int K, int L, int Nc);

// Message-passing uplink construction for the regime selected by (L, Nc).
// Requires K >= L+2.
SchemeBundle build_uplink_scheme(int K, int L, int Nc);

// One shared association serving both sessions. Nc <= L reuses the sparse
// block of 2Nc+L pairs for both; Nc >= L+1 combines full coverage with
// downlink-extra associations over blocks of 2k+L pairs.
SchemeBundle build_joint_scheme(int K, int L, int Nc);

}  // namespace doflab
