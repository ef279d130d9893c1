#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "doflab/association.hpp"
#include "doflab/plans.hpp"
#include "doflab/rational.hpp"
#include "doflab/topology.hpp"

namespace doflab {

// A failed feasibility condition. Uplink numbering:
//   0 plan invariant (pair bookkeeping, share source)
//   1 decoding BS associated with and connected to its MT
//   2 at most one message decoded per BS
//   3 interference at a decoding BS cancelled by a shared message
//   4 decode dependencies acyclic
//   5 backhaul usage within C_i and |C_i| <= Nc
// Downlink numbering:
//   0 plan invariant (transmit set inside C_i, served message targets an
//     active receiver)
//   1 active receiver served by a connected transmitter
//   2 matching between transmit set and the active receivers it reaches
//   3 desired signal reaches its receiver
struct Violation {
  int condition;
  int mt;
  int bs;  // 0 when no single BS is implicated
  std::string message;
};

// Witness of a matching deficiency for one downlink message.
struct HallWitness {
  int message;
  std::vector<int> receivers;     // active receivers that cannot all be covered
  std::vector<int> transmitters;  // their neighbours within the transmit set
};

// Receiver -> transmitter assignment covering V for one served message.
struct MatchingCertificate {
  int message;
  std::vector<std::pair<int, int>> pairs;
};

struct DofReport {
  Session session = Session::uplink;
  int users = 0;
  bool accepted = false;
  std::vector<Violation> violations;
  int achieved_dof = 0;
  Rational per_user_ratio;
  int subnetwork_size = 0;
  std::vector<int> per_subnetwork;
  // Uplink only: MTs from subnetwork k decoded in subnetwork k-1, and BSs of
  // subnetwork k-1 left idle by unshared interference from subnetwork k.
  std::vector<int> borrowed;
  std::vector<int> blocked;
  // prefix_active[j-1] = number of active nodes with index <= j
  std::vector<int> prefix_active;
  // Uplink only: a valid decoding order of the active MTs.
  std::vector<int> decode_order;
  // Downlink only.
  std::vector<MatchingCertificate> certificates;
  std::vector<HallWitness> hall_witnesses;
};

struct CheckOptions {
  // Subnetwork size used for the per-subnetwork breakdown; 0 means K.
  int subnetwork_size = 0;
};

DofReport check_uplink(const UplinkPlan& plan, const CellAssociation& assoc,
                       const Topology& topology, const CheckOptions& options = {});

DofReport check_downlink(const DownlinkPlan& plan, const CellAssociation& assoc,
                         const Topology& topology, const CheckOptions& options = {});

using PairOfPairs = std::pair<std::pair<int, int>, std::pair<int, int>>;

// All pairs of decoding pairs (i1, j1), (i2, j2) with i1 > i2 but j1 <= j2.
std::vector<PairOfPairs> ordering_violations(const UplinkPlan& plan);

// True iff at most Nc decoding pairs have both MT and BS inside `window`.
bool set_budget_bound(const CellAssociation& assoc, const Topology& topology,
                      Interval window, const UplinkPlan& plan);

// Topological decode order implied by the cancellation requirements, highest
// ready MT first. nullopt on a cycle or a malformed plan.
std::optional<std::vector<int>> uplink_decode_order(const UplinkPlan& plan,
                                                    const Topology& topology);

struct SubnetworkDiagnostics {
  std::vector<int> borrowed;  // delta_k
  std::vector<int> blocked;   // mu_k
};

// delta_k counts decoding pairs with MT in block k and BS in block k-1.
// mu_k counts BSs of block k-1 with no decoding pair that receive an active
// interferer from block k whose message is not shared to them.
SubnetworkDiagnostics uplink_subnetwork_diagnostics(const UplinkPlan& plan,
                                                    const Topology& topology,
                                                    int block);

}  // namespace doflab
