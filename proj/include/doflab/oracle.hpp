#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "doflab/plans.hpp"
#include "doflab/rational.hpp"
#include "doflab/schemes.hpp"
#include "doflab/topology.hpp"

namespace doflab {

enum class OracleSession { uplink, downlink, average };

std::string to_string(OracleSession s);

struct OracleOptions {
  int limit = 10;      // largest K searched
  bool prune = true;
  int threads = 1;
  int window = -1;     // downlink association window; negative means Nc
};

struct SearchStats {
  std::uint64_t nodes = 0;
  std::uint64_t pruned = 0;
  double wall_ms = 0.0;
};

struct OracleResult {
  OracleSession session = OracleSession::uplink;
  int users = 0;
  int connectivity = 0;
  int budget = 0;
  // Uplink/downlink: optimal active count. Average: uplink + downlink total.
  int optimal_dof = 0;
  int uplink_dof = 0;
  int downlink_dof = 0;
  Rational average;          // optimal_dof / 2 for the average session
  int window = 0;            // downlink window used (0 for uplink)
  bool pruned = true;
  std::optional<SchemeBundle> witness;  // always set on return
  SearchStats stats;
  std::vector<std::string> assumptions;
};

// Maximum number of active MTs over every uplink zero-forcing plan whose
// association stays within connected_bs(i).
OracleResult brute_force_uplink(int K, int L, int Nc, const OracleOptions& options = {});

// Maximum number of active receivers over associations
// C_i in [i-L-window, i+window], |C_i| <= Nc.
OracleResult brute_force_downlink(int K, int L, int Nc, const OracleOptions& options = {});

// Maximum of uplink + downlink active counts over a single shared association.
OracleResult brute_force_average(int K, int L, int Nc, const OracleOptions& options = {});

// Size of the unpruned search space, used in LimitExceeded messages.
double search_size_estimate(OracleSession session, int K, int L, int Nc, int window);

// Per-subnetwork borrowed / blocked counts for a witness with an uplink plan.
struct WitnessDiagnostics {
  int block = 0;
  std::vector<int> borrowed;
  std::vector<int> blocked;
};
WitnessDiagnostics diagnostics(const SchemeBundle& witness, int block);

// Uplink configuration: decoding BS per MT (0 = inactive), 1-based.
using UplinkAssignment = std::vector<int>;

// Exact feasibility of an assignment with minimal associations
// C_i = connected_bs(i) ∩ {decoding BSs}.
bool uplink_assignment_feasible(const Topology& topology, int Nc,
                                const UplinkAssignment& assignment);

// Plan and association realizing a feasible assignment.
SchemeBundle realize_uplink_assignment(const Topology& topology, int Nc,
                                       const UplinkAssignment& assignment);

// Random walk down the exact uplink search tree: each MT picks uniformly among
// the choices that keep the partial assignment feasible.
UplinkAssignment sample_feasible_uplink(const Topology& topology, int Nc,
                                        std::mt19937_64& rng);

// Random accepted downlink plan with transmit sets inside the window.
SchemeBundle sample_accepted_downlink(const Topology& topology, int Nc, int window,
                                      std::mt19937_64& rng);

}  // namespace doflab
