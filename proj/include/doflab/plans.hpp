#pragma once

#include <compare>
#include <map>
#include <set>

#include "doflab/topology.hpp"

namespace doflab {

// Backhaul transfer of decoded message W_mt from its decoding BS to another BS.
struct ShareEdge {
  int from_bs;
  int to_bs;
  int mt;
  friend auto operator<=>(const ShareEdge&, const ShareEdge&) = default;
};

// Message-passing decoding plan for the uplink.
struct UplinkPlan {
  IndexSet active_mts;
  std::map<int, int> decoding_pairs;  // MT -> decoding BS
  std::set<ShareEdge> shares;

  friend bool operator==(const UplinkPlan&, const UplinkPlan&) = default;
};

// Cooperative zero-forcing plan for the downlink: transmit_sets[i] holds the
// BSs actively transmitting W_i.
struct DownlinkPlan {
  std::map<int, IndexSet> transmit_sets;
  IndexSet active_receivers;

  friend bool operator==(const DownlinkPlan&, const DownlinkPlan&) = default;
};

}  // namespace doflab
