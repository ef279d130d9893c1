#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "doflab/plans.hpp"
#include "doflab/topology.hpp"

namespace doflab {

// Real channel gains. gain(mt, bs) is nonzero iff the pair is connected.
class ChannelRealization {
 public:
  ChannelRealization(Topology topology, std::uint64_t seed, Eigen::MatrixXd gains);

  const Topology& topology() const noexcept { return topology_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double gain(int mt, int bs) const { return gains_(mt - 1, bs - 1); }
  const Eigen::MatrixXd& matrix() const noexcept { return gains_; }
  int nonzero_count() const;

 private:
  Topology topology_;
  std::uint64_t seed_;
  Eigen::MatrixXd gains_;  // row = MT, column = BS, 0-based storage
};

// Standard normal entries on the connectivity support, drawn MT by MT in
// increasing BS order from a generator seeded with `seed`.
ChannelRealization sample_channels(const Topology& topology, std::uint64_t seed);

struct MessagePrecoder {
  std::vector<int> transmitters;          // sorted transmit set
  std::vector<double> coefficients;       // aligned with transmitters
};

struct PrecoderSolution {
  std::map<int, MessagePrecoder> precoders;
  double max_residual = 0.0;       // worst |cross gain| at an active receiver
  double max_gain_error = 0.0;     // worst |own gain - 1|
  std::vector<std::string> diagnostics;  // rank deficiencies etc.
  bool feasible() const noexcept { return diagnostics.empty(); }
};

// For every served message, the minimum-norm coefficients over its transmit
// set giving unit gain at its own receiver and zero gain at every other active
// receiver it reaches.
PrecoderSolution solve_downlink_precoders(const DownlinkPlan& plan,
                                          const ChannelRealization& channels);

// Rates in bits per channel use; rates[g][i-1] is user i at powers[g].
struct RateCurve {
  std::vector<double> powers;
  std::vector<std::vector<double>> rates;

  int users() const noexcept {
    return rates.empty() ? 0 : static_cast<int>(rates.front().size());
  }
};

// 2^e for e = min_exp, ..., max_exp in `points` evenly spaced steps.
std::vector<double> power_grid(double min_exp, double max_exp, int points);

// Successive decoding along the plan's decode order with perfect subtraction
// of shared messages. Active users get 0.5*log2(1 + H^2 P).
RateCurve simulate_uplink(const UplinkPlan& plan, const ChannelRealization& channels,
                          const std::vector<double>& powers);

// Zero-forcing downlink rates. Message i gets power P / (n * max_j v_ji^2) where
// n is the largest number of messages any transmitter carries, so every
// transmitter stays within P.
RateCurve simulate_downlink(const DownlinkPlan& plan, const ChannelRealization& channels,
                            const std::vector<double>& powers);

struct DofEstimate {
  std::vector<double> per_user;
  double sum = 0.0;
  int points_used = 0;
};

// Least-squares slope of R_i against 0.5*log2 P over the upper half of the
// grid (at least two points). Throws DomainError on a degenerate grid.
DofEstimate estimate_dof(const RateCurve& curve);

}  // namespace doflab
