#include "doflab/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "doflab/errors.hpp"
#include "doflab/zf_verify.hpp"

namespace doflab {

ChannelRealization::ChannelRealization(Topology topology, std::uint64_t seed,
                                       Eigen::MatrixXd gains)
    : topology_(topology), seed_(seed), gains_(std::move(gains)) {
  if (gains_.rows() != topology_.users() || gains_.cols() != topology_.users()) {
    throw DomainError("channel matrix must be K x K");
  }
}

int ChannelRealization::nonzero_count() const {
  return static_cast<int>((gains_.array() != 0.0).count());
}

ChannelRealization sample_channels(const Topology& topology, std::uint64_t seed) {
  const int K = topology.users();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(K, K);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int mt = 1; mt <= K; ++mt) {
    const Interval r = topology.connected_range(mt);
    for (int bs = r.first; bs <= r.last; ++bs) h(mt - 1, bs - 1) = normal(rng);
  }
  return ChannelRealization(topology, seed, std::move(h));
}

PrecoderSolution solve_downlink_precoders(const DownlinkPlan& plan,
                                          const ChannelRealization& channels) {
  const Topology& topology = channels.topology();
  PrecoderSolution out;
  for (int r : plan.active_receivers) {
    const auto it = plan.transmit_sets.find(r);
    if (it == plan.transmit_sets.end() || it->second.empty()) {
      out.diagnostics.push_back("active receiver " + std::to_string(r) + " is not served");
    }
  }

  for (const auto& [msg, set] : plan.transmit_sets) {
    if (set.empty()) continue;
    if (!plan.active_receivers.contains(msg)) {
      out.diagnostics.push_back("W_" + std::to_string(msg) + " targets an inactive receiver");
      continue;
    }
    const std::vector<int> tx(set.begin(), set.end());
    std::vector<int> rx;
    for (int r : plan.active_receivers) {
      if (std::any_of(tx.begin(), tx.end(), [&](int t) { return topology.connected(r, t); })) {
        rx.push_back(r);
      }
    }
    const auto own = std::find(rx.begin(), rx.end(), msg);
    if (own == rx.end()) {
      out.diagnostics.push_back("W_" + std::to_string(msg) + " does not reach receiver " +
                                std::to_string(msg));
      continue;
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(rx.size());
    const Eigen::Index cols = static_cast<Eigen::Index>(tx.size());
    Eigen::MatrixXd a(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = channels.gain(rx[r], tx[c]);
    }
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
    b(own - rx.begin()) = 1.0;
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    if (cod.rank() < rows) {
      out.diagnostics.push_back("W_" + std::to_string(msg) + ": nulling system with " +
                                std::to_string(rows) + " receivers and " +
                                std::to_string(cols) + " transmitters has rank " +
                                std::to_string(cod.rank()));
      continue;
    }
    const Eigen::VectorXd x = cod.solve(b);
    MessagePrecoder p{tx, std::vector<double>(x.data(), x.data() + x.size())};
    out.precoders.emplace(msg, std::move(p));
  }

  for (const auto& [msg, p] : out.precoders) {
    for (int r : plan.active_receivers) {
      double g = 0.0;
      for (std::size_t n = 0; n < p.transmitters.size(); ++n) {
        g += channels.gain(r, p.transmitters[n]) * p.coefficients[n];
      }
      if (r == msg) {
        out.max_gain_error = std::max(out.max_gain_error, std::abs(g - 1.0));
      } else {
        out.max_residual = std::max(out.max_residual, std::abs(g));
      }
    }
  }
  return out;
}

std::vector<double> power_grid(double min_exp, double max_exp, int points) {
  if (points < 2) throw DomainError("power grid needs at least two points");
  if (max_exp < min_exp) throw DomainError("power grid maximum exponent below minimum");
  std::vector<double> out;
  out.reserve(points);
  for (int g = 0; g < points; ++g) {
    out.push_back(std::exp2(min_exp + (max_exp - min_exp) * g / (points - 1)));
  }
  return out;
}

RateCurve simulate_uplink(const UplinkPlan& plan, const ChannelRealization& channels,
                          const std::vector<double>& powers) {
  const Topology& topology = channels.topology();
  const int K = topology.users();
  const auto order = uplink_decode_order(plan, topology);
  if (!order) throw ContractViolation("uplink plan has no valid decode order");

  std::set<int> decoded;
  for (int i : *order) {
    const int j = plan.decoding_pairs.at(i);
    const Interval reach = topology.reached_range(j);
    for (int k = reach.first; k <= reach.last; ++k) {
      if (k == i || !plan.active_mts.contains(k)) continue;
      const bool subtracted =
          decoded.contains(k) &&
          plan.shares.contains(ShareEdge{plan.decoding_pairs.at(k), j, k});
      if (!subtracted) {
        throw ContractViolation("W_" + std::to_string(k) + " still interferes at BS " +
                                std::to_string(j) + " when decoding W_" + std::to_string(i));
      }
    }
    decoded.insert(i);
  }

  RateCurve curve;
  curve.powers = powers;
  for (double p : powers) {
    std::vector<double> row(K, 0.0);
    for (const auto& [i, j] : plan.decoding_pairs) {
      if (!plan.active_mts.contains(i)) continue;
      const double h = channels.gain(i, j);
      row[i - 1] = 0.5 * std::log2(1.0 + h * h * p);
    }
    curve.rates.push_back(std::move(row));
  }
  return curve;
}

RateCurve simulate_downlink(const DownlinkPlan& plan, const ChannelRealization& channels,
                            const std::vector<double>& powers) {
  const int K = channels.topology().users();
  const PrecoderSolution sol = solve_downlink_precoders(plan, channels);
  if (!sol.feasible()) throw ContractViolation("downlink precoders: " + sol.diagnostics.front());

  std::vector<int> load(K + 1, 0);
  for (const auto& [msg, p] : sol.precoders) {
    for (int t : p.transmitters) ++load[t];
  }
  const int max_load = std::max(1, *std::max_element(load.begin(), load.end()));

  // cross[r][m]: gain of message m's precoder at receiver r
  std::map<int, std::map<int, double>> cross;
  std::map<int, double> peak;
  for (const auto& [msg, p] : sol.precoders) {
    double m = 0.0;
    for (double c : p.coefficients) m = std::max(m, c * c);
    peak[msg] = m;
    for (int r : plan.active_receivers) {
      double g = 0.0;
      for (std::size_t n = 0; n < p.transmitters.size(); ++n) {
        g += channels.gain(r, p.transmitters[n]) * p.coefficients[n];
      }
      cross[r][msg] = g;
    }
  }

  RateCurve curve;
  curve.powers = powers;
  for (double power : powers) {
    std::vector<double> row(K, 0.0);
    for (int r : plan.active_receivers) {
      double signal = 0.0;
      double interference = 0.0;
      for (const auto& [msg, g] : cross[r]) {
        const double share = power / (max_load * peak[msg]);
        if (msg == r) {
          signal = share * g * g;
        } else {
          interference += share * g * g;
        }
      }
      row[r - 1] = 0.5 * std::log2(1.0 + signal / (1.0 + interference));
    }
    curve.rates.push_back(std::move(row));
  }
  return curve;
}

DofEstimate estimate_dof(const RateCurve& curve) {
  const int n = static_cast<int>(curve.powers.size());
  if (n < 4) throw DomainError("DoF estimation needs at least four power points");
  if (static_cast<int>(curve.rates.size()) != n) {
    throw DomainError("rate curve has " + std::to_string(curve.rates.size()) +
                      " rows for " + std::to_string(n) + " power points");
  }
  for (int g = 1; g < n; ++g) {
    if (!(curve.powers[g] > curve.powers[g - 1])) {
      throw DomainError("power grid must be strictly increasing");
    }
  }
  const int used = std::max(2, n / 2);
  const int first = n - used;
  if (!(curve.powers[first] > 0.0)) {
    throw DomainError("power grid must be positive over the regression window");
  }

  std::vector<double> x;
  for (int g = first; g < n; ++g) x.push_back(0.5 * std::log2(curve.powers[g]));
  double x_mean = 0.0;
  for (double v : x) x_mean += v;
  x_mean /= used;
  double sxx = 0.0;
  for (double v : x) sxx += (v - x_mean) * (v - x_mean);

  DofEstimate out;
  out.points_used = used;
  const int users = curve.users();
  out.per_user.assign(users, 0.0);
  for (int u = 0; u < users; ++u) {
    double y_mean = 0.0;
    for (int g = first; g < n; ++g) y_mean += curve.rates[g][u];
    y_mean /= used;
    double sxy = 0.0;
    for (int g = first; g < n; ++g) sxy += (x[g - first] - x_mean) * (curve.rates[g][u] - y_mean);
    out.per_user[u] = sxy / sxx;
    out.sum += out.per_user[u];
  }
  return out;
}

}  // namespace doflab
