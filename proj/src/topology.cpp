#include "doflab/topology.hpp"

#include <algorithm>
#include <string>

#include "doflab/errors.hpp"

namespace doflab {

std::string to_string(Session s) {
  return s == Session::uplink ? "uplink" : "downlink";
}

Topology::Topology(int users, int connectivity)
    : users_(users), connectivity_(connectivity) {
  if (users < 1) throw DomainError("K must be positive, got " + std::to_string(users));
  if (connectivity < 0 || connectivity >= users) {
    throw DomainError("L must satisfy 0 <= L < K, got L=" + std::to_string(connectivity) +
                      " with K=" + std::to_string(users));
  }
}

void Topology::require_index(int index, const char* what) const {
  if (index < 1 || index > users_) {
    throw RangeError(std::string(what) + " index " + std::to_string(index) +
                     " outside [1, " + std::to_string(users_) + "]");
  }
}

Interval Topology::connected_range(int mt) const {
  require_index(mt, "MT");
  return {std::max(1, mt - connectivity_), mt};
}

IndexSet Topology::connected_bs(int mt) const {
  const Interval r = connected_range(mt);
  IndexSet out;
  for (int j = r.first; j <= r.last; ++j) out.insert(out.end(), j);
  return out;
}

Interval Topology::reached_range(int bs) const {
  require_index(bs, "BS");
  return {bs, std::min(users_, bs + connectivity_)};
}

IndexSet Topology::interference_set(int node, Session session) const {
  const Interval r = session == Session::uplink ? connected_range(node) : reached_range(node);
  IndexSet out;
  for (int j = r.first; j <= r.last; ++j) out.insert(out.end(), j);
  return out;
}

std::vector<Interval> Topology::subnetwork_partition(int block) const {
  if (block < 1) throw DomainError("subnetwork size must be positive");
  std::vector<Interval> out;
  for (int first = 1; first <= users_; first += block) {
    out.push_back({first, std::min(first + block - 1, users_)});
  }
  return out;
}

}  // namespace doflab
