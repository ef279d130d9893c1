#pragma once

#include <set>
#include <string>
#include <vector>

namespace doflab {

using IndexSet = std::set<int>;

enum class Session { uplink, downlink };

std::string to_string(Session s);

// Closed interval of 1-based indices.
struct Interval {
  int first = 1;
  int last = 0;

  int size() const noexcept { return last >= first ? last - first + 1 : 0; }
  bool contains(int i) const noexcept { return i >= first && i <= last; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// K-user locally connected network: MT i hears BS j iff i-L <= j <= i.
// All indices are 1-based.
class Topology {
 public:
  Topology(int users, int connectivity);

  int users() const noexcept { return users_; }
  int connectivity() const noexcept { return connectivity_; }

  bool connected(int mt, int bs) const noexcept {
    return bs >= 1 && bs <= users_ && mt >= 1 && mt <= users_ && bs <= mt &&
           mt - bs <= connectivity_;
  }

  // BSs reached by MT `mt`: [mt-L, mt] clipped to [1, K].
  Interval connected_range(int mt) const;
  IndexSet connected_bs(int mt) const;

  // MTs reached by BS `bs`: [bs, bs+L] clipped to [1, K].
  Interval reached_range(int bs) const;

  // Receivers a transmitter reaches: uplink transmitters are MTs and
  // downlink transmitters are BSs.
  IndexSet interference_set(int node, Session session) const;

  // Consecutive blocks of `block` pairs starting at block*(k-1)+1; the last
  // block may be shorter.
  std::vector<Interval> subnetwork_partition(int block) const;

  void require_index(int index, const char* what) const;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  int users_;
  int connectivity_;
};

}  // namespace doflab
