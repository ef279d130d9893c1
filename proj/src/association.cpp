#include "doflab/association.hpp"

#include <algorithm>
#include <string>

#include "doflab/errors.hpp"

namespace doflab {

namespace {

void check_keys(const SetMap& sets, int users, const char* field) {
  for (const auto& [mt, _] : sets) {
    if (mt < 1 || mt > users) {
      throw StructuralError(std::string(field) + " has MT key " + std::to_string(mt) +
                            " outside [1, " + std::to_string(users) + "]");
    }
  }
}

}  // namespace

CellAssociation::CellAssociation(int users, int budget)
    : budget_(budget), sets_(users > 0 ? users : 0) {
  if (users < 1) throw StructuralError("association needs K >= 1");
  if (budget < 1) throw StructuralError("association budget Nc must be positive");
}

CellAssociation::CellAssociation(int users, int budget, const SetMap& sets,
                                 std::optional<SetMap> downlink_extra)
    : CellAssociation(users, budget) {
  check_keys(sets, users, "C");
  for (const auto& [mt, set] : sets) sets_[mt - 1] = set;
  if (downlink_extra) {
    check_keys(*downlink_extra, users, "C_D");
    downlink_extra_ = std::move(downlink_extra);
  }
}

const IndexSet& CellAssociation::of(int mt) const {
  if (mt < 1 || mt > users()) {
    throw RangeError("MT index " + std::to_string(mt) + " outside [1, " +
                     std::to_string(users()) + "]");
  }
  return sets_[mt - 1];
}

const IndexSet* CellAssociation::downlink_extra_of(int mt) const {
  if (!downlink_extra_) return nullptr;
  const auto it = downlink_extra_->find(mt);
  return it == downlink_extra_->end() ? nullptr : &it->second;
}

SetMap CellAssociation::as_map() const {
  SetMap out;
  for (int mt = 1; mt <= users(); ++mt) out[mt] = sets_[mt - 1];
  return out;
}

AssociationVerdict validate(const CellAssociation& assoc, const Topology& topology) {
  const int K = topology.users();
  if (assoc.users() != K) {
    throw StructuralError("association covers " + std::to_string(assoc.users()) +
                          " MTs but the network has K=" + std::to_string(K));
  }
  AssociationVerdict verdict;
  for (int mt = 1; mt <= K; ++mt) {
    const IndexSet& set = assoc.of(mt);
    for (int bs : set) {
      if (bs < 1 || bs > K) {
        throw StructuralError("C_" + std::to_string(mt) + " contains BS " + std::to_string(bs) +
                              " outside [1, " + std::to_string(K) + "]");
      }
    }
    if (static_cast<int>(set.size()) > assoc.budget()) {
      verdict.violations.push_back({mt, set.size()});
    }
    if (const IndexSet* extra = assoc.downlink_extra_of(mt)) {
      IndexSet expected = topology.connected_bs(mt);
      for (int bs : *extra) {
        if (bs < 1 || bs > K) {
          throw StructuralError("C_D_" + std::to_string(mt) + " contains BS " +
                                std::to_string(bs) + " outside [1, " + std::to_string(K) + "]");
        }
        expected.insert(bs);
      }
      if (expected != set) {
        throw StructuralError("C_" + std::to_string(mt) +
                              " differs from C_D_i united with the connected BSs");
      }
    }
  }
  return verdict;
}

bool is_full_coverage(const CellAssociation& assoc, const Topology& topology) {
  for (int mt = 1; mt <= topology.users(); ++mt) {
    const IndexSet& set = assoc.of(mt);
    const Interval r = topology.connected_range(mt);
    for (int bs = r.first; bs <= r.last; ++bs) {
      if (!set.contains(bs)) return false;
    }
  }
  return true;
}

}  // namespace doflab
