#include "doflab/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "doflab/errors.hpp"
#include "doflab/zf_verify.hpp"

namespace doflab {

namespace {

using Mask = std::uint32_t;
constexpr int kMaxUsers = 30;

Mask bit(int index) { return Mask{1} << index; }

int popcount(Mask m) { return std::popcount(m); }

std::vector<int> members(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

IndexSet to_set(Mask m) {
  const auto v = members(m);
  return IndexSet(v.begin(), v.end());
}

// Connectivity as bitmasks; bit j stands for index j (bit 0 unused).
struct Network {
  int K;
  int L;
  int Nc;
  std::vector<Mask> bs_of_mt;  // BSs connected to MT i
  std::vector<Mask> mt_of_bs;  // MTs reached by BS j

  Network(const Topology& t, int budget)
      : K(t.users()), L(t.connectivity()), Nc(budget), bs_of_mt(K + 1), mt_of_bs(K + 1) {
    for (int i = 1; i <= K; ++i) {
      const Interval r = t.connected_range(i);
      for (int j = r.first; j <= r.last; ++j) {
        bs_of_mt[i] |= bit(j);
        mt_of_bs[j] |= bit(i);
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Uplink

// Partial uplink configuration over MTs 1..depth.
struct UplinkState {
  std::vector<int> dec;  // 0 = inactive
  Mask active = 0;
  Mask decoders = 0;
};

// pred(i): active MTs whose messages must be decoded before W_i.
Mask predecessors(const Network& net, const UplinkState& s, int i) {
  return net.mt_of_bs[s.dec[i]] & s.active & ~bit(i);
}

bool acyclic(const Network& net, const UplinkState& s) {
  Mask remaining = s.active;
  std::vector<Mask> pred(net.K + 1, 0);
  for (int i : members(s.active)) pred[i] = predecessors(net, s, i);
  while (remaining) {
    Mask ready = 0;
    for (int i : members(remaining)) {
      if ((pred[i] & remaining) == 0) ready |= bit(i);
    }
    if (!ready) return false;
    remaining &= ~ready;
  }
  return true;
}

bool budget_ok(const Network& net, const UplinkState& s, Mask who) {
  for (int m : members(who & s.active)) {
    if (popcount(net.bs_of_mt[m] & s.decoders) > net.Nc) return false;
  }
  return true;
}

// Incremental check after MT i became active at BS d.
bool extension_ok(const Network& net, const UplinkState& s, int i, int d) {
  return budget_ok(net, s, net.mt_of_bs[d] | bit(i)) && acyclic(net, s);
}

void activate(UplinkState& s, int i, int d) {
  s.dec[i] = d;
  s.active |= bit(i);
  s.decoders |= bit(d);
}

void deactivate(UplinkState& s, int i) {
  s.decoders &= ~bit(s.dec[i]);
  s.active &= ~bit(i);
  s.dec[i] = 0;
}

bool full_feasible(const Network& net, const std::vector<int>& dec) {
  UplinkState s;
  s.dec = dec;
  for (int i = 1; i <= net.K; ++i) {
    const int d = dec[i];
    if (d == 0) continue;
    if (!(net.bs_of_mt[i] & bit(d))) return false;
    if (s.decoders & bit(d)) return false;
    s.active |= bit(i);
    s.decoders |= bit(d);
  }
  return budget_ok(net, s, s.active) && acyclic(net, s);
}

// Choices for MT i in search order: active at each connected BS ascending,
// then inactive.
std::vector<int> uplink_choices(const Network& net, int i) {
  std::vector<int> out = members(net.bs_of_mt[i]);
  out.push_back(0);
  return out;
}

struct TaskOutcome {
  int value = -1;
  std::vector<int> detail;
  std::uint64_t nodes = 0;
  std::uint64_t pruned = 0;
};

// Runs tasks on `threads` workers; `run(index, global_best)` returns the
// task's best. Reduction keeps the highest value and, among equals, the
// lowest task index, so results do not depend on scheduling.
TaskOutcome run_tasks(std::size_t count, int threads,
                      const std::function<TaskOutcome(std::size_t, const std::atomic<int>&)>& run,
                      std::uint64_t* nodes, std::uint64_t* pruned) {
  std::vector<TaskOutcome> results(count);
  std::atomic<std::size_t> next{0};
  std::atomic<int> best{-1};
  auto worker = [&] {
    for (std::size_t t = next++; t < count; t = next++) {
      results[t] = run(t, best);
      int seen = best.load();
      while (results[t].value > seen && !best.compare_exchange_weak(seen, results[t].value)) {
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  TaskOutcome out;
  for (auto& r : results) {
    *nodes += r.nodes;
    *pruned += r.pruned;
    if (r.value > out.value) out = std::move(r);
  }
  return out;
}

class UplinkSearch {
 public:
  UplinkSearch(const Network& net, bool prune) : net_(net), prune_(prune) {}

  // Enumerates prefixes over the first `depth` MTs in search order.
  std::vector<std::vector<int>> prefixes(int depth) const {
    std::vector<std::vector<int>> out;
    UplinkState s;
    s.dec.assign(net_.K + 1, 0);
    std::function<void(int, int)> walk = [&](int i, int last) {
      if (i > depth) {
        out.push_back(s.dec);
        return;
      }
      for (int d : uplink_choices(net_, i)) {
        if (d != 0) {
          if (prune_ && d <= last) continue;
          if (prune_ && (s.decoders & bit(d))) continue;
          activate(s, i, d);
          if (!prune_ || extension_ok(net_, s, i, d)) walk(i + 1, d);
          deactivate(s, i);
        } else {
          walk(i + 1, last);
        }
      }
    };
    walk(1, 0);
    return out;
  }

  TaskOutcome run(const std::vector<int>& prefix, int depth, const std::atomic<int>& global) {
    global_ = &global;
    out_ = TaskOutcome{};
    state_ = UplinkState{};
    state_.dec = prefix;
    int last = 0;
    for (int i = 1; i <= depth; ++i) {
      if (prefix[i] != 0) {
        state_.active |= bit(i);
        state_.decoders |= bit(prefix[i]);
        last = prefix[i];
      }
    }
    dfs(depth + 1, popcount(state_.active), last);
    return out_;
  }

 private:
  void dfs(int i, int count, int last) {
    ++out_.nodes;
    if (i > net_.K) {
      if (!prune_ && !full_feasible(net_, state_.dec)) return;
      if (count > out_.value) {
        out_.value = count;
        out_.detail = state_.dec;
      }
      return;
    }
    if (prune_) {
      const int bound = count + std::min(net_.K - i + 1, net_.K - last);
      if (bound <= out_.value || bound < global_->load(std::memory_order_relaxed)) {
        ++out_.pruned;
        return;
      }
    }
    for (int d : uplink_choices(net_, i)) {
      if (d == 0) {
        dfs(i + 1, count, last);
        continue;
      }
      if (prune_ && d <= last) {
        ++out_.pruned;
        continue;
      }
      activate(state_, i, d);
      if (!prune_ || extension_ok(net_, state_, i, d)) {
        dfs(i + 1, count + 1, d);
      } else {
        ++out_.pruned;
      }
      deactivate(state_, i);
    }
  }

  const Network& net_;
  bool prune_;
  const std::atomic<int>* global_ = nullptr;
  UplinkState state_;
  TaskOutcome out_;
};

// Every feasible uplink configuration, in search order, as decoding vectors.
// The visitor returns false to stop.
void for_each_feasible_uplink(const Network& net, bool prune,
                              const std::function<bool(const std::vector<int>&)>& visit,
                              SearchStats& stats) {
  UplinkState s;
  s.dec.assign(net.K + 1, 0);
  bool stop = false;
  std::function<void(int, int)> walk = [&](int i, int last) {
    if (stop) return;
    ++stats.nodes;
    if (i > net.K) {
      if (!prune && !full_feasible(net, s.dec)) return;
      if (!visit(s.dec)) stop = true;
      return;
    }
    for (int d : uplink_choices(net, i)) {
      if (d == 0) {
        walk(i + 1, last);
        continue;
      }
      if (prune && d <= last) {
        ++stats.pruned;
        continue;
      }
      activate(s, i, d);
      if (!prune || extension_ok(net, s, i, d)) {
        walk(i + 1, d);
      } else {
        ++stats.pruned;
      }
      deactivate(s, i);
    }
  };
  walk(1, 0);
}

// ---------------------------------------------------------------------------
// Downlink

// Transmit-set candidates for one message: subsets of its window with at most
// Nc members and at least one member connected to the receiver, ordered by
// size then lexicographically.
struct Candidate {
  Mask transmitters;
  Mask reach;  // receivers reached by any member
};

class DownlinkModel {
 public:
  DownlinkModel(const Network& net, int window) : net_(net), window_(window) {
    candidates_.resize(net.K + 1);
    relevant_.assign(net.K + 1, 0);
    for (int i = 1; i <= net.K; ++i) {
      const int lo = std::max(1, i - net.L - window);
      const int hi = std::min(net.K, i + window);
      std::vector<int> pool;
      for (int j = lo; j <= hi; ++j) pool.push_back(j);
      std::vector<Candidate>& out = candidates_[i];
      for (int size = 1; size <= std::min<int>(net.Nc, pool.size()); ++size) {
        std::vector<int> pick(size);
        std::function<void(int, int)> gen = [&](int pos, int from) {
          if (pos == size) {
            Mask tx = 0;
            Mask reach = 0;
            for (int j : pick) {
              tx |= bit(j);
              reach |= net.mt_of_bs[j];
            }
            if (reach & bit(i)) out.push_back({tx, reach});
            return;
          }
          for (int n = from; n < static_cast<int>(pool.size()); ++n) {
            pick[pos] = pool[n];
            gen(pos + 1, n + 1);
          }
        };
        gen(0, 0);
      }
      for (const Candidate& c : out) relevant_[i] |= c.reach;
    }
  }

  int window() const noexcept { return window_; }
  const std::vector<Candidate>& candidates(int i) const { return candidates_[i]; }
  Mask relevant(int i) const { return relevant_[i]; }

  // Every receiver in `receivers` matched to a distinct connected transmitter.
  bool covered(Mask receivers, Mask transmitters) const {
    if (popcount(receivers) > popcount(transmitters)) return false;
    int mate[kMaxUsers + 2];
    std::fill(std::begin(mate), std::end(mate), 0);
    for (int r : members(receivers)) {
      Mask seen = 0;
      if (!augment(r, transmitters, seen, mate)) return false;
    }
    return true;
  }

  // First candidate for message i that zero-forces toward the active set,
  // with |candidate ∪ required| <= Nc. Returns 0 when none exists.
  Mask first_feasible(int i, Mask active, Mask required) const {
    for (const Candidate& c : candidates_[i]) {
      if (required && popcount(c.transmitters | required) > net_.Nc) continue;
      if (covered(c.reach & active, c.transmitters)) return c.transmitters;
    }
    return 0;
  }

 private:
  bool augment(int r, Mask transmitters, Mask& seen, int* mate) const {
    for (int t : members(net_.bs_of_mt[r] & transmitters & ~seen)) {
      seen |= bit(t);
      if (mate[t] == 0 || augment(mate[t], transmitters, seen, mate)) {
        mate[t] = r;
        return true;
      }
    }
    return false;
  }

  const Network& net_;
  int window_;
  std::vector<std::vector<Candidate>> candidates_;
  std::vector<Mask> relevant_;
};

// Best active-receiver set with per-MT association requirements. Searches
// set sizes from `max_size` down to `min_size` in lexicographic order and
// returns the first feasible set with its transmit sets.
class DownlinkSearch {
 public:
  DownlinkSearch(const DownlinkModel& model, const Network& net, bool prune)
      : model_(model), net_(net), prune_(prune), memo_(net.K + 1) {}

  struct Found {
    Mask active = 0;
    std::vector<Mask> transmit;  // per MT, 0 when unserved
  };

  // Best set of size >= min_size; nullopt when none reaches min_size.
  std::optional<Found> best(const std::vector<Mask>& required, int max_size, int min_size,
                            SearchStats& stats) {
    required_ = &required;
    if (!prune_) return exhaustive(min_size, stats);
    for (int size = std::min(max_size, net_.K); size >= std::max(min_size, 0); --size) {
      std::optional<Found> found;
      std::vector<int> pick(size);
      std::function<bool(int, int)> gen = [&](int pos, int from) {
        if (pos == size) {
          ++stats.nodes;
          Mask active = 0;
          for (int i : pick) active |= bit(i);
          if (auto f = feasible(active)) {
            found = std::move(f);
            return true;
          }
          return false;
        }
        for (int n = from; n <= net_.K - (size - pos) + 1; ++n) {
          pick[pos] = n;
          if (gen(pos + 1, n + 1)) return true;
        }
        return false;
      };
      gen(0, 1);
      if (found) return found;
    }
    return std::nullopt;
  }

 private:
  std::optional<Found> exhaustive(int min_size, SearchStats& stats) {
    std::optional<Found> best;
    std::vector<int> best_list;
    const Mask all = static_cast<Mask>(((std::uint64_t{1} << net_.K) - 1) << 1);
    for (Mask active = 0;; active = ((active | ~all) + 1) & all) {
      ++stats.nodes;
      if (auto f = feasible(active)) {
        const int size = popcount(active);
        const std::vector<int> list = members(active);
        const int best_size = best ? popcount(best->active) : -1;
        if (size >= min_size && (size > best_size || (size == best_size && list < best_list))) {
          best = std::move(f);
          best_list = list;
        }
      }
      if (active == all) break;
    }
    return best;
  }

  std::optional<Found> feasible(Mask active) {
    Found f;
    f.active = active;
    f.transmit.assign(net_.K + 1, 0);
    for (int i : members(active)) {
      const Mask req = (*required_)[i];
      Mask choice;
      if (prune_) {
        const std::uint64_t key =
            (std::uint64_t{req} << 32) | (active & model_.relevant(i));
        auto& memo = memo_[i];
        const auto it = memo.find(key);
        if (it != memo.end()) {
          choice = it->second;
        } else {
          choice = model_.first_feasible(i, active, req);
          memo.emplace(key, choice);
        }
      } else {
        choice = model_.first_feasible(i, active, req);
      }
      if (!choice) return std::nullopt;
      f.transmit[i] = choice;
    }
    return f;
  }

  const DownlinkModel& model_;
  const Network& net_;
  bool prune_;
  const std::vector<Mask>* required_ = nullptr;
  std::vector<std::unordered_map<std::uint64_t, Mask>> memo_;
};

// ---------------------------------------------------------------------------

void require_limit(OracleSession session, int K, int L, int Nc, int window, int limit) {
  if (K > limit || K > kMaxUsers) {
    const double size = search_size_estimate(session, K, L, Nc, window);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", size);
    throw LimitExceeded("K=" + std::to_string(K) + " exceeds the oracle limit of " +
                            std::to_string(std::min(limit, kMaxUsers)) +
                            "; unpruned search space is about " + buf + " configurations",
                        size);
  }
}

void require_parameters(int K, int L, int Nc) {
  if (Nc < 1) throw DomainError("Nc must be at least 1");
  Topology(K, L);
}

std::vector<std::string> uplink_assumptions() {
  return {"uplink associations restricted to connected BSs; lossless for L = 1, assumed for L > 1",
          "minimal associations C_i = connected BSs of MT i that decode some message"};
}

std::string window_note(int window) {
  return "downlink exact within window " + std::to_string(window) +
         ": C_i inside [i-L-" + std::to_string(window) + ", i+" + std::to_string(window) + "]";
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

DeclaredDof witness_count(int K, int count) { return {Rational(count, K), K, count, 1, count}; }

}  // namespace

std::string to_string(OracleSession s) {
  switch (s) {
    case OracleSession::uplink:
      return "uplink";
    case OracleSession::downlink:
      return "downlink";
    case OracleSession::average:
      return "avg";
  }
  return "?";
}

double search_size_estimate(OracleSession session, int K, int L, int Nc, int window) {
  const double up = std::pow(static_cast<double>(L + 2), K);
  double per_message = 0.0;
  const int pool = std::min(K, L + 1 + 2 * std::max(window, 0));
  for (int size = 1; size <= std::min(Nc, pool); ++size) {
    per_message += std::tgamma(pool + 1.0) / (std::tgamma(size + 1.0) * std::tgamma(pool - size + 1.0));
  }
  const double down = std::pow(2.0, K) * std::max(1.0, per_message) * K;
  switch (session) {
    case OracleSession::uplink:
      return up;
    case OracleSession::downlink:
      return down;
    case OracleSession::average:
      return up * down;
  }
  return up;
}

bool uplink_assignment_feasible(const Topology& topology, int Nc,
                                const UplinkAssignment& assignment) {
  const Network net(topology, Nc);
  if (static_cast<int>(assignment.size()) != net.K + 1) {
    throw DomainError("assignment must have K+1 entries (index 0 unused)");
  }
  return full_feasible(net, assignment);
}

SchemeBundle realize_uplink_assignment(const Topology& topology, int Nc,
                                       const UplinkAssignment& assignment) {
  const Network net(topology, Nc);
  const int K = net.K;
  Mask decoders = 0;
  for (int i = 1; i <= K; ++i) {
    if (assignment[i]) decoders |= bit(assignment[i]);
  }
  SetMap sets;
  UplinkPlan plan;
  std::map<int, int> decoded_at;
  for (int i = 1; i <= K; ++i) {
    if (assignment[i]) decoded_at[assignment[i]] = i;
  }
  for (int i = 1; i <= K; ++i) {
    const int d = assignment[i];
    if (!d) continue;
    plan.active_mts.insert(i);
    plan.decoding_pairs[i] = d;
    sets[i] = to_set(net.bs_of_mt[i] & decoders);
    for (int other : members(net.bs_of_mt[i] & decoders & ~bit(d))) {
      plan.shares.insert({d, other, i});
    }
  }
  const int count = static_cast<int>(plan.active_mts.size());
  return SchemeBundle{topology, CellAssociation(K, Nc, sets), plan, std::nullopt,
                      witness_count(K, count), std::nullopt};
}

OracleResult brute_force_uplink(int K, int L, int Nc, const OracleOptions& options) {
  require_parameters(K, L, Nc);
  require_limit(OracleSession::uplink, K, L, Nc, 0, options.limit);
  const auto start = std::chrono::steady_clock::now();
  const Topology topology(K, L);
  const Network net(topology, Nc);

  const int depth = std::min(K, 3);
  const auto prefixes = UplinkSearch(net, options.prune).prefixes(depth);
  OracleResult result;
  const TaskOutcome best = run_tasks(
      prefixes.size(), options.threads,
      [&](std::size_t t, const std::atomic<int>& global) {
        UplinkSearch search(net, options.prune);
        return search.run(prefixes[t], depth, global);
      },
      &result.stats.nodes, &result.stats.pruned);

  result.session = OracleSession::uplink;
  result.users = K;
  result.connectivity = L;
  result.budget = Nc;
  result.optimal_dof = best.value;
  result.uplink_dof = best.value;
  result.average = Rational(best.value);
  result.pruned = options.prune;
  result.witness = realize_uplink_assignment(topology, Nc, best.detail);
  result.assumptions = uplink_assumptions();
  result.stats.wall_ms = elapsed_ms(start);
  return result;
}

OracleResult brute_force_downlink(int K, int L, int Nc, const OracleOptions& options) {
  require_parameters(K, L, Nc);
  const int window = options.window < 0 ? Nc : options.window;
  require_limit(OracleSession::downlink, K, L, Nc, window, options.limit);
  const auto start = std::chrono::steady_clock::now();
  const Topology topology(K, L);
  const Network net(topology, Nc);
  const DownlinkModel model(net, window);
  DownlinkSearch search(model, net, options.prune);

  OracleResult result;
  const std::vector<Mask> none(K + 1, 0);
  const auto found = search.best(none, K, 0, result.stats);

  SetMap sets;
  DownlinkPlan plan;
  for (int i : members(found->active)) {
    sets[i] = to_set(found->transmit[i]);
    plan.transmit_sets[i] = sets[i];
    plan.active_receivers.insert(i);
  }
  const int count = popcount(found->active);
  result.session = OracleSession::downlink;
  result.users = K;
  result.connectivity = L;
  result.budget = Nc;
  result.optimal_dof = count;
  result.downlink_dof = count;
  result.average = Rational(count);
  result.window = window;
  result.pruned = options.prune;
  result.witness = SchemeBundle{topology, CellAssociation(K, Nc, sets), std::nullopt, plan,
                                std::nullopt, witness_count(K, count)};
  result.assumptions = {window_note(window)};
  result.stats.wall_ms = elapsed_ms(start);
  return result;
}

OracleResult brute_force_average(int K, int L, int Nc, const OracleOptions& options) {
  require_parameters(K, L, Nc);
  const int window = options.window < 0 ? Nc : options.window;
  require_limit(OracleSession::average, K, L, Nc, window, options.limit);
  const auto start = std::chrono::steady_clock::now();
  const Topology topology(K, L);
  const Network net(topology, Nc);
  const DownlinkModel model(net, window);

  OracleResult result;

  // Distinct uplink configurations in search order; only the active set and
  // the decoding BSs matter to the downlink.
  std::vector<std::vector<int>> configs;
  {
    std::unordered_set<std::uint64_t> seen;
    for_each_feasible_uplink(
        net, options.prune,
        [&](const std::vector<int>& dec) {
          Mask active = 0;
          Mask decoders = 0;
          for (int i = 1; i <= K; ++i) {
            if (dec[i]) {
              active |= bit(i);
              decoders |= bit(dec[i]);
            }
          }
          const std::uint64_t key = (std::uint64_t{active} << 32) | decoders;
          if (!options.prune || seen.insert(key).second) configs.push_back(dec);
          return true;
        },
        result.stats);
  }

  // Downlink optimum with no uplink requirements bounds every configuration.
  int downlink_cap = K;
  if (options.prune) {
    DownlinkSearch free_search(model, net, true);
    const std::vector<Mask> none(K + 1, 0);
    downlink_cap = popcount(free_search.best(none, K, 0, result.stats)->active);
  }

  std::mutex stats_mutex;
  const TaskOutcome best = run_tasks(
      configs.size(), options.threads,
      [&](std::size_t t, const std::atomic<int>& global) {
        TaskOutcome out;
        const auto& dec = configs[t];
        std::vector<Mask> required(K + 1, 0);
        Mask decoders = 0;
        int up = 0;
        for (int i = 1; i <= K; ++i) {
          if (dec[i]) {
            decoders |= bit(dec[i]);
            ++up;
          }
        }
        for (int i = 1; i <= K; ++i) {
          if (dec[i]) required[i] = net.bs_of_mt[i] & decoders;
        }
        const int floor = options.prune ? std::max(0, global.load() - up) : 0;
        if (options.prune && up + downlink_cap < global.load()) {
          out.pruned = 1;
          return out;
        }
        SearchStats local;
        DownlinkSearch search(model, net, options.prune);
        const auto found = search.best(required, downlink_cap, floor, local);
        out.nodes = local.nodes + 1;
        if (!found) return out;
        out.value = up + popcount(found->active);
        out.detail.assign(dec.begin(), dec.end());
        out.detail.push_back(static_cast<int>(found->active));
        for (int i = 1; i <= K; ++i) out.detail.push_back(static_cast<int>(found->transmit[i]));
        return out;
      },
      &result.stats.nodes, &result.stats.pruned);
  (void)stats_mutex;

  const std::vector<int> dec(best.detail.begin(), best.detail.begin() + K + 1);
  const Mask active_rx = static_cast<Mask>(best.detail[K + 1]);
  SchemeBundle bundle = realize_uplink_assignment(topology, Nc, dec);
  SetMap sets = bundle.association.as_map();
  DownlinkPlan plan;
  for (int i : members(active_rx)) {
    const Mask tx = static_cast<Mask>(best.detail[K + 1 + i]);
    plan.transmit_sets[i] = to_set(tx);
    plan.active_receivers.insert(i);
    sets[i].insert(plan.transmit_sets[i].begin(), plan.transmit_sets[i].end());
  }
  const int up = static_cast<int>(bundle.uplink_plan->active_mts.size());
  const int down = popcount(active_rx);
  bundle.association = CellAssociation(K, Nc, sets);
  bundle.downlink_plan = plan;
  bundle.downlink = witness_count(K, down);

  result.session = OracleSession::average;
  result.users = K;
  result.connectivity = L;
  result.budget = Nc;
  result.optimal_dof = up + down;
  result.uplink_dof = up;
  result.downlink_dof = down;
  result.average = Rational(up + down, 2);
  result.window = window;
  result.pruned = options.prune;
  result.witness = std::move(bundle);
  result.assumptions = uplink_assumptions();
  result.assumptions.push_back(window_note(window));
  result.stats.wall_ms = elapsed_ms(start);
  return result;
}

WitnessDiagnostics diagnostics(const SchemeBundle& witness, int block) {
  if (!witness.uplink_plan) throw DomainError("diagnostics need a witness with an uplink plan");
  const auto d = uplink_subnetwork_diagnostics(*witness.uplink_plan, witness.topology, block);
  return {block, d.borrowed, d.blocked};
}

UplinkAssignment sample_feasible_uplink(const Topology& topology, int Nc, std::mt19937_64& rng) {
  const Network net(topology, Nc);
  UplinkState s;
  s.dec.assign(net.K + 1, 0);
  for (int i = 1; i <= net.K; ++i) {
    std::vector<int> options{0};
    for (int d : members(net.bs_of_mt[i] & ~s.decoders)) {
      activate(s, i, d);
      if (extension_ok(net, s, i, d)) options.push_back(d);
      deactivate(s, i);
    }
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    const int d = options[pick(rng)];
    if (d) activate(s, i, d);
  }
  return s.dec;
}

SchemeBundle sample_accepted_downlink(const Topology& topology, int Nc, int window,
                                      std::mt19937_64& rng) {
  const Network net(topology, Nc);
  const DownlinkModel model(net, window < 0 ? Nc : window);
  const int K = net.K;
  std::bernoulli_distribution coin(0.6);
  Mask active = 0;
  for (int i = 1; i <= K; ++i) {
    if (coin(rng)) active |= bit(i);
  }
  std::vector<int> order = members(active);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Mask> transmit(K + 1, 0);
  for (int i : order) {
    std::vector<Mask> options;
    for (const Candidate& c : model.candidates(i)) {
      if (model.covered(c.reach & active, c.transmitters)) options.push_back(c.transmitters);
    }
    if (options.empty()) {
      active &= ~bit(i);
      continue;
    }
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    transmit[i] = options[pick(rng)];
  }
  SetMap sets;
  DownlinkPlan plan;
  for (int i : members(active)) {
    sets[i] = to_set(transmit[i]);
    plan.transmit_sets[i] = sets[i];
    plan.active_receivers.insert(i);
  }
  const int count = popcount(active);
  return SchemeBundle{topology, CellAssociation(K, Nc, sets), std::nullopt, plan, std::nullopt,
                      witness_count(K, count)};
}

}  // namespace doflab
