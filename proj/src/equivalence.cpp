#include "critnet/equivalence.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <tuple>

namespace critnet {

MachineView view_of(const Fsm& m) {
  MachineView v;
  v.alphabet = m.alphabet();
  v.initial = m.initial();
  v.output.resize(m.state_count());
  v.succ.resize(m.state_count() * m.label_count());
  for (StateIndex s = 0; s < m.state_count(); ++s) {
    v.output[s] = m.is_critical(s);
    for (LabelIndex l = 0; l < m.label_count(); ++l) v.succ[s * m.label_count() + l] = m.successors(s, l);
  }
  return v;
}

MachineView view_of(const ObserverFsm& obs) {
  MachineView v;
  v.alphabet = obs.alphabet();
  v.initial = {static_cast<StateIndex>(obs.initial())};
  const std::size_t labels = obs.alphabet().size();
  v.output.resize(obs.state_count());
  v.succ.resize(obs.state_count() * labels);
  for (std::size_t s = 0; s < obs.state_count(); ++s) {
    v.output[s] = obs.output(s);
    for (LabelIndex l = 0; l < labels; ++l)
      if (std::size_t t = obs.next(s, l); t != ObserverFsm::npos) v.succ[s * labels + l] = {static_cast<StateIndex>(t)};
  }
  return v;
}

namespace {

std::vector<std::size_t> bfs_order(const MachineView& m) {
  std::vector<bool> seen(m.size(), false);
  std::vector<std::size_t> order;
  for (StateIndex s : m.initial)
    if (!seen[s]) {
      seen[s] = true;
      order.push_back(s);
    }
  for (std::size_t head = 0; head < order.size(); ++head)
    for (std::size_t l = 0; l < m.alphabet.size(); ++l)
      for (StateIndex t : m.successors(order[head], l))
        if (!seen[t]) {
          seen[t] = true;
          order.push_back(t);
        }
  return order;
}

bool is_deterministic(const MachineView& m) {
  if (m.initial.size() != 1) return false;
  return std::all_of(m.succ.begin(), m.succ.end(), [](const StateSet& s) { return s.size() <= 1; });
}

// Matches accessible states of two deterministic machines in lockstep.
bool match_deterministic(const MachineView& a, const MachineView& b, std::vector<std::size_t>& map_ab) {
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> map_ba(b.size(), none);
  std::deque<std::size_t> queue;
  auto bind = [&](std::size_t x, std::size_t y) {
    if (map_ab[x] == none && map_ba[y] == none) {
      if (a.output[x] != b.output[y]) return false;
      map_ab[x] = y;
      map_ba[y] = x;
      queue.push_back(x);
      return true;
    }
    return map_ab[x] == y && map_ba[y] == x;
  };
  if (!bind(a.initial.front(), b.initial.front())) return false;
  while (!queue.empty()) {
    std::size_t x = queue.front();
    queue.pop_front();
    std::size_t y = map_ab[x];
    for (std::size_t l = 0; l < a.alphabet.size(); ++l) {
      const auto& sa = a.successors(x, l);
      const auto& sb = b.successors(y, l);
      if (sa.size() != sb.size()) return false;
      if (!sa.empty() && !bind(sa.front(), sb.front())) return false;
    }
  }
  return true;
}

// Colour refinement plus backtracking over the accessible parts.
class IsoSearch {
public:
  IsoSearch(const MachineView& a, const MachineView& b, std::vector<std::size_t> order_a,
            std::vector<std::size_t> order_b)
      : a_(a), b_(b), order_a_(std::move(order_a)), order_b_(std::move(order_b)) {}

  bool run(std::vector<std::size_t>& map_ab) {
    refine_colours();
    std::map<int, long> balance;
    for (std::size_t x : order_a_) ++balance[colour_a_[x]];
    for (std::size_t y : order_b_) --balance[colour_b_[y]];
    for (auto [c, d] : balance)
      if (d != 0) return false;

    preds_a_ = predecessors(a_);
    preds_b_ = predecessors(b_);
    map_ab_.assign(a_.size(), none);
    map_ba_.assign(b_.size(), none);
    if (!extend(0)) return false;
    map_ab = map_ab_;
    return true;
  }

private:
  static constexpr std::size_t none = static_cast<std::size_t>(-1);

  static std::vector<std::vector<StateSet>> predecessors(const MachineView& m) {
    std::vector<std::vector<StateSet>> preds(m.size(), std::vector<StateSet>(m.alphabet.size()));
    for (std::size_t s = 0; s < m.size(); ++s)
      for (std::size_t l = 0; l < m.alphabet.size(); ++l)
        for (StateIndex t : m.successors(s, l)) preds[t][l].push_back(static_cast<StateIndex>(s));
    return preds;
  }

  void refine_colours() {
    colour_a_.assign(a_.size(), -1);
    colour_b_.assign(b_.size(), -1);
    auto is_init = [](const MachineView& m, std::size_t s) {
      return std::binary_search(m.initial.begin(), m.initial.end(), static_cast<StateIndex>(s));
    };
    for (std::size_t x : order_a_) colour_a_[x] = (a_.output[x] ? 2 : 0) + (is_init(a_, x) ? 1 : 0);
    for (std::size_t y : order_b_) colour_b_[y] = (b_.output[y] ? 2 : 0) + (is_init(b_, y) ? 1 : 0);
    std::size_t classes = 0;
    while (true) {
      std::map<std::vector<long>, int> ids;
      auto signature = [&](const MachineView& m, const std::vector<int>& colour, std::size_t s) {
        std::vector<long> sig{colour[s]};
        for (std::size_t l = 0; l < m.alphabet.size(); ++l) {
          std::vector<long> succ;
          for (StateIndex t : m.successors(s, l)) succ.push_back(colour[t]);
          std::sort(succ.begin(), succ.end());
          sig.push_back(-1);
          sig.insert(sig.end(), succ.begin(), succ.end());
        }
        return sig;
      };
      std::vector<int> next_a(a_.size(), -1), next_b(b_.size(), -1);
      for (std::size_t x : order_a_)
        next_a[x] = ids.try_emplace(signature(a_, colour_a_, x), static_cast<int>(ids.size())).first->second;
      for (std::size_t y : order_b_)
        next_b[y] = ids.try_emplace(signature(b_, colour_b_, y), static_cast<int>(ids.size())).first->second;
      colour_a_ = std::move(next_a);
      colour_b_ = std::move(next_b);
      if (ids.size() == classes) break;
      classes = ids.size();
    }
  }

  bool consistent(std::size_t x, std::size_t y) const {
    for (std::size_t l = 0; l < a_.alphabet.size(); ++l) {
      for (StateIndex v : a_.successors(x, l))
        if (map_ab_[v] != none && !std::binary_search(b_.successors(y, l).begin(), b_.successors(y, l).end(),
                                                      static_cast<StateIndex>(map_ab_[v])))
          return false;
      for (StateIndex w : b_.successors(y, l))
        if (map_ba_[w] != none && !std::binary_search(a_.successors(x, l).begin(), a_.successors(x, l).end(),
                                                      static_cast<StateIndex>(map_ba_[w])))
          return false;
      for (StateIndex u : preds_a_[x][l])
        if (map_ab_[u] != none &&
            !std::binary_search(b_.successors(map_ab_[u], l).begin(), b_.successors(map_ab_[u], l).end(),
                                static_cast<StateIndex>(y)))
          return false;
      for (StateIndex u : preds_b_[y][l])
        if (map_ba_[u] != none &&
            !std::binary_search(a_.successors(map_ba_[u], l).begin(), a_.successors(map_ba_[u], l).end(),
                                static_cast<StateIndex>(x)))
          return false;
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order_a_.size()) return true;
    std::size_t x = order_a_[depth];
    for (std::size_t y : order_b_) {
      if (map_ba_[y] != none || colour_b_[y] != colour_a_[x]) continue;
      map_ab_[x] = y;
      map_ba_[y] = x;
      if (consistent(x, y) && extend(depth + 1)) return true;
      map_ab_[x] = none;
      map_ba_[y] = none;
    }
    return false;
  }

  const MachineView& a_;
  const MachineView& b_;
  std::vector<std::size_t> order_a_;
  std::vector<std::size_t> order_b_;
  std::vector<int> colour_a_;
  std::vector<int> colour_b_;
  std::vector<std::vector<StateSet>> preds_a_;
  std::vector<std::vector<StateSet>> preds_b_;
  std::vector<std::size_t> map_ab_;
  std::vector<std::size_t> map_ba_;
};

} // namespace

std::optional<IsoWitness> iso_check(const MachineView& a, const MachineView& b) {
  if (a.alphabet != b.alphabet || a.size() != b.size()) return std::nullopt;
  auto order_a = bfs_order(a);
  auto order_b = bfs_order(b);
  if (order_a.size() != order_b.size()) return std::nullopt;

  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> map_ab(a.size(), none);
  bool found = is_deterministic(a) && is_deterministic(b)
                   ? match_deterministic(a, b, map_ab)
                   : IsoSearch(a, b, order_a, order_b).run(map_ab);
  if (!found) return std::nullopt;

  // Inaccessible states are only constrained by their outputs.
  std::vector<bool> used_b(b.size(), false);
  for (std::size_t x = 0; x < a.size(); ++x)
    if (map_ab[x] != none) used_b[map_ab[x]] = true;
  for (bool out : {false, true}) {
    std::vector<std::size_t> rest_a, rest_b;
    for (std::size_t x = 0; x < a.size(); ++x)
      if (map_ab[x] == none && a.output[x] == out) rest_a.push_back(x);
    for (std::size_t y = 0; y < b.size(); ++y)
      if (!used_b[y] && b.output[y] == out) rest_b.push_back(y);
    if (rest_a.size() != rest_b.size()) return std::nullopt;
    for (std::size_t i = 0; i < rest_a.size(); ++i) map_ab[rest_a[i]] = rest_b[i];
  }

  IsoWitness w;
  for (std::size_t x = 0; x < a.size(); ++x) w.pairs.emplace_back(x, map_ab[x]);
  return w;
}

std::optional<IsoWitness> iso_check(const Fsm& a, const Fsm& b) { return iso_check(view_of(a), view_of(b)); }

std::optional<IsoWitness> iso_check(const ObserverFsm& a, const ObserverFsm& b) {
  return iso_check(view_of(a), view_of(b));
}

bool BisimRelation::contains(const std::string& x1, const std::string& x2) const {
  return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(x1, x2));
}

namespace {

// Partition of 0..n-1 into blocks, each block grouped into a compound block.
// Elements of a block occupy a contiguous range of `elems_`; marked elements
// are moved to the front of their block's range.
class RefinablePartition {
public:
  explicit RefinablePartition(const std::vector<std::uint32_t>& initial_key) {
    const std::size_t n = initial_key.size();
    elems_.resize(n);
    std::iota(elems_.begin(), elems_.end(), 0u);
    std::stable_sort(elems_.begin(), elems_.end(),
                     [&](std::uint32_t x, std::uint32_t y) { return initial_key[x] < initial_key[y]; });
    pos_.resize(n);
    block_of_.resize(n);
    compounds_.emplace_back();
    for (std::size_t i = 0; i < n; ++i) {
      if (i == 0 || initial_key[elems_[i]] != initial_key[elems_[i - 1]]) {
        blocks_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), 0, 0,
                           static_cast<std::uint32_t>(compounds_[0].size())});
        compounds_[0].push_back(static_cast<std::uint32_t>(blocks_.size() - 1));
      }
      blocks_.back().end = static_cast<std::uint32_t>(i + 1);
      pos_[elems_[i]] = static_cast<std::uint32_t>(i);
      block_of_[elems_[i]] = static_cast<std::uint32_t>(blocks_.size() - 1);
    }
    in_worklist_.push_back(false);
    enqueue_if_compound(0);
  }

  std::uint32_t block_of(std::uint32_t x) const { return block_of_[x]; }

  void mark(std::uint32_t x) {
    Block& b = blocks_[block_of_[x]];
    std::uint32_t p = pos_[x];
    std::uint32_t target = b.begin + b.marked;
    if (p < target) return;
    std::swap(elems_[p], elems_[target]);
    pos_[elems_[p]] = p;
    pos_[elems_[target]] = target;
    if (b.marked++ == 0) touched_.push_back(block_of_[x]);
  }

  /// Splits every touched block into its marked and unmarked parts.
  void split_marked() {
    for (std::uint32_t bi : touched_) {
      Block& b = blocks_[bi];
      if (b.marked == b.end - b.begin) {
        b.marked = 0;
        continue;
      }
      Block fresh{b.begin, b.begin + b.marked, 0, b.compound,
                  static_cast<std::uint32_t>(compounds_[b.compound].size())};
      b.begin += b.marked;
      b.marked = 0;
      std::uint32_t fi = static_cast<std::uint32_t>(blocks_.size());
      blocks_.push_back(fresh);
      for (std::uint32_t i = fresh.begin; i < fresh.end; ++i) block_of_[elems_[i]] = fi;
      compounds_[fresh.compound].push_back(fi);
      enqueue_if_compound(fresh.compound);
    }
    touched_.clear();
  }

  /// Detaches the smaller of the first two blocks of some compound block into
  /// a compound of its own; returns its elements, or nothing when stable.
  std::optional<std::vector<std::uint32_t>> next_splitter() {
    while (!worklist_.empty()) {
      std::uint32_t c = worklist_.back();
      if (compounds_[c].size() < 2) {
        worklist_.pop_back();
        in_worklist_[c] = false;
        continue;
      }
      auto& members = compounds_[c];
      std::uint32_t b0 = members[0], b1 = members[1];
      std::uint32_t chosen = size(b0) <= size(b1) ? b0 : b1;
      // Swap-remove `chosen` from its compound.
      std::uint32_t slot = blocks_[chosen].slot;
      members[slot] = members.back();
      blocks_[members[slot]].slot = slot;
      members.pop_back();
      if (members.size() < 2) {
        worklist_.pop_back();
        in_worklist_[c] = false;
      }
      compounds_.push_back({chosen});
      in_worklist_.push_back(false);
      blocks_[chosen].compound = static_cast<std::uint32_t>(compounds_.size() - 1);
      blocks_[chosen].slot = 0;
      return std::vector<std::uint32_t>(elems_.begin() + blocks_[chosen].begin, elems_.begin() + blocks_[chosen].end);
    }
    return std::nullopt;
  }

private:
  struct Block {
    std::uint32_t begin;
    std::uint32_t end;
    std::uint32_t marked;
    std::uint32_t compound;
    std::uint32_t slot;  // position within the compound's block list
  };

  std::uint32_t size(std::uint32_t b) const { return blocks_[b].end - blocks_[b].begin; }

  void enqueue_if_compound(std::uint32_t c) {
    if (compounds_[c].size() >= 2 && !in_worklist_[c]) {
      in_worklist_[c] = true;
      worklist_.push_back(c);
    }
  }

  std::vector<std::uint32_t> elems_;
  std::vector<std::uint32_t> pos_;
  std::vector<std::uint32_t> block_of_;
  std::vector<Block> blocks_;
  std::vector<std::vector<std::uint32_t>> compounds_;
  std::vector<bool> in_worklist_;
  std::vector<std::uint32_t> worklist_;
  std::vector<std::uint32_t> touched_;
};

// Coarsest stable partition of a labelled transition system (Paige-Tarjan
// with per-edge counters). Returns the block id of every state.
std::vector<std::uint32_t> coarsest_bisimulation(std::size_t n, std::size_t labels,
                                                 const std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>& edges,
                                                 std::vector<std::uint32_t> key) {
  // Incoming edges per (label, target).
  std::vector<std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>> incoming(
      labels, std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>>(n));
  std::vector<std::uint32_t> out_degree(n * labels, 0);
  for (std::uint32_t e = 0; e < edges.size(); ++e) {
    auto [x, l, y] = edges[e];
    incoming[l][y].emplace_back(x, e);
    ++out_degree[x * labels + l];
  }

  // Initial blocks: key plus the set of enabled labels.
  {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    for (std::size_t x = 0; x < n; ++x) {
      std::vector<std::uint32_t> sig{key[x]};
      for (std::size_t l = 0; l < labels; ++l) sig.push_back(out_degree[x * labels + l] ? 1u : 0u);
      key[x] = ids.try_emplace(std::move(sig), static_cast<std::uint32_t>(ids.size())).first->second;
    }
  }

  // counters[c]: number of l-edges from a state into one compound block.
  std::vector<std::int64_t> counters;
  std::vector<std::uint32_t> counter_of_edge(edges.size());
  {
    std::vector<std::int64_t> per_state_label(n * labels, -1);
    for (std::uint32_t e = 0; e < edges.size(); ++e) {
      auto [x, l, y] = edges[e];
      auto& c = per_state_label[x * labels + l];
      if (c < 0) {
        c = static_cast<std::int64_t>(counters.size());
        counters.push_back(out_degree[x * labels + l]);
      }
      counter_of_edge[e] = static_cast<std::uint32_t>(c);
    }
  }

  RefinablePartition partition(key);
  std::vector<std::int64_t> fresh_counter(n, -1);
  std::vector<std::uint32_t> witness_edge(n);
  std::vector<std::uint32_t> pre;
  while (auto splitter = partition.next_splitter()) {
    for (std::size_t l = 0; l < labels; ++l) {
      pre.clear();
      for (std::uint32_t y : *splitter)
        for (auto [x, e] : incoming[l][y]) {
          if (fresh_counter[x] < 0) {
            fresh_counter[x] = static_cast<std::int64_t>(counters.size());
            counters.push_back(0);
            witness_edge[x] = e;
            pre.push_back(x);
          }
          ++counters[fresh_counter[x]];
        }
      if (pre.empty()) continue;

      for (std::uint32_t x : pre) partition.mark(x);
      partition.split_marked();

      // States whose l-edges into the old compound all land in the splitter.
      for (std::uint32_t x : pre)
        if (counters[counter_of_edge[witness_edge[x]]] == counters[fresh_counter[x]]) partition.mark(x);
      partition.split_marked();

      for (std::uint32_t y : *splitter)
        for (auto [x, e] : incoming[l][y]) {
          --counters[counter_of_edge[e]];
          counter_of_edge[e] = static_cast<std::uint32_t>(fresh_counter[x]);
        }
      for (std::uint32_t x : pre) fresh_counter[x] = -1;
    }
  }

  std::vector<std::uint32_t> block(n);
  for (std::uint32_t x = 0; x < n; ++x) block[x] = partition.block_of(x);
  return block;
}

} // namespace

BisimRelation largest_bisimulation(const Fsm& m1, const Fsm& m2) {
  std::vector<std::string> alphabet = m1.alphabet();
  alphabet.insert(alphabet.end(), m2.alphabet().begin(), m2.alphabet().end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());

  const std::uint32_t n1 = static_cast<std::uint32_t>(m1.state_count());
  const std::size_t n = n1 + m2.state_count();
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> edges;
  std::vector<std::uint32_t> key(n);
  auto add_machine = [&](const Fsm& m, std::uint32_t offset) {
    for (StateIndex s = 0; s < m.state_count(); ++s) {
      key[offset + s] = (m.is_critical(s) ? 2u : 0u) + (m.is_initial(s) ? 1u : 0u);
      for (LabelIndex l = 0; l < m.label_count(); ++l) {
        auto global = static_cast<std::uint32_t>(
            std::lower_bound(alphabet.begin(), alphabet.end(), m.label_name(l)) - alphabet.begin());
        for (StateIndex t : m.successors(s, l)) edges.emplace_back(offset + s, global, offset + t);
      }
    }
  };
  add_machine(m1, 0);
  add_machine(m2, n1);

  auto block = coarsest_bisimulation(n, alphabet.size(), edges, std::move(key));
  BisimRelation r;
  for (StateIndex x1 = 0; x1 < m1.state_count(); ++x1)
    for (StateIndex x2 = 0; x2 < m2.state_count(); ++x2)
      if (block[x1] == block[n1 + x2]) r.pairs.emplace_back(m1.state_name(x1), m2.state_name(x2));
  std::sort(r.pairs.begin(), r.pairs.end());
  return r;
}

std::optional<BisimRelation> bisim_check(const Fsm& m1, const Fsm& m2) {
  if (m1.alphabet() != m2.alphabet()) return std::nullopt;
  BisimRelation r = largest_bisimulation(m1, m2);
  std::vector<bool> covered1(m1.state_count(), false), covered2(m2.state_count(), false);
  for (const auto& [x1, x2] : r.pairs) {
    StateIndex i1 = m1.state_index(x1);
    StateIndex i2 = m2.state_index(x2);
    if (m1.is_initial(i1) && m2.is_initial(i2)) {
      covered1[i1] = true;
      covered2[i2] = true;
    }
  }
  for (StateIndex s : m1.initial())
    if (!covered1[s]) return std::nullopt;
  for (StateIndex s : m2.initial())
    if (!covered2[s]) return std::nullopt;
  return r;
}

std::size_t EquivalenceClasses::class_of(std::size_t member) const {
  for (std::size_t c = 0; c < classes.size(); ++c)
    if (std::find(classes[c].members.begin(), classes[c].members.end(), member) != classes[c].members.end()) return c;
  throw InvalidInput("member " + std::to_string(member) + " is in no class");
}

Quotient quotient_network(const Network& n) {
  EquivalenceClasses eq;
  for (std::size_t i = 0; i < n.size(); ++i) {
    bool placed = false;
    for (auto& c : eq.classes) {
      if (bisim_check(n[c.representative].fsm, n[i].fsm)) {
        c.members.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) eq.classes.push_back({{i}, i});
  }
  std::vector<Network::Member> reps;
  for (const auto& c : eq.classes) reps.push_back(n[c.representative]);
  return {Network(std::move(reps)), std::move(eq)};
}

PreservationReport preservation_check(const Network& n, const BuildLimits& limits) {
  Quotient q = quotient_network(n);
  Fsm full = compose_network(n);
  Fsm reduced = compose_network(q.network);
  ObserverFsm obs_full = build_observer(full, limits);
  ObserverFsm obs_reduced = build_observer(reduced, limits);

  PreservationReport r;
  r.members = n.size();
  r.reduced_members = q.network.size();
  r.observable_full = check_observable(obs_full, full.to_names(full.critical())).observable;
  r.observable_reduced = check_observable(obs_reduced, reduced.to_names(reduced.critical())).observable;
  r.observer_valid_reduced = is_critical_observer(obs_reduced, reduced);
  r.observer_valid_full = is_critical_observer(obs_reduced, full);
  return r;
}

} // namespace critnet
