#pragma once

// Naive reference implementations written directly from the definitions.

#include "critnet/equivalence.hpp"
#include "critnet/ledger.hpp"
#include "critnet/observer.hpp"
#include "support/generators.hpp"

#include <map>
#include <set>

namespace critnet::testing {

using Names = std::set<std::string>;

inline bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

/// Union of every relation R on X1 x X2 satisfying the bisimulation clauses
/// (initial and critical agreement, mutual simulation), found by enumerating
/// all 2^(|X1||X2|) relations.
inline BisimRelation brute_force_bisimulation(const Fsm& m1, const Fsm& m2) {
  const std::size_t n1 = m1.state_count();
  const std::size_t n2 = m2.state_count();
  const std::size_t cells = n1 * n2;
  if (cells > 16) throw std::logic_error("brute-force bisimulation is limited to 16 pairs");

  auto succ = [](const Fsm& m, StateIndex s, const std::string& label) -> StateSet {
    auto l = m.find_label(label);
    return l ? m.successors(s, *l) : StateSet{};
  };
  std::vector<std::string> labels = m1.alphabet();
  labels.insert(labels.end(), m2.alphabet().begin(), m2.alphabet().end());

  std::uint32_t union_mask = 0;
  for (std::uint32_t r = 1; r < (1u << cells); ++r) {
    auto in = [&](std::size_t a, std::size_t b) { return (r >> (a * n2 + b)) & 1u; };
    bool ok = true;
    for (std::size_t a = 0; a < n1 && ok; ++a)
      for (std::size_t b = 0; b < n2 && ok; ++b) {
        if (!in(a, b)) continue;
        auto x1 = static_cast<StateIndex>(a);
        auto x2 = static_cast<StateIndex>(b);
        if (m1.is_initial(x1) != m2.is_initial(x2) || m1.is_critical(x1) != m2.is_critical(x2)) {
          ok = false;
          break;
        }
        for (const auto& label : labels) {
          StateSet s1 = succ(m1, x1, label);
          StateSet s2 = succ(m2, x2, label);
          for (StateIndex y1 : s1)
            ok = ok && std::any_of(s2.begin(), s2.end(), [&](StateIndex y2) { return in(y1, y2); });
          for (StateIndex y2 : s2)
            ok = ok && std::any_of(s1.begin(), s1.end(), [&](StateIndex y1) { return in(y1, y2); });
        }
      }
    if (ok) union_mask |= r;
  }

  BisimRelation out;
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = 0; b < n2; ++b)
      if ((union_mask >> (a * n2 + b)) & 1u)
        out.pairs.emplace_back(m1.state_name(static_cast<StateIndex>(a)), m2.state_name(static_cast<StateIndex>(b)));
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

/// Every initial state of each machine is related to an initial state of
/// the other.
inline bool initially_total(const Fsm& m1, const Fsm& m2, const BisimRelation& r) {
  auto covered = [&](const Fsm& a, const Fsm& b, bool forward) {
    for (StateIndex x : a.initial()) {
      bool hit = false;
      for (StateIndex y : b.initial())
        hit = hit || (forward ? r.contains(a.state_name(x), b.state_name(y)) : r.contains(b.state_name(y), a.state_name(x)));
      if (!hit) return false;
    }
    return true;
  };
  return covered(m1, m2, true) && covered(m2, m1, false);
}

/// Bisimilarity as used for quotients: equal alphabets and an initially
/// total largest relation.
inline bool brute_force_bisimilar(const Fsm& m1, const Fsm& m2) {
  return m1.alphabet() == m2.alphabet() && initially_total(m1, m2, brute_force_bisimulation(m1, m2));
}

/// Product set z1 x ... x zN meets both the product critical set and its
/// complement, decided by enumerating every tuple.
inline bool straddle_by_tuples(const std::vector<StateSet>& parts, const std::vector<StateSet>& criticals) {
  bool saw_critical = false;
  bool saw_safe = false;
  std::vector<std::size_t> odometer(parts.size(), 0);
  while (true) {
    bool critical = false;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      StateIndex x = parts[i][odometer[i]];
      critical = critical || std::find(criticals[i].begin(), criticals[i].end(), x) != criticals[i].end();
    }
    (critical ? saw_critical : saw_safe) = true;
    std::size_t i = 0;
    while (i < parts.size() && ++odometer[i] == parts[i].size()) odometer[i++] = 0;
    if (i == parts.size()) break;
  }
  return saw_critical && saw_safe;
}

/// Critical observability by exploring every reachable state estimate as a
/// set of names: no estimate may mix critical and non-critical states.
inline bool semantically_observable(const Fsm& m) {
  std::set<Names> seen;
  std::vector<Names> work;
  Names init;
  for (StateIndex x : m.initial()) init.insert(m.state_name(x));
  seen.insert(init);
  work.push_back(init);
  const auto& transitions = m.transitions();
  std::set<std::string> critical;
  for (StateIndex x : m.critical()) critical.insert(m.state_name(x));
  while (!work.empty()) {
    Names z = work.back();
    work.pop_back();
    std::size_t hits = 0;
    for (const auto& x : z) hits += critical.count(x);
    if (hits != 0 && hits != z.size()) return false;
    for (const auto& label : m.alphabet()) {
      Names next;
      for (const auto& t : transitions)
        if (t.label == label && z.count(t.from)) next.insert(t.to);
      if (!next.empty() && seen.insert(next).second) work.push_back(next);
    }
  }
  return true;
}

/// Projection of a materialized decentralized observer onto member `i`:
/// the i-th parts of its states, the edges it takes part in, and outputs
/// recomputed from the member's own critical set.
inline ObserverFsm project_local(const ObserverFsm& composed, std::size_t i, const Fsm& member) {
  std::map<NameSet, std::size_t> index;
  std::vector<ObserverState> states;
  NameSet critical = member.to_names(member.critical());
  for (const auto& st : composed.states()) {
    const NameSet& z = st.parts.at(i);
    if (index.emplace(z, states.size()).second) states.push_back({{z}, intersects(z, critical)});
  }
  std::set<std::tuple<std::size_t, std::string, std::size_t>> edges;
  for (const auto& e : composed.edges())
    if (contains(member.alphabet(), e.label))
      edges.emplace(index.at(composed.state(e.from).parts[i]), e.label, index.at(composed.state(e.to).parts[i]));
  std::vector<ObserverEdge> list;
  for (const auto& [from, label, to] : edges) list.push_back({from, label, to});
  return ObserverFsm(member.alphabet(), std::move(states), list);
}

/// Observer validity by sampling runs of `m`: at every step the
/// observer's output must equal the criticality of the true state.
inline bool observer_valid_sampled(Rng& rng, const ObserverFsm& obs, const Fsm& m, std::size_t runs,
                                   std::size_t max_length) {
  for (std::size_t k = 0; k < runs; ++k) {
    SampledRun run = random_run(rng, m, max_length);
    std::vector<ObserverStep> steps;
    try {
      steps = observer_run(obs, run.word);
    } catch (const TraceNotInLanguage&) {
      return false;
    }
    for (std::size_t j = 0; j < run.states.size(); ++j)
      if (steps[j].output != m.is_critical(run.states[j])) return false;
  }
  return true;
}

/// Validity along given traces, covering every run of `m` that produces
/// them: at each prefix, every state of the estimate must carry the
/// observer's output as its criticality.
inline bool observer_valid_on_traces(const ObserverFsm& obs, const Fsm& m, const std::vector<Word>& traces) {
  for (const auto& w : traces) {
    std::vector<ObserverStep> steps;
    try {
      steps = observer_run(obs, w);
    } catch (const TraceNotInLanguage&) {
      return false;
    }
    StateSet estimate = m.initial();
    for (std::size_t j = 0; j <= w.size(); ++j) {
      if (j > 0) estimate = m.post(estimate, m.label_index(w[j - 1]));
      for (StateIndex x : estimate)
        if (m.is_critical(x) != steps[j].output) return false;
    }
  }
  return true;
}

/// Hand-rolled ledger: every stored transition costs the sizes of both
/// endpoint aggregates plus one, every state one output unit.
inline CostLedger ledger_by_definition(const ObserverFsm& obs) {
  CostLedger c;
  auto size = [](const AggregateState& a) {
    std::size_t n = 0;
    for (const auto& z : a) n += z.size();
    return n;
  };
  c.output_data = obs.state_count();
  for (const auto& e : obs.edges()) {
    c.transition_data += size(obs.state(e.from).parts) + size(obs.state(e.to).parts) + 1;
    ++c.time;
  }
  return c;
}

} // namespace critnet::testing
