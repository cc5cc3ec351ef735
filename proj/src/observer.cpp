#include "critnet/observer.hpp"

#include "critnet/detail/hash.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace critnet {

std::string format_aggregate(const AggregateState& parts) {
  if (parts.size() == 1) return format_subset(parts.front());
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += format_subset(parts[i]);
  }
  out += ')';
  return out;
}

ObserverFsm::ObserverFsm(std::vector<std::string> alphabet, std::vector<ObserverState> states,
                         const std::vector<ObserverEdge>& edges)
    : alphabet_(std::move(alphabet)), states_(std::move(states)) {
  if (!std::is_sorted(alphabet_.begin(), alphabet_.end()) ||
      std::adjacent_find(alphabet_.begin(), alphabet_.end()) != alphabet_.end())
    throw InvalidInput("observer alphabet must be sorted and duplicate-free");
  if (states_.empty()) throw InvalidInput("observer has no states");
  const std::size_t arity = states_.front().parts.size();
  if (arity == 0) throw InvalidInput("observer state has no parts");

  std::map<AggregateState, std::size_t> seen;
  for (std::size_t s = 0; s < states_.size(); ++s) {
    const auto& parts = states_[s].parts;
    if (parts.size() != arity) throw InvalidInput("observer states differ in arity");
    for (const auto& z : parts) {
      if (z.empty()) throw InvalidInput("observer state " + states_[s].name() + " has an empty part");
      if (!std::is_sorted(z.begin(), z.end()) || std::adjacent_find(z.begin(), z.end()) != z.end())
        throw InvalidInput("observer state parts must be sorted sets");
    }
    if (!seen.emplace(parts, s).second) throw InvalidInput("duplicate observer state " + states_[s].name());
  }

  next_.assign(states_.size() * alphabet_.size(), npos);
  for (const auto& e : edges) {
    if (e.from >= states_.size() || e.to >= states_.size()) throw InvalidInput("observer edge out of range");
    auto l = find_label(e.label);
    if (!l) throw InvalidInput("observer edge label '" + e.label + "' is not in the alphabet");
    auto& slot = next_[e.from * alphabet_.size() + *l];
    if (slot != npos && slot != e.to)
      throw InvalidInput("observer is nondeterministic at " + states_[e.from].name() + " on '" + e.label + "'");
    slot = e.to;
  }

  std::vector<bool> reached(states_.size(), false);
  std::deque<std::size_t> queue{0};
  reached[0] = true;
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    for (LabelIndex l = 0; l < alphabet_.size(); ++l) {
      std::size_t t = next(s, l);
      if (t != npos && !reached[t]) {
        reached[t] = true;
        queue.push_back(t);
      }
    }
  }
  for (std::size_t s = 0; s < states_.size(); ++s)
    if (!reached[s]) throw InvalidInput("observer state " + states_[s].name() + " is not accessible");
}

std::optional<LabelIndex> ObserverFsm::find_label(std::string_view name) const noexcept {
  auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), name);
  if (it == alphabet_.end() || *it != name) return std::nullopt;
  return static_cast<LabelIndex>(it - alphabet_.begin());
}

std::optional<std::size_t> ObserverFsm::find_state(const AggregateState& parts) const {
  for (std::size_t s = 0; s < states_.size(); ++s)
    if (states_[s].parts == parts) return s;
  return std::nullopt;
}

std::vector<ObserverEdge> ObserverFsm::edges() const {
  std::vector<ObserverEdge> out;
  for (std::size_t s = 0; s < states_.size(); ++s)
    for (LabelIndex l = 0; l < alphabet_.size(); ++l)
      if (std::size_t t = next(s, l); t != npos) out.push_back({s, alphabet_[l], t});
  return out;
}

std::size_t ObserverFsm::transition_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(next_.begin(), next_.end(), [](std::size_t t) { return t != npos; }));
}

bool operator==(const ObserverFsm& a, const ObserverFsm& b) {
  if (a.alphabet_ != b.alphabet_ || a.states_.size() != b.states_.size()) return false;
  if (a.states_.front().parts != b.states_.front().parts) return false;
  std::map<AggregateState, std::size_t> index_b;
  for (std::size_t s = 0; s < b.states_.size(); ++s) index_b.emplace(b.states_[s].parts, s);
  std::vector<std::size_t> to_b(a.states_.size());
  for (std::size_t s = 0; s < a.states_.size(); ++s) {
    auto it = index_b.find(a.states_[s].parts);
    if (it == index_b.end() || b.states_[it->second].output != a.states_[s].output) return false;
    to_b[s] = it->second;
  }
  for (std::size_t s = 0; s < a.states_.size(); ++s)
    for (LabelIndex l = 0; l < a.alphabet_.size(); ++l) {
      std::size_t ta = a.next(s, l);
      std::size_t tb = b.next(to_b[s], l);
      if ((ta == ObserverFsm::npos) != (tb == ObserverFsm::npos)) return false;
      if (ta != ObserverFsm::npos && to_b[ta] != tb) return false;
    }
  return true;
}

ObserverFsm build_observer(const Fsm& m, const BuildLimits& limits) {
  std::unordered_map<StateSet, std::size_t, detail::VectorHash> index;
  std::vector<StateSet> subsets;
  std::deque<std::size_t> queue;
  std::vector<ObserverEdge> edges;

  auto intern = [&](StateSet z) {
    auto [it, fresh] = index.try_emplace(z, subsets.size());
    if (fresh) {
      if (subsets.size() >= limits.max_states)
        throw ResourceLimit("observer exceeds the state budget of " + std::to_string(limits.max_states));
      subsets.push_back(std::move(z));
      queue.push_back(it->second);
    }
    return it->second;
  };

  intern(m.initial());
  while (!queue.empty()) {
    std::size_t z = queue.front();
    queue.pop_front();
    for (LabelIndex l = 0; l < m.label_count(); ++l) {
      StateSet succ = m.post(subsets[z], l);
      if (succ.empty()) continue;
      std::size_t t = intern(std::move(succ));
      edges.push_back({z, m.label_name(l), t});
    }
  }

  std::vector<ObserverState> states;
  states.reserve(subsets.size());
  for (const auto& z : subsets)
    states.push_back({{m.to_names(z)}, intersects(z, m.critical())});
  return ObserverFsm(m.alphabet(), std::move(states), edges);
}

Verdict check_observable(const ObserverFsm& obs, std::span<const NameSet> criticals) {
  if (criticals.size() != obs.arity()) throw InvalidInput("critical sets do not match observer arity");
  for (const auto& st : obs.states()) {
    if (!st.output) continue;
    bool inside = false;
    for (std::size_t i = 0; i < st.parts.size() && !inside; ++i) inside = is_subset(st.parts[i], criticals[i]);
    if (!inside) return {false, st.parts};
  }
  return {};
}

Verdict check_observable(const ObserverFsm& obs, const NameSet& critical) {
  return check_observable(obs, std::span<const NameSet>(&critical, 1));
}

Verdict check_observable(const Fsm& m) {
  return check_observable(build_observer(m), m.to_names(m.critical()));
}

DecentralizedObserver build_decentralized(const Network& n, const BuildLimits& limits) {
  DecentralizedObserver d;
  for (const auto& member : n.members()) d.locals.push_back({member.name, build_observer(member.fsm, limits)});
  return d;
}

ObserverFsm compose_decentralized(const DecentralizedObserver& d, const BuildLimits& limits) {
  if (d.locals.empty()) throw InvalidInput("decentralized observer has no locals");
  if (d.locals.size() == 1) return d.locals.front().observer;
  const std::size_t n = d.locals.size();

  std::vector<std::string> alphabet;
  for (const auto& local : d.locals)
    alphabet.insert(alphabet.end(), local.observer.alphabet().begin(), local.observer.alphabet().end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());

  std::vector<std::vector<std::optional<LabelIndex>>> local_label(alphabet.size());
  for (std::size_t l = 0; l < alphabet.size(); ++l)
    for (const auto& local : d.locals) local_label[l].push_back(local.observer.find_label(alphabet[l]));

  using Tuple = std::vector<std::size_t>;
  std::unordered_map<Tuple, std::size_t, detail::VectorHash> index;
  std::vector<Tuple> tuples;
  std::deque<std::size_t> queue;
  std::vector<ObserverEdge> edges;
  auto intern = [&](Tuple t) {
    auto [it, fresh] = index.try_emplace(t, tuples.size());
    if (fresh) {
      if (tuples.size() >= limits.max_states)
        throw ResourceLimit("decentralized observer exceeds the state budget of " + std::to_string(limits.max_states));
      tuples.push_back(std::move(t));
      queue.push_back(it->second);
    }
    return it->second;
  };

  intern(Tuple(n, 0));
  while (!queue.empty()) {
    std::size_t src = queue.front();
    queue.pop_front();
    for (std::size_t l = 0; l < alphabet.size(); ++l) {
      Tuple target = tuples[src];
      bool enabled = true;
      for (std::size_t i = 0; i < n && enabled; ++i) {
        if (!local_label[l][i]) continue;
        std::size_t t = d.locals[i].observer.next(target[i], *local_label[l][i]);
        if (t == ObserverFsm::npos) enabled = false; else target[i] = t;
      }
      if (!enabled) continue;
      std::size_t dst = intern(std::move(target));
      edges.push_back({src, alphabet[l], dst});
    }
  }

  std::vector<ObserverState> states;
  states.reserve(tuples.size());
  for (const auto& t : tuples) {
    ObserverState st;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& local = d.locals[i].observer.state(t[i]);
      st.parts.insert(st.parts.end(), local.parts.begin(), local.parts.end());
      st.output = st.output || local.output;
    }
    states.push_back(std::move(st));
  }
  return ObserverFsm(std::move(alphabet), std::move(states), edges);
}

std::vector<ObserverStep> observer_run(const ObserverFsm& obs, const Word& w) {
  std::vector<ObserverStep> run;
  run.reserve(w.size() + 1);
  std::size_t s = obs.initial();
  run.push_back({s, obs.output(s)});
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto l = obs.find_label(w[i]);
    if (!l) throw InvalidInput("label '" + w[i] + "' is not in the observer alphabet");
    std::size_t t = obs.next(s, *l);
    if (t == ObserverFsm::npos)
      throw TraceNotInLanguage("no transition on '" + w[i] + "' from " + obs.state(s).name() + " at position " +
                               std::to_string(i));
    s = t;
    run.push_back({s, obs.output(s)});
  }
  return run;
}

bool is_critical_observer(const ObserverFsm& obs, const Fsm& m) {
  if (obs.alphabet() != m.alphabet()) return false;
  using Pair = std::pair<StateIndex, std::size_t>;
  std::vector<bool> seen(m.state_count() * obs.state_count(), false);
  std::deque<Pair> queue;
  auto visit = [&](StateIndex x, std::size_t z) {
    std::size_t key = static_cast<std::size_t>(x) * obs.state_count() + z;
    if (!seen[key]) {
      seen[key] = true;
      queue.emplace_back(x, z);
    }
  };
  for (StateIndex x0 : m.initial()) visit(x0, obs.initial());
  while (!queue.empty()) {
    auto [x, z] = queue.front();
    queue.pop_front();
    if (obs.output(z) != m.is_critical(x)) return false;
    for (LabelIndex l = 0; l < m.label_count(); ++l) {
      const auto& succ = m.successors(x, l);
      if (succ.empty()) continue;
      std::size_t z2 = obs.next(z, l);
      if (z2 == ObserverFsm::npos) return false;
      for (StateIndex x2 : succ) visit(x2, z2);
    }
  }
  return true;
}

NameSet product_set(const AggregateState& parts) {
  if (parts.size() == 1) return parts.front();
  std::vector<std::vector<std::string>> tuples{{}};
  for (const auto& z : parts) {
    std::vector<std::vector<std::string>> next;
    for (const auto& prefix : tuples)
      for (const auto& x : z) {
        auto t = prefix;
        t.push_back(x);
        next.push_back(std::move(t));
      }
    tuples = std::move(next);
  }
  NameSet out;
  out.reserve(tuples.size());
  for (const auto& t : tuples) out.push_back(product_name(t));
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace critnet
