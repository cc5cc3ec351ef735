#include "critnet/onthefly.hpp"

#include "critnet/detail/hash.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace critnet {

bool straddle_test(std::span<const StateSet> parts, std::span<const StateSet> criticals) {
  if (parts.size() != criticals.size()) throw InvalidInput("aggregate and critical sets differ in length");
  bool meets_critical = false;
  bool meets_safe = true;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty()) throw InvalidInput("aggregate part is empty");
    meets_critical = meets_critical || intersects(parts[i], criticals[i]);
    meets_safe = meets_safe && !is_subset(parts[i], criticals[i]);
  }
  return meets_critical && meets_safe;
}

bool straddle_test(const AggregateState& parts, std::span<const NameSet> criticals) {
  if (parts.size() != criticals.size()) throw InvalidInput("aggregate and critical sets differ in length");
  bool meets_critical = false;
  bool meets_safe = true;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].empty()) throw InvalidInput("aggregate part is empty");
    meets_critical = meets_critical || intersects(parts[i], criticals[i]);
    meets_safe = meets_safe && !is_subset(parts[i], criticals[i]);
  }
  return meets_critical && meets_safe;
}

namespace {

// Growing fragment of one member's observer.
class LocalFragment {
public:
  LocalFragment(const Fsm& m) : fsm_(m) { intern(m.initial()); }

  std::size_t intern(const StateSet& z) {
    auto [it, fresh] = index_.try_emplace(z, subsets_.size());
    if (fresh) {
      subsets_.push_back(z);
      next_.resize(next_.size() + fsm_.label_count(), ObserverFsm::npos);
    }
    return it->second;
  }

  void record(const StateSet& from, LabelIndex l, const StateSet& to) {
    std::size_t s = intern(from);
    std::size_t t = intern(to);
    next_[s * fsm_.label_count() + l] = t;
  }

  CostLedger ledger() const {
    CostLedger c;
    c.output_data = subsets_.size();
    for (std::size_t s = 0; s < subsets_.size(); ++s)
      for (LabelIndex l = 0; l < fsm_.label_count(); ++l)
        if (std::size_t t = next_[s * fsm_.label_count() + l]; t != ObserverFsm::npos) {
          c.transition_data += subsets_[s].size() + subsets_[t].size() + 1;
          ++c.time;
        }
    return c;
  }

  ObserverFsm to_observer() const {
    std::vector<ObserverState> states;
    for (const auto& z : subsets_) states.push_back({{fsm_.to_names(z)}, intersects(z, fsm_.critical())});
    std::vector<ObserverEdge> edges;
    for (std::size_t s = 0; s < subsets_.size(); ++s)
      for (LabelIndex l = 0; l < fsm_.label_count(); ++l)
        if (std::size_t t = next_[s * fsm_.label_count() + l]; t != ObserverFsm::npos)
          edges.push_back({s, fsm_.label_name(l), t});
    return ObserverFsm(fsm_.alphabet(), std::move(states), edges);
  }

private:
  const Fsm& fsm_;
  std::unordered_map<StateSet, std::size_t, detail::VectorHash> index_;
  std::vector<StateSet> subsets_;
  std::vector<std::size_t> next_;
};

} // namespace

OnTheFlyOutcome run_onthefly(const Network& n, const OnTheFlyOptions& options) {
  const std::size_t members = n.size();
  std::vector<std::string> alphabet;
  for (const auto& m : n.members()) alphabet.insert(alphabet.end(), m.fsm.alphabet().begin(), m.fsm.alphabet().end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());

  std::vector<std::vector<std::optional<LabelIndex>>> local_label(alphabet.size());
  for (std::size_t l = 0; l < alphabet.size(); ++l)
    for (const auto& m : n.members()) local_label[l].push_back(m.fsm.find_label(alphabet[l]));

  std::vector<StateSet> criticals;
  std::vector<LocalFragment> fragments;
  fragments.reserve(members);
  for (const auto& m : n.members()) {
    criticals.push_back(m.fsm.critical());
    fragments.emplace_back(m.fsm);
  }

  using Aggregate = std::vector<StateSet>;
  Aggregate initial;
  for (const auto& m : n.members()) initial.push_back(m.fsm.initial());

  OnTheFlyOutcome outcome;
  std::unordered_set<Aggregate, detail::NestedVectorHash> visited{initial};
  std::vector<Aggregate> frontier{initial};

  auto to_names = [&](const Aggregate& agg) {
    AggregateState out;
    for (std::size_t i = 0; i < members; ++i) out.push_back(n[i].fsm.to_names(agg[i]));
    return out;
  };

  while (!frontier.empty() && outcome.observable) {
    if (options.progress) options.progress(outcome.generations, frontier.size(), visited.size());
    ++outcome.generations;
    std::vector<Aggregate> next_frontier;
    for (const auto& agg : frontier) {
      for (std::size_t l = 0; l < alphabet.size() && outcome.observable; ++l) {
        Aggregate target = agg;
        bool enabled = true;
        for (std::size_t i = 0; i < members && enabled; ++i) {
          if (!local_label[l][i]) continue;
          target[i] = n[i].fsm.post(agg[i], *local_label[l][i]);
          enabled = !target[i].empty();
        }
        if (!enabled) continue;

        if (!visited.contains(target)) {
          if (straddle_test(target, criticals)) {
            outcome.observable = false;
            outcome.violation = to_names(target);
            break;
          }
          if (visited.size() >= options.max_aggregates)
            throw ResourceLimit("on-the-fly exploration exceeds the budget of " +
                                std::to_string(options.max_aggregates) + " aggregates");
          visited.insert(target);
          next_frontier.push_back(target);
        }
        for (std::size_t i = 0; i < members; ++i)
          if (local_label[l][i]) fragments[i].record(agg[i], *local_label[l][i], target[i]);
      }
      if (!outcome.observable) break;
    }
    std::sort(next_frontier.begin(), next_frontier.end());
    frontier = std::move(next_frontier);
  }

  outcome.aggregates_explored = visited.size();
  for (const auto& f : fragments) outcome.ledger += f.ledger();
  if (outcome.observable)
    for (std::size_t i = 0; i < members; ++i) outcome.locals.push_back({n[i].name, fragments[i].to_observer()});
  return outcome;
}

} // namespace critnet
