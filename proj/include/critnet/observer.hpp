#pragma once

#include "critnet/composition.hpp"
#include "critnet/fsm.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace critnet {

/// Tuple (z1,...,zN) of subset states; a plain observer state has one part.
using AggregateState = std::vector<NameSet>;

/// "{a,b}" for one part, "({a},{b,c})" for several.
std::string format_aggregate(const AggregateState& parts);

struct ObserverState {
  AggregateState parts;
  bool output = false;

  std::string name() const { return format_aggregate(parts); }
  friend bool operator==(const ObserverState&, const ObserverState&) = default;
};

struct ObserverEdge {
  std::size_t from;
  std::string label;
  std::size_t to;
};

/// Deterministic machine over subset states with a boolean output.
///
/// State 0 is the initial state. Every state is accessible and no part of
/// any state is empty. Equality compares by state content, not by index.
class ObserverFsm {
public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  ObserverFsm(std::vector<std::string> alphabet, std::vector<ObserverState> states,
              const std::vector<ObserverEdge>& edges);

  std::size_t state_count() const noexcept { return states_.size(); }
  std::size_t arity() const noexcept { return states_.front().parts.size(); }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const std::vector<ObserverState>& states() const noexcept { return states_; }
  const ObserverState& state(std::size_t s) const { return states_.at(s); }
  std::size_t initial() const noexcept { return 0; }
  bool output(std::size_t s) const { return states_.at(s).output; }

  std::optional<LabelIndex> find_label(std::string_view name) const noexcept;

  /// Successor of `s` on label index `l`, or npos when undefined.
  std::size_t next(std::size_t s, LabelIndex l) const {
    return next_[s * alphabet_.size() + l];
  }

  std::optional<std::size_t> find_state(const AggregateState& parts) const;

  std::vector<ObserverEdge> edges() const;
  std::size_t transition_count() const noexcept;

  friend bool operator==(const ObserverFsm& a, const ObserverFsm& b);

private:
  std::vector<std::string> alphabet_;
  std::vector<ObserverState> states_;
  std::vector<std::size_t> next_;
};

/// Per-member observers with an OR coordinator on their outputs.
struct DecentralizedObserver {
  struct Local {
    std::string name;
    ObserverFsm observer;
  };
  std::vector<Local> locals;
};

struct Verdict {
  bool observable = true;
  /// A reachable estimate that touches the critical set without lying inside it.
  std::optional<AggregateState> witness;
};

struct BuildLimits {
  std::size_t max_states = 1'000'000;
};

/// Subset construction seeded at the initial set. Transitions whose union of
/// successors is empty are left undefined.
ObserverFsm build_observer(const Fsm& m, const BuildLimits& limits = {});

/// Verdict of the subset-state criterion: every flagged state must lie inside
/// the critical set. `criticals` has one entry per part; an aggregate lies
/// inside the product critical set iff some part lies inside its own.
Verdict check_observable(const ObserverFsm& obs, std::span<const NameSet> criticals);
Verdict check_observable(const ObserverFsm& obs, const NameSet& critical);

/// Observer of `m` plus the verdict on it.
Verdict check_observable(const Fsm& m);

DecentralizedObserver build_decentralized(const Network& n, const BuildLimits& limits = {});

/// Materialized product of the local observers; output is the OR of the
/// local outputs and each state's parts are the locals' subsets in order.
ObserverFsm compose_decentralized(const DecentralizedObserver& d, const BuildLimits& limits = {});

struct ObserverStep {
  std::size_t state;
  bool output;
};

/// Unique run of `obs` on `w`, initial state first. Throws TraceNotInLanguage
/// when a transition is undefined.
std::vector<ObserverStep> observer_run(const ObserverFsm& obs, const Word& w);

/// Exact check that `obs` tracks the criticality of `m`'s current state along
/// every run of `m`: explores the synchronized product of both machines.
bool is_critical_observer(const ObserverFsm& obs, const Fsm& m);

/// Product set z1 x ... x zN as flat tuple names, sorted.
NameSet product_set(const AggregateState& parts);

} // namespace critnet
