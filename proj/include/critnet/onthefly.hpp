#pragma once

#include "critnet/composition.hpp"
#include "critnet/ledger.hpp"
#include "critnet/observer.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace critnet {

/// True iff the product set z1 x ... x zN meets both the product critical
/// set and its complement. Evaluated without enumerating tuples:
///   meets critical    <=> some zi meets Ci
///   meets complement  <=> no zi lies inside Ci
bool straddle_test(std::span<const StateSet> parts, std::span<const StateSet> criticals);
bool straddle_test(const AggregateState& parts, std::span<const NameSet> criticals);

struct OnTheFlyOptions {
  std::size_t max_aggregates = 1'000'000;
  /// Called at the start of every generation with
  /// (generation index, frontier size, visited count).
  std::function<void(std::size_t, std::size_t, std::size_t)> progress;
};

struct OnTheFlyOutcome {
  bool observable = true;
  /// First aggregate found to straddle, in exploration order.
  std::optional<AggregateState> violation;
  /// Projected local observers, one per member, present only when observable.
  std::vector<DecentralizedObserver::Local> locals;
  std::size_t aggregates_explored = 0;
  std::size_t generations = 0;
  CostLedger ledger;
};

/// Integrated, early-terminating synthesis of projected local observers.
///
/// Explores aggregates (z1,...,zN) generation by generation from the initial
/// sets. A label is enabled iff every member that knows it has a nonempty
/// successor; members that do not know it keep their part. Each new
/// aggregate is tested with straddle_test and exploration stops at the first
/// one that straddles. Otherwise every enabled step is recorded into the
/// local fragment of each member that moved.
OnTheFlyOutcome run_onthefly(const Network& n, const OnTheFlyOptions& options = {});

} // namespace critnet
