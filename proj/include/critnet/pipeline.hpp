#pragma once

#include "critnet/composition.hpp"
#include "critnet/equivalence.hpp"
#include "critnet/ledger.hpp"
#include "critnet/observer.hpp"
#include "critnet/onthefly.hpp"

#include <optional>

namespace critnet {

/// Default cap on constructed observer states or explored aggregates.
inline constexpr std::size_t kDefaultBudget = 1'000'000;

struct Algorithm1Result {
  Verdict verdict;
  ObserverFsm decentralized;  // materialized product of the local observers
  CostLedger ledger;
};

/// Baseline: build every local observer, compose them, then check every
/// flagged composed state. The ledger covers the local observers and, for
/// two or more members, the composed observer.
Algorithm1Result run_algorithm1(const Network& n, std::size_t budget = kDefaultBudget);

struct PipelineReport {
  Verdict verdict;
  Quotient quotient;
  /// Per original member: the projected local observer of its class
  /// representative. Present only when observable.
  std::vector<DecentralizedObserver::Local> locals;
  std::size_t aggregates_explored = 0;
  CostLedger ledger_reduced;
  std::optional<CostLedger> ledger_baseline;
};

/// Model reduction followed by on-the-fly synthesis on the quotient network;
/// the verdict and observers carry over to every member of each class.
PipelineReport run_algorithm3(const Network& n, bool run_baseline = false, std::size_t budget = kDefaultBudget);

} // namespace critnet
