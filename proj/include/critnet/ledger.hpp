#pragma once

#include "critnet/observer.hpp"

#include <cstdint>

namespace critnet {

/// Space and time accounting for constructed machines.
///
/// A stored transition from (z1,...,zm) to (z1',...,zm') costs
/// sum|zi| + sum|zi'| + 1 units of transition data; every state carrying an
/// output costs one unit of output data. Time counts generated transitions.
struct CostLedger {
  std::uint64_t transition_data = 0;  // S1
  std::uint64_t output_data = 0;      // S2
  std::uint64_t time = 0;

  std::uint64_t space() const noexcept { return transition_data + output_data; }

  CostLedger& operator+=(const CostLedger& other) noexcept {
    transition_data += other.transition_data;
    output_data += other.output_data;
    time += other.time;
    return *this;
  }

  friend bool operator==(const CostLedger&, const CostLedger&) = default;
};

/// Ledger for constructing `obs` in full.
CostLedger account(const ObserverFsm& obs);

} // namespace critnet
