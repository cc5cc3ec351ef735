#include "critnet/ledger.hpp"

namespace critnet {

namespace {

std::uint64_t weight(const ObserverState& st) {
  std::uint64_t w = 0;
  for (const auto& z : st.parts) w += z.size();
  return w;
}

} // namespace

CostLedger account(const ObserverFsm& obs) {
  CostLedger ledger;
  ledger.output_data = obs.state_count();
  for (const auto& e : obs.edges()) {
    ledger.transition_data += weight(obs.state(e.from)) + weight(obs.state(e.to)) + 1;
    ++ledger.time;
  }
  return ledger;
}

} // namespace critnet
