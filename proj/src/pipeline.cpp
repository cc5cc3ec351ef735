#include "critnet/pipeline.hpp"

namespace critnet {

Algorithm1Result run_algorithm1(const Network& n, std::size_t budget) {
  BuildLimits limits{budget};
  DecentralizedObserver d = build_decentralized(n, limits);
  CostLedger ledger;
  for (const auto& local : d.locals) ledger += account(local.observer);

  ObserverFsm composed = compose_decentralized(d, limits);
  if (n.size() > 1) ledger += account(composed);

  std::vector<NameSet> criticals;
  for (const auto& m : n.members()) criticals.push_back(m.fsm.to_names(m.fsm.critical()));
  Verdict verdict = check_observable(composed, criticals);
  return {std::move(verdict), std::move(composed), ledger};
}

PipelineReport run_algorithm3(const Network& n, bool run_baseline, std::size_t budget) {
  Quotient quotient = quotient_network(n);
  OnTheFlyOptions options;
  options.max_aggregates = budget;
  OnTheFlyOutcome reduced = run_onthefly(quotient.network, options);

  PipelineReport report{
      Verdict{reduced.observable, reduced.violation}, std::move(quotient), {}, reduced.aggregates_explored,
      reduced.ledger, std::nullopt};

  if (reduced.observable) {
    report.locals.resize(n.size(), {"", reduced.locals.front().observer});
    const auto& classes = report.quotient.classes.classes;
    for (std::size_t k = 0; k < classes.size(); ++k)
      for (std::size_t member : classes[k].members) report.locals[member] = {n[member].name, reduced.locals[k].observer};
  }
  if (run_baseline) report.ledger_baseline = run_algorithm1(n, budget).ledger;
  return report;
}

} // namespace critnet
