#include "critnet/pipeline.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace critnet;
using namespace critnet::testing;

TEST_CASE("ledger of the two-state observer") {
  Algorithm1Result r = run_algorithm1(network_of({{"A", fixture_a()}}));
  CHECK(r.verdict.observable);
  CHECK(r.ledger.transition_data == 6);
  CHECK(r.ledger.output_data == 2);
  CHECK(r.ledger.space() == 8);
  CHECK(r.ledger.time == 2);
  CHECK(account(build_observer(fixture_a())) == ledger_by_definition(build_observer(fixture_a())));
}

TEST_CASE("baseline verdicts on fixtures") {
  CHECK_FALSE(run_algorithm1(network_of({{"B", fixture_b()}})).verdict.observable);
  Network ab = network_of({{"A", fixture_a()}, {"B", fixture_b()}});
  CHECK(run_algorithm1(ab).verdict.observable == run_onthefly(ab).observable);
}

TEST_CASE("baseline ledger covers locals and the composed observer") {
  Rng rng(47);
  NetworkShape shape;
  shape.max_members = 3;
  shape.fsm.max_states = 4;
  for (int trial = 0; trial < 100; ++trial) {
    Network n = random_network(rng, shape);
    Algorithm1Result r = run_algorithm1(n);
    CostLedger expected;
    for (const auto& m : n.members()) expected += ledger_by_definition(build_observer(m.fsm));
    if (n.size() > 1) expected += ledger_by_definition(r.decentralized);
    CHECK(r.ledger == expected);
  }
}

TEST_CASE("reduction aliases duplicate members") {
  Fsm bco({{"u", "v"}, {"u"}, {"b", "c"}, {{"u", "c", "v"}, {"v", "b", "u"}}, {"v"}});
  Network n = network_of({{"A", fixture_a()}, {"A_copy", fixture_a()}, {"B_co", bco}});
  PipelineReport r = run_algorithm3(n, true);
  CHECK(r.verdict.observable);
  REQUIRE(r.quotient.network.size() == 2);
  CHECK(r.quotient.network[0].name == "A");
  CHECK(r.quotient.network[1].name == "B_co");
  REQUIRE(r.locals.size() == 3);
  CHECK(r.locals[1].name == "A_copy");
  CHECK(r.locals[1].observer == r.locals[0].observer);

  Rng rng(53);
  Fsm mono = compose_network(n);
  ObserverFsm reduced_mono = compose_decentralized(
      DecentralizedObserver{{{"A", r.locals[0].observer}, {"B_co", r.locals[2].observer}}});
  CHECK(observer_valid_sampled(rng, reduced_mono, compose_network(r.quotient.network), 100, 10));
  CHECK(observer_valid_sampled(rng, reduced_mono, mono, 100, 10));
}

TEST_CASE("reduction shrinks the ledger") {
  Network n = network_of({{"A", fixture_a()}, {"A_copy", fixture_a()}});
  PipelineReport r = run_algorithm3(n, true);
  REQUIRE(r.ledger_baseline.has_value());
  CHECK(r.ledger_reduced.space() < r.ledger_baseline->space());
  CHECK(r.ledger_reduced.time < r.ledger_baseline->time);
}

TEST_CASE("straddle right after the initial aggregate costs no time") {
  Network n = network_of({{"B", fixture_b()}, {"B_copy", fixture_b()}});
  PipelineReport r = run_algorithm3(n);
  CHECK_FALSE(r.verdict.observable);
  CHECK(r.quotient.network.size() == 1);
  CHECK(r.ledger_reduced.time == 0);
  CHECK(r.locals.empty());
}

TEST_CASE("three algorithms agree") {
  Rng rng(59);
  NetworkShape shape;
  shape.max_members = 3;
  shape.fsm.max_states = 4;
  for (int trial = 0; trial < 150; ++trial) {
    Network n = network_with_duplicates(rng, shape, uniform(rng, 0, 2));
    bool v1 = run_algorithm1(n).verdict.observable;
    PipelineReport r3 = run_algorithm3(n, true);
    CHECK(v1 == run_onthefly(n).observable);
    CHECK(v1 == r3.verdict.observable);
    CHECK(r3.ledger_reduced.space() <= r3.ledger_baseline->space());
    CHECK(r3.ledger_reduced.time <= r3.ledger_baseline->time);
    CHECK(run_algorithm3(n).ledger_reduced == r3.ledger_reduced);
  }
}

TEST_CASE("budget applies to the baseline") {
  CHECK_THROWS_AS(run_algorithm1(network_of({{"A", fixture_a()}}), 1), ResourceLimit);
}
