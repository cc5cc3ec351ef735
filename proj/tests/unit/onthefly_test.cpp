#include "critnet/onthefly.hpp"
#include "critnet/pipeline.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

using namespace critnet;
using namespace critnet::testing;

TEST_CASE("straddle closed form on hand cases") {
  std::vector<StateSet> crit{{1}};
  CHECK(straddle_test(std::vector<StateSet>{{0, 1}}, crit));
  CHECK_FALSE(straddle_test(std::vector<StateSet>{{0}}, crit));
  CHECK_FALSE(straddle_test(std::vector<StateSet>{{1}}, crit));

  std::vector<StateSet> crit2{{0}, {5}};
  CHECK_FALSE(straddle_test(std::vector<StateSet>{{0}, {4, 5}}, crit2));
  CHECK(straddle_test(std::vector<StateSet>{{0, 1}, {4, 5}}, crit2));
  CHECK_FALSE(straddle_test(std::vector<StateSet>{{1}, {4}}, crit2));

  std::vector<NameSet> named{{"t"}};
  CHECK(straddle_test(AggregateState{{"s", "t"}}, named));
  CHECK_THROWS_AS(straddle_test(AggregateState{{}}, named), InvalidInput);
  CHECK_THROWS_AS(straddle_test(AggregateState{{"s"}, {"t"}}, named), InvalidInput);
}

TEST_CASE("straddle closed form matches tuple enumeration") {
  Rng rng(41);
  for (int trial = 0; trial < 2000; ++trial) {
    std::size_t n = uniform(rng, 1, 4);
    std::vector<StateSet> parts(n);
    std::vector<StateSet> crit(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (StateIndex x = 0; x < 5; ++x) {
        if (coin(rng, 0.4)) parts[i].push_back(x);
        if (coin(rng, 0.4)) crit[i].push_back(x);
      }
      if (parts[i].empty()) parts[i].push_back(static_cast<StateIndex>(uniform(rng, 0, 4)));
    }
    CHECK(straddle_test(parts, crit) == straddle_by_tuples(parts, crit));
  }
}

TEST_CASE("single member reduces to the plain observer") {
  OnTheFlyOutcome a = run_onthefly(network_of({{"A", fixture_a()}}));
  CHECK(a.observable);
  REQUIRE(a.locals.size() == 1);
  CHECK(a.locals[0].observer == build_observer(fixture_a()));

  OnTheFlyOutcome b = run_onthefly(network_of({{"B", fixture_b()}}));
  CHECK_FALSE(b.observable);
  REQUIRE(b.violation.has_value());
  CHECK(*b.violation == AggregateState{{"s", "t"}});
  CHECK(b.locals.empty());
  CHECK(b.ledger.time == 0);
}

TEST_CASE("private observable partner") {
  Fsm priv({{"u", "v"}, {"u"}, {"c", "d"}, {{"u", "c", "v"}, {"v", "d", "u"}}, {"v"}});
  Network n = network_of({{"A", fixture_a()}, {"P", priv}});
  OnTheFlyOutcome out = run_onthefly(n);
  CHECK(out.observable);
  CHECK(run_algorithm1(n).verdict.observable);
  REQUIRE(out.locals.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    ObserverFsm full = build_observer(n[i].fsm);
    for (const auto& st : out.locals[i].observer.states()) CHECK(full.find_state(st.parts).has_value());
  }
}

TEST_CASE("progress hook sees every generation") {
  std::vector<std::size_t> gens;
  OnTheFlyOptions options;
  options.progress = [&](std::size_t g, std::size_t frontier, std::size_t visited) {
    CHECK(frontier > 0);
    CHECK(visited >= frontier);
    gens.push_back(g);
  };
  OnTheFlyOutcome out = run_onthefly(network_of({{"A", fixture_a()}}), options);
  CHECK(gens == std::vector<std::size_t>{0, 1});
  CHECK(out.generations == 2);
}

TEST_CASE("budget is enforced") {
  OnTheFlyOptions options;
  options.max_aggregates = 1;
  CHECK_THROWS_AS(run_onthefly(network_of({{"A", fixture_a()}}), options), ResourceLimit);
}

TEST_CASE("on-the-fly agrees with the materialized observer") {
  Rng rng(43);
  NetworkShape shape;
  shape.max_members = 3;
  shape.fsm.max_states = 4;
  shape.fsm.deterministic = 0.3;
  for (int trial = 0; trial < 300; ++trial) {
    Network n = random_network(rng, shape);
    OnTheFlyOutcome otf = run_onthefly(n);
    Algorithm1Result base = run_algorithm1(n);
    REQUIRE(otf.observable == base.verdict.observable);
    CHECK(otf.aggregates_explored <= base.decentralized.state_count());
    if (!otf.observable) {
      std::vector<NameSet> crit;
      for (const auto& m : n.members()) crit.push_back(m.fsm.to_names(m.fsm.critical()));
      CHECK(straddle_test(*otf.violation, crit));
      continue;
    }
    for (std::size_t i = 0; i < n.size(); ++i) {
      CHECK(otf.locals[i].observer == project_local(base.decentralized, i, n[i].fsm));
      ObserverFsm full = build_observer(n[i].fsm);
      for (const auto& e : otf.locals[i].observer.edges()) {
        const auto& local = otf.locals[i].observer;
        auto s = full.find_state(local.state(e.from).parts);
        REQUIRE(s.has_value());
        CHECK(full.state(full.next(*s, *full.find_label(e.label))).parts == local.state(e.to).parts);
      }
    }
  }
}
