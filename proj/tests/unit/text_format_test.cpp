#include "critnet/dot.hpp"
#include "critnet/text_format.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

#include <doctest.h>

using namespace critnet;
using namespace critnet::testing;

namespace {

const char* kFixtureA = R"(# two-state cycle
fsm A
  states p q
  initial p
  alphabet a b
  critical q
  trans p a q
  trans q b p
end
)";

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

} // namespace

TEST_CASE("parse a network document") {
  Network n = parse_network(kFixtureA);
  REQUIRE(n.size() == 1);
  CHECK(n[0].name == "A");
  CHECK(n[0].fsm == fixture_a());
  CHECK(serialize_network(n) == serialize_fsm("A", fixture_a()));
  CHECK(parse_network(serialize_network(n)) == n);
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_network(""), ParseError);
  CHECK_THROWS_AS(parse_network("# only a comment\n"), ParseError);
  try {
    parse_network("fsm A\n  states p\n  bogus x\nend\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(parse_network("fsm A\n  states p\n"), ParseError);
  CHECK_THROWS_AS(parse_network("fsm A\n states p\n initial p\n alphabet a\n trans p a p\n trans p a p\nend\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_network("fsm A\n trans p a\nend\n"), ParseError);
}

TEST_CASE("semantic errors name the machine") {
  try {
    parse_network("fsm Bad\n  states x y\n  initial x y\n  alphabet a\n  critical x\nend\n");
    FAIL("expected a semantic error");
  } catch (const InvalidInput& e) {
    std::string what = e.what();
    CHECK(what.find("Bad") != std::string::npos);
    CHECK(what.find("initial set straddles critical set") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_network("fsm A\n states p\n initial p\n alphabet a\n trans p a z\nend\n"), InvalidInput);
  CHECK_THROWS_AS(parse_network("fsm A\n states p\n initial p\n alphabet a\n trans p b p\nend\n"), InvalidInput);
}

TEST_CASE("observer documents round trip") {
  ObserverFsm obs = build_observer(compose2(fixture_a(), fixture_b()));
  Document doc = parse_document(serialize_observer("AB", obs));
  REQUIRE(doc.observers.size() == 1);
  CHECK(doc.observers[0].observer == obs);

  ObserverFsm composed = compose_decentralized(build_decentralized(network_of({{"A", fixture_a()}, {"B", fixture_b()}})));
  Document agg = parse_document(serialize_observer("D", composed));
  CHECK(agg.observers[0].observer == composed);
  CHECK_THROWS_AS(parse_network(serialize_observer("D", composed)), InvalidInput);
}

TEST_CASE("aggregate tokens") {
  CHECK(parse_aggregate("{a,b}") == AggregateState{{"a", "b"}});
  CHECK(parse_aggregate("({a},{(x,y),z})") == AggregateState{{"a"}, {"(x,y)", "z"}});
  CHECK_THROWS_AS(parse_aggregate("a,b"), InvalidInput);
}

TEST_CASE("random networks round trip") {
  Rng rng(67);
  NetworkShape shape;
  for (int trial = 0; trial < 100; ++trial) {
    Network n = random_network(rng, shape);
    CHECK(parse_network(serialize_network(n)) == n);
  }
}

TEST_CASE("dot rendering") {
  std::string a = export_dot("A", fixture_a());
  CHECK(count(a, " -> ") == 3);
  CHECK(a.find("\"q\" [shape=doublecircle]") != std::string::npos);
  CHECK(a.find("\"p\" [shape=doublecircle]") == std::string::npos);
  CHECK(a.find("__init0 -> \"p\"") != std::string::npos);
  CHECK(a == export_dot("A", fixture_a()));

  std::string b = export_dot("B", build_observer(fixture_b()));
  CHECK(b.find("\"{s,t}\" [shape=doublecircle]") != std::string::npos);

  std::string bare = export_dot("N", Fsm({{"x", "y"}, {"x"}, {"a"}, {}, {}}));
  CHECK(count(bare, " -> ") == 1);
  CHECK(count(bare, "[label=") == 0);
}
