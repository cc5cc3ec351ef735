#pragma once

#include "critnet/composition.hpp"

namespace critnet::testing {

// p -a-> q -b-> p, C = {q}. Critically observable.
inline Fsm fixture_a() {
  return Fsm({{"p", "q"}, {"p"}, {"a", "b"}, {{"p", "a", "q"}, {"q", "b", "p"}}, {"q"}});
}

// r -a-> {s,t}, C = {t}. Not critically observable.
inline Fsm fixture_b() {
  return Fsm({{"r", "s", "t"}, {"r"}, {"a", "c"}, {{"r", "a", "s"}, {"r", "a", "t"}}, {"t"}});
}

// Member that is not observable on its own: r -a-> {s,t} -b-> r, C = {t}.
inline Fsm example2_m1() {
  return Fsm({{"r", "s", "t"},
              {"r"},
              {"a", "b"},
              {{"r", "a", "s"}, {"r", "a", "t"}, {"s", "b", "r"}, {"t", "b", "r"}},
              {"t"}});
}

// Observable partner whose critical state coincides with every visit to {s,t}.
inline Fsm example2_m2() {
  return Fsm({{"u", "v"}, {"u"}, {"a", "b"}, {{"u", "a", "v"}, {"v", "b", "u"}}, {"v"}});
}

inline Network network_of(std::vector<std::pair<std::string, Fsm>> members) {
  std::vector<Network::Member> out;
  for (auto& [name, m] : members) out.push_back({name, std::move(m)});
  return Network(std::move(out));
}

} // namespace critnet::testing
