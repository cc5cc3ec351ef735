#pragma once

#include "critnet/fsm.hpp"

#include <span>
#include <string>
#include <vector>

namespace critnet {

/// Ordered, uniquely named collection of FSMs, implicitly composed by ||.
class Network {
public:
  struct Member {
    std::string name;
    Fsm fsm;
  };

  explicit Network(std::vector<Member> members);

  const std::vector<Member>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  const Member& operator[](std::size_t i) const { return members_.at(i); }

  friend bool operator==(const Network&, const Network&) = default;

private:
  std::vector<Member> members_;
};

bool operator==(const Network::Member& a, const Network::Member& b);

/// "(x1,...,xN)" with any tuple-valued part spliced in place, so nested
/// products always come out flat.
std::string product_name(std::span<const std::string> parts);

/// Inverse of product_name for a flat tuple; a plain name yields itself.
std::vector<std::string> split_product_name(const std::string& name);

/// Accessible parallel composition of two machines: synchronous on shared
/// labels, interleaved on private ones, critical when either part is.
Fsm compose2(const Fsm& m1, const Fsm& m2);

/// M1 || ... || MN with flat N-tuple state names. A single-member network
/// yields that member unchanged.
Fsm compose_network(const Network& n);

/// N-ary form used by compose2 and compose_network; explores only reachable
/// product states.
Fsm compose_all(std::span<const Fsm* const> machines);

} // namespace critnet
