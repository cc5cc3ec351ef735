#pragma once

#include "critnet/composition.hpp"
#include "critnet/fsm.hpp"
#include "critnet/observer.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace critnet {

/// Index-level view of a machine with a boolean output, shared by FSMs
/// (output = critical membership) and observers.
struct MachineView {
  std::vector<std::string> alphabet;
  StateSet initial;
  std::vector<StateSet> succ;  // [state * |alphabet| + label]
  std::vector<bool> output;

  std::size_t size() const noexcept { return output.size(); }
  const StateSet& successors(std::size_t s, std::size_t l) const { return succ[s * alphabet.size() + l]; }
};

MachineView view_of(const Fsm& m);
MachineView view_of(const ObserverFsm& obs);

/// Bijection between the state sets of two isomorphic machines, as
/// (state of first, state of second) index pairs sorted by the first index.
struct IsoWitness {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

/// Searches for an isomorphism. Deterministic single-initial machines are
/// matched by synchronized exploration; otherwise colour refinement narrows
/// the candidates and a backtracking search completes the bijection.
std::optional<IsoWitness> iso_check(const MachineView& a, const MachineView& b);
std::optional<IsoWitness> iso_check(const Fsm& a, const Fsm& b);
std::optional<IsoWitness> iso_check(const ObserverFsm& a, const ObserverFsm& b);

/// Cross-machine state pairs, by name, sorted.
struct BisimRelation {
  std::vector<std::pair<std::string, std::string>> pairs;

  bool contains(const std::string& x1, const std::string& x2) const;
  friend bool operator==(const BisimRelation&, const BisimRelation&) = default;
};

/// Largest relation between the two machines that agrees on initial and
/// critical membership and is a mutual simulation. May be empty.
///
/// Computed by Paige-Tarjan refinement of the disjoint union, starting from
/// blocks keyed by (critical, initial, enabled labels).
BisimRelation largest_bisimulation(const Fsm& m1, const Fsm& m2);

/// The largest bisimulation, provided the alphabets coincide and every initial
/// state of each machine is related to an initial state of the other.
std::optional<BisimRelation> bisim_check(const Fsm& m1, const Fsm& m2);

struct EquivalenceClasses {
  struct Class {
    std::vector<std::size_t> members;  // indexes into the original network
    std::size_t representative;        // lowest member index
  };
  std::vector<Class> classes;

  std::size_t class_of(std::size_t member) const;
};

struct Quotient {
  Network network;
  EquivalenceClasses classes;
};

/// One representative per bisimilarity class, in original order.
Quotient quotient_network(const Network& n);

struct PreservationReport {
  std::size_t members = 0;
  std::size_t reduced_members = 0;
  bool observable_full = false;
  bool observable_reduced = false;
  /// Obs(M(N^min)) tracks criticality along every run of M(N^min), resp. M(N).
  bool observer_valid_reduced = false;
  bool observer_valid_full = false;

  bool agrees() const noexcept {
    return observable_full == observable_reduced && observer_valid_full == observer_valid_reduced;
  }
};

/// Builds both monolithic machines and compares verdicts and observer
/// validity between a network and its quotient. Desk-scale only.
PreservationReport preservation_check(const Network& n, const BuildLimits& limits = {});

} // namespace critnet
