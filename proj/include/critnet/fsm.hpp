#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace critnet {

using StateIndex = std::uint32_t;
using LabelIndex = std::uint32_t;

/// Sorted, duplicate-free set of state indexes.
using StateSet = std::vector<StateIndex>;

/// Sorted, duplicate-free set of state names (a subset state of an observer).
using NameSet = std::vector<std::string>;

/// A finite sequence of labels; empty means the empty word.
using Word = std::vector<std::string>;

/// Reserved token for the empty word in textual word notation.
inline constexpr std::string_view kEpsilon = "eps";

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
  using Error::Error;
};

class TraceNotInLanguage : public Error {
public:
  using Error::Error;
};

class ResourceLimit : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

struct Transition {
  std::string from;
  std::string label;
  std::string to;

  auto operator<=>(const Transition&) const = default;
};

/// Name-level description of an FSM, the input to the validating constructor.
struct FsmSpec {
  std::vector<std::string> states;
  std::vector<std::string> initial;
  std::vector<std::string> alphabet;
  std::vector<Transition> transitions;
  std::vector<std::string> critical;
};

/// True for a plain identifier: nonempty, no whitespace, none of `(){},#`.
bool is_plain_name(std::string_view s) noexcept;

/// True for a plain identifier or a flat tuple "(a,b,...)" of plain identifiers.
bool is_state_name(std::string_view s) noexcept;

bool is_label_name(std::string_view s) noexcept;

/// Nondeterministic finite state machine with a set of critical states.
///
/// States and labels are kept in sorted name order, so a StateSet sorted by
/// index is also sorted by name. Absent transitions mean the empty set.
/// Construction enforces that the initial states are either all critical or
/// all non-critical.
class Fsm {
public:
  explicit Fsm(FsmSpec spec);

  std::size_t state_count() const noexcept { return states_.size(); }
  std::size_t label_count() const noexcept { return alphabet_.size(); }

  const std::vector<std::string>& states() const noexcept { return states_; }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const std::string& state_name(StateIndex s) const { return states_.at(s); }
  const std::string& label_name(LabelIndex l) const { return alphabet_.at(l); }

  std::optional<StateIndex> find_state(std::string_view name) const noexcept;
  std::optional<LabelIndex> find_label(std::string_view name) const noexcept;

  /// Throws InvalidInput when the state or label is unknown.
  StateIndex state_index(std::string_view name) const;
  LabelIndex label_index(std::string_view name) const;

  const StateSet& initial() const noexcept { return initial_; }
  const StateSet& critical() const noexcept { return critical_; }
  bool is_critical(StateIndex s) const { return critical_flag_.at(s); }
  bool is_initial(StateIndex s) const;

  const StateSet& successors(StateIndex s, LabelIndex l) const {
    return delta_[static_cast<std::size_t>(s) * alphabet_.size() + l];
  }

  /// Union of successors of every state in `from`.
  StateSet post(const StateSet& from, LabelIndex l) const;

  StateSet to_state_set(std::span<const std::string> names) const;
  NameSet to_names(const StateSet& set) const;

  /// Transition triples in (from, label, to) name order.
  std::vector<Transition> transitions() const;
  std::size_t transition_count() const noexcept;

  FsmSpec to_spec() const;

  friend bool operator==(const Fsm&, const Fsm&) = default;

private:
  std::vector<std::string> states_;
  std::vector<std::string> alphabet_;
  StateSet initial_;
  StateSet critical_;
  std::vector<bool> critical_flag_;
  std::vector<StateSet> delta_;
};

/// δ̂(from, w): states reachable from `from` by reading `w`.
StateSet extended_delta(const Fsm& m, const StateSet& from, const Word& w);
NameSet extended_delta(const Fsm& m, std::span<const std::string> from, const Word& w);

/// True iff some initial state has a nonempty continuation along `w`.
bool in_language(const Fsm& m, const Word& w);

/// Erases every symbol of `w` that is not in `keep`.
Word project_word(const Word& w, std::span<const std::string> keep);

/// Restriction of `m` to the states reachable from its initial states.
Fsm accessible(const Fsm& m);

/// Splits "a b c" into a word; "eps" and the empty string denote the empty word.
Word parse_word(std::string_view text);
std::string format_word(const Word& w);

/// Set helpers over sorted vectors.
bool is_subset(const StateSet& a, const StateSet& b);
bool intersects(const StateSet& a, const StateSet& b);
bool is_subset(const NameSet& a, const NameSet& b);
bool intersects(const NameSet& a, const NameSet& b);

/// "{a,b}" rendering of a subset state.
std::string format_subset(const NameSet& s);

} // namespace critnet
