#include "critnet/fsm.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace critnet {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line), column_(column) {}

namespace {

bool is_reserved_char(char c) noexcept {
  switch (c) {
    case '(': case ')': case '{': case '}': case ',': case '#':
      return true;
    default:
      return static_cast<unsigned char>(c) <= ' ';
  }
}

template <typename T>
void sort_unique_or_throw(std::vector<T>& v, const char* what) {
  std::sort(v.begin(), v.end());
  auto dup = std::adjacent_find(v.begin(), v.end());
  if (dup != v.end()) {
    std::ostringstream os;
    os << "duplicate " << what << " '" << *dup << "'";
    throw InvalidInput(os.str());
  }
}

} // namespace

bool is_plain_name(std::string_view s) noexcept {
  return !s.empty() && std::none_of(s.begin(), s.end(), is_reserved_char);
}

bool is_state_name(std::string_view s) noexcept {
  if (is_plain_name(s)) return true;
  if (s.size() < 3 || s.front() != '(' || s.back() != ')') return false;
  std::string_view inner = s.substr(1, s.size() - 2);
  std::size_t start = 0;
  while (true) {
    std::size_t comma = inner.find(',', start);
    std::string_view part = inner.substr(start, comma == std::string_view::npos ? inner.npos : comma - start);
    if (!is_plain_name(part)) return false;
    if (comma == std::string_view::npos) return true;
    start = comma + 1;
  }
}

bool is_label_name(std::string_view s) noexcept {
  return is_plain_name(s) && s != kEpsilon;
}

Fsm::Fsm(FsmSpec spec)
    : states_(std::move(spec.states)), alphabet_(std::move(spec.alphabet)) {
  for (const auto& s : states_)
    if (!is_state_name(s)) throw InvalidInput("invalid state name '" + s + "'");
  for (const auto& l : alphabet_)
    if (!is_label_name(l)) throw InvalidInput("invalid label '" + l + "'");
  sort_unique_or_throw(states_, "state");
  sort_unique_or_throw(alphabet_, "label");

  auto index_all = [this](std::vector<std::string>& names, const char* role) {
    StateSet out;
    out.reserve(names.size());
    for (const auto& n : names) {
      auto idx = find_state(n);
      if (!idx) throw InvalidInput(std::string(role) + " state '" + n + "' is not a state");
      out.push_back(*idx);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  initial_ = index_all(spec.initial, "initial");
  critical_ = index_all(spec.critical, "critical");
  if (initial_.empty()) throw InvalidInput("initial set is empty");

  critical_flag_.assign(states_.size(), false);
  for (StateIndex c : critical_) critical_flag_[c] = true;

  bool some_critical = std::any_of(initial_.begin(), initial_.end(), [this](StateIndex s) { return critical_flag_[s]; });
  bool some_safe = std::any_of(initial_.begin(), initial_.end(), [this](StateIndex s) { return !critical_flag_[s]; });
  if (some_critical && some_safe) throw InvalidInput("initial set straddles critical set");

  delta_.assign(states_.size() * alphabet_.size(), {});
  for (const auto& t : spec.transitions) {
    auto from = find_state(t.from);
    auto to = find_state(t.to);
    auto label = find_label(t.label);
    if (!from) throw InvalidInput("transition source '" + t.from + "' is not a state");
    if (!to) throw InvalidInput("transition target '" + t.to + "' is not a state");
    if (!label) throw InvalidInput("transition label '" + t.label + "' is not in the alphabet");
    delta_[static_cast<std::size_t>(*from) * alphabet_.size() + *label].push_back(*to);
  }
  for (auto& succ : delta_) {
    std::sort(succ.begin(), succ.end());
    if (std::adjacent_find(succ.begin(), succ.end()) != succ.end())
      throw InvalidInput("duplicate transition");
  }
}

std::optional<StateIndex> Fsm::find_state(std::string_view name) const noexcept {
  auto it = std::lower_bound(states_.begin(), states_.end(), name);
  if (it == states_.end() || *it != name) return std::nullopt;
  return static_cast<StateIndex>(it - states_.begin());
}

std::optional<LabelIndex> Fsm::find_label(std::string_view name) const noexcept {
  auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), name);
  if (it == alphabet_.end() || *it != name) return std::nullopt;
  return static_cast<LabelIndex>(it - alphabet_.begin());
}

StateIndex Fsm::state_index(std::string_view name) const {
  auto idx = find_state(name);
  if (!idx) throw InvalidInput("unknown state '" + std::string(name) + "'");
  return *idx;
}

LabelIndex Fsm::label_index(std::string_view name) const {
  auto idx = find_label(name);
  if (!idx) throw InvalidInput("label '" + std::string(name) + "' is not in the alphabet");
  return *idx;
}

bool Fsm::is_initial(StateIndex s) const {
  return std::binary_search(initial_.begin(), initial_.end(), s);
}

StateSet Fsm::post(const StateSet& from, LabelIndex l) const {
  StateSet out;
  for (StateIndex s : from) {
    const auto& succ = successors(s, l);
    out.insert(out.end(), succ.begin(), succ.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

StateSet Fsm::to_state_set(std::span<const std::string> names) const {
  StateSet out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(state_index(n));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NameSet Fsm::to_names(const StateSet& set) const {
  NameSet out;
  out.reserve(set.size());
  for (StateIndex s : set) out.push_back(states_.at(s));
  return out;
}

std::vector<Transition> Fsm::transitions() const {
  std::vector<Transition> out;
  for (StateIndex s = 0; s < states_.size(); ++s)
    for (LabelIndex l = 0; l < alphabet_.size(); ++l)
      for (StateIndex t : successors(s, l)) out.push_back({states_[s], alphabet_[l], states_[t]});
  return out;
}

std::size_t Fsm::transition_count() const noexcept {
  std::size_t n = 0;
  for (const auto& succ : delta_) n += succ.size();
  return n;
}

FsmSpec Fsm::to_spec() const {
  return FsmSpec{states_, to_names(initial_), alphabet_, transitions(), to_names(critical_)};
}

StateSet extended_delta(const Fsm& m, const StateSet& from, const Word& w) {
  for (StateIndex s : from)
    if (s >= m.state_count()) throw InvalidInput("state index out of range");
  StateSet current = from;
  std::sort(current.begin(), current.end());
  current.erase(std::unique(current.begin(), current.end()), current.end());
  for (const auto& sym : w) {
    LabelIndex l = m.label_index(sym);
    current = m.post(current, l);
  }
  return current;
}

NameSet extended_delta(const Fsm& m, std::span<const std::string> from, const Word& w) {
  return m.to_names(extended_delta(m, m.to_state_set(from), w));
}

bool in_language(const Fsm& m, const Word& w) {
  return !extended_delta(m, m.initial(), w).empty();
}

Word project_word(const Word& w, std::span<const std::string> keep) {
  Word out;
  for (const auto& sym : w)
    if (std::find(keep.begin(), keep.end(), sym) != keep.end()) out.push_back(sym);
  return out;
}

Fsm accessible(const Fsm& m) {
  std::vector<bool> seen(m.state_count(), false);
  std::deque<StateIndex> queue(m.initial().begin(), m.initial().end());
  for (StateIndex s : m.initial()) seen[s] = true;
  while (!queue.empty()) {
    StateIndex s = queue.front();
    queue.pop_front();
    for (LabelIndex l = 0; l < m.label_count(); ++l)
      for (StateIndex t : m.successors(s, l))
        if (!seen[t]) {
          seen[t] = true;
          queue.push_back(t);
        }
  }
  if (std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) return m;

  FsmSpec spec;
  spec.alphabet = m.alphabet();
  for (StateIndex s = 0; s < m.state_count(); ++s) {
    if (!seen[s]) continue;
    spec.states.push_back(m.state_name(s));
    if (m.is_critical(s)) spec.critical.push_back(m.state_name(s));
  }
  spec.initial = m.to_names(m.initial());
  for (auto& t : m.transitions())
    if (seen[m.state_index(t.from)]) spec.transitions.push_back(std::move(t));
  return Fsm(std::move(spec));
}

Word parse_word(std::string_view text) {
  Word out;
  std::istringstream in{std::string(text)};
  std::string sym;
  while (in >> sym)
    if (sym != kEpsilon) out.push_back(sym);
  return out;
}

std::string format_word(const Word& w) {
  if (w.empty()) return std::string(kEpsilon);
  std::string out;
  for (const auto& sym : w) {
    if (!out.empty()) out += ' ';
    out += sym;
  }
  return out;
}

bool is_subset(const StateSet& a, const StateSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(const StateSet& a, const StateSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

bool is_subset(const NameSet& a, const NameSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(const NameSet& a, const NameSet& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

std::string format_subset(const NameSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += s[i];
  }
  out += '}';
  return out;
}

} // namespace critnet
