#include "critnet/composition.hpp"

#include "critnet/detail/hash.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace critnet {

Network::Network(std::vector<Member> members) : members_(std::move(members)) {
  if (members_.empty()) throw InvalidInput("network has no members");
  std::unordered_set<std::string> names;
  for (const auto& m : members_) {
    if (!is_plain_name(m.name)) throw InvalidInput("invalid member name '" + m.name + "'");
    if (!names.insert(m.name).second) throw InvalidInput("duplicate member name '" + m.name + "'");
  }
}

bool operator==(const Network::Member& a, const Network::Member& b) {
  return a.name == b.name && a.fsm == b.fsm;
}

std::string product_name(std::span<const std::string> parts) {
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    const auto& p = parts[i];
    if (!p.empty() && p.front() == '(')
      out.append(p, 1, p.size() - 2);
    else
      out += p;
  }
  out += ')';
  return out;
}

std::vector<std::string> split_product_name(const std::string& name) {
  if (name.empty() || name.front() != '(') return {name};
  std::vector<std::string> parts;
  std::string current;
  for (std::size_t i = 1; i + 1 < name.size(); ++i) {
    if (name[i] == ',') {
      parts.push_back(std::move(current));
      current.clear();
    } else {
      current += name[i];
    }
  }
  parts.push_back(std::move(current));
  return parts;
}

Fsm compose_all(std::span<const Fsm* const> machines) {
  if (machines.empty()) throw InvalidInput("nothing to compose");
  const std::size_t n = machines.size();

  std::vector<std::string> alphabet;
  for (const Fsm* m : machines) alphabet.insert(alphabet.end(), m->alphabet().begin(), m->alphabet().end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());

  // local_label[l][i]: index of global label l in machine i, if it has one.
  std::vector<std::vector<std::optional<LabelIndex>>> local_label(alphabet.size());
  for (std::size_t l = 0; l < alphabet.size(); ++l)
    for (const Fsm* m : machines) local_label[l].push_back(m->find_label(alphabet[l]));

  using Tuple = std::vector<StateIndex>;
  std::unordered_map<Tuple, std::size_t, detail::VectorHash> index;
  std::vector<Tuple> tuples;
  std::deque<std::size_t> queue;
  auto intern = [&](Tuple t) {
    auto [it, fresh] = index.try_emplace(t, tuples.size());
    if (fresh) {
      tuples.push_back(std::move(t));
      queue.push_back(it->second);
    }
    return it->second;
  };

  // Initial tuples: cartesian product of initial sets.
  std::vector<Tuple> initial_tuples{Tuple{}};
  for (const Fsm* m : machines) {
    std::vector<Tuple> next;
    for (const auto& prefix : initial_tuples)
      for (StateIndex s : m->initial()) {
        Tuple t = prefix;
        t.push_back(s);
        next.push_back(std::move(t));
      }
    initial_tuples = std::move(next);
  }
  for (auto& t : initial_tuples) intern(std::move(t));
  const std::size_t initial_count = tuples.size();

  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> edges;
  while (!queue.empty()) {
    std::size_t src = queue.front();
    queue.pop_front();
    for (std::size_t l = 0; l < alphabet.size(); ++l) {
      // Every machine that knows the label must move; the rest stay put.
      std::vector<Tuple> targets{tuples[src]};
      bool blocked = false;
      for (std::size_t i = 0; i < n && !blocked; ++i) {
        if (!local_label[l][i]) continue;
        const auto& succ = machines[i]->successors(tuples[src][i], *local_label[l][i]);
        if (succ.empty()) {
          blocked = true;
          break;
        }
        std::vector<Tuple> expanded;
        expanded.reserve(targets.size() * succ.size());
        for (const auto& t : targets)
          for (StateIndex s : succ) {
            Tuple u = t;
            u[i] = s;
            expanded.push_back(std::move(u));
          }
        targets = std::move(expanded);
      }
      if (blocked) continue;
      for (auto& t : targets) {
        std::size_t dst = intern(std::move(t));
        edges.emplace_back(src, l, dst);
      }
    }
  }

  std::vector<std::string> names;
  names.reserve(tuples.size());
  FsmSpec spec;
  for (const auto& t : tuples) {
    std::vector<std::string> parts;
    bool critical = false;
    for (std::size_t i = 0; i < n; ++i) {
      parts.push_back(machines[i]->state_name(t[i]));
      critical = critical || machines[i]->is_critical(t[i]);
    }
    names.push_back(n == 1 ? parts.front() : product_name(parts));
    if (critical) spec.critical.push_back(names.back());
  }
  spec.states = names;
  spec.initial.assign(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(initial_count));
  spec.alphabet = alphabet;
  spec.transitions.reserve(edges.size());
  for (auto [src, l, dst] : edges) spec.transitions.push_back({names[src], alphabet[l], names[dst]});
  return Fsm(std::move(spec));
}

Fsm compose2(const Fsm& m1, const Fsm& m2) {
  const Fsm* machines[] = {&m1, &m2};
  return compose_all(machines);
}

Fsm compose_network(const Network& n) {
  if (n.size() == 1) return n[0].fsm;
  std::vector<const Fsm*> machines;
  for (const auto& m : n.members()) machines.push_back(&m.fsm);
  return compose_all(machines);
}

} // namespace critnet
