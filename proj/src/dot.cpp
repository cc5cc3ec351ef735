#include "critnet/dot.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>
#include <vector>

namespace critnet {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

struct Graph {
  std::vector<std::pair<std::string, bool>> nodes;  // name, double circle
  std::vector<std::string> initial;
  std::vector<std::tuple<std::string, std::string, std::string>> edges;
};

std::string render(const std::string& name, Graph g) {
  std::sort(g.nodes.begin(), g.nodes.end());
  std::sort(g.initial.begin(), g.initial.end());
  std::sort(g.edges.begin(), g.edges.end());

  std::ostringstream os;
  os << "digraph " << quote(name) << " {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=circle];\n";
  for (std::size_t i = 0; i < g.initial.size(); ++i)
    os << "  __init" << i << " [shape=point, label=\"\"];\n";
  for (const auto& [node, flagged] : g.nodes) {
    os << "  " << quote(node);
    if (flagged) os << " [shape=doublecircle]";
    os << ";\n";
  }
  for (std::size_t i = 0; i < g.initial.size(); ++i) os << "  __init" << i << " -> " << quote(g.initial[i]) << ";\n";
  for (const auto& [from, label, to] : g.edges)
    os << "  " << quote(from) << " -> " << quote(to) << " [label=" << quote(label) << "];\n";
  os << "}\n";
  return os.str();
}

} // namespace

std::string export_dot(const std::string& name, const Fsm& m) {
  Graph g;
  for (StateIndex s = 0; s < m.state_count(); ++s) g.nodes.emplace_back(m.state_name(s), m.is_critical(s));
  g.initial = m.to_names(m.initial());
  for (auto& t : m.transitions()) g.edges.emplace_back(std::move(t.from), std::move(t.label), std::move(t.to));
  return render(name, std::move(g));
}

std::string export_dot(const std::string& name, const ObserverFsm& obs) {
  Graph g;
  for (const auto& st : obs.states()) g.nodes.emplace_back(st.name(), st.output);
  g.initial = {obs.state(obs.initial()).name()};
  for (const auto& e : obs.edges()) g.edges.emplace_back(obs.state(e.from).name(), e.label, obs.state(e.to).name());
  return render(name, std::move(g));
}

} // namespace critnet
