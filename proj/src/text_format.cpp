#include "critnet/text_format.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

namespace critnet {

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

// Splits at commas that are not nested inside () or {}.
std::vector<std::string> split_top_level(std::string_view s) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string current;
  for (char c : s) {
    if (c == '(' || c == '{') ++depth;
    if (c == ')' || c == '}') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(std::move(current));
  return parts;
}

NameSet parse_subset(std::string_view token) {
  if (token.size() < 2 || token.front() != '{' || token.back() != '}')
    throw InvalidInput("malformed subset state '" + std::string(token) + "'");
  std::string_view inner = token.substr(1, token.size() - 2);
  NameSet out;
  if (inner.empty()) return out;
  for (auto& part : split_top_level(inner)) {
    if (!is_state_name(part)) throw InvalidInput("invalid state name '" + part + "' in '" + std::string(token) + "'");
    out.push_back(std::move(part));
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw InvalidInput("repeated state in subset '" + std::string(token) + "'");
  return out;
}

struct FsmBlock {
  std::string name;
  std::size_t line;
  FsmSpec spec;
  std::set<Transition> seen;
};

struct ObserverBlock {
  std::string name;
  std::size_t line;
  std::vector<std::string> alphabet;
  std::vector<ObserverState> states;
  std::vector<std::tuple<std::string, std::string, std::string, std::size_t>> edges;
};

template <typename Block>
[[noreturn]] void semantic_error(const char* kind, const Block& b, const std::string& what) {
  throw InvalidInput(std::string(kind) + " '" + b.name + "' (line " + std::to_string(b.line) + "): " + what);
}

Network::Member finish_fsm(FsmBlock& b) {
  try {
    return {b.name, Fsm(std::move(b.spec))};
  } catch (const InvalidInput& e) {
    semantic_error("fsm", b, e.what());
  }
}

DecentralizedObserver::Local finish_observer(ObserverBlock& b) {
  try {
    std::sort(b.alphabet.begin(), b.alphabet.end());
    if (std::adjacent_find(b.alphabet.begin(), b.alphabet.end()) != b.alphabet.end())
      throw InvalidInput("duplicate label");
    for (const auto& l : b.alphabet)
      if (!is_label_name(l)) throw InvalidInput("invalid label '" + l + "'");
    std::map<std::string, std::size_t> index;
    for (std::size_t s = 0; s < b.states.size(); ++s) index.emplace(b.states[s].name(), s);
    std::vector<ObserverEdge> edges;
    for (const auto& [from, label, to, line] : b.edges) {
      auto f = index.find(format_aggregate(parse_aggregate(from)));
      auto t = index.find(format_aggregate(parse_aggregate(to)));
      if (f == index.end()) throw InvalidInput("line " + std::to_string(line) + ": unknown state " + from);
      if (t == index.end()) throw InvalidInput("line " + std::to_string(line) + ": unknown state " + to);
      edges.push_back({f->second, label, t->second});
    }
    return {b.name, ObserverFsm(std::move(b.alphabet), std::move(b.states), edges)};
  } catch (const InvalidInput& e) {
    semantic_error("observer", b, e.what());
  }
}

} // namespace

AggregateState parse_aggregate(std::string_view token) {
  if (token.size() >= 2 && token.front() == '(' && token[1] == '{') {
    if (token.back() != ')') throw InvalidInput("malformed aggregate state '" + std::string(token) + "'");
    AggregateState out;
    for (const auto& part : split_top_level(token.substr(1, token.size() - 2))) out.push_back(parse_subset(part));
    return out;
  }
  return {parse_subset(token)};
}

Document parse_document(std::string_view text) {
  Document doc;
  std::optional<FsmBlock> fsm;
  std::optional<ObserverBlock> obs;
  std::set<std::string> names;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  std::size_t last_line = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto tokens = tokenize(raw);
    if (tokens.empty()) continue;
    last_line = line_no;
    const auto& head = tokens.front();
    auto args = [&](std::size_t exact) {
      if (exact != 0 && tokens.size() != exact + 1)
        throw ParseError(line_no, head.column,
                         "'" + head.text + "' takes " + std::to_string(exact) + " argument" + (exact == 1 ? "" : "s"));
    };

    if (!fsm && !obs) {
      if (head.text != "fsm" && head.text != "observer")
        throw ParseError(line_no, head.column, "expected 'fsm' or 'observer', found '" + head.text + "'");
      args(1);
      const auto& name = tokens[1];
      if (!is_plain_name(name.text)) throw ParseError(line_no, name.column, "invalid name '" + name.text + "'");
      if (!names.insert(name.text).second)
        throw ParseError(line_no, name.column, "duplicate block name '" + name.text + "'");
      if (head.text == "fsm")
        fsm = FsmBlock{name.text, line_no, {}, {}};
      else
        obs = ObserverBlock{name.text, line_no, {}, {}, {}};
      continue;
    }

    if (head.text == "end") {
      args(0);
      if (tokens.size() != 1) throw ParseError(line_no, tokens[1].column, "unexpected token after 'end'");
      if (fsm) {
        doc.fsms.push_back(finish_fsm(*fsm));
        fsm.reset();
      } else {
        doc.observers.push_back(finish_observer(*obs));
        obs.reset();
      }
      continue;
    }

    auto rest = [&] {
      std::vector<std::string> out;
      for (std::size_t i = 1; i < tokens.size(); ++i) out.push_back(tokens[i].text);
      return out;
    };
    auto append = [](std::vector<std::string>& to, std::vector<std::string> from) {
      to.insert(to.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
    };

    if (fsm) {
      if (head.text == "states") {
        append(fsm->spec.states, rest());
      } else if (head.text == "initial") {
        append(fsm->spec.initial, rest());
      } else if (head.text == "alphabet") {
        append(fsm->spec.alphabet, rest());
      } else if (head.text == "critical") {
        append(fsm->spec.critical, rest());
      } else if (head.text == "trans") {
        args(3);
        Transition t{tokens[1].text, tokens[2].text, tokens[3].text};
        if (!fsm->seen.insert(t).second)
          throw ParseError(line_no, head.column, "duplicate transition " + t.from + " " + t.label + " " + t.to);
        fsm->spec.transitions.push_back(std::move(t));
      } else {
        throw ParseError(line_no, head.column, "unknown fsm directive '" + head.text + "'");
      }
    } else {
      if (head.text == "alphabet") {
        append(obs->alphabet, rest());
      } else if (head.text == "state") {
        args(2);
        const auto& flag = tokens[2];
        if (flag.text != "0" && flag.text != "1") throw ParseError(line_no, flag.column, "output must be 0 or 1");
        try {
          obs->states.push_back({parse_aggregate(tokens[1].text), flag.text == "1"});
        } catch (const InvalidInput& e) {
          throw ParseError(line_no, tokens[1].column, e.what());
        }
      } else if (head.text == "trans") {
        args(3);
        obs->edges.emplace_back(tokens[1].text, tokens[2].text, tokens[3].text, line_no);
      } else {
        throw ParseError(line_no, head.column, "unknown observer directive '" + head.text + "'");
      }
    }
  }

  if (fsm || obs) throw ParseError(line_no + 1, 1, "missing 'end' for block '" + (fsm ? fsm->name : obs->name) + "'");
  if (doc.fsms.empty() && doc.observers.empty()) throw ParseError(last_line + 1, 1, "empty document");
  return doc;
}

Network parse_network(std::string_view text) {
  Document doc = parse_document(text);
  if (!doc.observers.empty())
    throw InvalidInput("network document contains observer block '" + doc.observers.front().name + "'");
  return Network(std::move(doc.fsms));
}

namespace {

void write_list(std::ostringstream& os, const char* key, const std::vector<std::string>& items) {
  if (items.empty()) return;
  os << "  " << key;
  for (const auto& x : items) os << ' ' << x;
  os << '\n';
}

} // namespace

std::string serialize_fsm(const std::string& name, const Fsm& m) {
  std::ostringstream os;
  os << "fsm " << name << '\n';
  write_list(os, "states", m.states());
  write_list(os, "initial", m.to_names(m.initial()));
  write_list(os, "alphabet", m.alphabet());
  write_list(os, "critical", m.to_names(m.critical()));
  for (const auto& t : m.transitions()) os << "  trans " << t.from << ' ' << t.label << ' ' << t.to << '\n';
  os << "end\n";
  return os.str();
}

std::string serialize_network(const Network& n) {
  std::string out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (i) out += '\n';
    out += serialize_fsm(n[i].name, n[i].fsm);
  }
  return out;
}

std::string serialize_observer(const std::string& name, const ObserverFsm& obs) {
  std::ostringstream os;
  os << "observer " << name << '\n';
  write_list(os, "alphabet", obs.alphabet());
  for (const auto& st : obs.states()) os << "  state " << st.name() << ' ' << (st.output ? 1 : 0) << '\n';
  for (const auto& e : obs.edges())
    os << "  trans " << obs.state(e.from).name() << ' ' << e.label << ' ' << obs.state(e.to).name() << '\n';
  os << "end\n";
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

} // namespace critnet
