// Command-line driver: check, reduce, synth, compose, monitor, export, preserve.

#include "critnet/dot.hpp"
#include "critnet/equivalence.hpp"
#include "critnet/monitor.hpp"
#include "critnet/pipeline.hpp"
#include "critnet/text_format.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace critnet;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;

std::size_t default_budget() {
  if (const char* env = std::getenv("CRITNET_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidInput(std::string("CRITNET_BUDGET is not a number: '") + env + "'");
    }
  }
  return kDefaultBudget;
}

json ledger_json(const CostLedger& c) {
  return {{"space", c.space()}, {"transition_data", c.transition_data}, {"output_data", c.output_data},
          {"time", c.time}};
}

std::string ledger_text(const CostLedger& c) {
  std::ostringstream os;
  os << "space=" << c.space() << " (transitions=" << c.transition_data << " outputs=" << c.output_data
     << ") time=" << c.time;
  return os.str();
}

json classes_json(const Network& n, const EquivalenceClasses& eq) {
  json out = json::array();
  for (const auto& c : eq.classes) {
    json members = json::array();
    for (std::size_t m : c.members) members.push_back(n[m].name);
    out.push_back({{"representative", n[c.representative].name}, {"members", members}});
  }
  return out;
}

std::string classes_text(const Network& n, const EquivalenceClasses& eq) {
  std::ostringstream os;
  for (std::size_t k = 0; k < eq.classes.size(); ++k) {
    os << "E" << k + 1 << " = {";
    for (std::size_t j = 0; j < eq.classes[k].members.size(); ++j)
      os << (j ? "," : "") << n[eq.classes[k].members[j]].name;
    os << "} representative " << n[eq.classes[k].representative].name << '\n';
  }
  return os.str();
}

int cmd_check(const std::string& file, const std::string& algorithm, std::size_t budget, bool as_json) {
  Network n = parse_network(read_file(file));
  json doc{{"file", file}, {"members", n.size()}, {"algorithm", algorithm}};
  std::ostringstream text;
  text << "members: " << n.size() << '\n' << "algorithm: " << algorithm << '\n';
  Verdict verdict;

  if (algorithm == "1") {
    auto r = run_algorithm1(n, budget);
    verdict = r.verdict;
    doc["observer_states"] = r.decentralized.state_count();
    doc["ledger"] = ledger_json(r.ledger);
    text << "observer states: " << r.decentralized.state_count() << '\n' << "ledger: " << ledger_text(r.ledger) << '\n';
  } else if (algorithm == "otf") {
    OnTheFlyOptions options;
    options.max_aggregates = budget;
    auto r = run_onthefly(n, options);
    verdict = {r.observable, r.violation};
    doc["aggregates_explored"] = r.aggregates_explored;
    doc["ledger"] = ledger_json(r.ledger);
    text << "aggregates explored: " << r.aggregates_explored << '\n' << "ledger: " << ledger_text(r.ledger) << '\n';
  } else {
    auto r = run_algorithm3(n, false, budget);
    verdict = r.verdict;
    doc["reduced_members"] = r.quotient.network.size();
    doc["classes"] = classes_json(n, r.quotient.classes);
    doc["aggregates_explored"] = r.aggregates_explored;
    doc["ledger"] = ledger_json(r.ledger_reduced);
    text << "reduced members: " << r.quotient.network.size() << '\n'
         << classes_text(n, r.quotient.classes) << "aggregates explored: " << r.aggregates_explored << '\n'
         << "ledger: " << ledger_text(r.ledger_reduced) << '\n';
  }

  doc["observable"] = verdict.observable;
  if (verdict.witness) doc["witness"] = format_aggregate(*verdict.witness);
  text << "verdict: " << (verdict.observable ? "observable" : "not observable") << '\n';
  if (verdict.witness) text << "witness: " << format_aggregate(*verdict.witness) << '\n';

  if (as_json)
    std::cout << doc.dump(2) << '\n';
  else
    std::cout << text.str();
  return verdict.observable ? kExitOk : kExitNegative;
}

int cmd_reduce(const std::string& file, bool as_json) {
  Network n = parse_network(read_file(file));
  Quotient q = quotient_network(n);
  if (as_json) {
    std::cout << json{{"network", serialize_network(q.network)}, {"classes", classes_json(n, q.classes)}}.dump(2)
              << '\n';
    return kExitOk;
  }
  std::cout << serialize_network(q.network);
  std::istringstream classes(classes_text(n, q.classes));
  std::string line;
  while (std::getline(classes, line)) std::cout << "# " << line << '\n';
  return kExitOk;
}

int cmd_synth(const std::string& file, const std::string& out_dir, std::size_t budget) {
  Network n = parse_network(read_file(file));
  PipelineReport r = run_algorithm3(n, false, budget);
  if (!r.verdict.observable) {
    std::cerr << "not observable";
    if (r.verdict.witness) std::cerr << ", witness " << format_aggregate(*r.verdict.witness);
    std::cerr << '\n';
    return kExitNegative;
  }
  if (out_dir.empty()) {
    for (std::size_t i = 0; i < r.locals.size(); ++i)
      std::cout << (i ? "\n" : "") << serialize_observer(r.locals[i].name, r.locals[i].observer);
    return kExitOk;
  }
  std::filesystem::create_directories(out_dir);
  for (const auto& local : r.locals) {
    auto base = std::filesystem::path(out_dir) / local.name;
    std::ofstream(base.string() + ".obs") << serialize_observer(local.name, local.observer);
    std::ofstream(base.string() + ".dot") << export_dot(local.name, local.observer);
    std::cout << base.string() << ".obs\n";
  }
  return kExitOk;
}

int cmd_compose(const std::string& file) {
  Network n = parse_network(read_file(file));
  std::cout << serialize_fsm("composed", compose_network(n));
  return kExitOk;
}

int cmd_monitor(const std::vector<std::string>& files, const std::string& events) {
  std::vector<std::pair<std::string, std::shared_ptr<const ObserverFsm>>> locals;
  for (const auto& f : files) {
    Document doc = parse_document(read_file(f));
    for (auto& m : doc.fsms) locals.emplace_back(m.name, std::make_shared<const ObserverFsm>(build_observer(m.fsm)));
    for (auto& o : doc.observers) locals.emplace_back(o.name, std::make_shared<const ObserverFsm>(std::move(o.observer)));
  }
  MonitorSession session(std::move(locals));

  auto bits = [](const std::vector<bool>& v) {
    std::string s;
    for (bool b : v) s += b ? '1' : '0';
    return s;
  };
  std::cout << 0 << ' ' << kEpsilon << ' ' << bits(session.outputs()) << ' ' << session.global_flag() << '\n';

  std::ifstream file_in;
  std::istream* in = &std::cin;
  if (events != "-") {
    file_in.open(events);
    if (!file_in) throw InvalidInput("cannot open '" + events + "'");
    in = &file_in;
  }
  std::string line;
  while (std::getline(*in, line)) {
    std::istringstream tokens(line);
    std::string label;
    if (!(tokens >> label) || label.front() == '#') continue;
    try {
      session.feed(label);
    } catch (const Error& e) {
      std::cerr << "desync at step " << session.log().size() + 1 << ": " << e.what() << '\n';
      return kExitNegative;
    }
    const auto& step = session.log().back();
    std::cout << session.log().size() << ' ' << step.event << ' ' << bits(step.outputs) << ' ' << step.global_flag
              << '\n';
  }
  return kExitOk;
}

int cmd_export(const std::string& file, bool observer) {
  Document doc = parse_document(read_file(file));
  for (const auto& m : doc.fsms)
    std::cout << (observer ? export_dot(m.name, build_observer(m.fsm)) : export_dot(m.name, m.fsm));
  for (const auto& o : doc.observers) std::cout << export_dot(o.name, o.observer);
  return kExitOk;
}

int cmd_preserve(const std::string& file, std::size_t budget) {
  Network n = parse_network(read_file(file));
  PreservationReport r = preservation_check(n, BuildLimits{budget});
  std::cout << "members: " << r.members << " reduced: " << r.reduced_members << '\n'
            << "observable: full=" << r.observable_full << " reduced=" << r.observable_reduced << '\n'
            << "observer valid: reduced=" << r.observer_valid_reduced << " full=" << r.observer_valid_full << '\n'
            << "agreement: " << (r.agrees() ? "yes" : "no") << '\n';
  return r.agrees() ? kExitOk : kExitNegative;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical observability of FSM networks"};
  app.require_subcommand(1);

  std::string file;
  std::string algorithm = "3";
  std::optional<std::size_t> budget;
  bool as_json = false;
  auto* check = app.add_subcommand("check", "Decide critical observability");
  check->add_option("file", file, "network document")->required();
  check->add_option("--algorithm", algorithm, "1 (baseline), otf (on-the-fly) or 3 (reduction + on-the-fly)")
      ->check(CLI::IsMember({"1", "otf", "3"}));
  check->add_option("--budget", budget, "state budget");
  check->add_flag("--json", as_json, "machine-readable report");

  auto* reduce = app.add_subcommand("reduce", "Quotient network by bisimilarity");
  reduce->add_option("file", file, "network document")->required();
  reduce->add_flag("--json", as_json, "machine-readable report");

  std::string out_dir;
  auto* synth = app.add_subcommand("synth", "Synthesize projected local observers");
  synth->add_option("file", file, "network document")->required();
  synth->add_option("--out", out_dir, "output directory");
  synth->add_option("--budget", budget, "state budget");

  auto* compose = app.add_subcommand("compose", "Print the composed FSM");
  compose->add_option("file", file, "network document")->required();

  std::vector<std::string> observer_files;
  std::string events = "-";
  auto* monitor = app.add_subcommand("monitor", "Replay events through a bank of observers");
  monitor->add_option("observers", observer_files, "observer or network documents")->required();
  monitor->add_option("--events", events, "event file, '-' for standard input");

  bool dot = false;
  bool observer = false;
  auto* exporter = app.add_subcommand("export", "Render machines as Graphviz");
  exporter->add_option("file", file, "document")->required();
  exporter->add_flag("--dot", dot, "Graphviz output")->required();
  exporter->add_flag("--observer", observer, "render the observer of each FSM");

  auto* preserve = app.add_subcommand("preserve", "Compare a network with its quotient");
  preserve->add_option("file", file, "network document")->required();
  preserve->add_option("--budget", budget, "state budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    std::size_t limit = budget.value_or(default_budget());
    if (check->parsed()) return cmd_check(file, algorithm, limit, as_json);
    if (reduce->parsed()) return cmd_reduce(file, as_json);
    if (synth->parsed()) return cmd_synth(file, out_dir, limit);
    if (compose->parsed()) return cmd_compose(file);
    if (monitor->parsed()) return cmd_monitor(observer_files, events);
    if (exporter->parsed()) return cmd_export(file, observer);
    if (preserve->parsed()) return cmd_preserve(file, limit);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
