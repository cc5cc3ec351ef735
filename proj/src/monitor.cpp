#include "critnet/monitor.hpp"

namespace critnet {

MonitorSession::MonitorSession(const DecentralizedObserver& d) {
  for (const auto& local : d.locals)
    locals_.push_back({local.name, std::make_shared<const ObserverFsm>(local.observer), 0});
  recompute();
}

MonitorSession::MonitorSession(std::vector<std::pair<std::string, std::shared_ptr<const ObserverFsm>>> locals) {
  for (auto& [name, obs] : locals) {
    if (!obs) throw InvalidInput("monitor local '" + name + "' has no observer");
    std::size_t initial = obs->initial();
    locals_.push_back({std::move(name), std::move(obs), initial});
  }
  recompute();
}

void MonitorSession::recompute() {
  global_flag_ = false;
  for (const auto& local : locals_) global_flag_ = global_flag_ || local.observer->output(local.state);
}

std::vector<bool> MonitorSession::outputs() const {
  std::vector<bool> out;
  out.reserve(locals_.size());
  for (const auto& local : locals_) out.push_back(local.observer->output(local.state));
  return out;
}

void MonitorSession::feed(const std::string& event) {
  if (poisoned_) throw Desync("session is poisoned by an earlier desync");
  std::vector<std::size_t> targets(locals_.size(), ObserverFsm::npos);
  bool known = false;
  for (std::size_t i = 0; i < locals_.size(); ++i) {
    const auto& local = locals_[i];
    auto l = local.observer->find_label(event);
    if (!l) continue;
    known = true;
    targets[i] = local.observer->next(local.state, *l);
    if (targets[i] == ObserverFsm::npos) {
      poisoned_ = true;
      throw Desync("local '" + local.name + "' has no transition on '" + event + "' from " +
                   local.observer->state(local.state).name());
    }
  }
  if (!known) throw InvalidInput("event '" + event + "' is in no local alphabet");

  Step step{event, std::vector<bool>(locals_.size(), false), {}, false};
  for (std::size_t i = 0; i < locals_.size(); ++i)
    if (targets[i] != ObserverFsm::npos) {
      locals_[i].state = targets[i];
      step.moved[i] = true;
    }
  recompute();
  step.outputs = outputs();
  step.global_flag = global_flag_;
  log_.push_back(std::move(step));
}

void MonitorSession::replay(const Word& w) {
  for (const auto& event : w) feed(event);
}

Word MonitorSession::consumed(std::size_t i) const {
  Word out;
  for (const auto& step : log_)
    if (step.moved.at(i)) out.push_back(step.event);
  return out;
}

MonitorSession start_session(const DecentralizedObserver& d) { return MonitorSession(d); }

MonitorSession feed_event(MonitorSession s, const std::string& event) {
  s.feed(event);
  return s;
}

MonitorSession replay(MonitorSession s, const Word& w) {
  s.replay(w);
  return s;
}

} // namespace critnet
