#pragma once

#include "critnet/observer.hpp"

#include <memory>
#include <string>
#include <vector>

namespace critnet {

class Desync : public Error {
public:
  using Error::Error;
};

/// Online replay of a bank of local observers feeding an OR coordinator.
///
/// Each event is delivered to every local whose alphabet contains it; all of
/// them step before the global flag is recomputed. A local that cannot take
/// the event poisons the session.
class MonitorSession {
public:
  struct Local {
    std::string name;
    std::shared_ptr<const ObserverFsm> observer;
    std::size_t state;
  };

  struct Step {
    std::string event;
    std::vector<bool> moved;      // per local
    std::vector<bool> outputs;    // per local, after the event
    bool global_flag;
  };

  explicit MonitorSession(const DecentralizedObserver& d);
  explicit MonitorSession(std::vector<std::pair<std::string, std::shared_ptr<const ObserverFsm>>> locals);

  void feed(const std::string& event);
  void replay(const Word& w);

  const std::vector<Local>& locals() const noexcept { return locals_; }
  std::vector<bool> outputs() const;
  bool global_flag() const noexcept { return global_flag_; }
  bool poisoned() const noexcept { return poisoned_; }
  const std::vector<Step>& log() const noexcept { return log_; }

  /// Events consumed by local `i`, in order.
  Word consumed(std::size_t i) const;

private:
  void recompute();

  std::vector<Local> locals_;
  bool global_flag_ = false;
  bool poisoned_ = false;
  std::vector<Step> log_;
};

MonitorSession start_session(const DecentralizedObserver& d);
MonitorSession feed_event(MonitorSession s, const std::string& event);
MonitorSession replay(MonitorSession s, const Word& w);

} // namespace critnet
