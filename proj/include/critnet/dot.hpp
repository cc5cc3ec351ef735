#pragma once

#include "critnet/fsm.hpp"
#include "critnet/observer.hpp"

#include <string>

namespace critnet {

/// Graphviz rendering. Critical (resp. flagged) states are double circles,
/// initial states get an entry arrow from an invisible point node. Node and
/// edge order is canonical, so identical inputs give identical text.
std::string export_dot(const std::string& name, const Fsm& m);
std::string export_dot(const std::string& name, const ObserverFsm& obs);

} // namespace critnet
