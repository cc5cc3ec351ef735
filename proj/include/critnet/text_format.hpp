#pragma once

#include "critnet/composition.hpp"
#include "critnet/observer.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace critnet {

// Line-oriented network and observer documents:
//
//   # comment
//   fsm A
//     states p q
//     initial p
//     alphabet a b
//     critical q
//     trans p a q
//     trans q b p
//   end
//
//   observer A
//     alphabet a b
//     state {p} 0          first state listed is the initial one
//     state {q} 1
//     trans {p} a {q}
//   end
//
// Directives may repeat (their lists concatenate). Product states are
// written "(x1,x2)", subset states "{x1,x2}", aggregates "({x1},{y1,y2})".

struct Document {
  std::vector<Network::Member> fsms;
  std::vector<DecentralizedObserver::Local> observers;
};

/// Throws ParseError for syntax problems (with line and column) and
/// InvalidInput naming the offending block for semantic ones.
Document parse_document(std::string_view text);

/// A document holding only `fsm` blocks, at least one.
Network parse_network(std::string_view text);

std::string serialize_fsm(const std::string& name, const Fsm& m);
std::string serialize_network(const Network& n);
std::string serialize_observer(const std::string& name, const ObserverFsm& obs);

/// Parses "{a,b}" or "({a},{b,c})".
AggregateState parse_aggregate(std::string_view token);

std::string read_file(const std::string& path);

} // namespace critnet
