#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "nin/sim/types.hpp"

namespace nin::sim {

struct LogRecord {
  VirtualTime t = 0;
  std::string module;
  std::string event;
  std::string details;

  /// `t | module | event | details`
  std::string to_line() const;
  bool operator==(const LogRecord&) const = default;
};

/// Append-only run log.
class EventLog {
 public:
  using Listener = std::function<void(const LogRecord&)>;

  void append(LogRecord record);
  const std::vector<LogRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  /// Full log, one line per record, newline terminated.
  std::string text() const;

  void subscribe(Listener listener) { listeners_.push_back(std::move(listener)); }

 private:
  std::vector<LogRecord> records_;
  std::vector<Listener> listeners_;
};

}  // namespace nin::sim
