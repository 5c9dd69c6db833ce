#include "nin/sim/event_log.hpp"

#include <fmt/format.h>

namespace nin::sim {

std::string LogRecord::to_line() const {
  return fmt::format("{} | {} | {} | {}", t, module, event, details);
}

void EventLog::append(LogRecord record) {
  records_.push_back(std::move(record));
  for (const auto& listener : listeners_) {
    listener(records_.back());
  }
}

std::string EventLog::text() const {
  std::string out;
  for (const auto& r : records_) {
    out += r.to_line();
    out += '\n';
  }
  return out;
}

}  // namespace nin::sim
