#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nin/sim/event.hpp"
#include "nin/sim/event_log.hpp"
#include "nin/sim/rng.hpp"
#include "nin/sim/topology.hpp"

namespace nin::sim {

class MonotonicityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Ordering rank of module timers. Network events (rank 0..5, see
/// EventKind) always run before timers scheduled for the same instant.
enum class TimerClass : std::uint8_t {
  Delivery = 8,
  Gossip,
  Dht,
  SpectrumManager,
  Controller,
  Subnet,
  Metrics,
};

/// Single-threaded discrete-event kernel. Owns the topology, the virtual
/// clock, the event queue and the run log. The only thread-safe entry point
/// is inject(); injected events are drained between events and scheduled at
/// the current virtual time.
class Kernel {
 public:
  using Callback = std::function<void()>;
  using NetEventHandler = std::function<void(const NetEvent&)>;

  Kernel(TopologyGraph topology, std::uint64_t seed);

  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;

  VirtualTime now() const { return now_; }
  std::uint64_t seed() const { return seed_; }

  void schedule(const NetEvent& event);
  void schedule_timer(VirtualTime at, TimerClass cls, std::uint64_t key, Callback callback);
  void schedule_after(VirtualTime delay, TimerClass cls, std::uint64_t key, Callback callback) {
    schedule_timer(now_ + delay, cls, key, std::move(callback));
  }

  /// Thread-safe. The event fires at the virtual time it is drained.
  void inject(EventKind kind, EventTarget target);

  /// Executes the next queued entry; returns the log records it emitted.
  std::vector<LogRecord> step();
  /// Executes every entry with time <= t, then sets the clock to t.
  const EventLog& run_until(VirtualTime t);
  /// Executes every entry with time < t, sets the clock to t and drains
  /// injected events, which therefore order before anything else at t.
  void advance_to(VirtualTime t);

  std::optional<VirtualTime> next_event_time() const;
  std::size_t pending() const { return queue_.size(); }

  void on_net_event(NetEventHandler handler) { handlers_.push_back(std::move(handler)); }

  TopologyGraph& topology() { return topology_; }
  const TopologyGraph& topology() const { return topology_; }

  EventLog& log() { return log_; }
  const EventLog& log() const { return log_; }
  void emit(std::string module, std::string event, std::string details);

  /// Independent deterministic stream keyed by module name.
  Rng rng_stream(std::string_view name) const { return Rng::derive(seed_, name); }

 private:
  struct Entry {
    VirtualTime time;
    std::uint8_t rank;
    std::uint64_t key;
    std::uint64_t seq;
    std::optional<NetEvent> net_event;
    Callback callback;
  };
  struct Later {
    bool operator()(const Entry& x, const Entry& y) const {
      if (x.time != y.time) return x.time > y.time;
      if (x.rank != y.rank) return x.rank > y.rank;
      if (x.key != y.key) return x.key > y.key;
      return x.seq > y.seq;
    }
  };

  void drain_injected();
  void apply(const NetEvent& event);

  TopologyGraph topology_;
  std::uint64_t seed_;
  VirtualTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  std::vector<NetEventHandler> handlers_;
  EventLog log_;

  std::mutex inject_mutex_;
  std::vector<std::pair<EventKind, EventTarget>> injected_;
};

}  // namespace nin::sim
