#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace nin::gateway {

/// One subscriber's bounded frame queue. When full, the oldest frame is
/// dropped and the next read yields a `{"gap":N}` frame first.
class Subscription {
 public:
  explicit Subscription(std::size_t capacity) : capacity_(capacity) {}

  /// Blocks up to `timeout`. nullopt on timeout or once closed and drained.
  std::optional<std::string> next(std::chrono::milliseconds timeout);
  bool closed() const;

 private:
  friend class EventHub;
  void push(const std::string& frame);
  void close();

  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<std::string> queue_;
  std::size_t capacity_;
  std::size_t gap_ = 0;
  bool closed_ = false;
};

/// Fan-out of event-stream frames to every live subscription, in publish
/// order.
class EventHub {
 public:
  explicit EventHub(std::size_t per_subscriber_capacity = 4096) : capacity_(per_subscriber_capacity) {}

  std::shared_ptr<Subscription> subscribe();
  void unsubscribe(const std::shared_ptr<Subscription>& sub);
  void publish(const std::string& frame);
  void publish(const std::vector<std::string>& frames);
  void close();
  std::size_t subscribers() const;

 private:
  mutable std::mutex mutex_;
  std::vector<std::shared_ptr<Subscription>> subs_;
  std::size_t capacity_;
  bool closed_ = false;
};

}  // namespace nin::gateway
