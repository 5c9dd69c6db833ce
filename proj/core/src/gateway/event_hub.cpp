#include "nin/gateway/event_hub.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace nin::gateway {

std::optional<std::string> Subscription::next(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [&] { return gap_ > 0 || !queue_.empty() || closed_; });
  if (gap_ > 0) {
    auto frame = fmt::format(R"({{"gap":{}}})", gap_);
    gap_ = 0;
    return frame;
  }
  if (queue_.empty()) return std::nullopt;
  auto frame = std::move(queue_.front());
  queue_.pop_front();
  return frame;
}

bool Subscription::closed() const {
  std::lock_guard lock(mutex_);
  return closed_ && queue_.empty() && gap_ == 0;
}

void Subscription::push(const std::string& frame) {
  {
    std::lock_guard lock(mutex_);
    if (closed_) return;
    if (queue_.size() >= capacity_) {
      queue_.pop_front();
      ++gap_;
    }
    queue_.push_back(frame);
  }
  cv_.notify_one();
}

void Subscription::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  cv_.notify_all();
}

std::shared_ptr<Subscription> EventHub::subscribe() {
  auto sub = std::make_shared<Subscription>(capacity_);
  std::lock_guard lock(mutex_);
  if (closed_) {
    sub->close();
  } else {
    subs_.push_back(sub);
  }
  return sub;
}

void EventHub::unsubscribe(const std::shared_ptr<Subscription>& sub) {
  std::lock_guard lock(mutex_);
  std::erase(subs_, sub);
}

void EventHub::publish(const std::string& frame) {
  std::lock_guard lock(mutex_);
  for (auto& s : subs_) s->push(frame);
}

void EventHub::publish(const std::vector<std::string>& frames) {
  std::lock_guard lock(mutex_);
  for (const auto& f : frames) {
    for (auto& s : subs_) s->push(f);
  }
}

void EventHub::close() {
  std::lock_guard lock(mutex_);
  closed_ = true;
  for (auto& s : subs_) s->close();
  subs_.clear();
}

std::size_t EventHub::subscribers() const {
  std::lock_guard lock(mutex_);
  return subs_.size();
}

}  // namespace nin::gateway
