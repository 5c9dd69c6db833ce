#include "nin/subnet/token_subnet.hpp"

#include <algorithm>

namespace nin::subnet {

TokenSubnet::TokenSubnet(std::vector<Device> devices, TokenSubnetConfig config)
    : devices_(std::move(devices)), config_(config), state_(devices_.size()), counters_(devices_.size()) {
  for (const auto& d : devices_) {
    max_frame_bits_ = std::max(max_frame_bits_, d.profile.frame_bytes * 8);
  }
}

DeviceCounters TokenSubnet::totals() const {
  DeviceCounters t;
  for (const auto& c : counters_) {
    t.generated += c.generated;
    t.delivered += c.delivered;
    t.dropped += c.dropped;
    t.queued += c.queued;
  }
  return t;
}

void TokenSubnet::power_on(Nanos at) {
  if (powered_) return;
  advance_to(at);
  powered_ = true;
  const auto n = static_cast<Nanos>(devices_.size());
  for (std::size_t i = 0; i < devices_.size(); ++i) {
    const Nanos period = devices_[i].profile.period_us * 1000;
    state_[i].next_generation = at + period * static_cast<Nanos>(i) / std::max<Nanos>(n, 1);
    state_[i].deficit = 0;
  }
  nominal_ = at;
  next_rotation_ = at;
}

void TokenSubnet::power_off(Nanos at) {
  if (!powered_) return;
  advance_to(at);
  powered_ = false;
  for (std::size_t i = 0; i < devices_.size(); ++i) {
    while (!state_[i].queue.empty()) {
      state_[i].queue.pop_front();
      --counters_[i].queued;
      drop(i, at);
    }
    state_[i].deficit = 0;
  }
}

void TokenSubnet::advance_to(Nanos t) {
  while (powered_ && next_rotation_ < t) {
    rotate();
  }
  clock_ = std::max(clock_, t);
  prune();
}

Nanos TokenSubnet::set_band(const dsm::SpectrumBand& band, Nanos at) {
  advance_to(at);
  if (!powered_) {
    apply_band(band, at);
    return at;
  }
  pending_band_ = band;
  return next_rotation_;
}

void TokenSubnet::apply_band(const dsm::SpectrumBand& band, Nanos at) {
  if (band == band_ && !changes_.empty()) return;
  band_ = band;
  changes_.push_back({at, band});
}

void TokenSubnet::generate(std::size_t i, Nanos upto) {
  DeviceState& s = state_[i];
  const auto& p = devices_[i].profile;
  while (s.next_generation <= upto) {
    ++counters_[i].generated;
    if (s.queue.size() >= config_.queue_bound) {
      drop(i, s.next_generation);
    } else {
      s.queue.push_back({s.next_generation, p.frame_bytes * 8});
      ++counters_[i].queued;
    }
    s.next_generation += p.period_us * 1000;
  }
}

void TokenSubnet::drop(std::size_t device, Nanos at) {
  ++counters_[device].dropped;
  drops_.push_back({device, at});
}

void TokenSubnet::rotate() {
  const Nanos start = next_rotation_;
  if (pending_band_) {
    apply_band(*pending_band_, start);
    pending_band_.reset();
  }
  const std::uint64_t rate = capacity_bits_per_us(band_);
  const std::uint64_t budget = rate * static_cast<std::uint64_t>(config_.token_period_us);
  const std::uint64_t quantum = devices_.empty() ? 0 : budget / devices_.size();
  Nanos cursor = start;
  for (std::size_t i = 0; i < devices_.size(); ++i) {
    generate(i, cursor);
    DeviceState& s = state_[i];
    s.deficit = std::min<std::uint64_t>(s.deficit + quantum, quantum + max_frame_bits_);
    while (rate > 0 && !s.queue.empty() && s.queue.front().bits <= s.deficit) {
      const Frame f = s.queue.front();
      s.queue.pop_front();
      --counters_[i].queued;
      ++counters_[i].delivered;
      s.deficit -= f.bits;
      // Round airtime up so the channel never beats its capacity.
      const auto airtime = static_cast<Nanos>((std::uint64_t{f.bits} * 1000 + rate - 1) / rate);
      TxRecord tx{i, cursor, cursor + airtime, f.bits, f.generated, false};
      if (const auto& deadline = devices_[i].profile.deadline_us) {
        tx.late = tx.latency() > *deadline * 1000;
      }
      tx_.push_back(tx);
      cursor += airtime;
    }
    if (s.queue.empty()) s.deficit = 0;
  }
  ++rotations_;
  nominal_ += config_.token_period_us * 1000;
  next_rotation_ = std::max(nominal_, cursor);
}

std::uint16_t TokenSubnet::max_width_between(Nanos from, Nanos to) const {
  std::uint16_t widest = 0;
  for (std::size_t i = 0; i < changes_.size(); ++i) {
    const Nanos until = i + 1 < changes_.size() ? changes_[i + 1].effective : INT64_MAX;
    if (changes_[i].effective < to && until > from) widest = std::max(widest, changes_[i].band.width());
  }
  return widest;
}

void TokenSubnet::prune() {
  const Nanos cutoff = clock_ - config_.retention_us * 1000;
  while (!tx_.empty() && tx_.front().end < cutoff) tx_.pop_front();
  while (!drops_.empty() && drops_.front().at < cutoff) drops_.pop_front();
}

}  // namespace nin::subnet
