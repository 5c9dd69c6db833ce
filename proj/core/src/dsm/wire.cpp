#include "nin/dsm/wire.hpp"

#include <fmt/format.h>

namespace nin::dsm::wire {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

class Writer {
 public:
  void u8(std::uint8_t v) { body_.push_back(v); }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    u16(static_cast<std::uint16_t>(v >> 16));
    u16(static_cast<std::uint16_t>(v));
  }
  std::vector<std::uint8_t> frame(Kind kind) const {
    const auto len = static_cast<std::uint16_t>(body_.size() + 1);
    std::vector<std::uint8_t> out{static_cast<std::uint8_t>(len >> 8), static_cast<std::uint8_t>(len),
                                  static_cast<std::uint8_t>(kind)};
    out.insert(out.end(), body_.begin(), body_.end());
    return out;
  }

 private:
  std::vector<std::uint8_t> body_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}
  std::uint8_t u8() {
    if (pos_ >= b_.size()) throw DecodeError("truncated frame");
    return b_[pos_++];
  }
  std::uint16_t u16() {
    const auto hi = u8();
    return static_cast<std::uint16_t>(hi << 8 | u8());
  }
  std::uint32_t u32() {
    const std::uint32_t hi = u16();
    return hi << 16 | u16();
  }
  void done() const {
    if (pos_ != b_.size()) throw DecodeError("trailing bytes");
  }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode(const Message& message) {
  Writer w;
  const Kind kind = std::visit(
      overloaded{
          [&](const Register& m) {
            w.u16(m.subnet);
            w.u8(static_cast<std::uint8_t>(m.qos));
            w.u8(m.requested_mhz);
            w.u8(m.priority);
            return Kind::Register;
          },
          [&](const Grant& m) {
            w.u32(m.version);
            w.u16(m.low);
            w.u16(m.high);
            return Kind::Grant;
          },
          [&](const Heartbeat& m) {
            w.u16(m.subnet);
            w.u32(m.version);
            return Kind::Heartbeat;
          },
          [&](const Reconfigure& m) {
            w.u32(m.version);
            w.u16(m.low);
            w.u16(m.high);
            return Kind::Reconfigure;
          },
          [&](const Ack& m) {
            w.u32(m.version);
            return Kind::Ack;
          },
          [&](const Deregister& m) {
            w.u16(m.subnet);
            return Kind::Deregister;
          },
          [&](const Reregister& m) {
            w.u16(m.subnet);
            return Kind::Reregister;
          },
      },
      message);
  return w.frame(kind);
}

Message decode(std::span<const std::uint8_t> frame) {
  if (frame.size() < 3) throw DecodeError("truncated frame");
  const std::size_t len = static_cast<std::size_t>(frame[0]) << 8 | frame[1];
  if (len + 2 != frame.size()) {
    throw DecodeError(fmt::format("length field {} does not match frame of {} bytes", len, frame.size()));
  }
  Reader r(frame.subspan(3));
  Message out;
  switch (static_cast<Kind>(frame[2])) {
    case Kind::Register: {
      Register m;
      m.subnet = r.u16();
      const auto q = r.u8();
      if (q > 1) throw DecodeError(fmt::format("bad qos {}", q));
      m.qos = static_cast<Qos>(q);
      m.requested_mhz = r.u8();
      m.priority = r.u8();
      out = m;
      break;
    }
    case Kind::Grant: {
      Grant m;
      m.version = r.u32();
      m.low = r.u16();
      m.high = r.u16();
      out = m;
      break;
    }
    case Kind::Heartbeat: {
      Heartbeat m;
      m.subnet = r.u16();
      m.version = r.u32();
      out = m;
      break;
    }
    case Kind::Reconfigure: {
      Reconfigure m;
      m.version = r.u32();
      m.low = r.u16();
      m.high = r.u16();
      out = m;
      break;
    }
    case Kind::Ack: out = Ack{r.u32()}; break;
    case Kind::Deregister: out = Deregister{r.u16()}; break;
    case Kind::Reregister: out = Reregister{r.u16()}; break;
    default: throw DecodeError(fmt::format("unknown kind {}", frame[2]));
  }
  r.done();
  return out;
}

std::string describe(const Message& message) {
  return std::visit(
      overloaded{
          [](const Register& m) {
            return fmt::format("REGISTER subnet={} qos={} requested={} prio={}", m.subnet, to_string(m.qos),
                               m.requested_mhz, m.priority);
          },
          [](const Grant& m) { return fmt::format("GRANT v={} [{},{}]", m.version, m.low, m.high); },
          [](const Heartbeat& m) { return fmt::format("HEARTBEAT subnet={} v={}", m.subnet, m.version); },
          [](const Reconfigure& m) { return fmt::format("RECONFIGURE v={} [{},{}]", m.version, m.low, m.high); },
          [](const Ack& m) { return fmt::format("ACK v={}", m.version); },
          [](const Deregister& m) { return fmt::format("DEREGISTER subnet={}", m.subnet); },
          [](const Reregister& m) { return fmt::format("REREGISTER subnet={}", m.subnet); },
      },
      message);
}

}  // namespace nin::dsm::wire
