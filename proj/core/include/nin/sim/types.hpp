#pragma once

#include <compare>
#include <cstdint>
#include <functional>

namespace nin::sim {

/// Virtual time in milliseconds since the start of a run.
using VirtualTime = std::int64_t;

/// Small value wrapper that keeps node handles and subnet ids from mixing.
template <typename Tag, typename Rep>
struct StrongId {
  using rep_type = Rep;
  Rep value{};

  constexpr auto operator<=>(const StrongId&) const = default;
};

struct NodeTag;
struct SubnetTag;

using NodeRef = StrongId<NodeTag, std::uint32_t>;
using SubnetId = StrongId<SubnetTag, std::uint16_t>;

enum class Status : std::uint8_t { Up, Down };

}  // namespace nin::sim

template <typename Tag, typename Rep>
struct std::hash<nin::sim::StrongId<Tag, Rep>> {
  std::size_t operator()(const nin::sim::StrongId<Tag, Rep>& id) const noexcept {
    return std::hash<Rep>{}(id.value);
  }
};
