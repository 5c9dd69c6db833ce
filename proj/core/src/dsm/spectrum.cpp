#include "nin/dsm/spectrum.hpp"

#include <fmt/format.h>

namespace nin::dsm {

std::string SpectrumBand::str() const { return fmt::format("[{},{}]", low_mhz, high_mhz); }

std::string_view to_string(Qos qos) { return qos == Qos::Urllc ? "URLLC" : "eMBB"; }

std::optional<Qos> parse_qos(std::string_view text) {
  if (text == "urllc" || text == "URLLC") return Qos::Urllc;
  if (text == "embb" || text == "eMBB" || text == "EMBB") return Qos::Embb;
  return std::nullopt;
}

}  // namespace nin::dsm
