#include <gtest/gtest.h>

#include "nin/dsm/wire.hpp"

using namespace nin::dsm;
using namespace nin::dsm::wire;

TEST(Wire, RoundTripEveryKind) {
  const std::vector<Message> all{Register{1, Qos::Urllc, 40, 0}, Register{2, Qos::Embb, 60, 1},
                                 Grant{7, 3700, 3740},          Heartbeat{2, 9},
                                 Reconfigure{8, 3740, 3800},    Ack{8},
                                 Deregister{1},                 Reregister{2}};
  for (const auto& m : all) {
    EXPECT_EQ(decode(encode(m)), m) << describe(m);
  }
}

TEST(Wire, FrameLayout) {
  const auto b = encode(Grant{0x01020304, 3700, 3740});
  ASSERT_EQ(b.size(), 2u + 1 + 4 + 2 + 2);
  EXPECT_EQ(b[0], 0);
  EXPECT_EQ(b[1], 9);
  EXPECT_EQ(b[2], static_cast<std::uint8_t>(Kind::Grant));
  EXPECT_EQ(b[3], 0x01);
  EXPECT_EQ(b[6], 0x04);
  EXPECT_EQ((b[7] << 8) | b[8], 3700);
}

TEST(Wire, RejectsBrokenFrames) {
  auto good = encode(Heartbeat{1, 2});
  EXPECT_THROW(decode(std::vector<std::uint8_t>{0}), DecodeError);
  auto shortened = good;
  shortened.pop_back();
  EXPECT_THROW(decode(shortened), DecodeError);
  auto trailing = good;
  trailing.push_back(0);
  EXPECT_THROW(decode(trailing), DecodeError);
  auto unknown = good;
  unknown[2] = 99;
  EXPECT_THROW(decode(unknown), DecodeError);
  auto bad_qos = encode(Register{1, Qos::Urllc, 40, 0});
  bad_qos[5] = 7;
  EXPECT_THROW(decode(bad_qos), DecodeError);
}
