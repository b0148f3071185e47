#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "test_support.hpp"

using namespace malvis;
using testing_support::TempDir;

namespace {

std::string header_bytes(const std::string& dict) {
  std::string h = dict;
  const std::size_t unpadded = 10 + h.size() + 1;
  h.append((64 - unpadded % 64) % 64, ' ');
  h.push_back('\n');
  std::string out("\x93NUMPY\x01\x00", 8);
  out.push_back(static_cast<char>(h.size() & 0xff));
  out.push_back(static_cast<char>(h.size() >> 8));
  return out + h;
}

std::string expect_error(const std::string& bytes) {
  try {
    parse_tensor(bytes);
  } catch (const Error& e) {
    return e.what();
  }
  return "<no error>";
}

}  // namespace

TEST(Npy, RoundTripBitExact) {
  TempDir dir;
  std::mt19937_64 rng(1);
  auto stack = testing_support::random_stack(rng, 8, 7, 7, -1e6f, 1e6f);
  stack.values[0] = -0.0f;
  stack.values[1] = std::numeric_limits<float>::denorm_min();
  stack.values[2] = std::numeric_limits<float>::max();
  write_tensor(stack, dir / "t.npy");
  const auto back = read_tensor(dir / "t.npy");
  ASSERT_TRUE(back.same_shape(stack));
  EXPECT_EQ(std::memcmp(back.values.data(), stack.values.data(), stack.values.size() * sizeof(float)), 0);
  EXPECT_TRUE(std::signbit(back.values[0]));
}

TEST(Npy, HeaderLayout) {
  const std::string bytes = serialize_tensor(TensorStack(2, 3, 4));
  EXPECT_EQ(bytes.substr(0, 8), std::string("\x93NUMPY\x01\x00", 8));
  const std::size_t header_len = static_cast<unsigned char>(bytes[8]) | (static_cast<unsigned char>(bytes[9]) << 8);
  EXPECT_EQ((10 + header_len) % 64, 0u);
  EXPECT_EQ(bytes[10 + header_len - 1], '\n');
  EXPECT_NE(bytes.find("'shape': (2, 3, 4)"), std::string::npos);
  EXPECT_EQ(bytes.size(), 10 + header_len + 2 * 3 * 4 * 4);
}

TEST(Npy, BadMagic) {
  std::string bytes = serialize_tensor(TensorStack(1, 1, 1));
  bytes[1] = 'X';
  EXPECT_EQ(expect_error(bytes), "bad magic");
  EXPECT_EQ(expect_error("hi"), "bad magic");
}

TEST(Npy, WrongDtype) {
  const std::string bytes = header_bytes("{'descr': '<f8', 'fortran_order': False, 'shape': (1, 1, 1), }") +
                            std::string(8, '\0');
  EXPECT_EQ(expect_error(bytes), "wrong dtype: expected <f4, got <f8");
}

TEST(Npy, WrongRank) {
  const std::string bytes =
      header_bytes("{'descr': '<f4', 'fortran_order': False, 'shape': (3, 4), }") + std::string(48, '\0');
  EXPECT_EQ(expect_error(bytes), "wrong rank: expected 3, got 2");
  const std::string scalar = header_bytes("{'descr': '<f4', 'fortran_order': False, 'shape': (), }") + std::string(4, '\0');
  EXPECT_EQ(expect_error(scalar), "wrong rank: expected 3, got 0");
}

TEST(Npy, FortranOrderRejected) {
  const std::string bytes =
      header_bytes("{'descr': '<f4', 'fortran_order': True, 'shape': (1, 2, 2), }") + std::string(16, '\0');
  EXPECT_EQ(expect_error(bytes), "wrong order: expected C order");
}

TEST(Npy, TruncatedPayload) {
  std::string bytes = serialize_tensor(TensorStack(2, 2, 2));
  bytes.resize(bytes.size() - 1);
  EXPECT_EQ(expect_error(bytes), "truncated payload");
  EXPECT_EQ(expect_error(bytes.substr(0, 20)), "truncated header");
}

TEST(Npy, PathPrefixedErrors) {
  TempDir dir;
  write_text(dir / "bad.npy", "not a numpy file");
  try {
    read_tensor(dir / "bad.npy");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("bad magic"), std::string::npos);
  }
  EXPECT_THROW(read_tensor(dir / "missing.npy"), Error);
}

TEST(Npy, HeatmapRoundTrip) {
  TempDir dir;
  std::mt19937_64 rng(2);
  const auto hm = testing_support::random_heatmap(rng, 7, 7);
  write_heatmap(hm, dir / "hm.npy");
  const auto back = read_heatmap(dir / "hm.npy");
  for (std::size_t i = 0; i < 49; ++i) EXPECT_EQ(back.values()[i], static_cast<double>(static_cast<float>(hm.values()[i])));
  EXPECT_EQ(back.peak(), 1.0);

  write_tensor(TensorStack(2, 7, 7), dir / "two.npy");
  EXPECT_THROW(read_heatmap(dir / "two.npy"), Error);
}
