#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace dqm {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The key is the
// run seed; the counter's upper words select an independent stream, so every
// (seed, stream) pair yields the same sequence regardless of thread order.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;

  Philox4x32(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 4) {
      block_ = generate(ctr_, key_);
      if (++ctr_[0] == 0) ++ctr_[1];
      pos_ = 0;
    }
    return block_[pos_++];
  }

  static std::array<std::uint32_t, 4> generate(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
    constexpr std::uint32_t m0 = 0xD2511F53, m1 = 0xCD9E8D57;
    constexpr std::uint32_t w0 = 0x9E3779B9, w1 = 0xBB67AE85;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t(m0) * c[0];
      const std::uint64_t p1 = std::uint64_t(m1) * c[2];
      c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
      k[0] += w0;
      k[1] += w1;
    }
    return c;
  }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> block_{};
  int pos_ = 4;
};

}  // namespace dqm
