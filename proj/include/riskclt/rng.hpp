#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace riskclt {

/// Purpose tags separate the independent random inputs of one repetition.
enum class StreamTag : std::uint32_t {
  design = 1,
  beta = 2,
  noise = 3,
  test_points = 4,
  misc = 5,
};

/// Philox4x32-10 counter-based generator.
///
/// The 64-bit key is the master seed. The 128-bit counter is split into a
/// 64-bit block index (advanced as output is consumed), a 32-bit stream index
/// and a 32-bit purpose tag, so every (seed, index, tag) triple addresses its
/// own non-overlapping sequence without any shared state.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;

  Philox4x32(std::uint64_t key, std::uint32_t stream_index, std::uint32_t tag);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buffer_{};
  std::uint64_t block_index_ = 0;
  int consumed_ = 4;
};

using RngStream = Philox4x32;

inline RngStream make_stream(std::uint64_t master_seed, std::uint64_t index,
                             StreamTag tag) {
  return RngStream(master_seed, static_cast<std::uint32_t>(index),
                   static_cast<std::uint32_t>(tag));
}

}  // namespace riskclt
