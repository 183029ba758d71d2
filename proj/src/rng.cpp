#include "riskclt/rng.hpp"

namespace riskclt {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t key, std::uint32_t stream_index,
                       std::uint32_t tag)
    : key_{static_cast<std::uint32_t>(key),
           static_cast<std::uint32_t>(key >> 32)},
      ctr_{0, 0, stream_index, tag} {}

std::array<std::uint32_t, 4> Philox4x32::block(
    std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

void Philox4x32::refill() {
  ctr_[0] = static_cast<std::uint32_t>(block_index_);
  ctr_[1] = static_cast<std::uint32_t>(block_index_ >> 32);
  buffer_ = block(ctr_, key_);
  ++block_index_;
  consumed_ = 0;
}

Philox4x32::result_type Philox4x32::operator()() {
  if (consumed_ >= 4) refill();
  const std::uint64_t lo = buffer_[consumed_];
  const std::uint64_t hi = buffer_[consumed_ + 1];
  consumed_ += 2;
  return (hi << 32) | lo;
}

}  // namespace riskclt
