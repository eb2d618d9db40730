#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace mcf {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). The key is the 64-bit
// seed; the 128-bit counter is split into a stream index and a block index, so trial i
// of an experiment draws from substream(i) regardless of scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  Rng substream(std::uint64_t index) const { return Rng(seed_, index); }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, bound), rejection-free of modulo bias.
  std::uint64_t below(std::uint64_t bound);

  // Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

}  // namespace mcf
