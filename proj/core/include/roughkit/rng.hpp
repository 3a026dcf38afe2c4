#pragma once

#include <array>
#include <cstdint>

namespace roughkit {

/// Philox4x32-10 block function (Salmon et al., SC'11). Pure function of
/// (counter, key); used to derive independent, reproducible streams.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based normal/uniform generator. A stream is identified by
/// (seed, stream_hi, stream_lo); typical use is stream_hi = path index,
/// stream_lo = component. Two generators with the same identity produce
/// the same sequence regardless of thread scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint32_t stream_hi, std::uint32_t stream_lo);

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();
  /// Standard normal via Box-Muller.
  double normal();

 private:
  std::uint64_t next_u64();

  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_hi_;
  std::uint32_t stream_lo_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace roughkit
