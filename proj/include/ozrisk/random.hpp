#pragma once

// Counter-based random streams. Every draw is a pure function of
// (master seed, person, term, epoch, counter), so the value a person sees
// does not depend on thread scheduling or on how many rejections another
// stream needed.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace ozrisk {

/// Philox4x32-10 block function (Salmon et al., Random123).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

/// Which quantity a stream feeds. Distinct tags give independent streams.
enum class Term : std::uint32_t {
  U = 0,
  Nu1 = 1,
  Nu2 = 2,
  Demographics = 3,
  Ventilation = 4,
  Ozone = 5,
};

class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t person, Term term,
               std::uint32_t epoch = 0) noexcept
      : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
        person_(person),
        term_(term),
        epoch_(epoch) {}

  std::uint64_t person() const noexcept { return person_; }
  Term term() const noexcept { return term_; }
  std::uint32_t epoch() const noexcept { return epoch_; }
  std::uint32_t counter() const noexcept { return counter_; }

  /// One Philox block per call; advances the counter by one. Discards any
  /// pending normal so block-level consumers see a clean sequence.
  Philox4x32::Counter next_block() noexcept {
    has_spare_ = false;
    const Philox4x32::Counter ctr = {
        static_cast<std::uint32_t>(person_),
        static_cast<std::uint32_t>(person_ >> 32) ^ (static_cast<std::uint32_t>(term_) << 24),
        epoch_, counter_++};
    return Philox4x32::block(ctr, key_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform() noexcept {
    const auto b = next_block();
    return to_unit(b[0], b[1]);
  }

  /// Standard normal via Box-Muller. Each block yields two normals; the
  /// second is returned by the following call.
  double next_normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const auto b = next_block();
    const double u1 = 1.0 - to_unit(b[0], b[1]);  // (0, 1]
    const double angle = 2.0 * std::numbers::pi * to_unit(b[2], b[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  static double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = (std::uint64_t{hi} << 32 | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
  }

  Philox4x32::Key key_;
  std::uint64_t person_;
  Term term_;
  std::uint32_t epoch_;
  std::uint32_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ozrisk
