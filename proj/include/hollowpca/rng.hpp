#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace hollowpca {

/// Hierarchical seed: a master value plus a path of stream indices. Every
/// consumer of randomness derives its own child, e.g. seed.child(grid).child(rep),
/// so draws never depend on execution order.
class Seed {
 public:
  explicit Seed(std::uint64_t master = 0, std::vector<std::uint64_t> stream = {})
      : master_(master), stream_(std::move(stream)) {}

  Seed child(std::uint64_t index) const;
  Seed child(std::initializer_list<std::uint64_t> path) const;

  std::uint64_t master() const noexcept { return master_; }
  const std::vector<std::uint64_t>& stream() const noexcept { return stream_; }

  /// 64-bit generator key mixed from master and the full path.
  std::uint64_t key() const noexcept;
  /// "master:a/b/c"
  std::string to_string() const;

  friend bool operator==(const Seed&, const Seed&) = default;

 private:
  std::uint64_t master_;
  std::vector<std::uint64_t> stream_;
};

/// Philox4x32-10 counter-based generator. Satisfies UniformRandomBitGenerator.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;

  explicit Philox4x32(std::uint64_t key) noexcept;
  explicit Philox4x32(const Seed& seed) noexcept : Philox4x32(seed.key()) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return 0xFFFFFFFFu; }

  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Standard normal via the Box-Muller transform.
  double normal() noexcept;
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Raw block for a given counter; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                            std::array<std::uint32_t, 2> key) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_{};
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hollowpca
