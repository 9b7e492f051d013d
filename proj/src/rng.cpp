#include "hollowpca/rng.hpp"

#include <cmath>
#include <numbers>

namespace hollowpca {

namespace {

constexpr std::uint64_t splitmix(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Seed Seed::child(std::uint64_t index) const {
  auto path = stream_;
  path.push_back(index);
  return Seed(master_, std::move(path));
}

Seed Seed::child(std::initializer_list<std::uint64_t> path) const {
  auto out = stream_;
  out.insert(out.end(), path.begin(), path.end());
  return Seed(master_, std::move(out));
}

std::uint64_t Seed::key() const noexcept {
  std::uint64_t h = splitmix(master_);
  std::uint64_t depth = 0;
  for (std::uint64_t s : stream_) {
    ++depth;
    h = splitmix(h ^ splitmix(s + depth * 0xD1B54A32D192ED03ull));
  }
  return splitmix(h ^ depth);
}

std::string Seed::to_string() const {
  std::string out = std::to_string(master_) + ":";
  for (std::size_t i = 0; i < stream_.size(); ++i) {
    if (i) out += '/';
    out += std::to_string(stream_[i]);
  }
  return out;
}

Philox4x32::Philox4x32(std::uint64_t key) noexcept
    : key_{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)} {}

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 4> c,
                                               std::array<std::uint32_t, 2> k) noexcept {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k[0] += kW0;
      k[1] += kW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

void Philox4x32::refill() noexcept {
  buffer_ = block(counter_, key_);
  for (auto& word : counter_)
    if (++word != 0) break;
  used_ = 0;
}

Philox4x32::result_type Philox4x32::operator()() noexcept {
  if (used_ == 4) refill();
  return buffer_[static_cast<std::size_t>(used_++)];
}

double Philox4x32::uniform() noexcept {
  const std::uint64_t hi = (*this)();
  const std::uint64_t lo = (*this)();
  const std::uint64_t bits = ((hi << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Philox4x32::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Philox4x32::below(std::uint64_t bound) noexcept {
  if (bound <= 1) return 0;
  // Rejection on the top of the 64-bit range keeps the draw unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  for (;;) {
    const std::uint64_t hi = (*this)();
    const std::uint64_t v = (hi << 32) | (*this)();
    if (v < limit) return v % bound;
  }
}

}  // namespace hollowpca
