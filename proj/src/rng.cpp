#include "heatgp/rng.hpp"

#include <cmath>
#include <numbers>

namespace heatgp {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

RandomStream::RandomStream(std::uint64_t seed) : key_(mix64(seed + kGolden)) {}

RandomStream::RandomStream(std::uint64_t key, bool) : key_(key) {}

RandomStream RandomStream::split(std::uint64_t tag) const {
  return RandomStream(mix64(key_ ^ mix64(tag + 0x632BE59BD9B4E019ULL)), true);
}

RandomStream RandomStream::split(std::string_view purpose, std::uint64_t index) const {
  return split(hash_string(purpose)).split(index);
}

RandomStream::result_type RandomStream::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RandomStream::uniform() {
  // 53 random bits, shifted off zero
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double phi = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

void RandomStream::fill_normal(std::span<double> out) {
  for (double& v : out) v = normal();
}

}  // namespace heatgp
