#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>

namespace heatgp {

// Counter-based stream: output i is a hash of (key, i). Child streams get
// keys derived from the parent key, so any (replicate, purpose) pair maps to
// an independent sequence regardless of scheduling order.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed = 0);

  RandomStream split(std::uint64_t tag) const;
  RandomStream split(std::string_view purpose, std::uint64_t index = 0) const;

  result_type operator()();
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  // uniform on the open interval (0, 1)
  double uniform();
  double normal();
  void fill_normal(std::span<double> out);

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

 private:
  RandomStream(std::uint64_t key, bool);
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_string(std::string_view s);

}  // namespace heatgp
