#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace smpc {

// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t sub = 0) noexcept {
  return mix64(mix64(mix64(master) ^ stream) ^ (sub * 0xd6e8feb86659fd93ULL));
}

// Seedable 64-bit generator. A scripted stream replays a fixed sequence of
// words, which lets tests enumerate every random choice of a dealer.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  static Rng scripted(std::vector<std::uint64_t> words) {
    Rng r;
    r.script_ = std::move(words);
    r.scripted_ = true;
    return r;
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (!scripted_) return engine_();
    if (pos_ >= script_.size()) throw std::out_of_range("scripted random stream exhausted");
    return script_[pos_++];
  }

  bool is_scripted() const noexcept { return scripted_; }

 private:
  std::mt19937_64 engine_;
  std::vector<std::uint64_t> script_;
  std::size_t pos_ = 0;
  bool scripted_ = false;
};

// Uniform integer in [0, bound) by rejection; bound > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

// Uniform double in [0, 1).
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace smpc
