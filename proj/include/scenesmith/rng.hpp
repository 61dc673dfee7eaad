#pragma once

// Counter-based random streams.
//
// Every sampled quantity in the engine is drawn from a Philox4x32-10 block
// cipher addressed by (key, path, block index):
//
//   key   = 64-bit seed, split into two 32-bit key words (low word first)
//   path  = FNV-1a 64 hash of the stream path string, e.g. "layout/proposal/3"
//   block = 64-bit draw counter within the stream
//
//   counter words = { block_lo, block_hi, path_lo, path_hi }
//
// Each block yields four 32-bit words consumed in order. A double in [0,1)
// takes two words (hi then lo), keeping the top 53 bits. Streams are
// therefore reproducible from (key, path) alone, independent of call order
// in other streams or of thread scheduling.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scenesmith {

using Philox4x32Block = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

inline Philox4x32Block philox4x32_10(Philox4x32Block ctr, Philox4x32Key key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

class Rng {
 public:
  Rng(std::uint64_t key, std::string path)
      : key_(key), path_(std::move(path)), path_hash_(fnv1a64(path_)) {}

  std::uint64_t key() const { return key_; }
  const std::string& path() const { return path_; }

  Rng child(std::string_view tag) const {
    std::string p = path_;
    if (!p.empty()) p.push_back('/');
    p.append(tag);
    return Rng(key_, std::move(p));
  }

  std::uint32_t next_u32() {
    if (word_ == 4) refill();
    return buffer_[word_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }

  // [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // [lo, hi); never returns hi for lo < hi.
  double uniform(double lo, double hi) {
    const double v = lo + uniform() * (hi - lo);
    return v < hi ? v : lo;
  }

  // Inclusive range, rejection-sampled so every value is equally likely.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % span);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
  }

  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
  }

  bool bernoulli(double p) { return uniform() < p; }

  // exp(U(log lo, log hi)), clamped so the result never leaves [lo, hi].
  double log_uniform(double lo, double hi) {
    const double v = std::exp(uniform(std::log(lo), std::log(hi)));
    return v < lo ? lo : (v > hi ? hi : v);
  }

  // Inverse-CDF triangular draw on [lo, hi] with the given mode.
  double triangular(double lo, double mode, double hi) {
    const double u = uniform();
    const double f = (mode - lo) / (hi - lo);
    double v;
    if (u < f) {
      v = lo + std::sqrt(u * (hi - lo) * (mode - lo));
    } else {
      v = hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
    }
    return v < lo ? lo : (v > hi ? hi : v);
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[index(i)]);
    }
  }

 private:
  void refill() {
    const Philox4x32Block ctr = {
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(path_hash_),
        static_cast<std::uint32_t>(path_hash_ >> 32)};
    const Philox4x32Key k = {static_cast<std::uint32_t>(key_),
                             static_cast<std::uint32_t>(key_ >> 32)};
    buffer_ = philox4x32_10(ctr, k);
    ++block_;
    word_ = 0;
  }

  std::uint64_t key_;
  std::string path_;
  std::uint64_t path_hash_;
  std::uint64_t block_ = 0;
  Philox4x32Block buffer_{};
  int word_ = 4;
};

// A 64-bit seed for a named sub-stream; used to hand independent seeds to
// pipeline stages (layout per base layout, furnish per variant, ...).
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view path) {
  Rng r(master, std::string(path));
  return r.next_u64();
}

}  // namespace scenesmith
