#pragma once

#include <cstdint>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

namespace nervelab {

enum class errc {
  validation,  // malformed input (bad poset, bad category, non-monotone map, ...)
  cap,         // a configured size/dimension/budget cap was exceeded
  internal,    // broken invariant inside the library; always a bug
};

class error : public std::runtime_error {
 public:
  error(errc kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  errc kind() const { return kind_; }

 private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) { throw error(kind, msg); }

template <class... Ts>
std::string cat(const Ts&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  return os.str();
}

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

// splitmix64; the fixed-seed generator behind every sampled check.
struct rng64 {
  std::uint64_t state;
  explicit rng64(std::uint64_t seed = 0) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
};

// FNV-1a, used for tamper-evident digests of simplex inventories.
struct fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void eat(std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  }
  void eat(const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  }
};

std::string hex64(std::uint64_t v);

template <class T>
std::string join(const std::vector<T>& xs, const std::string& sep) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << sep;
    os << xs[i];
  }
  return os.str();
}

}  // namespace nervelab
