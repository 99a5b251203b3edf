#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "d3r/errors.hpp"

namespace d3r {

using Fe = std::uint64_t;
using Rng = std::mt19937_64;

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

bool is_prime(std::uint64_t n);

// Context handle for arithmetic in F_p.  Elements are plain residues in [0, p).
class Field {
 public:
  explicit Field(std::uint64_t p = kMersenne61);

  std::uint64_t p() const { return p_; }

  Fe add(Fe a, Fe b) const {
    Fe s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Fe sub(Fe a, Fe b) const { return a >= b ? a - b : a + p_ - b; }
  Fe neg(Fe a) const { return a == 0 ? 0 : p_ - a; }
  Fe mul(Fe a, Fe b) const {
    unsigned __int128 t = static_cast<unsigned __int128>(a) * b;
    if (p_ == kMersenne61) {
      Fe lo = static_cast<Fe>(t & kMersenne61);
      Fe hi = static_cast<Fe>(t >> 61);
      Fe s = lo + hi;
      return s >= p_ ? s - p_ : s;
    }
    return static_cast<Fe>(t % p_);
  }
  Fe inv(Fe a) const;
  Fe div(Fe a, Fe b) const { return mul(a, inv(b)); }
  Fe pow(Fe a, std::uint64_t e) const;

  Fe from_int(std::int64_t v) const;
  // Symmetric representative in (-p/2, p/2]; used for printing small values.
  std::int64_t to_signed(Fe a) const;

  Fe random(Rng& rng) const { return std::uniform_int_distribution<Fe>(0, p_ - 1)(rng); }
  Fe random_nonzero(Rng& rng) const { return std::uniform_int_distribution<Fe>(1, p_ - 1)(rng); }
  std::vector<Fe> random_vector(size_t n, Rng& rng) const;

  bool operator==(const Field& o) const { return p_ == o.p_; }
  bool operator!=(const Field& o) const { return p_ != o.p_; }

 private:
  std::uint64_t p_;
};

}  // namespace d3r
