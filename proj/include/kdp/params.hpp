#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace kdp {

// Constants governing every bound of the algorithm:
//   z = c(c(k^2+k+1) + k + 2)        wiggle bound between distinct cliques
//   w = c(c-1)(z+1) + 1              wiggle bound of the vertex enumeration
//   r = ckw, s = k^2+k+3             sequence family size / sequence length
//   t = 2cskw + c(2w+1)k^2(k^2+k+1)  overlap bound of restricted sets
//   K = k(2w-1)                      coloured-edge set cardinality
struct Parameters {
  std::int64_t k = 1;
  std::int64_t c = 1;
  std::int64_t z = 0;
  std::int64_t w = 0;
  std::int64_t r = 0;
  std::int64_t s = 0;
  std::int64_t t = 0;
  std::int64_t K = 0;
  bool overridden = false;

  // k^2 + k + 2: matching size that breaks C-acceptability
  std::int64_t matching_threshold() const { return k * k + k + 2; }
  // Exponent of |V(H)|^2 = O(n^(4rs+8w)).
  std::int64_t h_size_exponent() const { return 4 * r * s + 8 * w; }
  // Large-c,k approximation of that exponent.
  double approximate_exponent() const { return 4.0 * std::pow(static_cast<double>(c * k), 5.0); }

  friend bool operator==(const Parameters&, const Parameters&) = default;
};

struct ParameterOverrides {
  std::optional<std::int64_t> z, w, r, s, t, K;
  bool any() const { return z || w || r || s || t || K; }
};

// Overrides cascade: a replaced constant feeds the formulas of the constants
// derived from it unless those are overridden too.
inline Parameters compute_parameters(std::int64_t k, std::int64_t c, const ParameterOverrides& ov = {}) {
  if (k < 1 || c < 1)
    throw std::invalid_argument("k and c must be positive (got k=" + std::to_string(k) + ", c=" + std::to_string(c) + ")");
  Parameters p;
  p.k = k;
  p.c = c;
  const std::int64_t q = k * k + k + 1;
  p.z = ov.z.value_or(c * (c * q + k + 2));
  p.w = ov.w.value_or(c * (c - 1) * (p.z + 1) + 1);
  p.r = ov.r.value_or(c * k * p.w);
  p.s = ov.s.value_or(k * k + k + 3);
  p.t = ov.t.value_or(2 * c * p.s * k * p.w + c * (2 * p.w + 1) * k * k * q);
  p.K = ov.K.value_or(k * (2 * p.w - 1));
  p.overridden = ov.any();
  return p;
}

}  // namespace kdp
