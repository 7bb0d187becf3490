#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace treewalk {

using cplx = std::complex<double>;

// Bad input or violated precondition; the CLI maps these to exit code 1.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A mathematical invariant failed to hold; the CLI maps these to exit code 2.
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double norm_sq(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& x : v) s += std::norm(x);
  return s;
}

inline double l2_norm(const std::vector<cplx>& v) { return std::sqrt(norm_sq(v)); }

// Conjugate-linear in the first slot.
inline cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline std::vector<cplx> random_complex(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx(g(rng), g(rng));
  return v;
}

inline std::vector<cplx> random_unit(std::size_t n, std::mt19937_64& rng) {
  auto v = random_complex(n, rng);
  double nv = l2_norm(v);
  for (auto& x : v) x /= nv;
  return v;
}

}  // namespace treewalk
