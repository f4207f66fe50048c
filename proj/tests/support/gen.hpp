#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gapcert/linalg.hpp"
#include "gapcert/matrix.hpp"

namespace gapcert::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a = -1.0, double b = 1.0) {
    return a + (b - a) * static_cast<double>(rng_() >> 11) * 0x1p-53;
  }

  std::size_t integer(std::size_t lo, std::size_t hi) { return lo + static_cast<std::size_t>(rng_() % (hi - lo + 1)); }

  bool coin() { return (rng_() >> 63) != 0; }

  std::vector<double> vector(std::size_t n, double a = -1.0, double b = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(a, b);
    return v;
  }

  std::vector<double> unit_vector(std::size_t n) {
    for (;;) {
      auto v = vector(n);
      double s = norm2(v);
      if (s < 1e-3) continue;
      for (auto& x : v) x /= s;
      return v;
    }
  }

  Matrix matrix(std::size_t r, std::size_t c, double scale = 1.0) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = scale * uniform();
    return m;
  }

  Matrix symmetric(std::size_t n, double scale = 1.0) { return symmetrize(matrix(n, n, scale)); }

  /// Orthogonal matrix from Gram-Schmidt on a random square matrix.
  Matrix orthogonal(std::size_t n) {
    for (;;) {
      Matrix q = matrix(n, n);
      bool ok = true;
      for (std::size_t j = 0; j < n && ok; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
          double d = 0.0;
          for (std::size_t i = 0; i < n; ++i) d += q(i, j) * q(i, k);
          for (std::size_t i = 0; i < n; ++i) q(i, j) -= d * q(i, k);
        }
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += q(i, j) * q(i, j);
        s = std::sqrt(s);
        if (s < 1e-6) ok = false;
        for (std::size_t i = 0; i < n && ok; ++i) q(i, j) /= s;
      }
      if (ok) return q;
    }
  }

  /// Q diag(values) Q^T with a random orthogonal Q.
  Matrix with_spectrum(const std::vector<double>& values) {
    const std::size_t n = values.size();
    Matrix q = orthogonal(n);
    return symmetrize(q * Matrix::diagonal(values) * q.transpose());
  }

  /// PSD matrix of the given rank, eigenvalues in [lo, hi].
  Matrix psd(std::size_t n, std::size_t rank, double lo = 0.1, double hi = 3.0) {
    std::vector<double> v(n, 0.0);
    for (std::size_t i = 0; i < rank; ++i) v[i] = uniform(lo, hi);
    return with_spectrum(v);
  }

  Matrix pd(std::size_t n, double lo = 0.1, double hi = 3.0) { return psd(n, n, lo, hi); }

  /// m x k matrix with prescribed singular values.
  Matrix with_singular_values(std::size_t m, std::size_t k, const std::vector<double>& s) {
    Matrix u = orthogonal(m), v = orthogonal(k);
    Matrix d(m, k);
    for (std::size_t i = 0; i < s.size() && i < std::min(m, k); ++i) d(i, i) = s[i];
    return u * d * v.transpose();
  }

 private:
  std::mt19937_64 rng_;
};

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

/// exp(M) by scaling and squaring with a Taylor polynomial.
inline Matrix expm(const Matrix& M) {
  double n = M.max_abs() * static_cast<double>(M.rows());
  int s = 0;
  while (n > 0.5) {
    n *= 0.5;
    ++s;
  }
  Matrix X = std::ldexp(1.0, -s) * M;
  Matrix term = Matrix::identity(M.rows());
  Matrix sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = (1.0 / k) * (term * X);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

}  // namespace gapcert::testing
