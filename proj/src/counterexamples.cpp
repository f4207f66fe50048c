#include <algorithm>
#include <cmath>

#include "gapcert/errors.hpp"
#include "gapcert/gap_bounds.hpp"

namespace gapcert {

namespace {

using cplx = std::complex<double>;

struct Complex4 {
  cplx h[4][4];
};

Complex4 hermitian_4x4(const Quartic4x4Params& p) {
  const cplx A[2][2] = {{p.a_plus, p.a}, {std::conj(p.a), p.a_minus}};
  const cplx B[2][2] = {{p.b_plus, p.b}, {static_cast<double>(p.sign) * std::conj(p.b), p.b_minus}};
  Complex4 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.h[i][j] = A[i][j];
      out.h[i][j + 2] = B[i][j];
      out.h[i + 2][j] = std::conj(B[j][i]);
      out.h[i + 2][j + 2] = -A[i][j];
    }
  }
  return out;
}

void check_params(const Quartic4x4Params& p) {
  if (p.sign != 1 && p.sign != -1) throw Error(ErrorCode::NegativeDiscriminant, "sign must be +1 or -1");
  double scale = std::max({1.0, std::abs(p.b_plus), std::abs(p.b_minus)});
  auto off = [&](cplx z) { return p.sign == -1 ? std::fabs(z.real()) : std::fabs(z.imag()); };
  if (off(p.b_plus) > 1e-14 * scale || off(p.b_minus) > 1e-14 * scale) {
    throw Error(ErrorCode::NegativeDiscriminant,
                p.sign == -1 ? "sign -1 needs purely imaginary b_plus, b_minus"
                             : "sign +1 needs real b_plus, b_minus");
  }
}

double two_by_two_norm(double a, double b, double c, double d) {
  double f2 = a * a + b * b + c * c + d * d;
  double det = a * d - b * c;
  return std::sqrt(0.5 * (f2 + std::sqrt(std::max(0.0, f2 * f2 - 4.0 * det * det))));
}

}  // namespace

Matrix Quartic4x4Params::real_embedding() const {
  Complex4 c = hermitian_4x4(*this);
  Matrix e(8, 8);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      e(i, j) = e(i + 4, j + 4) = c.h[i][j].real();
      e(i, j + 4) = -c.h[i][j].imag();
      e(i + 4, j) = c.h[i][j].imag();
    }
  }
  return e;
}

Matrix Quartic4x4Params::real_matrix() const {
  Complex4 c = hermitian_4x4(*this);
  Matrix e(4, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (c.h[i][j].imag() != 0.0) throw Error(ErrorCode::NotSymmetric, "4x4 matrix has complex entries");
      e(i, j) = c.h[i][j].real();
    }
  }
  return e;
}

std::vector<double> eig_4x4(const Quartic4x4Params& p) {
  check_params(p);
  const cplx kappa = p.sign == 1 ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
  const cplx lower = static_cast<double>(p.sign) * std::conj(p.b);
  cplx det = (p.a_plus - kappa * p.b_plus) * (p.a_minus - kappa * p.b_minus) -
             (p.a - kappa * p.b) * (std::conj(p.a) - kappa * lower);
  double s = 0.5 * (p.a_plus * p.a_plus + p.a_minus * p.a_minus + std::norm(p.b_plus) + std::norm(p.b_minus)) +
             std::norm(p.a) + std::norm(p.b);
  double d2 = std::norm(det);
  double disc = s * s - d2;
  if (disc < -1e-12 * std::max(1.0, s * s)) {
    throw Error(ErrorCode::NegativeDiscriminant, "s^2 - |det|^2 < 0: inconsistent parameter set");
  }
  double root = std::sqrt(std::max(0.0, disc));
  double big = s + root;
  double small = big > 0.0 ? d2 / big : 0.0;
  double l1 = std::sqrt(std::max(0.0, big)), l2 = std::sqrt(std::max(0.0, small));
  return {-l1, -l2, l2, l1};
}

std::string_view to_string(CurveFamily family) {
  switch (family) {
    case CurveFamily::KirschBt: return "kirsch_Bt";
    case CurveFamily::ScaledA: return "scaled_A";
    case CurveFamily::Simple: return "simple";
  }
  return "unknown";
}

CurveFamily parse_curve_family(std::string_view name) {
  if (name == "kirsch_Bt") return CurveFamily::KirschBt;
  if (name == "scaled_A") return CurveFamily::ScaledA;
  if (name == "simple") return CurveFamily::Simple;
  throw Error(ErrorCode::Parse, "unknown curve family '" + std::string(name) + "'");
}

Matrix curve_matrix(CurveFamily family, double t) {
  switch (family) {
    case CurveFamily::KirschBt: {
      Matrix A{{2, -1}, {-1, 2}};
      Matrix B{{1, 0}, {0, t}};
      return assemble(A, B, B, -A);
    }
    case CurveFamily::ScaledA: {
      Matrix A{{1.24, 0.81}, {0.81, 0.53}};
      Matrix B{{0.30, -0.27}, {-0.31, -0.48}};
      return assemble(t * A, B, B.transpose(), -t * A);
    }
    case CurveFamily::Simple: {
      Matrix A{{0, 0}, {0, t}};
      Matrix B{{0, 1}, {-1, 0}};
      return assemble(A, B, -B, -A);
    }
  }
  throw Error(ErrorCode::Parse, "unknown curve family");
}

std::vector<CurvePoint> nonmono_curve(const std::vector<double>& t_grid, CurveFamily family) {
  std::vector<CurvePoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    auto vals = sym_eigvals(curve_matrix(family, t));
    CurvePoint p{t, INFINITY, 1.0};
    for (double v : vals) {
      p.min_abs_eig = std::min(p.min_abs_eig, std::fabs(v));
      p.det *= v;
    }
    out.push_back(p);
  }
  return out;
}

Matrix bottcher_matrix() { return Matrix{{1, 0, 0}, {-20, 1.1, 0}, {0, -20, 1.2}}; }

std::pair<Matrix, Matrix> ballantine_split(const Matrix& M) {
  const std::size_t n = M.rows();
  if (!M.square()) throw Error(ErrorCode::DimensionMismatch, "M must be square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (M(i, j) != 0.0) throw Error(ErrorCode::DimensionMismatch, "ballantine_split expects lower-triangular M");
  // Eigenvectors of a lower-triangular matrix by forward substitution.
  Matrix U(n, n);
  std::vector<double> lam(n);
  for (std::size_t j = 0; j < n; ++j) {
    lam[j] = M(j, j);
    if (lam[j] < 0.0) throw Error(ErrorCode::NotPSD, "M has a negative eigenvalue");
    U(j, j) = 1.0;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (std::size_t l = j; l < i; ++l) s += M(i, l) * U(l, j);
      double gap = M(i, i) - lam[j];
      if (gap == 0.0) throw Error(ErrorCode::Singular, "repeated eigenvalue; M may not be diagonalisable");
      U(i, j) = -s / gap;
    }
  }
  std::vector<double> root(n);
  for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(lam[i]);
  Matrix D = Matrix::diagonal(root);
  Matrix Uinv = inverse(U);
  // Column scaling U -> U S leaves A C unchanged; balance ||A|| against ||C||.
  for (std::size_t j = 0; j < n; ++j) {
    double s = std::sqrt(std::sqrt(norm2(Uinv.row(j)) / norm2(U.col(j))));
    for (std::size_t i = 0; i < n; ++i) U(i, j) *= s;
  }
  Uinv = inverse(U);
  Matrix A = symmetrize(U * D * U.transpose());
  Matrix C = symmetrize(Uinv.transpose() * D * Uinv);
  return {A, C};
}

CounterexampleReport counterexample_suite(const std::vector<double>& omladic_t) {
  CounterexampleReport r;
  for (double t : omladic_t) {
    Matrix A{{t, 0}, {0, 1.0 / t}};
    Matrix C{{1.0 / t, 1}, {1, t}};
    Matrix IAC = Matrix::identity(2) + A * C;
    OmladicRow row;
    row.t = t;
    row.inv_norm = op_norm(inverse(IAC));
    row.closed_form = two_by_two_norm(2.0, -t, -1.0 / t, 2.0) / 3.0;
    r.omladic.push_back(row);
  }

  Matrix M = bottcher_matrix();
  Matrix IM = Matrix::identity(3) + M;
  r.bottcher_norm = op_norm(IM);
  r.bottcher_inv_norm = op_norm(inverse(IM));
  r.conjecture_violated = r.bottcher_inv_norm > r.bottcher_norm;
  auto [A, C] = ballantine_split(M);
  r.ballantine_A = A;
  r.ballantine_C = C;
  r.ballantine_residual = (A * C - M).max_abs();

  Matrix D{{1, 0}, {0, 2}};
  r.commuting_inv_norm = op_norm(inverse(Matrix::identity(2) + D * D));
  return r;
}

}  // namespace gapcert
