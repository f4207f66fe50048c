#include "gapcert/linalg.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {

void require_finite(const Matrix& M, const char* what) {
  if (!M.all_finite()) throw Error(ErrorCode::NotFinite, std::string(what) + ": non-finite entry");
}

// Flip each column so that its largest-magnitude entry is positive.
void canonical_signs(Matrix& V) {
  for (std::size_t j = 0; j < V.cols(); ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < V.rows(); ++i) {
      if (std::fabs(V(i, j)) > best + 1e-12) {
        best = std::fabs(V(i, j));
        arg = i;
      }
    }
    if (V.rows() && V(arg, j) < 0.0)
      for (std::size_t i = 0; i < V.rows(); ++i) V(i, j) = -V(i, j);
  }
}

double offdiag_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

// Rotate rows/columns p, q of the symmetric matrix a so that a(p, q) = 0.
void jacobi_rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const std::size_t n = a.rows();
  double apq = a(p, q);
  double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::hypot(1.0, theta));
  double c = 1.0 / std::hypot(1.0, t);
  double s = t * c;
  double tau = s / (1.0 + c);
  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = a(q, p) = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r == p || r == q) continue;
    double arp = a(r, p), arq = a(r, q);
    double nrp = arp - s * (arq + tau * arp);
    double nrq = arq + s * (arp - tau * arq);
    a(r, p) = a(p, r) = nrp;
    a(r, q) = a(q, r) = nrq;
  }
  for (std::size_t r = 0; r < n; ++r) {
    double vrp = v(r, p), vrq = v(r, q);
    v(r, p) = vrp - s * (vrq + tau * vrp);
    v(r, q) = vrq + s * (vrp - tau * vrq);
  }
}

// Givens generator: r = +-hypot(f, g), cs = f / r, sn = g / r.
void lartg(double f, double g, double& cs, double& sn, double& r) {
  if (g == 0.0) {
    cs = 1.0;
    sn = 0.0;
    r = f;
  } else if (f == 0.0) {
    cs = 0.0;
    sn = 1.0;
    r = g;
  } else {
    r = std::copysign(std::hypot(f, g), f);
    cs = f / r;
    sn = g / r;
  }
}

// Singular values of [[f, g], [0, h]].
void las2(double f, double g, double h, double& ssmin, double& ssmax) {
  double fa = std::fabs(f), ga = std::fabs(g), ha = std::fabs(h);
  double fhmn = std::min(fa, ha), fhmx = std::max(fa, ha);
  if (fhmn == 0.0) {
    ssmin = 0.0;
    if (fhmx == 0.0) {
      ssmax = ga;
    } else {
      double big = std::max(fhmx, ga), small = std::min(fhmx, ga);
      ssmax = big * std::sqrt(1.0 + (small / big) * (small / big));
    }
  } else if (ga < fhmx) {
    double as = 1.0 + fhmn / fhmx;
    double at = (fhmx - fhmn) / fhmx;
    double au = (ga / fhmx) * (ga / fhmx);
    double c = 2.0 / (std::sqrt(as * as + au) + std::sqrt(at * at + au));
    ssmin = fhmn * c;
    ssmax = fhmx / c;
  } else {
    double au = fhmx / ga;
    if (au == 0.0) {
      ssmin = (fhmn * fhmx) / ga;
      ssmax = ga;
    } else {
      double as = 1.0 + fhmn / fhmx;
      double at = (fhmx - fhmn) / fhmx;
      double c = 1.0 / (std::sqrt(1.0 + (as * au) * (as * au)) + std::sqrt(1.0 + (at * au) * (at * au)));
      ssmin = 2.0 * (fhmn * c) * au;
      ssmax = ga / (c + c);
    }
  }
}

}  // namespace

Matrix Bidiagonal::dense() const {
  const std::size_t m = diag.size();
  Matrix t(m, m);
  for (std::size_t i = 0; i < m; ++i) t(i, i) = diag[i];
  for (std::size_t i = 0; i + 1 < m && i < offdiag.size(); ++i) {
    if (orientation == Orientation::Lower)
      t(i + 1, i) = offdiag[i];
    else
      t(i, i + 1) = offdiag[i];
  }
  return t;
}

Bidiagonal Bidiagonal::transposed() const {
  Bidiagonal t = *this;
  t.orientation = orientation == Orientation::Lower ? Orientation::Upper : Orientation::Lower;
  return t;
}

double rank_tolerance(const Matrix& M) {
  return static_cast<double>(std::max(M.rows(), M.cols())) * kMachEps * op_norm(M);
}

EigenDecomposition sym_eig(const Matrix& M) {
  require_finite(M, "sym_eig");
  if (!M.square()) throw Error(ErrorCode::NotSymmetric, "sym_eig: matrix is not square");
  const std::size_t n = M.rows();
  const double fro = M.frobenius();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::fabs(M(i, j) - M(j, i)) > kTolSym * fro)
        throw Error(ErrorCode::NotSymmetric, "sym_eig: asymmetry exceeds 1e-12 * ||M||_F");

  Matrix a = symmetrize(M);
  Matrix v = Matrix::identity(n);
  const double target = 1e-14 * fro;
  int sweep = 0;
  for (; sweep < 100; ++sweep) {
    double off = offdiag_norm(a);
    if (off <= target || off == 0.0) break;
    double thresh = sweep < 3 ? 0.2 * off / static_cast<double>(n * n) : 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = std::fabs(a(p, q));
        double g = 100.0 * apq;
        if (sweep > 3 && std::fabs(a(p, p)) + g == std::fabs(a(p, p)) &&
            std::fabs(a(q, q)) + g == std::fabs(a(q, q))) {
          a(p, q) = a(q, p) = 0.0;
        } else if (apq > thresh && apq != 0.0) {
          jacobi_rotate(a, v, p, q);
        }
      }
    }
  }
  if (sweep == 100 && offdiag_norm(a) > 1e-10 * fro) {
    throw Error(ErrorCode::NoConvergence, "sym_eig: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  EigenDecomposition out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  canonical_signs(out.vectors);
  return out;
}

std::vector<double> sym_eigvals(const Matrix& M) { return sym_eig(M).values; }

double min_eigenvalue(const Matrix& M) {
  auto v = sym_eigvals(M);
  return v.empty() ? 0.0 : v.front();
}

double max_eigenvalue(const Matrix& M) {
  auto v = sym_eigvals(M);
  return v.empty() ? 0.0 : v.back();
}

std::vector<double> singular_values(const Matrix& M) {
  require_finite(M, "singular_values");
  const std::size_t p = std::min(M.rows(), M.cols());
  if (p == 0) return {};
  Matrix e = assemble(Matrix(M.rows(), M.rows()), M, M.transpose(), Matrix(M.cols(), M.cols()));
  auto vals = sym_eigvals(e);
  std::vector<double> s(p);
  for (std::size_t i = 0; i < p; ++i) s[i] = std::max(0.0, vals[vals.size() - 1 - i]);
  return s;
}

double op_norm(const Matrix& M) {
  require_finite(M, "op_norm");
  if (M.empty() || M.max_abs() == 0.0) return 0.0;
  return singular_values(M).front();
}

SingularDecomposition svd(const Matrix& M) {
  require_finite(M, "svd");
  if (M.rows() < M.cols()) {
    SingularDecomposition t = svd(M.transpose());
    return {t.singular_values, t.right, t.left};
  }
  const std::size_t m = M.rows(), k = M.cols();
  Matrix u = M;
  Matrix v = Matrix::identity(k);
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += u(i, p) * u(i, p);
          beta += u(i, q) * u(i, q);
          gamma += u(i, p) * u(i, q);
        }
        if (gamma == 0.0 || std::fabs(gamma) <= kMachEps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        double zeta = (beta - alpha) / (2.0 * gamma);
        double t = (zeta >= 0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::hypot(1.0, zeta));
        double c = 1.0 / std::hypot(1.0, t);
        double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          double up = u(i, p), uq = u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
        for (std::size_t i = 0; i < k; ++i) {
          double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sig(k);
  for (std::size_t j = 0; j < k; ++j) sig[j] = norm2(u.col(j));
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sig[a] > sig[b]; });

  SingularDecomposition out{std::vector<double>(k), Matrix(m, k), Matrix(k, k)};
  const double floor = sig.empty() ? 0.0 : sig[order[0]] * kMachEps * static_cast<double>(m);
  std::vector<std::size_t> missing;
  for (std::size_t j = 0; j < k; ++j) {
    std::size_t src = order[j];
    out.singular_values[j] = sig[src];
    for (std::size_t i = 0; i < k; ++i) out.right(i, j) = v(i, src);
    if (sig[src] > floor && sig[src] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) out.left(i, j) = u(i, src) / sig[src];
    } else {
      missing.push_back(j);
    }
  }
  // Complete left vectors for (numerically) zero singular values.
  std::vector<bool> filled(k, true);
  for (std::size_t j : missing) filled[j] = false;
  for (std::size_t j : missing) {
    for (std::size_t e = 0; e < m; ++e) {
      std::vector<double> cand(m, 0.0);
      cand[e] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t c = 0; c < k; ++c) {
          if (!filled[c]) continue;
          auto col = out.left.col(c);
          double d = dot(col, cand);
          for (std::size_t i = 0; i < m; ++i) cand[i] -= d * col[i];
        }
      }
      double nrm = norm2(cand);
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < m; ++i) out.left(i, j) = cand[i] / nrm;
        filled[j] = true;
        break;
      }
    }
  }
  return out;
}

Matrix spectral_function(const Matrix& M, const std::function<double(double)>& f) {
  auto ed = sym_eig(M);
  const std::size_t n = M.rows();
  Matrix r(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    double fk = f(ed.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      double vik = ed.vectors(i, k) * fk;
      for (std::size_t j = 0; j < n; ++j) r(i, j) += vik * ed.vectors(j, k);
    }
  }
  return symmetrize(r);
}

void require_psd(const Matrix& M, const char* name, double tol_psd) {
  if (M.empty()) return;
  auto vals = sym_eigvals(M);
  double scale = std::max(std::fabs(vals.front()), std::fabs(vals.back()));
  if (vals.front() < -tol_psd * scale) {
    throw Error(ErrorCode::NotPSD, std::string(name) + " is not positive semidefinite (min eigenvalue " +
                                       std::to_string(vals.front()) + ")");
  }
}

Matrix psd_sqrt(const Matrix& M, double tol_psd) {
  require_psd(M, "psd_sqrt input", tol_psd);
  return spectral_function(M, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

Matrix psd_factor(const Matrix& M, double tol_psd, double tol_rank) {
  require_psd(M, "psd_factor input", tol_psd);
  auto ed = sym_eig(M);
  const std::size_t n = M.rows();
  double scale = ed.values.empty() ? 0.0 : std::max(std::fabs(ed.values.front()), std::fabs(ed.values.back()));
  double thr = tol_rank >= 0.0 ? tol_rank : static_cast<double>(n) * kMachEps * scale;
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < n; ++k)
    if (ed.values[k] > thr) keep.push_back(k);
  std::reverse(keep.begin(), keep.end());
  Matrix L(n, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c) {
    double s = std::sqrt(ed.values[keep[c]]);
    for (std::size_t i = 0; i < n; ++i) L(i, c) = ed.vectors(i, keep[c]) * s;
  }
  return L;
}

std::pair<Matrix, Matrix> polar_factors(const Matrix& B, double tol_rank) {
  if (!B.square()) throw Error(ErrorCode::DimensionMismatch, "polar_factors: B must be square");
  auto d = svd(B);
  double norm = d.singular_values.empty() ? 0.0 : d.singular_values.front();
  double thr = tol_rank >= 0.0 ? tol_rank * norm : static_cast<double>(B.rows()) * kMachEps * norm;
  if (B.empty() || d.singular_values.back() <= thr) {
    throw Error(ErrorCode::Singular, "polar_factors: B is singular to working precision");
  }
  Matrix U = d.left * d.right.transpose();
  Matrix P = d.right * Matrix::diagonal(d.singular_values) * d.right.transpose();
  return {U, symmetrize(P)};
}

std::vector<double> complex_svd_via_embedding(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "complex_svd_via_embedding: A and B differ in size");
  }
  for (const Matrix* m : {&A, &B}) {
    if (!m->square() || asymmetry(*m) > kTolSym) {
      throw Error(ErrorCode::NotSymmetric, "complex_svd_via_embedding: blocks must be symmetric");
    }
  }
  const std::size_t n = A.rows();
  auto vals = sym_eigvals(assemble(A, B, B, -A));
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = std::max(0.0, vals[2 * n - 1 - i]);
  return s;
}

std::vector<double> bidiag_svd_hra(const Bidiagonal& T) {
  const std::size_t n = T.diag.size();
  if (n == 0) return {};
  if (T.offdiag.size() + 1 != n) {
    throw Error(ErrorCode::DimensionMismatch, "bidiag_svd_hra: offdiag must have length m - 1");
  }
  for (double x : T.diag)
    if (!std::isfinite(x)) throw Error(ErrorCode::NotFinite, "bidiag_svd_hra: non-finite entry");
  for (double x : T.offdiag)
    if (!std::isfinite(x)) throw Error(ErrorCode::NotFinite, "bidiag_svd_hra: non-finite entry");

  // The lower form is handled as its transpose, which has the same singular
  // values; below the storage is upper bidiagonal, 1-based.
  std::vector<double> d(n + 1), e(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i + 1] = T.diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) e[i + 1] = T.offdiag[i];
  if (n == 1) return {std::fabs(d[1])};

  const double eps = 0x1p-53;
  const double unfl = DBL_MIN;
  const double tolmul = std::max(10.0, std::min(100.0, std::pow(eps, -0.125)));
  const double tol = tolmul * eps;
  const long nn = static_cast<long>(n);
  const long maxitr = 6;

  double smax = 0.0;
  for (long i = 1; i <= nn; ++i) smax = std::max(smax, std::fabs(d[i]));
  for (long i = 1; i < nn; ++i) smax = std::max(smax, std::fabs(e[i]));

  double sminoa = std::fabs(d[1]);
  if (sminoa != 0.0) {
    double mu = sminoa;
    for (long i = 2; i <= nn; ++i) {
      mu = std::fabs(d[i]) * (mu / (mu + std::fabs(e[i - 1])));
      sminoa = std::min(sminoa, mu);
      if (sminoa == 0.0) break;
    }
  }
  sminoa /= std::sqrt(static_cast<double>(n));
  const double thresh = std::max(tol * sminoa, static_cast<double>(maxitr * nn * nn) * unfl);

  const long maxit = maxitr * nn * nn;
  long iter = 0, oldll = -1, oldm = -1, m = nn, idir = 0;

  while (m > 1) {
    if (iter > maxit) throw Error(ErrorCode::NoConvergence, "bidiag_svd_hra: QR iteration did not converge");

    // Find the bottom unreduced block d[ll..m].
    long ll = 0;
    smax = std::fabs(d[m]);
    bool split = false;
    for (long lll = 1; lll <= m - 1; ++lll) {
      ll = m - lll;
      double abss = std::fabs(d[ll]);
      double abse = std::fabs(e[ll]);
      if (abse <= thresh) {
        split = true;
        break;
      }
      smax = std::max({smax, abss, abse});
    }
    if (split) {
      e[ll] = 0.0;
      if (ll == m - 1) {
        --m;
        continue;
      }
    } else {
      ll = 0;
    }
    ++ll;

    if (ll == m - 1) {
      double sigmn = 0.0, sigmx = 0.0;
      las2(d[m - 1], e[m - 1], d[m], sigmn, sigmx);
      d[m - 1] = sigmx;
      e[m - 1] = 0.0;
      d[m] = sigmn;
      m -= 2;
      continue;
    }

    if (ll > oldm || m < oldll) idir = std::fabs(d[ll]) >= std::fabs(d[m]) ? 1 : 2;

    double sminl = 0.0;
    bool converged = false;
    if (idir == 1) {
      if (std::fabs(e[m - 1]) <= tol * std::fabs(d[m])) {
        e[m - 1] = 0.0;
        continue;
      }
      double mu = std::fabs(d[ll]);
      sminl = mu;
      for (long lll = ll; lll <= m - 1; ++lll) {
        if (std::fabs(e[lll]) <= tol * mu) {
          e[lll] = 0.0;
          converged = true;
          break;
        }
        mu = std::fabs(d[lll + 1]) * (mu / (mu + std::fabs(e[lll])));
        sminl = std::min(sminl, mu);
      }
    } else {
      if (std::fabs(e[ll]) <= tol * std::fabs(d[ll])) {
        e[ll] = 0.0;
        continue;
      }
      double mu = std::fabs(d[m]);
      sminl = mu;
      for (long lll = m - 1; lll >= ll; --lll) {
        if (std::fabs(e[lll]) <= tol * mu) {
          e[lll] = 0.0;
          converged = true;
          break;
        }
        mu = std::fabs(d[lll]) * (mu / (mu + std::fabs(e[lll])));
        sminl = std::min(sminl, mu);
      }
    }
    if (converged) continue;
    oldll = ll;
    oldm = m;

    double shift = 0.0, r = 0.0;
    if (static_cast<double>(nn) * tol * (sminl / smax) > std::max(eps, 0.01 * tol)) {
      double sll = 0.0;
      if (idir == 1) {
        sll = std::fabs(d[ll]);
        las2(d[m - 1], e[m - 1], d[m], shift, r);
      } else {
        sll = std::fabs(d[m]);
        las2(d[ll], e[ll], d[ll + 1], shift, r);
      }
      if (sll > 0.0 && (shift / sll) * (shift / sll) < eps) shift = 0.0;
    }
    iter += m - ll;

    double cs = 1.0, sn = 0.0, oldcs = 1.0, oldsn = 0.0;
    if (shift == 0.0) {
      if (idir == 1) {
        cs = 1.0;
        oldcs = 1.0;
        for (long i = ll; i <= m - 1; ++i) {
          lartg(d[i] * cs, e[i], cs, sn, r);
          if (i > ll) e[i - 1] = oldsn * r;
          lartg(oldcs * r, d[i + 1] * sn, oldcs, oldsn, d[i]);
        }
        double h = d[m] * cs;
        d[m] = h * oldcs;
        e[m - 1] = h * oldsn;
        if (std::fabs(e[m - 1]) <= thresh) e[m - 1] = 0.0;
      } else {
        cs = 1.0;
        oldcs = 1.0;
        for (long i = m; i >= ll + 1; --i) {
          lartg(d[i] * cs, e[i - 1], cs, sn, r);
          if (i < m) e[i] = oldsn * r;
          lartg(oldcs * r, d[i - 1] * sn, oldcs, oldsn, d[i]);
        }
        double h = d[ll] * cs;
        d[ll] = h * oldcs;
        e[ll] = h * oldsn;
        if (std::fabs(e[ll]) <= thresh) e[ll] = 0.0;
      }
    } else {
      double cosr, sinr, cosl, sinl;
      if (idir == 1) {
        double f = (std::fabs(d[ll]) - shift) * (std::copysign(1.0, d[ll]) + shift / d[ll]);
        double g = e[ll];
        for (long i = ll; i <= m - 1; ++i) {
          lartg(f, g, cosr, sinr, r);
          if (i > ll) e[i - 1] = r;
          f = cosr * d[i] + sinr * e[i];
          e[i] = cosr * e[i] - sinr * d[i];
          g = sinr * d[i + 1];
          d[i + 1] = cosr * d[i + 1];
          lartg(f, g, cosl, sinl, r);
          d[i] = r;
          f = cosl * e[i] + sinl * d[i + 1];
          d[i + 1] = cosl * d[i + 1] - sinl * e[i];
          if (i < m - 1) {
            g = sinl * e[i + 1];
            e[i + 1] = cosl * e[i + 1];
          }
        }
        e[m - 1] = f;
        if (std::fabs(e[m - 1]) <= thresh) e[m - 1] = 0.0;
      } else {
        double f = (std::fabs(d[m]) - shift) * (std::copysign(1.0, d[m]) + shift / d[m]);
        double g = e[m - 1];
        for (long i = m; i >= ll + 1; --i) {
          lartg(f, g, cosr, sinr, r);
          if (i < m) e[i] = r;
          f = cosr * d[i] + sinr * e[i - 1];
          e[i - 1] = cosr * e[i - 1] - sinr * d[i];
          g = sinr * d[i - 1];
          d[i - 1] = cosr * d[i - 1];
          lartg(f, g, cosl, sinl, r);
          d[i] = r;
          f = cosl * e[i - 1] + sinl * d[i - 1];
          d[i - 1] = cosl * d[i - 1] - sinl * e[i - 1];
          if (i > ll + 1) {
            g = sinl * e[i - 2];
            e[i - 2] = cosl * e[i - 2];
          }
        }
        e[ll] = f;
        if (std::fabs(e[ll]) <= thresh) e[ll] = 0.0;
      }
    }
  }

  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = std::fabs(d[i + 1]);
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

Matrix null_space_basis(const Matrix& M, double tol_rank) {
  const std::size_t k = M.cols();
  if (k == 0) return Matrix(0, 0);
  Matrix work = M;
  if (M.rows() < k) {
    work = Matrix(k, k);
    work.set_block(0, 0, M);
  }
  auto d = svd(work);
  double norm = d.singular_values.empty() ? 0.0 : d.singular_values.front();
  double thr = tol_rank >= 0.0 ? tol_rank * norm : static_cast<double>(k) * kMachEps * norm;
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < k; ++j)
    if (d.singular_values[j] <= thr) cols.push_back(j);
  Matrix N(k, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t i = 0; i < k; ++i) N(i, c) = d.right(i, cols[c]);
  canonical_signs(N);
  return N;
}

Matrix orthogonal_complement(const Matrix& Q) {
  const std::size_t n = Q.rows();
  if (Q.cols() == 0) return Matrix::identity(n);
  Matrix P = Matrix::identity(n) - Q * Q.transpose();
  auto ed = sym_eig(symmetrize(P));
  std::size_t want = n - Q.cols();
  Matrix C(n, want);
  for (std::size_t c = 0; c < want; ++c)
    for (std::size_t i = 0; i < n; ++i) C(i, c) = ed.vectors(i, n - 1 - c);
  return C;
}

namespace {

struct LU {
  Matrix lu;
  std::vector<std::size_t> piv;
};

LU lu_factor(const Matrix& A) {
  if (!A.square()) throw Error(ErrorCode::DimensionMismatch, "LU: matrix must be square");
  require_finite(A, "LU");
  const std::size_t n = A.rows();
  LU f{A, std::vector<std::size_t>(n)};
  std::iota(f.piv.begin(), f.piv.end(), 0);
  const double scale = A.max_abs();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::fabs(f.lu(i, k)) > std::fabs(f.lu(p, k))) p = i;
    if (std::fabs(f.lu(p, k)) <= static_cast<double>(n) * kMachEps * scale) {
      throw Error(ErrorCode::Singular, "LU: matrix is singular to working precision");
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(p, j), f.lu(k, j));
      std::swap(f.piv[p], f.piv[k]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      double l = f.lu(i, k) / f.lu(k, k);
      f.lu(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(k, j);
    }
  }
  return f;
}

}  // namespace

Matrix solve(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows()) throw Error(ErrorCode::DimensionMismatch, "solve: row mismatch");
  LU f = lu_factor(A);
  const std::size_t n = A.rows();
  Matrix X(n, B.cols());
  for (std::size_t c = 0; c < B.cols(); ++c) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = B(f.piv[i], c);
      for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
      y[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      double s = y[i];
      for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * y[j];
      y[i] = s / f.lu(i, i);
    }
    for (std::size_t i = 0; i < n; ++i) X(i, c) = y[i];
  }
  return X;
}

Matrix inverse(const Matrix& A) { return solve(A, Matrix::identity(A.rows())); }

}  // namespace gapcert
