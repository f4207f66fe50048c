#include "gapcert/gap_bounds.hpp"

#include <algorithm>
#include <cmath>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {

double min_sv(const Matrix& M) {
  auto s = singular_values(M);
  return s.empty() ? 0.0 : s.back();
}

Matrix inv_quarter_root(const Matrix& M) {
  return spectral_function(M, [](double x) { return x > 0.0 ? 1.0 / std::sqrt(std::sqrt(x)) : 0.0; });
}

Matrix inv_sqrt(const Matrix& M) {
  return spectral_function(M, [](double x) { return x > 0.0 ? 1.0 / std::sqrt(x) : 0.0; });
}

void require_symmetric(const Matrix& M, const char* name) {
  if (!M.square() || asymmetry(M) > kTolSym) {
    throw Error(ErrorCode::NotSymmetric, std::string(name) + " must be square and symmetric");
  }
}

double definite_min(const Matrix& M, const char* name) {
  auto vals = sym_eigvals(M);
  double scale = std::max(std::fabs(vals.front()), std::fabs(vals.back()));
  double tol = static_cast<double>(M.rows()) * kMachEps * scale;
  if (!(vals.front() > tol)) {
    throw Error(ErrorCode::NotDefinite, std::string(name) + " is not positive definite (min eigenvalue " +
                                            std::to_string(vals.front()) + ")");
  }
  return vals.front();
}

struct SplitBasis {
  Matrix range;            // eigenvectors with positive eigenvalues
  Matrix null;             // eigenvectors spanning the kernel
  double min_positive = 0; // smallest positive eigenvalue
};

SplitBasis split_psd(const Matrix& M, double tol_rank) {
  auto ed = sym_eig(M);
  const std::size_t n = M.rows();
  double scale = std::max(std::fabs(ed.values.front()), std::fabs(ed.values.back()));
  double rel = tol_rank >= 0.0 ? tol_rank : static_cast<double>(n) * kMachEps;
  double thr = rel * scale;
  std::vector<std::size_t> pos, nul;
  for (std::size_t i = 0; i < n; ++i) (ed.values[i] > thr ? pos : nul).push_back(i);
  SplitBasis s{Matrix(n, pos.size()), Matrix(n, nul.size()), 0.0};
  for (std::size_t c = 0; c < pos.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) s.range(i, c) = ed.vectors(i, pos[c]);
  for (std::size_t c = 0; c < nul.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) s.null(i, c) = ed.vectors(i, nul[c]);
  if (!pos.empty()) s.min_positive = ed.values[pos.front()];
  return s;
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::DiagGap: return "diag_gap";
    case Method::Stretch: return "stretch";
    case Method::HBInv: return "hbinv";
    case Method::ZeroDichotomy: return "zero_dichotomy";
    case Method::Kirsch: return "kirsch";
    case Method::Winklmeier: return "winklmeier";
    case Method::StokesNew: return "stokes_new";
  }
  return "unknown";
}

std::string_view to_string(Claim claim) {
  return claim == Claim::Empty ? "empty" : "subset_of_zero";
}

Matrix BlockSaddle::assemble() const { return gapcert::assemble(A, B, B.transpose(), -C); }

void BlockSaddle::validate(double tol_psd) const {
  if (A.rows() == 0 || C.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "blocks A and C must be non-empty");
  if (B.rows() != A.rows() || B.cols() != C.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "B must be m x k for A m x m and C k x k");
  }
  for (const Matrix* M : {&A, &B, &C})
    if (!M->all_finite()) throw Error(ErrorCode::NotFinite, "block contains a non-finite entry");
  require_symmetric(A, "A");
  require_symmetric(C, "C");
  require_psd(A, "A", tol_psd);
  require_psd(C, "C", tol_psd);
}

bool GapCertificate::sound_for(const std::vector<double>& eigs, double margin, double zero_tol) const {
  if (is_empty()) return true;
  for (double lam : eigs) {
    if (claim == Claim::SubsetOfZero && std::fabs(lam) <= zero_tol) continue;
    if (lam > lo + margin && lam < hi - margin) return false;
  }
  return true;
}

NullSpaceReport null_space_H(const BlockSaddle& H, double tol_rank) {
  H.validate();
  NullSpaceReport r;
  r.na_nb = null_space_basis(assemble(H.A, Matrix(), H.B.transpose(), Matrix()), tol_rank);
  r.nc_nb = null_space_basis(assemble(H.C, Matrix(), H.B, Matrix()), tol_rank);
  r.singular = r.na_nb.cols() > 0 || r.nc_nb.cols() > 0;
  return r;
}

GapCertificate diag_gap(const BlockSaddle& H) {
  H.validate();
  double a = definite_min(H.A, "A");
  double c = definite_min(H.C, "C");
  GapCertificate g;
  g.method = Method::DiagGap;
  g.claim = Claim::Empty;
  g.lo = -c;
  g.hi = a;
  g.inv_norm_bound = 1.0 / std::min(a, c);
  g.quantities = {{"min_sigma_A", a}, {"min_sigma_C", c}};
  return g;
}

GapCertificate stretch_certificate(const BlockSaddle& H) {
  H.validate();
  double a = definite_min(H.A, "A");
  double c = definite_min(H.C, "C");
  double lambda0 = 0.5 * (a - c);
  Matrix Ash = H.A - lambda0 * Matrix::identity(H.m());
  Matrix Csh = H.C + lambda0 * Matrix::identity(H.k());
  Matrix Z = inv_sqrt(Ash) * H.B * inv_sqrt(Csh);
  auto sv = singular_values(Z);
  double smin = H.m() == H.k() ? sv.back() : 0.0;
  double smax = sv.front();
  double factor = std::sqrt(1.0 + smin * smin);
  double shifted = 2.0 / ((a + c) * factor);

  GapCertificate g;
  g.method = Method::Stretch;
  g.claim = Claim::Empty;
  g.lo = lambda0 - 1.0 / shifted;
  g.hi = lambda0 + 1.0 / shifted;
  g.inv_norm_bound = 1.0 / std::min(-g.lo, g.hi);
  g.quantities = {{"lambda0", lambda0},           {"min_sigma_A", a},
                  {"min_sigma_C", c},             {"z_sigma_min", smin},
                  {"z_sigma_max", smax},          {"stretch_factor", factor},
                  {"shifted_inv_norm_bound", shifted}};
  return g;
}

double inv_IplusAC_bound(const Matrix& A, const Matrix& C) {
  require_symmetric(A, "A");
  require_symmetric(C, "C");
  if (A.rows() != C.rows()) throw Error(ErrorCode::DimensionMismatch, "A and C must have the same size");
  require_psd(A, "A");
  require_psd(C, "C");
  Matrix L = psd_factor(A);
  Matrix M = psd_factor(C);
  if (L.cols() == 0 || M.cols() == 0) return 1.0;
  Matrix Ch = psd_sqrt(C);
  double mu = std::max(0.0, min_eigenvalue(symmetrize(Ch * A * Ch)));
  double nA = op_norm(A), nC = op_norm(C);
  double v1 = std::sqrt(nA) * op_norm(L.transpose() * C);
  double v2 = std::sqrt(nC) * op_norm(A * M);
  double v3 = std::sqrt(nA * nC) * op_norm(L.transpose() * M);
  return 1.0 + std::min({v1, v2, v3}) / (1.0 + mu);
}

NormFloor verify_norm_floor(const Matrix& A, const Matrix& C, double tol) {
  require_symmetric(A, "A");
  require_symmetric(C, "C");
  if (A.rows() != C.rows()) throw Error(ErrorCode::DimensionMismatch, "A and C must have the same size");
  require_psd(A, "A");
  require_psd(C, "C");
  Matrix AC = A * C;
  double scale = std::max(1.0, op_norm(A) * op_norm(C));
  return {op_norm(Matrix::identity(A.rows()) + AC), op_norm(AC) <= tol * scale};
}

RelativeBounds relative_bounds(const BlockSaddle& H) {
  H.validate();
  if (H.m() != H.k()) throw Error(ErrorCode::BNotInvertible, "B must be square");
  double s = min_sv(H.B);
  if (!(s > static_cast<double>(H.m()) * kMachEps * op_norm(H.B))) {
    throw Error(ErrorCode::UnboundedRelativeBound, "B is rank-deficient, so alpha/gamma are unbounded");
  }
  Matrix Pl = inv_quarter_root(symmetrize(H.B * H.B.transpose()));
  Matrix Pr = inv_quarter_root(symmetrize(H.B.transpose() * H.B));
  double alpha = std::max(0.0, max_eigenvalue(symmetrize(Pl * H.A * Pl)));
  double gamma = std::max(0.0, max_eigenvalue(symmetrize(Pr * H.C * Pr)));
  return {alpha, gamma};
}

double hbinv_scaled_bound(const BlockSaddle& H, double t) {
  if (!(t > 0.0)) throw Error(ErrorCode::DimensionMismatch, "t must be positive");
  auto rb = relative_bounds(H);
  double binv = 1.0 / min_sv(H.B);
  return binv / t * (1.0 + std::max(rb.alpha, rb.gamma) / t + rb.alpha * rb.gamma / (t * t));
}

GapCertificate hbinv_certificate(const BlockSaddle& H) {
  auto rb = relative_bounds(H);
  double binv = 1.0 / min_sv(H.B);
  double bound = binv * (1.0 + std::max(rb.alpha, rb.gamma) + rb.alpha * rb.gamma);
  GapCertificate g;
  g.method = Method::HBInv;
  g.claim = Claim::Empty;
  g.lo = -1.0 / bound;
  g.hi = 1.0 / bound;
  g.inv_norm_bound = bound;
  g.quantities = {{"alpha", rb.alpha}, {"gamma", rb.gamma}, {"norm_B_inv", binv}};
  return g;
}

namespace {

struct DichotomyParts {
  double coupling = 0.0;  // max(||B12 B22^-1||, ||B21^T B22^-T||)
  double norm_A_inv = 0.0;
  double norm_C_inv = 0.0;
  double norm_B22_inv = 0.0;
  std::size_t null_dim = 0;
};

DichotomyParts dichotomy_parts(const BlockSaddle& H, double tol_rank) {
  H.validate();
  SplitBasis a = split_psd(H.A, tol_rank);
  SplitBasis c = split_psd(H.C, tol_rank);
  if (a.null.cols() != c.null.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "dim N(A) = " + std::to_string(a.null.cols()) +
                                                  " differs from dim N(C) = " + std::to_string(c.null.cols()));
  }
  DichotomyParts p;
  p.null_dim = a.null.cols();
  if (a.range.cols()) p.norm_A_inv = 1.0 / a.min_positive;
  if (c.range.cols()) p.norm_C_inv = 1.0 / c.min_positive;
  if (p.null_dim == 0) return p;

  Matrix B22 = a.null.transpose() * H.B * c.null;
  double s = min_sv(B22);
  double scale = std::max(op_norm(H.B), 1e-300);
  double rel = tol_rank >= 0.0 ? tol_rank : static_cast<double>(std::max(H.m(), H.k())) * kMachEps;
  if (!(s > rel * scale)) {
    throw Error(ErrorCode::B22Singular, "B does not map N(C) one-to-one onto N(A)");
  }
  Matrix B22inv = inverse(B22);
  p.norm_B22_inv = 1.0 / s;
  if (a.range.cols()) {
    Matrix B12 = a.range.transpose() * H.B * c.null;
    p.coupling = std::max(p.coupling, op_norm(B12 * B22inv));
  }
  if (c.range.cols()) {
    Matrix B21 = a.null.transpose() * H.B * c.range;
    p.coupling = std::max(p.coupling, op_norm(B21.transpose() * B22inv.transpose()));
  }
  return p;
}

}  // namespace

GapCertificate zero_dichotomy_certificate(const BlockSaddle& H, double tol_rank) {
  DichotomyParts p = dichotomy_parts(H, tol_rank);
  double worst = std::max({p.norm_A_inv, p.norm_C_inv, p.norm_B22_inv});
  double eps = 1.0 / ((1.0 + p.coupling) * (1.0 + p.coupling) * worst);
  GapCertificate g;
  g.method = Method::ZeroDichotomy;
  g.claim = Claim::Empty;
  g.lo = -eps;
  g.hi = eps;
  g.inv_norm_bound = 1.0 / eps;
  g.quantities = {{"epsilon", eps},
                  {"coupling", p.coupling},
                  {"norm_A_inv", p.norm_A_inv},
                  {"norm_C_inv", p.norm_C_inv},
                  {"norm_B22_inv", p.norm_B22_inv},
                  {"null_dim", static_cast<double>(p.null_dim)}};
  return g;
}

double zero_dichotomy_scaled_epsilon(const BlockSaddle& H, double t, double tol_rank) {
  DichotomyParts p = dichotomy_parts(H, tol_rank);
  if (p.null_dim == 0) throw Error(ErrorCode::B22Singular, "no null-space block to scale");
  return t / ((1.0 + p.coupling) * (1.0 + p.coupling) * p.norm_B22_inv);
}

GapCertificate kirsch_certificate(const Matrix& A, const Matrix& B) {
  require_symmetric(A, "A");
  require_symmetric(B, "B");
  if (A.rows() != B.rows()) throw Error(ErrorCode::DimensionMismatch, "A and B must have the same size");
  const double n = static_cast<double>(A.rows());
  auto ea = sym_eigvals(A);
  auto eb = sym_eigvals(B);
  double na = std::max(std::fabs(ea.front()), std::fabs(ea.back()));
  double nb = std::max(std::fabs(eb.front()), std::fabs(eb.back()));
  bool psd_a = ea.front() >= -kTolPsd * na;
  bool psd_b = eb.front() >= -kTolPsd * nb;
  bool pd_a = ea.front() > n * kMachEps * na;
  bool pd_b = eb.front() > n * kMachEps * nb;

  double radius = 0.0;
  double oneform = 0.0;
  if (psd_a && psd_b) {
    if (!pd_a && !pd_b) {
      throw Error(ErrorCode::BothSemidefiniteSingular, "both A and B are singular; the certificate is empty");
    }
    radius = std::hypot(std::max(0.0, ea.front()), std::max(0.0, eb.front()));
  } else if (pd_a) {
    radius = ea.front();
    oneform = 1.0;
  } else if (pd_b) {
    radius = eb.front();
    oneform = 1.0;
  } else {
    throw Error(ErrorCode::NotPSD, "kirsch needs A, B PSD, or one of them positive definite");
  }
  auto sv = complex_svd_via_embedding(A, B);
  GapCertificate g;
  g.method = Method::Kirsch;
  g.claim = Claim::Empty;
  g.lo = -radius;
  g.hi = radius;
  g.inv_norm_bound = 1.0 / radius;
  g.quantities = {{"alpha", ea.front()}, {"beta", eb.front()}, {"sigma_min_T", sv.back()}, {"oneform", oneform}};
  return g;
}

double winklmeier_bound(const BlockSaddle& H) {
  H.validate();
  if (H.m() != H.k()) throw Error(ErrorCode::BNotInvertible, "B must be square");
  double s = min_sv(H.B);
  if (!(s > static_cast<double>(H.m()) * kMachEps * op_norm(H.B))) {
    throw Error(ErrorCode::BNotInvertible, "B is singular");
  }
  double a = op_norm(H.A), c = op_norm(H.C);
  return -0.5 * (a + c) + std::sqrt(0.25 * (a - c) * (a - c) + s * s);
}

Matrix func_calc_AC(const Matrix& A, const Matrix& C, double f0, const std::function<double(double)>& f1) {
  require_symmetric(A, "A");
  require_symmetric(C, "C");
  if (A.rows() != C.rows()) throw Error(ErrorCode::DimensionMismatch, "A and C must have the same size");
  require_psd(A, "A");
  Matrix Ch = psd_sqrt(C);
  Matrix F = spectral_function(symmetrize(Ch * A * Ch), f1);
  return f0 * Matrix::identity(A.rows()) + A * Ch * F * Ch;
}

}  // namespace gapcert
