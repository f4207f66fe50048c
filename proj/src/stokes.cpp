#include "gapcert/stokes.hpp"

#include <algorithm>
#include <cmath>

#include "gapcert/errors.hpp"

namespace gapcert {

std::string_view to_string(IntervalSource source) {
  switch (source) {
    case IntervalSource::Minimal: return "minimal";
    case IntervalSource::RuWa: return "ruwa";
    case IntervalSource::Axel: return "axel";
    case IntervalSource::NewEstimate: return "new_estimate";
  }
  return "unknown";
}

Matrix StokesMatrix::assemble() const {
  return gapcert::assemble(A, B, B.transpose(), Matrix(k(), k()));
}

BlockSaddle StokesMatrix::saddle() const { return {A, B, Matrix(k(), k())}; }

void StokesMatrix::validate() const { saddle().validate(); }

bool StokesMatrix::nab_holds(double tol_rank) const {
  return null_space_basis(gapcert::assemble(A, Matrix(), B.transpose(), Matrix()), tol_rank).cols() == 0;
}

RayleighP rayleigh_p(const std::vector<double>& x, const StokesMatrix& S) {
  S.validate();
  if (x.size() != S.m()) throw Error(ErrorCode::DimensionMismatch, "x must have length m");
  if (std::fabs(norm2(x) - 1.0) > 1e-12) throw Error(ErrorCode::DimensionMismatch, "x must be a unit vector");
  double xax = dot(x, S.A * x);
  auto btx = S.B.transpose() * x;
  double bb = dot(btx, btx);
  double delta = xax * xax + 4.0 * bb;
  double scale = op_norm(S.A) + op_norm(S.B);
  if (!(delta > 1e-28 * scale * scale) || delta == 0.0) {
    throw Error(ErrorCode::DegenerateDirection, "Delta(x) vanishes: (NAB) fails along x");
  }
  double root = std::sqrt(delta);
  RayleighP p;
  p.p_plus = 0.5 * (xax + root);
  p.p_minus = -2.0 * bb / (xax + root);
  return p;
}

PencilSpectrum pencil_spectrum(const StokesMatrix& S, double tol_rank) {
  S.validate();
  Matrix H = S.assemble();
  PencilSpectrum ps;
  ps.h_eigenvalues = sym_eigvals(H);
  double norm = std::max(std::fabs(ps.h_eigenvalues.front()), std::fabs(ps.h_eigenvalues.back()));
  double rel = tol_rank >= 0.0 ? tol_rank : static_cast<double>(H.rows()) * kMachEps;
  double thr = rel * norm;
  for (double v : ps.h_eigenvalues) {
    if (v > thr)
      ps.lambda_plus.push_back(v);
    else if (v < -thr)
      ps.lambda_minus.push_back(v);
    else
      ++ps.zero_multiplicity;
  }
  ps.negative_count = ps.lambda_minus.size();
  std::reverse(ps.lambda_plus.begin(), ps.lambda_plus.end());
  // x in N(B^T) contributes p_-(x) = 0 to the negative branch.
  while (ps.lambda_minus.size() < S.m() && ps.lambda_plus.size() == S.m()) ps.lambda_minus.push_back(0.0);
  return ps;
}

IntervalPair minimal_intervals(const StokesMatrix& S, double tol_rank) {
  S.validate();
  if (!S.nab_holds(tol_rank)) throw Error(ErrorCode::NABViolated, "N(A) ∩ N(B^T) is non-trivial");
  auto ps = pencil_spectrum(S, tol_rank);
  IntervalPair ip;
  ip.source = IntervalSource::Minimal;
  ip.i_minus = {ps.lambda_minus.front(), ps.lambda_minus.back()};
  ip.i_plus = {ps.lambda_plus.back(), ps.lambda_plus.front()};
  return ip;
}

namespace {

struct DefiniteData {
  std::vector<double> alpha;  // eigenvalues of A, ascending
  std::vector<double> beta;   // singular values of B, ascending
};

DefiniteData definite_data(const StokesMatrix& S) {
  S.validate();
  DefiniteData d;
  d.alpha = sym_eigvals(S.A);
  double na = d.alpha.back();
  if (!(d.alpha.front() > static_cast<double>(S.m()) * kMachEps * na)) {
    throw Error(ErrorCode::NotDefinite, "A must be positive definite");
  }
  if (S.k() > S.m()) throw Error(ErrorCode::RankDeficient, "B must have full column rank (k <= m)");
  d.beta = singular_values(S.B);
  std::reverse(d.beta.begin(), d.beta.end());
  if (!(d.beta.front() > static_cast<double>(S.m()) * kMachEps * d.beta.back())) {
    throw Error(ErrorCode::RankDeficient, "B must have full column rank");
  }
  return d;
}

}  // namespace

IntervalPair ruwa_intervals(const StokesMatrix& S) {
  DefiniteData d = definite_data(S);
  const double a1 = d.alpha.front(), am = d.alpha.back();
  const double b1 = d.beta.front(), bm = d.beta.back();
  IntervalPair ip;
  ip.source = IntervalSource::RuWa;
  ip.i_minus = {0.5 * (a1 - std::sqrt(a1 * a1 + 4.0 * bm * bm)), 0.5 * (am - std::sqrt(am * am + 4.0 * b1 * b1))};
  ip.i_plus = {a1, 0.5 * (am + std::sqrt(am * am + 4.0 * bm * bm))};
  return ip;
}

IntervalPair axel_intervals(const StokesMatrix& S) {
  DefiniteData d = definite_data(S);
  const double a1 = d.alpha.front(), am = d.alpha.back();
  Matrix schur = symmetrize(S.B.transpose() * solve(S.A, S.B));
  auto sig = sym_eigvals(schur);
  const double s1 = sig.front(), sm = sig.back();
  IntervalPair ip;
  ip.source = IntervalSource::Axel;
  ip.i_minus = {-2.0 * sm * am / (a1 + std::sqrt(a1 * a1 + 4.0 * sm * am)), -s1 * a1 / (s1 + a1)};
  ip.i_plus = {a1, 0.5 * (am + std::sqrt(am * am + 4.0 * sm * am))};
  return ip;
}

GapCertificate new_gap_estimate(const StokesMatrix& S) {
  S.validate();
  Matrix BBt = symmetrize(S.B * S.B.transpose());
  auto ev = sym_eigvals(BBt);
  double beta1 = std::sqrt(std::max(0.0, ev.front()));
  double nb = std::sqrt(std::max(0.0, ev.back()));
  if (S.k() < S.m() || !(beta1 > static_cast<double>(S.m() + S.k()) * kMachEps * nb)) {
    throw Error(ErrorCode::RankDeficient, "B^T must have full column rank");
  }
  Matrix P = spectral_function(BBt, [](double x) { return x > 0.0 ? 1.0 / std::sqrt(std::sqrt(x)) : 0.0; });
  double alpha = std::max(0.0, max_eigenvalue(symmetrize(P * S.A * P)));
  double root = std::sqrt(alpha * alpha + 4.0);
  GapCertificate g;
  g.method = Method::StokesNew;
  g.claim = Claim::SubsetOfZero;
  g.lo = -2.0 * beta1 / (alpha + root);
  g.hi = beta1;
  g.quantities = {{"alpha", alpha}, {"beta1", beta1}};
  if (S.m() == S.k()) {
    g.inv_norm_bound = (alpha + root) / (2.0 * beta1);
    g.quantities["hbinv0_bound"] = (1.0 + alpha) / beta1;
  }
  return g;
}

std::vector<EigenEnclosure> perturbation_bounds(const PencilSpectrum& base, const PerturbationSpec& spec) {
  const double eta = spec.eta;
  if (!(eta >= 0.0 && eta < 1.0)) throw Error(ErrorCode::EtaOutOfRange, "eta must lie in [0, 1)");
  std::vector<EigenEnclosure> out;
  for (std::size_t i = 0; i < base.lambda_plus.size(); ++i) {
    double l = base.lambda_plus[i];
    out.push_back({'+', i + 1, l, {(1.0 - eta) * l, (1.0 + eta) * l}});
  }
  for (std::size_t i = 0; i < base.lambda_minus.size(); ++i) {
    double l = base.lambda_minus[i];
    out.push_back({'-', i + 1, l, {(1.0 + eta) / (1.0 - eta) * l, (1.0 - eta) / (1.0 + eta) * l}});
  }
  return out;
}

}  // namespace gapcert
