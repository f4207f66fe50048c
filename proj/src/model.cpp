#include "gapcert/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {

constexpr double kPi = std::numbers::pi;

void require_deterministic(const ModelSpec& spec) {
  spec.validate();
  if (spec.disorder) throw Error(ErrorCode::OutOfRegime, "operation needs a deterministic model (no disorder)");
}

// U_{m-1}(cos a) (1 - c cos a) - c T_m(cos a); zero iff the trig boundary condition holds.
double trig_g(double alpha, std::size_t m, double c) {
  const double x = std::cos(alpha);
  double u_prev = 1.0, u = 2.0 * x;
  if (m == 1) u = 1.0;
  for (std::size_t k = 2; k < m; ++k) {
    double next = 2.0 * x * u - u_prev;
    u_prev = u;
    u = next;
  }
  return (1.0 - c * x) * u - c * std::cos(static_cast<double>(m) * alpha);
}

double secular_derivative(double a, std::size_t m, double c) {
  const double md = static_cast<double>(m);
  const double s = std::sin(a), co = std::cos(a), sm = std::sin(md * a), cm = std::cos(md * a);
  return c * s * sm + md * (1.0 - c * co) * cm + c * md * sm * s - c * cm * co;
}

double trig_lambda(double alpha, double c) {
  double h = std::sin(0.5 * alpha);
  return (1.0 - c) * (1.0 - c) + 4.0 * c * h * h;
}

// log(expm1(x)) for x > 0 without overflow.
double log_expm1(double x) { return x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x)); }

double refine_root(double lo, double hi, double glo, std::size_t m, double c) {
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double gm = trig_g(mid, m, c);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  double a = 0.5 * (lo + hi);
  double fa = std::fabs(secular_residual(a, m, c));
  for (int it = 0; it < 4; ++it) {
    double d = secular_derivative(a, m, c);
    if (d == 0.0) break;
    double next = a - secular_residual(a, m, c) / d;
    if (!(next >= lo && next <= hi)) break;
    double fn = std::fabs(secular_residual(next, m, c));
    if (!(fn < fa)) break;
    a = next;
    fa = fn;
  }
  return a;
}

std::vector<double> trig_roots_on(const std::vector<double>& pts, std::size_t m, double c) {
  std::vector<double> g(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) g[i] = trig_g(pts[i], m, c);
  std::vector<double> roots;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if ((g[i] > 0.0) != (g[i + 1] > 0.0)) roots.push_back(refine_root(pts[i], pts[i + 1], g[i], m, c));
  }
  return roots;
}

std::vector<double> subdivide(const std::vector<double>& pts, std::size_t parts) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    for (std::size_t j = 0; j < parts; ++j) {
      out.push_back(pts[i] + (pts[i + 1] - pts[i]) * static_cast<double>(j) / static_cast<double>(parts));
    }
  }
  out.push_back(pts.back());
  return out;
}

HypRoot hyperbolic_root(std::size_t m, double c) {
  const double md = static_cast<double>(m);
  const double alpha0 = -std::log(c);
  auto log_r = [&](double alpha) {
    return std::log(2.0 * c) + std::log(std::sinh(alpha)) - log_expm1(2.0 * md * alpha);
  };
  HypRoot h;
  double log_md = 0.0;  // log(-delta)
  if (log_r(alpha0) < std::log(1e-3)) {
    double delta = 0.0;
    for (int it = 0; it < 100; ++it) {
      double lr = log_r(alpha0 + delta);
      double r = std::exp(lr);
      double next = std::log1p(-r);
      log_md = r < 1e-8 ? lr + 0.5 * r : std::log(-next);
      bool done = next == delta || std::fabs(next - delta) <= 1e-16 * std::fabs(next);
      delta = next;
      if (done) break;
    }
    h.delta = delta;
  } else {
    auto gh = [&](double a) { return -std::expm1(a - alpha0) / std::sinh(a) - 2.0 * c / std::expm1(2.0 * md * a); };
    double lo = 1e-9 * alpha0, hi = alpha0;
    if (!(gh(lo) > 0.0)) throw Error(ErrorCode::RootCountMismatch, "hyperbolic root not bracketed");
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (gh(mid) > 0.0 ? lo : hi) = mid;
    }
    h.delta = 0.5 * (lo + hi) - alpha0;
    log_md = std::log(-h.delta);
  }
  h.alpha1 = alpha0 + h.delta;
  double md_val = -h.delta;
  double log_em1 = md_val < 1e-8 ? log_md + 0.5 * md_val : std::log(std::expm1(md_val));
  h.log_lambda1 = log_em1 + std::log(std::exp(h.delta) - c * c);
  return h;
}

double abs_max(const std::vector<double>& v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::fabs(x));
  return r;
}

std::vector<double> sorted_abs(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::fabs(x); });
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> nearest_zero(const std::vector<double>& v, std::size_t count) {
  std::vector<double> out = v;
  std::sort(out.begin(), out.end(), [](double a, double b) { return std::fabs(a) < std::fabs(b); });
  out.resize(std::min(count, out.size()));
  std::sort(out.begin(), out.end());
  return out;
}

// K_c + diag(2 e_1 e_1^T, -2 e_m e_m^T).
Matrix add_boundary(Matrix K, std::size_t m) {
  K(0, 0) += 2.0;
  K(2 * m - 1, 2 * m - 1) -= 2.0;
  return K;
}

}  // namespace

void ModelSpec::validate() const {
  if (m < 2) throw Error(ErrorCode::OutOfRegime, "model needs m >= 2");
  if (!std::isfinite(c) || c < 0.0) throw Error(ErrorCode::OutOfRegime, "model needs finite c >= 0");
  if (disorder && !(std::isfinite(disorder->a) && std::isfinite(disorder->b) && disorder->a <= disorder->b)) {
    throw Error(ErrorCode::OutOfRegime, "disorder law needs finite a <= b");
  }
}

std::vector<double> draw_uniform(const UniformLaw& law, std::size_t m) {
  std::mt19937_64 gen(law.seed);
  std::vector<double> out(m);
  for (auto& w : out) {
    double u = static_cast<double>(gen() >> 11) * 0x1p-53;
    w = law.a + (law.b - law.a) * u;
  }
  return out;
}

ModelBlocks build_blocks(const ModelSpec& spec) {
  spec.validate();
  const std::size_t m = spec.m;
  ModelBlocks b{Matrix(m, m), Matrix(m, m)};
  for (std::size_t i = 0; i + 1 < m; ++i) {
    b.A(i, i + 1) = b.A(i + 1, i) = 1.0;
    b.B(i, i + 1) = 1.0;
    b.B(i + 1, i) = -1.0;
  }
  if (spec.disorder) {
    auto w = draw_uniform(*spec.disorder, m);
    for (std::size_t i = 0; i < m; ++i) b.A(i, i) += w[i];
  }
  return b;
}

Matrix build_Hc(const ModelSpec& spec) {
  auto [A, B] = build_blocks(spec);
  if (!spec.disorder) A += 2.0 * spec.c * Matrix::identity(spec.m);
  return assemble(A, B, -B, -A);
}

Matrix build_U(std::size_t m) {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix I = s * Matrix::identity(m);
  return assemble(I, I, I, -I);
}

Matrix build_Kc(const ModelSpec& spec) {
  require_deterministic(spec);
  Matrix U = build_U(spec.m);
  return symmetrize(U * build_Hc(spec) * U);
}

Bidiagonal build_Tc(const ModelSpec& spec) {
  require_deterministic(spec);
  Bidiagonal t;
  t.diag.assign(spec.m, spec.c);
  t.offdiag.assign(spec.m - 1, 1.0);
  t.orientation = Orientation::Lower;
  return t;
}

Matrix build_Wc(const ModelSpec& spec) {
  require_deterministic(spec);
  const std::size_t m = spec.m;
  const double c = spec.c;
  Matrix W(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    W(i, i) = c * c + (i + 1 < m ? 1.0 : 0.0);
    if (i + 1 < m) W(i, i + 1) = W(i + 1, i) = -c;
  }
  return W;
}

double secular_residual(double alpha, std::size_t m, double c) {
  const double md = static_cast<double>(m);
  return (1.0 - c * std::cos(alpha)) * std::sin(md * alpha) - c * std::cos(md * alpha) * std::sin(alpha);
}

std::vector<double> SecularRoots::eigenvalues(double c) const {
  std::vector<double> out;
  for (double a : trig_roots) out.push_back(trig_lambda(a, c));
  if (hyp_root) out.push_back(std::exp(hyp_root->log_lambda1));
  std::sort(out.begin(), out.end());
  return out;
}

SecularRoots secular_solve(const ModelSpec& spec) {
  require_deterministic(spec);
  const std::size_t m = spec.m;
  const double c = spec.c;
  if (!(c > 0.0)) throw Error(ErrorCode::OutOfRegime, "secular equation needs c > 0");
  SecularRoots out;
  const bool has_hyp = c < 1.0 && static_cast<double>(m) * (1.0 - c) - c > 0.0;
  const std::size_t expected = has_hyp ? m - 1 : m;

  std::vector<double> pts{0.0, kPi};
  for (std::size_t k = 1; k <= m; ++k) pts.push_back((2.0 * static_cast<double>(k) - 1.0) * kPi / (2.0 * static_cast<double>(m)));
  if (c > 1.0) {
    out.alpha_hat = std::acos(1.0 / c);
    pts.push_back(*out.alpha_hat);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), [](double a, double b) { return std::fabs(a - b) <= 1e-12; }),
            pts.end());
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    if (trig_g(pts[i], m, c) == 0.0) pts[i] += 1e-12;
  }

  auto roots = trig_roots_on(pts, m, c);
  for (std::size_t parts : {16u, 256u}) {
    if (roots.size() == expected) break;
    roots = trig_roots_on(subdivide(pts, parts), m, c);
  }
  if (roots.size() != expected) {
    throw Error(ErrorCode::RootCountMismatch, "found " + std::to_string(roots.size()) + " trig roots, expected " +
                                                  std::to_string(expected));
  }
  out.trig_roots = std::move(roots);
  if (has_hyp) out.hyp_root = hyperbolic_root(m, c);
  return out;
}

std::vector<double> c1_closed_form(std::size_t m) {
  std::vector<double> out;
  for (std::size_t k = 1; k <= m; ++k) {
    double s = std::sin((2.0 * static_cast<double>(k) - 1.0) * kPi / (2.0 * (2.0 * static_cast<double>(m) + 1.0)));
    out.push_back(4.0 * s * s);
  }
  return out;
}

SpuriousEstimate spurious_estimate(const ModelSpec& spec) {
  require_deterministic(spec);
  const double c = spec.c;
  if (!(c > 0.0 && c < 1.0)) throw Error(ErrorCode::OutOfRegime, "spurious estimate needs 0 < c < 1");
  const double md = static_cast<double>(spec.m);
  SpuriousEstimate e;
  e.alpha0 = -std::log(c);
  e.log_lambda_est = std::log(4.0 * c) - 2.0 * md * e.alpha0;
  e.log_sigma_est = 0.5 * e.log_lambda_est;
  e.log_lambda_first_order = 2.0 * std::log1p(-c * c) - 2.0 * md * e.alpha0;
  e.log_sigma_first_order = 0.5 * e.log_lambda_first_order;
  return e;
}

StableGap stable_gap(double c) {
  if (!std::isfinite(c) || c < 0.0) throw Error(ErrorCode::OutOfRegime, "stable gap needs c >= 0");
  return {2.0 * std::fabs(c - 1.0)};
}

std::vector<StableGapCheck> verify_stable_gap(double c, const std::vector<std::size_t>& m_list) {
  const double r = stable_gap(c).radius;
  std::vector<StableGapCheck> out;
  for (std::size_t m : m_list) {
    ModelSpec spec{m, c, std::nullopt};
    auto eigs = sym_eigvals(build_Hc(spec));
    StableGapCheck chk;
    chk.m = m;
    chk.min_outside = INFINITY;
    const double slack = 1e-10 * 2.0 * (1.0 + c);
    for (double v : eigs) {
      if (std::fabs(v) < r - slack)
        ++chk.inside_count;
      else
        chk.min_outside = std::min(chk.min_outside, std::fabs(v));
    }
    if (c >= 1.0) {
      chk.pass = chk.inside_count == 0;
    } else {
      auto sv = bidiag_svd_hra(build_Tc(spec));
      chk.max_inside_abs = 2.0 * sv.back();
      bool magnitude_ok;
      if (c == 0.0) {
        chk.magnitude_cap = 0.0;
        magnitude_ok = chk.max_inside_abs == 0.0;
      } else {
        auto est = spurious_estimate(spec);
        chk.magnitude_cap = 2.0 * 1.01 * std::exp(est.log_sigma_est);
        magnitude_ok = sv.back() == 0.0 || std::log(sv.back()) <= est.log_sigma_est + std::log(1.01);
      }
      chk.pass = chk.inside_count == 2 && magnitude_ok;
    }
    out.push_back(chk);
  }
  return out;
}

ModifiedMatrices build_modified(const ModelSpec& spec) {
  spec.validate();
  Matrix U = build_U(spec.m);
  Matrix K = add_boundary(symmetrize(U * build_Hc(spec) * U), spec.m);
  return {K, symmetrize(U * K * U)};
}

std::vector<double> modified_spectrum_closed_form(const ModelSpec& spec) {
  require_deterministic(spec);
  const double c = spec.c;
  const double md = static_cast<double>(spec.m);
  std::vector<double> out;
  for (std::size_t k = 1; k <= spec.m; ++k) {
    double kappa = -2.0 * std::cos((2.0 * static_cast<double>(k) - 1.0) * kPi / (2.0 * md));
    double v = 4.0 + 4.0 * c * c - 4.0 * c * kappa;
    out.push_back(v);
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SymbolSpectrum symbol_spectrum(double c) {
  if (!std::isfinite(c) || c < 0.0) throw Error(ErrorCode::OutOfRegime, "symbol spectrum needs c >= 0");
  SymbolSpectrum s;
  s.w_band = {(1.0 - c) * (1.0 - c), (1.0 + c) * (1.0 + c)};
  s.h_positive = {2.0 * std::fabs(1.0 - c), 2.0 * (1.0 + c)};
  s.h_negative = {-2.0 * (1.0 + c), -2.0 * std::fabs(1.0 - c)};
  return s;
}

double spurious_localization(const ModelSpec& spec) {
  auto ed = sym_eig(build_Wc(spec));
  const std::size_t m = spec.m;
  const std::size_t q = std::max<std::size_t>(1, m / 4);
  double head = 0.0, tail = 0.0, total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double w = ed.vectors(i, 0) * ed.vectors(i, 0);
    total += w;
    if (i < q) head += w;
    if (i >= m - q) tail += w;
  }
  return std::max(head, tail) / total;
}

double symmetry_error(const std::vector<double>& ascending) {
  const std::size_t n = ascending.size();
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::fabs(ascending[i] + ascending[n - 1 - i]));
  return err / std::max(1.0, abs_max(ascending));
}

DisorderReport disorder_experiment(const ModelSpec& spec, std::size_t count_near_zero) {
  spec.validate();
  if (!spec.disorder) throw Error(ErrorCode::OutOfRegime, "disorder experiment needs a disorder law");
  DisorderReport r;
  r.omega = draw_uniform(*spec.disorder, spec.m);
  auto eh = sym_eigvals(build_Hc(spec));
  auto et = sym_eigvals(build_modified(spec).H_tilde);
  r.near_zero_H = nearest_zero(eh, count_near_zero);
  r.near_zero_Htilde = nearest_zero(et, count_near_zero);
  r.symmetry_error_H = symmetry_error(eh);
  r.symmetry_error_Htilde = symmetry_error(et);
  r.abs_sorted_H = sorted_abs(eh);
  r.abs_sorted_Htilde = sorted_abs(et);
  Bidiagonal t;
  t.diag = r.omega;
  t.offdiag.assign(spec.m - 1, 2.0);
  t.orientation = Orientation::Lower;
  r.central_sigma = bidiag_svd_hra(t).back();
  r.log10_central = r.central_sigma > 0.0 ? std::log10(r.central_sigma) : -INFINITY;
  return r;
}

std::vector<ScanRow> gap_scan(const std::vector<double>& M_list, double delta, std::size_t m, std::uint64_t seed) {
  if (!(delta > 0.0)) throw Error(ErrorCode::OutOfRegime, "gap scan needs delta > 0");
  std::vector<ScanRow> rows;
  for (std::size_t i = 0; i < M_list.size(); ++i) {
    const double M = M_list[i];
    ModelSpec spec{m, 0.0, UniformLaw{M - delta, M + delta, seed + i}};
    auto eh = sym_eigvals(build_Hc(spec));
    auto et = sym_eigvals(build_modified(spec).H_tilde);
    for (std::size_t j = 0; j < eh.size(); ++j) rows.push_back({M, "H", j + 1, eh[j]});
    for (std::size_t j = 0; j < et.size(); ++j) rows.push_back({M, "Htilde", j + 1, et[j]});
  }
  return rows;
}

std::vector<InvariantResult> verify_model(const std::vector<std::size_t>& m_list, const std::vector<double>& c_list) {
  std::vector<InvariantResult> out;
  for (double c : c_list) {
    const double r = stable_gap(c).radius;
    const auto sym = symbol_spectrum(c);
    for (std::size_t m : m_list) {
      ModelSpec spec{m, c, std::nullopt};
      auto add = [&](const char* name, bool pass, double measure) { out.push_back({name, m, c, pass, measure}); };

      auto eh = sym_eigvals(build_Hc(spec));
      auto ek = sym_eigvals(build_Kc(spec));
      double d = 0.0;
      for (std::size_t i = 0; i < eh.size(); ++i) d = std::max(d, std::fabs(eh[i] - ek[i]));
      add("unitary_invariance", d <= 1e-10, d);

      auto sv = bidiag_svd_hra(build_Tc(spec));
      std::vector<double> pm;
      for (double s : sv) {
        pm.push_back(2.0 * s);
        pm.push_back(-2.0 * s);
      }
      std::sort(pm.begin(), pm.end());
      d = 0.0;
      for (std::size_t i = 0; i < pm.size(); ++i) d = std::max(d, std::fabs(pm[i] - ek[i]));
      add("kc_equals_2sigma_tc", d <= 1e-10, d);

      if (c > 0.0) {
        bool ok = true;
        d = 0.0;
        try {
          auto ev = secular_solve(spec).eigenvalues(c);
          auto ew = sym_eigvals(build_Wc(spec));
          ok = ev.size() == ew.size();
          for (std::size_t i = 0; ok && i < ev.size(); ++i) d = std::max(d, std::fabs(ev[i] - ew[i]));
        } catch (const Error&) {
          ok = false;
        }
        add("secular_completeness", ok && d <= 1e-9, d);
      }

      auto chk = verify_stable_gap(c, {m}).front();
      add("stable_gap", chk.pass, static_cast<double>(chk.inside_count));

      auto mod = build_modified(spec);
      auto et = sym_eigvals(mod.H_tilde);
      double inside = 0.0;
      for (double v : et) inside += std::fabs(v) < r - 1e-10 * 2.0 * (1.0 + c) ? 1.0 : 0.0;
      add("modified_gap", inside == 0.0, inside);
      double se = symmetry_error(et);
      add("modified_pm_symmetry", se <= 1e-10, se);

      auto cf = modified_spectrum_closed_form(spec);
      auto e2 = sym_eigvals(symmetrize(mod.H_tilde * mod.H_tilde));
      d = 0.0;
      for (std::size_t i = 0; i < cf.size(); ++i) d = std::max(d, std::fabs(cf[i] - e2[i]));
      add("modified_closed_form", d <= 1e-9, d);

      if (c == 0.0) {
        Matrix K2 = mod.K_tilde * mod.K_tilde - 4.0 * Matrix::identity(2 * m);
        double n = op_norm(K2);
        add("k0_tilde_squared", n <= 1e-12, n);
      }

      double worst = 0.0;
      for (double v : eh) {
        double a = std::fabs(v);
        if (a < r - 1e-10 * 2.0 * (1.0 + c)) continue;
        worst = std::max({worst, sym.h_positive.first - a, a - sym.h_positive.second});
      }
      add("symbol_bands", worst <= 1e-9, worst);

      if (c > 0.0 && c < 1.0 && 2.0 * std::log(1.0 / c) * static_cast<double>(m / 4) >= std::log(100.0) + 1.0) {
        double frac = spurious_localization(spec);
        add("spurious_localization", frac >= 0.99, frac);
      }
    }
  }
  return out;
}

}  // namespace gapcert
