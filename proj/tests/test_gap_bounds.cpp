#include <doctest.h>

#include <cmath>
#include <complex>

#include "gapcert/errors.hpp"
#include "gapcert/gap_bounds.hpp"
#include "support/gen.hpp"

using namespace gapcert;
using gapcert::testing::expm;
using gapcert::testing::Gen;

namespace {

BlockSaddle random_saddle(Gen& g) {
  std::size_t m = g.integer(1, 6), k = g.integer(1, 6);
  if (g.coin()) k = m;
  BlockSaddle H;
  H.A = g.psd(m, g.coin() ? m : g.integer(0, m), 0.05, 3.0);
  H.C = g.psd(k, g.coin() ? k : g.integer(0, k), 0.05, 3.0);
  H.B = g.matrix(m, k, g.uniform(0.1, 3.0));
  if (g.integer(0, 5) == 0) H.B = Matrix(m, k);
  return H;
}

double inv_norm(const Matrix& H) {
  auto v = sym_eigvals(H);
  double mn = INFINITY;
  for (double x : v) mn = std::min(mn, std::fabs(x));
  return 1.0 / mn;
}

}  // namespace

TEST_CASE("diag gap on the identity blocks") {
  BlockSaddle H{Matrix::identity(2), Matrix(2, 2), Matrix::identity(2)};
  auto g = diag_gap(H);
  CHECK(g.lo == doctest::Approx(-1.0));
  CHECK(g.hi == doctest::Approx(1.0));
  CHECK(*g.inv_norm_bound == doctest::Approx(1.0));
  CHECK_THROWS_AS(diag_gap({Matrix{{1, 0}, {0, 0}}, Matrix(2, 2), Matrix::identity(2)}), Error);
}

TEST_CASE("stretch certificate is exact on a scalar example") {
  // eigenvalues of [[2, 1], [1, -1]] are (1 +- sqrt(13)) / 2
  auto g = stretch_certificate({Matrix{{2}}, Matrix{{1}}, Matrix{{1}}});
  CHECK(g.lo == doctest::Approx((1.0 - std::sqrt(13.0)) / 2.0).epsilon(1e-14));
  CHECK(g.hi == doctest::Approx((1.0 + std::sqrt(13.0)) / 2.0).epsilon(1e-14));
}

TEST_CASE("hbinv certificate on a pure off-diagonal matrix") {
  auto g = hbinv_certificate({Matrix(2, 2), Matrix::identity(2), Matrix(2, 2)});
  CHECK(*g.inv_norm_bound == doctest::Approx(1.0));
  try {
    hbinv_certificate({Matrix::identity(2), Matrix(2, 3), Matrix::identity(3)});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BNotInvertible);
  }
  try {
    hbinv_certificate({Matrix::identity(2), Matrix{{1, 0}, {0, 0}}, Matrix::identity(2)});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnboundedRelativeBound);
  }
}

TEST_CASE("zero dichotomy errors") {
  try {
    zero_dichotomy_certificate({Matrix{{1, 0}, {0, 0}}, Matrix::identity(2), Matrix::identity(2)});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  try {
    zero_dichotomy_certificate({Matrix{{1, 0}, {0, 0}}, Matrix{{0, 1}, {1, 0}}, Matrix{{1, 0}, {0, 0}}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::B22Singular);
  }
}

TEST_CASE("kirsch errors and the matrix at t = 5") {
  try {
    kirsch_certificate(Matrix{{1, 0}, {0, 0}}, Matrix{{0, 0}, {0, 1}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BothSemidefiniteSingular);
  }
  // l^4 - 36 l^2 + 148 = 0
  auto v = sym_eigvals(curve_matrix(CurveFamily::KirschBt, 5.0));
  double small = std::sqrt(18.0 - std::sqrt(176.0)), big = std::sqrt(18.0 + std::sqrt(176.0));
  CHECK(v[0] == doctest::Approx(-big).epsilon(1e-13));
  CHECK(v[1] == doctest::Approx(-small).epsilon(1e-13));
  CHECK(v[3] == doctest::Approx(big).epsilon(1e-13));
}

TEST_CASE("property: every certificate is sound against the eigenvalue oracle") {
  Gen g(101);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    BlockSaddle H = random_saddle(g);
    Matrix M = H.assemble();
    auto eigs = sym_eigvals(M);
    double zero_tol = rank_tolerance(M);
    auto check = [&](auto&& make) {
      try {
        GapCertificate c = make();
        ++checked;
        CHECK_MESSAGE(c.sound_for(eigs, 1e-10, zero_tol), to_string(c.method));
        if (c.inv_norm_bound && c.claim == Claim::Empty) {
          CHECK(inv_norm(M) <= *c.inv_norm_bound * (1.0 + 1e-9));
        }
      } catch (const Error&) {
      }
    };
    check([&] { return diag_gap(H); });
    check([&] { return stretch_certificate(H); });
    check([&] { return hbinv_certificate(H); });
    check([&] { return zero_dichotomy_certificate(H); });
    try {
      double w = winklmeier_bound(H);
      for (double x : eigs) CHECK(std::fabs(x) >= w - 1e-10);
    } catch (const Error&) {
    }
  }
  CHECK(checked > 400);
}

TEST_CASE("property: kirsch radius is sound") {
  Gen g(102);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = g.integer(1, 6);
    Matrix A = g.coin() ? g.psd(n, g.integer(0, n)) : g.symmetric(n, 2.0);
    Matrix B = g.coin() ? g.psd(n, g.integer(0, n)) : g.symmetric(n, 2.0);
    try {
      auto c = kirsch_certificate(A, B);
      auto eigs = sym_eigvals(assemble(A, B, B, -A));
      CHECK(c.sound_for(eigs, 1e-10, 0.0));
    } catch (const Error&) {
    }
  }
}

TEST_CASE("property: scaled hbinv and dichotomy bounds") {
  Gen g(103);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = g.integer(1, 5);
    BlockSaddle H{g.psd(n, g.integer(0, n)), g.with_singular_values(n, n, g.vector(n, 0.3, 2.0)), g.psd(n, g.integer(0, n))};
    for (double t : {0.5, 1.0, 10.0}) {
      BlockSaddle Ht{H.A, t * H.B, H.C};
      CHECK(inv_norm(Ht.assemble()) <= hbinv_scaled_bound(H, t) * (1.0 + 1e-9));
    }
  }
  BlockSaddle H{Matrix{{1, 0}, {0, 0}}, Matrix{{1, 1}, {0, 1}}, Matrix{{2, 0}, {0, 0}}};
  CHECK(zero_dichotomy_scaled_epsilon(H, 2.0) == doctest::Approx(2.0 * zero_dichotomy_scaled_epsilon(H, 1.0)));
}

TEST_CASE("property: inverse of I + AC and the norm floor") {
  Gen g(104);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = g.integer(1, 6);
    Matrix A = g.psd(n, g.integer(0, n)), C = g.psd(n, g.integer(0, n));
    double actual = op_norm(inverse(Matrix::identity(n) + A * C));
    CHECK(actual <= inv_IplusAC_bound(A, C) * (1.0 + 1e-10));
    auto floor = verify_norm_floor(A, C);
    CHECK(floor.norm >= 1.0 - 1e-12);
    CHECK(floor.equality_iff_zero == ((A * C).max_abs() <= 1e-12 * std::max(1.0, op_norm(A) * op_norm(C))));
  }
}

TEST_CASE("property: func_calc_AC reproduces the exponential") {
  Gen g(105);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = g.integer(1, 5);
    Matrix A = g.psd(n, g.integer(0, n)), C = g.psd(n, g.integer(0, n));
    for (double t : {0.1, 1.0}) {
      Matrix F = func_calc_AC(A, C, 1.0, [t](double x) { return x > 0.0 ? std::expm1(-t * x) / x : -t; });
      Matrix E = expm(-t * (A * C));
      CHECK((F - E).max_abs() <= 1e-9);
    }
  }
}

TEST_CASE("property: quartic roots of the 4x4 family match the embedding") {
  Gen g(106);
  using cplx = std::complex<double>;
  for (int trial = 0; trial < 200; ++trial) {
    Quartic4x4Params p;
    p.sign = g.coin() ? 1 : -1;
    p.a_plus = g.uniform(-2, 2);
    p.a_minus = g.uniform(-2, 2);
    p.a = cplx(g.uniform(), g.uniform());
    p.b = cplx(g.uniform(), g.uniform());
    if (p.sign == 1) {
      p.b_plus = g.uniform(-2, 2);
      p.b_minus = g.uniform(-2, 2);
    } else {
      p.b_plus = cplx(0.0, g.uniform(-2, 2));
      p.b_minus = cplx(0.0, g.uniform(-2, 2));
    }
    auto roots = eig_4x4(p);
    auto emb = sym_eigvals(p.real_embedding());
    for (int i = 0; i < 4; ++i) {
      CHECK(emb[2 * i] == doctest::Approx(roots[i]).epsilon(1e-9).scale(1.0));
      CHECK(emb[2 * i + 1] == doctest::Approx(roots[i]).epsilon(1e-9).scale(1.0));
    }
  }
  Quartic4x4Params bad;
  bad.sign = -1;
  bad.b_plus = 1.0;
  CHECK_THROWS_AS(eig_4x4(bad), Error);
}

TEST_CASE("non-monotone curves") {
  std::vector<double> grid;
  for (int i = 0; i <= 150; ++i) grid.push_back(5.0 + 15.0 * i / 150.0);
  auto kb = nonmono_curve(grid, CurveFamily::KirschBt);
  auto peak = std::max_element(kb.begin(), kb.end(), [](auto& a, auto& b) { return a.min_abs_eig < b.min_abs_eig; });
  CHECK(peak->t == doctest::Approx(17.0).epsilon(0.01));
  CHECK(peak->min_abs_eig == doctest::Approx(2.2491).epsilon(1e-4));
  auto simple = nonmono_curve(grid, CurveFamily::Simple);
  for (const auto& p : simple) CHECK(p.det == doctest::Approx(1.0).epsilon(1e-10));
  for (std::size_t i = 1; i < simple.size(); ++i) CHECK(simple[i].min_abs_eig < simple[i - 1].min_abs_eig);
  CHECK(parse_curve_family("scaled_A") == CurveFamily::ScaledA);
  CHECK_THROWS_AS(parse_curve_family("nope"), Error);
}

TEST_CASE("counterexample suite") {
  auto r = counterexample_suite();
  CHECK(r.bottcher_norm == doctest::Approx(21.17675).epsilon(1e-6));
  CHECK(r.bottcher_inv_norm == doctest::Approx(43.77353).epsilon(1e-6));
  CHECK(r.conjecture_violated);
  CHECK(r.ballantine_residual <= 3.0 * 3.0 * kMachEps * op_norm(r.ballantine_A) * op_norm(r.ballantine_C));
  for (const auto& row : r.omladic) CHECK(row.inv_norm == doctest::Approx(row.closed_form).epsilon(1e-12));
  CHECK(r.omladic.back().inv_norm >= 100.0 / 3.0);
  CHECK(r.commuting_inv_norm == doctest::Approx(0.5));
  CHECK(min_eigenvalue(r.ballantine_A) >= -1e-12);
  CHECK(min_eigenvalue(r.ballantine_C) >= -1e-12);
}
