#include <doctest.h>

#include <cmath>

#include "gapcert/errors.hpp"
#include "gapcert/stokes.hpp"
#include "support/gen.hpp"

using namespace gapcert;
using gapcert::testing::Gen;

namespace {

/// k >= m with B^T injective, so (NAB) holds and both branches have m entries.
StokesMatrix random_stokes(Gen& g, bool square = false) {
  std::size_t m = g.integer(1, 6);
  std::size_t k = square ? m : g.integer(m, 7);
  std::vector<double> s(m);
  for (auto& x : s) x = g.uniform(0.2, 2.0);
  return {g.psd(m, g.integer(0, m), 0.1, 3.0), g.with_singular_values(m, k, s)};
}

}  // namespace

TEST_CASE("scalar Stokes matrix has the golden-ratio eigenvalues") {
  StokesMatrix S{Matrix{{1}}, Matrix{{1}}};
  auto ps = pencil_spectrum(S);
  CHECK(ps.lambda_plus[0] == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-14));
  CHECK(ps.lambda_minus[0] == doctest::Approx((1.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-14));
  auto p = rayleigh_p({1.0}, S);
  CHECK(p.p_plus == doctest::Approx(ps.lambda_plus[0]));
  CHECK(p.p_minus == doctest::Approx(ps.lambda_minus[0]));
}

TEST_CASE("A = 0, B = I gives the branches -1 and 1") {
  StokesMatrix S{Matrix(3, 3), Matrix::identity(3)};
  auto mi = minimal_intervals(S);
  CHECK(mi.i_minus.lo == doctest::Approx(-1.0));
  CHECK(mi.i_minus.hi == doctest::Approx(-1.0));
  CHECK(mi.i_plus.lo == doctest::Approx(1.0));
  auto g = new_gap_estimate(S);
  CHECK(g.lo == doctest::Approx(-1.0));
  CHECK(g.hi == doctest::Approx(1.0));
}

TEST_CASE("precondition failures") {
  StokesMatrix bad{Matrix{{1, 0}, {0, 0}}, Matrix{{1}, {0}}};
  try {
    minimal_intervals(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NABViolated);
  }
  try {
    rayleigh_p({0.0, 1.0}, bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateDirection);
  }
  CHECK_THROWS_AS(rayleigh_p({1.0, 1.0}, bad), Error);
  CHECK_THROWS_AS(perturbation_bounds({}, {1.0}), Error);
  CHECK_THROWS_AS(ruwa_intervals({Matrix{{1, 0}, {0, 0}}, Matrix::identity(2)}), Error);
  CHECK_THROWS_AS(new_gap_estimate({Matrix::identity(2), Matrix{{1}, {0}}}), Error);
}

TEST_CASE("property: minimal endpoints are eigenvalues and Rayleigh values stay inside") {
  Gen g(201);
  for (int trial = 0; trial < 200; ++trial) {
    StokesMatrix S = random_stokes(g);
    auto mi = minimal_intervals(S);
    auto eigs = sym_eigvals(S.assemble());
    auto near = [&](double x) {
      double d = INFINITY;
      for (double v : eigs) d = std::min(d, std::fabs(v - x));
      return d;
    };
    for (double e : {mi.i_minus.lo, mi.i_minus.hi, mi.i_plus.lo, mi.i_plus.hi}) CHECK(near(e) <= 1e-10);
    CHECK(mi.i_minus.hi < 0.0);
    CHECK(mi.i_plus.lo > 0.0);
    for (int j = 0; j < 5; ++j) {
      auto x = g.unit_vector(S.m());
      auto p = rayleigh_p(x, S);
      CHECK(mi.i_plus.contains(p.p_plus, 1e-10));
      CHECK(mi.i_minus.contains(p.p_minus, 1e-10));
    }
  }
}

TEST_CASE("property: minimal intervals nest in both definite estimates") {
  Gen g(202);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t m = g.integer(1, 6);
    StokesMatrix S{g.pd(m, 0.2, 3.0), g.with_singular_values(m, m, g.vector(m, 0.2, 2.0))};
    auto mi = minimal_intervals(S);
    for (const auto& other : {ruwa_intervals(S), axel_intervals(S)}) {
      CHECK(mi.i_minus.within(other.i_minus, 1e-10));
      CHECK(mi.i_plus.within(other.i_plus, 1e-10));
    }
    auto cert = new_gap_estimate(S);
    CHECK(cert.sound_for(sym_eigvals(S.assemble()), 1e-10, 0.0));
  }
}

TEST_CASE("property: branches move monotonically") {
  Gen g(203);
  for (int trial = 0; trial < 100; ++trial) {
    StokesMatrix S = random_stokes(g);
    auto base = pencil_spectrum(S);
    StokesMatrix up{S.A + g.psd(S.m(), g.integer(0, S.m())), S.B};
    auto pa = pencil_spectrum(up);
    for (std::size_t i = 0; i < S.m(); ++i) {
      CHECK(pa.lambda_plus[i] >= base.lambda_plus[i] - 1e-10);
      CHECK(pa.lambda_minus[i] >= base.lambda_minus[i] - 1e-10);
    }
    StokesMatrix wide{S.A, assemble(S.B, g.matrix(S.m(), g.integer(1, 2)), Matrix(), Matrix())};
    auto pb = pencil_spectrum(wide);
    for (std::size_t i = 0; i < S.m(); ++i) {
      CHECK(pb.lambda_plus[i] >= base.lambda_plus[i] - 1e-10);
      CHECK(pb.lambda_minus[i] <= base.lambda_minus[i] + 1e-10);
    }
  }
}

TEST_CASE("property: relative perturbation enclosures") {
  Gen g(204);
  for (int trial = 0; trial < 100; ++trial) {
    StokesMatrix S = random_stokes(g, true);
    const double eta = g.uniform(0.0, 0.9);
    Matrix Sm = g.symmetric(S.m());
    Sm = (1.0 / std::max(1e-12, op_norm(Sm))) * Sm;
    Matrix Sk = g.symmetric(S.k());
    Sk = (1.0 / std::max(1e-12, op_norm(Sk))) * Sk;
    Matrix Ah = psd_sqrt(S.A);
    // B^ = B (I + eta Sk)^(1/2) bounds both |B~^T y| and |B^^T y|^2 - |B^T y|^2 by eta.
    Matrix R = psd_sqrt(symmetrize(Matrix::identity(S.k()) + eta * Sk));
    StokesMatrix P{symmetrize(S.A + eta * (Ah * Sm * Ah)), S.B * R};
    auto base = pencil_spectrum(S);
    auto pert = pencil_spectrum(P);
    for (const auto& e : perturbation_bounds(base, {eta})) {
      double v = e.branch == '+' ? pert.lambda_plus[e.index - 1] : pert.lambda_minus[e.index - 1];
      CHECK(e.bounds.contains(v, 1e-10));
    }
  }
}

TEST_CASE("negative enclosure needs the quadratic bound on B") {
  // Scalar case: a -> (1 + eta) a, b -> (1 - eta) b keeps |b~| <= eta |b| but
  // lambda^- scales by about (1 - eta)^2 / (1 + eta) when b is small against a.
  const double eta = 0.5;
  StokesMatrix S{Matrix{{10.0}}, Matrix{{1.0}}};
  StokesMatrix P{Matrix{{15.0}}, Matrix{{0.5}}};
  auto enc = perturbation_bounds(pencil_spectrum(S), {eta});
  double v = pencil_spectrum(P).lambda_minus[0];
  for (const auto& e : enc) {
    if (e.branch == '-') CHECK_FALSE(e.bounds.contains(v, 1e-10));
    if (e.branch == '+') CHECK(e.bounds.contains(pencil_spectrum(P).lambda_plus[0], 1e-10));
  }
}
