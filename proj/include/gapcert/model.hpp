#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gapcert/linalg.hpp"
#include "gapcert/matrix.hpp"

namespace gapcert {

struct UniformLaw {
  double a = -3.0;
  double b = 3.0;
  std::uint64_t seed = 0;
};

struct ModelSpec {
  std::size_t m = 2;
  double c = 0.0;
  std::optional<UniformLaw> disorder;

  void validate() const;
};

/// Seeded draw of m values from U[a, b] (53-bit mantissa scaling).
std::vector<double> draw_uniform(const UniformLaw& law, std::size_t m);

struct ModelBlocks {
  Matrix A;
  Matrix B;
};

ModelBlocks build_blocks(const ModelSpec& spec);
Matrix build_Hc(const ModelSpec& spec);
Matrix build_Kc(const ModelSpec& spec);
Bidiagonal build_Tc(const ModelSpec& spec);
Matrix build_Wc(const ModelSpec& spec);
/// U = [[I, I], [I, -I]] / sqrt(2) of order 2m.
Matrix build_U(std::size_t m);

struct HypRoot {
  double alpha1 = 0.0;
  double delta = 0.0;  // alpha1 - alpha0
  double log_lambda1 = 0.0;
};

struct SecularRoots {
  std::vector<double> trig_roots;
  std::optional<HypRoot> hyp_root;
  std::optional<double> alpha_hat;

  /// Eigenvalues of W_c ascending; the hyperbolic one is exp(log_lambda1).
  std::vector<double> eigenvalues(double c) const;
};

SecularRoots secular_solve(const ModelSpec& spec);
/// (1 - c cos a) sin(m a) - c cos(m a) sin(a).
double secular_residual(double alpha, std::size_t m, double c);
/// 4 sin^2((2k - 1) pi / (2 (2m + 1))), the c = 1 eigenvalues of W_1.
std::vector<double> c1_closed_form(std::size_t m);

struct SpuriousEstimate {
  double alpha0 = 0.0;
  double log_lambda_est = 0.0;  // ln(4c) - 2 m alpha0
  double log_sigma_est = 0.0;
  double log_lambda_first_order = 0.0;  // 2 ln(1 - c^2) - 2 m alpha0
  double log_sigma_first_order = 0.0;
};

SpuriousEstimate spurious_estimate(const ModelSpec& spec);

struct StableGap {
  double radius = 0.0;
};

StableGap stable_gap(double c);

struct StableGapCheck {
  std::size_t m = 0;
  std::size_t inside_count = 0;       // eigenvalues of H_c strictly inside (-r, r)
  double min_outside = 0.0;           // smallest |eigenvalue| outside the interval
  double max_inside_abs = 0.0;        // largest inside magnitude (2 sigma_min from HRA)
  double magnitude_cap = 0.0;         // 2 (1 + 1e-2) exp(log_sigma_est) for 0 < c < 1
  bool pass = false;
};

std::vector<StableGapCheck> verify_stable_gap(double c, const std::vector<std::size_t>& m_list);

struct ModifiedMatrices {
  Matrix K_tilde;
  Matrix H_tilde;
};

ModifiedMatrices build_modified(const ModelSpec& spec);
std::vector<double> modified_spectrum_closed_form(const ModelSpec& spec);

struct SymbolSpectrum {
  std::pair<double, double> w_band;
  std::pair<double, double> h_negative;
  std::pair<double, double> h_positive;
};

SymbolSpectrum symbol_spectrum(double c);

/// Fraction of the eigenvector mass of the smallest eigenvalue of W_c that sits
/// on the heavier boundary quarter of indices.
double spurious_localization(const ModelSpec& spec);

struct DisorderReport {
  std::vector<double> omega;
  std::vector<double> near_zero_H;        // ascending, count_near_zero values
  std::vector<double> near_zero_Htilde;   // ascending
  double central_sigma = 0.0;             // smallest singular value of A_omega - B (HRA)
  double log10_central = 0.0;
  double symmetry_error_H = 0.0;
  double symmetry_error_Htilde = 0.0;
  std::vector<double> abs_sorted_H;       // |eigenvalues| ascending
  std::vector<double> abs_sorted_Htilde;
};

DisorderReport disorder_experiment(const ModelSpec& spec, std::size_t count_near_zero);

struct ScanRow {
  double M = 0.0;
  std::string variant;  // "H" or "Htilde"
  std::size_t index = 0;
  double eigenvalue = 0.0;
};

std::vector<ScanRow> gap_scan(const std::vector<double>& M_list, double delta, std::size_t m, std::uint64_t seed);

struct InvariantResult {
  std::string name;
  std::size_t m = 0;
  double c = 0.0;
  bool pass = false;
  double measure = 0.0;
};

std::vector<InvariantResult> verify_model(const std::vector<std::size_t>& m_list, const std::vector<double>& c_list);

/// max_i |lambda_i + lambda_{n+1-i}| / max(1, |lambda|_max) of an ascending spectrum.
double symmetry_error(const std::vector<double>& ascending);

}  // namespace gapcert
