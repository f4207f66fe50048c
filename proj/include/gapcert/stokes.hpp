#pragma once

#include <string_view>
#include <vector>

#include "gapcert/gap_bounds.hpp"
#include "gapcert/matrix.hpp"

namespace gapcert {

/// H = [[A, B], [B^T, 0]] with A (m x m) symmetric PSD and B (m x k).
struct StokesMatrix {
  Matrix A;
  Matrix B;

  std::size_t m() const { return A.rows(); }
  std::size_t k() const { return B.cols(); }
  Matrix assemble() const;
  BlockSaddle saddle() const;
  void validate() const;
  /// N(A) ∩ N(B^T) = {0}.
  bool nab_holds(double tol_rank = -1.0) const;
};

struct PencilSpectrum {
  std::vector<double> lambda_minus;  // ascending, length m when (NAB) holds
  std::vector<double> lambda_plus;   // descending, length m when (NAB) holds
  std::size_t zero_multiplicity = 0; // zero eigenvalues of H
  std::size_t negative_count = 0;    // nonzero negative eigenvalues of H
  std::vector<double> h_eigenvalues; // all eigenvalues of H, ascending
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
  bool within(const Interval& outer, double tol = 0.0) const {
    return lo >= outer.lo - tol && hi <= outer.hi + tol;
  }
};

enum class IntervalSource { Minimal, RuWa, Axel, NewEstimate };
std::string_view to_string(IntervalSource source);

struct IntervalPair {
  Interval i_minus;
  Interval i_plus;
  IntervalSource source = IntervalSource::Minimal;
};

struct RayleighP {
  double p_plus = 0.0;
  double p_minus = 0.0;
};

struct PerturbationSpec {
  double eta = 0.0;
};

struct EigenEnclosure {
  char branch = '+';  // '+' or '-'
  std::size_t index = 0;
  double value = 0.0;
  Interval bounds;
};

RayleighP rayleigh_p(const std::vector<double>& x, const StokesMatrix& S);
PencilSpectrum pencil_spectrum(const StokesMatrix& S, double tol_rank = -1.0);
IntervalPair minimal_intervals(const StokesMatrix& S, double tol_rank = -1.0);
IntervalPair ruwa_intervals(const StokesMatrix& S);
IntervalPair axel_intervals(const StokesMatrix& S);
GapCertificate new_gap_estimate(const StokesMatrix& S);
/// Negative-branch enclosures assume | |B^T x|^2 - |B^^T x|^2 | <= eta |B^T x|^2 for the perturbed B^.
std::vector<EigenEnclosure> perturbation_bounds(const PencilSpectrum& base, const PerturbationSpec& spec);

}  // namespace gapcert
