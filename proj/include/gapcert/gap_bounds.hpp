#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gapcert/linalg.hpp"
#include "gapcert/matrix.hpp"

namespace gapcert {

/// H = [[A, B], [B^T, -C]] with A (m x m) and C (k x k) symmetric PSD.
struct BlockSaddle {
  Matrix A;
  Matrix B;
  Matrix C;

  std::size_t m() const { return A.rows(); }
  std::size_t k() const { return C.rows(); }
  Matrix assemble() const;
  /// Shapes, symmetry and the PSD threshold test. Throws on failure.
  void validate(double tol_psd = kTolPsd) const;
};

enum class Method { DiagGap, Stretch, HBInv, ZeroDichotomy, Kirsch, Winklmeier, StokesNew };

/// Empty: sigma(H) misses the interval. SubsetOfZero: only 0 may lie inside.
enum class Claim { Empty, SubsetOfZero };

std::string_view to_string(Method method);
std::string_view to_string(Claim claim);

struct GapCertificate {
  double lo = 0.0;
  double hi = 0.0;
  Method method = Method::DiagGap;
  Claim claim = Claim::Empty;
  std::optional<double> inv_norm_bound;
  std::map<std::string, double> quantities;

  bool is_empty() const { return !(lo < hi); }
  /// True if the spectrum `eigs` respects the claim with the given margin.
  bool sound_for(const std::vector<double>& eigs, double margin, double zero_tol) const;
};

struct NullSpaceReport {
  Matrix na_nb;  // basis of N(A) ∩ N(B^T)
  Matrix nc_nb;  // basis of N(C) ∩ N(B)
  bool singular = false;
};

struct RelativeBounds {
  double alpha = 0.0;
  double gamma = 0.0;
};

struct Quartic4x4Params {
  double a_plus = 0.0;
  double a_minus = 0.0;
  std::complex<double> a;
  std::complex<double> b_plus;
  std::complex<double> b_minus;
  std::complex<double> b;
  int sign = +1;  // B^* = sign * B

  /// Hermitian 4 x 4 [[A, B], [B^*, -A]] as its real 8 x 8 embedding [[Re, -Im], [Im, Re]].
  Matrix real_embedding() const;
  /// The 4 x 4 matrix itself; throws unless every entry is real.
  Matrix real_matrix() const;
};

NullSpaceReport null_space_H(const BlockSaddle& H, double tol_rank = -1.0);

GapCertificate diag_gap(const BlockSaddle& H);
GapCertificate stretch_certificate(const BlockSaddle& H);

double inv_IplusAC_bound(const Matrix& A, const Matrix& C);

struct NormFloor {
  double norm = 0.0;
  bool equality_iff_zero = false;
};
NormFloor verify_norm_floor(const Matrix& A, const Matrix& C, double tol = 1e-12);

RelativeBounds relative_bounds(const BlockSaddle& H);
GapCertificate hbinv_certificate(const BlockSaddle& H);
/// Inverse-norm bound for the instance with B replaced by tB.
double hbinv_scaled_bound(const BlockSaddle& H, double t);

GapCertificate zero_dichotomy_certificate(const BlockSaddle& H, double tol_rank = -1.0);
/// Large-t radius for B replaced by tB.
double zero_dichotomy_scaled_epsilon(const BlockSaddle& H, double t, double tol_rank = -1.0);

GapCertificate kirsch_certificate(const Matrix& A, const Matrix& B);

double winklmeier_bound(const BlockSaddle& H);

/// f(AC) = f(0) I + A C^{1/2} f1(C^{1/2} A C^{1/2}) C^{1/2}.
Matrix func_calc_AC(const Matrix& A, const Matrix& C, double f0, const std::function<double(double)>& f1);

/// Eigenvalues of the 4 x 4 family, ascending.
std::vector<double> eig_4x4(const Quartic4x4Params& p);

enum class CurveFamily { KirschBt, ScaledA, Simple };
std::string_view to_string(CurveFamily family);
CurveFamily parse_curve_family(std::string_view name);

struct CurvePoint {
  double t = 0.0;
  double min_abs_eig = 0.0;
  double det = 0.0;
};

/// Block matrix of the family at parameter t.
Matrix curve_matrix(CurveFamily family, double t);
std::vector<CurvePoint> nonmono_curve(const std::vector<double>& t_grid, CurveFamily family);

struct OmladicRow {
  double t = 0.0;
  double inv_norm = 0.0;
  double closed_form = 0.0;
};

struct CounterexampleReport {
  std::vector<OmladicRow> omladic;
  double bottcher_norm = 0.0;
  double bottcher_inv_norm = 0.0;
  bool conjecture_violated = false;
  Matrix ballantine_A;
  Matrix ballantine_C;
  double ballantine_residual = 0.0;
  double commuting_inv_norm = 0.0;
};

Matrix bottcher_matrix();
/// PSD A, C with A C = M for diagonalisable M with nonnegative eigenvalues.
std::pair<Matrix, Matrix> ballantine_split(const Matrix& M);
CounterexampleReport counterexample_suite(const std::vector<double>& omladic_t = {1.0, 10.0, 100.0});

}  // namespace gapcert
