#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "gapcert/matrix.hpp"

namespace gapcert {

inline constexpr double kMachEps = 0x1p-52;
inline constexpr double kTolSym = 1e-12;
inline constexpr double kTolPsd = 1e-10;

struct EigenDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns orthonormal
};

struct SingularDecomposition {
  std::vector<double> singular_values;  // descending
  Matrix left;                          // m x p
  Matrix right;                         // k x p, p = min(m, k)
};

enum class Orientation { Lower, Upper };

struct Bidiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;
  Orientation orientation = Orientation::Upper;

  Matrix dense() const;
  Bidiagonal transposed() const;
};

/// n * 2^-52 * ||M||, the default absolute rank threshold for M.
double rank_tolerance(const Matrix& M);

/// Cyclic Jacobi. Throws NotSymmetric, NotFinite.
EigenDecomposition sym_eig(const Matrix& M);
std::vector<double> sym_eigvals(const Matrix& M);

/// Largest singular value.
double op_norm(const Matrix& M);

/// Singular values only, descending, from the symmetric embedding [[0, M], [M^T, 0]].
std::vector<double> singular_values(const Matrix& M);

/// Thin SVD with vectors (one-sided Jacobi).
SingularDecomposition svd(const Matrix& M);

Matrix psd_sqrt(const Matrix& M, double tol_psd = kTolPsd);

/// L with L L^T = M; one column per eigenvalue above the rank threshold.
Matrix psd_factor(const Matrix& M, double tol_psd = kTolPsd, double tol_rank = -1.0);

/// B = U P with U orthogonal and P = sqrt(B^T B). Throws Singular.
std::pair<Matrix, Matrix> polar_factors(const Matrix& B, double tol_rank = -1.0);

/// Singular values of the complex matrix A - iB, descending.
std::vector<double> complex_svd_via_embedding(const Matrix& A, const Matrix& B);

/// Singular values of a bidiagonal matrix to high relative accuracy, descending.
std::vector<double> bidiag_svd_hra(const Bidiagonal& T);

/// Orthonormal basis of {x : ||Mx|| <= tol_rank ||x||}. A negative tol_rank
/// selects rank_tolerance(M).
Matrix null_space_basis(const Matrix& M, double tol_rank = -1.0);

/// Columns of Q orthonormal spanning the orthogonal complement of span(Q) in R^n.
Matrix orthogonal_complement(const Matrix& Q);

/// f applied to the eigenvalues of symmetric M.
Matrix spectral_function(const Matrix& M, const std::function<double(double)>& f);

double min_eigenvalue(const Matrix& M);
double max_eigenvalue(const Matrix& M);

/// Throws NotPSD unless min eigenvalue >= -tol_psd * ||M||.
void require_psd(const Matrix& M, const char* name, double tol_psd = kTolPsd);

/// LU with partial pivoting. Throws Singular.
Matrix solve(const Matrix& A, const Matrix& B);
Matrix inverse(const Matrix& A);

}  // namespace gapcert
