#include "gapcert/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "gapcert/errors.hpp"

namespace gapcert {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotFinite: return "NotFinite";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotDefinite: return "NotDefinite";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BNotInvertible: return "BNotInvertible";
    case ErrorCode::UnboundedRelativeBound: return "UnboundedRelativeBound";
    case ErrorCode::B22Singular: return "B22Singular";
    case ErrorCode::BothSemidefiniteSingular: return "BothSemidefiniteSingular";
    case ErrorCode::NegativeDiscriminant: return "NegativeDiscriminant";
    case ErrorCode::DegenerateDirection: return "DegenerateDirection";
    case ErrorCode::NABViolated: return "NABViolated";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::EtaOutOfRange: return "EtaOutOfRange";
    case ErrorCode::RootCountMismatch: return "RootCountMismatch";
    case ErrorCode::OutOfRegime: return "OutOfRegime";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Parse: return "ParseError";
  }
  return "Unknown";
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::DimensionMismatch, "entry count does not match shape");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::column(std::span<const double> v) {
  return Matrix(v.size(), 1, std::vector<double>(v.begin(), v.end()));
}

std::vector<double> Matrix::col(std::size_t j) const {
  std::vector<double> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

std::vector<double> Matrix::diag() const {
  std::vector<double> v(std::min(rows_, cols_));
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = (*this)(i, i);
  return v;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) {
    throw Error(ErrorCode::DimensionMismatch, "block out of range");
  }
  Matrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) {
    throw Error(ErrorCode::DimensionMismatch, "block out of range");
  }
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::DimensionMismatch, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

double Matrix::frobenius() const {
  double scale = 0.0, ssq = 1.0;
  for (double x : data_) {
    if (x == 0.0) continue;
    double ax = std::fabs(x);
    if (scale < ax) {
      ssq = 1.0 + ssq * (scale / ax) * (scale / ax);
      scale = ax;
    } else {
      ssq += (ax / scale) * (ax / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::fabs(x));
  return m;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "operator*");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector");
  std::vector<double> y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

Matrix assemble(const Matrix& tl, const Matrix& tr, const Matrix& bl, const Matrix& br) {
  std::size_t top = std::max(tl.rows(), tr.rows());
  std::size_t bottom = std::max(bl.rows(), br.rows());
  std::size_t left = std::max(tl.cols(), bl.cols());
  std::size_t right = std::max(tr.cols(), br.cols());
  auto check = [](const Matrix& m, std::size_t r, std::size_t c) {
    if ((m.rows() != r || m.cols() != c) && !(m.empty() && (r == 0 || c == 0))) {
      throw Error(ErrorCode::DimensionMismatch, "assemble: inconsistent block shapes");
    }
  };
  check(tl, top, left);
  check(tr, top, right);
  check(bl, bottom, left);
  check(br, bottom, right);
  Matrix h(top + bottom, left + right);
  if (!tl.empty()) h.set_block(0, 0, tl);
  if (!tr.empty()) h.set_block(0, left, tr);
  if (!bl.empty()) h.set_block(top, 0, bl);
  if (!br.empty()) h.set_block(top, left, br);
  return h;
}

double asymmetry(const Matrix& m) {
  if (!m.square()) return INFINITY;
  double scale = m.max_abs();
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) worst = std::max(worst, std::fabs(m(i, j) - m(j, i)));
  return worst / scale;
}

Matrix symmetrize(const Matrix& m) {
  Matrix s = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) s(i, j) = s(j, i) = 0.5 * (m(i, j) + m(j, i));
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) {
  return Matrix(v.size(), 1, std::vector<double>(v.begin(), v.end())).frobenius();
}

namespace {

bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

double parse_number(const std::string& tok, std::size_t lineno) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": bad number '" + tok + "'");
  }
  if (used != tok.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": bad number '" + tok + "'");
  }
  return v;
}

}  // namespace

Matrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!next_content_line(in, line, lineno)) throw Error(ErrorCode::Parse, "missing matrix header");
  std::istringstream hdr(line);
  long long r = -1, c = -1;
  std::string extra;
  if (!(hdr >> r >> c) || (hdr >> extra) || r < 0 || c < 0) {
    throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": expected 'rows cols'");
  }
  Matrix m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  for (long long i = 0; i < r; ++i) {
    if (!next_content_line(in, line, lineno)) {
      throw Error(ErrorCode::Parse, "expected " + std::to_string(r) + " rows, got " + std::to_string(i));
    }
    std::istringstream row(line);
    std::string tok;
    long long j = 0;
    while (row >> tok) {
      if (j >= c) throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": too many entries");
      m(i, j++) = parse_number(tok, lineno);
    }
    if (j != c) throw Error(ErrorCode::Parse, "line " + std::to_string(lineno) + ": too few entries");
  }
  return m;
}

Matrix parse_matrix(const std::string& text) {
  std::istringstream in(text);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace gapcert
