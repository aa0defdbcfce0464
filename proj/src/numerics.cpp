#include "robustik/numerics.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "robustik/error.hpp"

namespace robustik {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonSymmetric: return "NonSymmetric";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NonUnitDirection: return "NonUnitDirection";
    case ErrorKind::NonOrthonormalBasis: return "NonOrthonormalBasis";
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::EmptyIKSet: return "EmptyIKSet";
  }
  return "Unknown";
}

Mat::Mat(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorKind::DimensionMismatch, "matrix needs at least one row and column");
  }
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows)
    : Mat(rows.size(), rows.size() == 0 ? 0 : rows.begin()->size()) {
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged initializer");
    std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(r * cols_));
    ++r;
  }
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat Mat::diagonal(std::span<const double> values) {
  Mat m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

Mat Mat::column(std::span<const double> values) {
  Mat m(values.size(), 1);
  std::copy(values.begin(), values.end(), m.data_.begin());
  return m;
}

std::vector<double> Mat::col(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void Mat::set_col(std::size_t c, Vec3 v) {
  for (std::size_t r = 0; r < 3; ++r) (*this)(r, c) = v[r];
}

Vec3 Mat::col3(std::size_t c) const { return {(*this)(0, c), (*this)(1, c), (*this)(2, c)}; }

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double Mat::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Mat::frobenius() const {
  return std::sqrt(std::inner_product(data_.begin(), data_.end(), data_.begin(), 0.0));
}

bool Mat::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorKind::DimensionMismatch, "matrix product");
  Mat out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

Mat operator+(const Mat& a, const Mat& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::DimensionMismatch, "sum");
  Mat out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

Mat operator-(const Mat& a, const Mat& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::DimensionMismatch, "difference");
  Mat out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] -= b.data_[i];
  return out;
}

Mat operator*(double s, const Mat& a) {
  Mat out = a;
  for (double& v : out.data_) v *= s;
  return out;
}

std::vector<double> multiply(const Mat& m, std::span<const double> x) {
  if (m.cols() != x.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) y[r] += m(r, c) * x[c];
  return y;
}

Vec3 multiply3(const Mat& m, std::span<const double> x) {
  if (m.rows() != 3) throw Error(ErrorKind::DimensionMismatch, "expected 3 rows");
  const auto y = multiply(m, x);
  return {y[0], y[1], y[2]};
}

Mat gram(const Mat& m) {
  Mat g(m.rows(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.rows(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < m.cols(); ++k) s += m(i, k) * m(j, k);
      g(i, j) = s;
      g(j, i) = s;
    }
  return g;
}

bool is_symmetric(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.max_abs());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol * scale) return false;
  return true;
}

namespace {

void require_symmetric(const Mat& m, const char* who) {
  if (!m.all_finite()) throw Error(ErrorKind::NonFinite, std::string(who) + ": non-finite entry");
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, std::string(who) + ": not square");
  if (!is_symmetric(m)) throw Error(ErrorKind::NonSymmetric, who);
}

double off_diagonal_norm(const Mat& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

std::vector<EigenPair> sym_eig(const Mat& m) {
  require_symmetric(m, "sym_eig");
  const std::size_t n = m.rows();

  // Work on the symmetrized copy so tiny asymmetries do not bias the result.
  Mat a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  Mat v = Mat::identity(n);

  const double scale = a.frobenius();
  const double threshold = 1e-15 * scale;
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps && scale > 0.0; ++sweep) {
    if (off_diagonal_norm(a) < threshold) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rotation angle that zeroes a(p,q); stable form from Golub & Van Loan.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<EigenPair> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pairs.push_back({a(i, i), v.col(i)});
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& l, const EigenPair& r) { return l.value > r.value; });
  return pairs;
}

EigenPair sym_eig_max(const Mat& m) { return sym_eig(m).front(); }

Mat cholesky_lower(const Mat& m) {
  require_symmetric(m, "cholesky_lower");
  const std::size_t n = m.rows();
  Mat l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) {
      throw Error(ErrorKind::NotPositiveDefinite, "pivot " + std::to_string(j) + " is not positive");
    }
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

std::vector<double> cholesky_solve(const Mat& lower, std::span<const double> b) {
  const std::size_t n = lower.rows();
  if (b.size() != n) throw Error(ErrorKind::DimensionMismatch, "cholesky_solve rhs");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * y[k];
    y[i] = s / lower(i, i);
  }
  std::vector<double> x(n);
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= lower(k, ii) * x[k];
    x[ii] = s / lower(ii, ii);
  }
  return x;
}

Mat right_pseudo_inverse(const Mat& m) {
  if (!m.all_finite()) throw Error(ErrorKind::NonFinite, "right_pseudo_inverse");
  if (m.rows() > m.cols()) throw Error(ErrorKind::DimensionMismatch, "right pseudo-inverse needs rows <= cols");
  const Mat g = gram(m);
  const auto eig = sym_eig(g);
  const double hi = eig.front().value;
  const double lo = eig.back().value;
  if (!(hi > 0.0) || !(lo > 0.0) || hi / lo > 1e12) {
    throw Error(ErrorKind::RankDeficient, "m mᵀ is singular (kinematic singularity)");
  }
  const Mat l = cholesky_lower(g);
  // Column j of (m mᵀ)⁻¹ from one triangular solve pair per unit vector.
  Mat inv(g.rows(), g.rows());
  std::vector<double> e(g.rows(), 0.0);
  for (std::size_t j = 0; j < g.rows(); ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    const auto x = cholesky_solve(l, e);
    for (std::size_t i = 0; i < g.rows(); ++i) inv(i, j) = x[i];
  }
  return m.transpose() * inv;
}

double det_small(const Mat& m) {
  if (m.rows() == 2 && m.cols() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (m.rows() == 3 && m.cols() == 3) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  }
  throw Error(ErrorKind::DimensionMismatch, "det_small supports 2x2 and 3x3");
}

}  // namespace robustik
