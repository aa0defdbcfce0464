#pragma once

// Small dense linear algebra used throughout the library. Matrices here are
// at most 7x7 (Jacobians are 3xN or 6xN for N <= 7), so everything is a
// plain row-major std::vector with no expression templates.

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace robustik {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return s * a; }
  friend constexpr bool operator==(Vec3, Vec3) = default;
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

/// Dense row-major matrix with at least one row and one column.
class Mat {
 public:
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat identity(std::size_t n);
  static Mat diagonal(std::span<const double> values);
  static Mat column(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const noexcept { return data_; }
  std::vector<double> col(std::size_t c) const;
  void set_col(std::size_t c, Vec3 v);
  Vec3 col3(std::size_t c) const;

  Mat transpose() const;
  double max_abs() const;
  double frobenius() const;
  bool all_finite() const;

  friend Mat operator*(const Mat& a, const Mat& b);
  friend Mat operator+(const Mat& a, const Mat& b);
  friend Mat operator-(const Mat& a, const Mat& b);
  friend Mat operator*(double s, const Mat& a);
  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// y = m * x for a column vector x.
std::vector<double> multiply(const Mat& m, std::span<const double> x);
/// 3-row matrix times vector, returned as Vec3.
Vec3 multiply3(const Mat& m, std::span<const double> x);

/// m * mᵀ.
Mat gram(const Mat& m);

/// Symmetric within 1e-10 (scaled by the largest entry when that exceeds 1).
bool is_symmetric(const Mat& m, double tol = 1e-10);

struct EigenPair {
  double value;
  std::vector<double> vector;
};

/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Eigenpairs are sorted by decreasing eigenvalue; vectors are unit length.
/// Throws NonSymmetric / NonFinite.
std::vector<EigenPair> sym_eig(const Mat& m);

/// Largest eigenvalue of a symmetric PSD matrix and a unit eigenvector.
EigenPair sym_eig_max(const Mat& m);

/// Lower-triangular L with L·Lᵀ = m. Throws NotPositiveDefinite on a pivot <= 0.
Mat cholesky_lower(const Mat& m);

/// Solves L·Lᵀ x = b given the Cholesky factor.
std::vector<double> cholesky_solve(const Mat& lower, std::span<const double> b);

/// mᵀ (m mᵀ)⁻¹ for a wide full-row-rank m. Throws RankDeficient when the
/// condition number of m mᵀ exceeds 1e12.
Mat right_pseudo_inverse(const Mat& m);

/// Determinant of a 2x2 or 3x3 matrix.
double det_small(const Mat& m);

}  // namespace robustik
