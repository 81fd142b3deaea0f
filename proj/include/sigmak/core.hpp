#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>

namespace sigmak {

/// Largest tensor dimension handled by the toolkit.
inline constexpr int kMaxDim = 6;

/// Fixed-capacity real vector of dimension n <= kMaxDim (gradients, points).
class Vec {
 public:
  Vec() = default;
  explicit Vec(int dim);
  Vec(std::initializer_list<double> values);

  [[nodiscard]] int dim() const { return dim_; }
  double& operator[](int i) { return data_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return data_[static_cast<std::size_t>(i)]; }

  [[nodiscard]] std::span<const double> values() const {
    return {data_.data(), static_cast<std::size_t>(dim_)};
  }
  [[nodiscard]] double dot(const Vec& other) const;
  [[nodiscard]] double norm_sq() const { return dot(*this); }

  Vec& operator+=(const Vec& other);
  Vec& operator-=(const Vec& other);
  Vec& operator*=(double s);

 private:
  int dim_ = 0;
  std::array<double, kMaxDim> data_{};
};

Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator*(double s, Vec a);

class Mat;

/// Symmetric n x n tensor, n in {3..6}, stored as the lower triangle (row-major).
///
/// Curvature tensors, Hessians and the W_t operator all live here. Element
/// access is symmetric by construction: (i, j) and (j, i) address one slot.
class SymTensor {
 public:
  SymTensor() = default;
  explicit SymTensor(int dim);

  static SymTensor zero(int dim) { return SymTensor(dim); }
  static SymTensor identity(int dim);
  static SymTensor diagonal(std::span<const double> diag);
  static SymTensor diagonal(std::initializer_list<double> diag);
  /// Outer product a (x) b + b (x) a, halved: symmetric part of a (x) b.
  static SymTensor sym_outer(const Vec& a, const Vec& b);
  static SymTensor outer(const Vec& a) { return sym_outer(a, a); }
  /// Symmetric part (M + M^T)/2 of a dense matrix.
  static SymTensor symmetric_part(const Mat& m);

  [[nodiscard]] int dim() const { return dim_; }

  double& operator()(int i, int j) { return data_[index(i, j)]; }
  double operator()(int i, int j) const { return data_[index(i, j)]; }

  [[nodiscard]] double trace() const;
  /// Frobenius contraction sum_ij A_ij B_ij.
  [[nodiscard]] double contract(const SymTensor& other) const;
  [[nodiscard]] double frobenius_norm() const;
  /// Largest |entry|.
  [[nodiscard]] double max_abs() const;
  [[nodiscard]] Mat dense() const;

  SymTensor& operator+=(const SymTensor& other);
  SymTensor& operator-=(const SymTensor& other);
  SymTensor& operator*=(double s);
  SymTensor operator-() const;

  friend bool operator==(const SymTensor&, const SymTensor&) = default;

 private:
  static std::size_t index(int i, int j) {
    if (i < j) {
      std::swap(i, j);
    }
    return static_cast<std::size_t>(i * (i + 1) / 2 + j);
  }
  void check_same_dim(const SymTensor& other) const;

  int dim_ = 0;
  std::array<double, kMaxDim*(kMaxDim + 1) / 2> data_{};
};

SymTensor operator+(SymTensor a, const SymTensor& b);
SymTensor operator-(SymTensor a, const SymTensor& b);
SymTensor operator*(double s, SymTensor a);

/// Dense n x n matrix used for intermediate (possibly non-symmetric) products.
class Mat {
 public:
  Mat() = default;
  explicit Mat(int dim);
  static Mat identity(int dim);

  [[nodiscard]] int dim() const { return dim_; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * kMaxDim + j)]; }
  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i * kMaxDim + j)];
  }

  [[nodiscard]] Mat transpose() const;
  [[nodiscard]] double trace() const;

 private:
  int dim_ = 0;
  std::array<double, kMaxDim * kMaxDim> data_{};
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator*(const Mat& a, const SymTensor& b);
Mat operator*(const SymTensor& a, const Mat& b);
Mat operator*(const SymTensor& a, const SymTensor& b);

/// Eigenvalue vector of a symmetric tensor, sorted in descending order.
///
/// Dimensions are restricted to 3..6, the range the toolkit works in.
class Spectrum {
 public:
  Spectrum() = default;
  /// Copies and sorts the values (descending). Throws std::domain_error unless
  /// 3 <= size <= 6.
  explicit Spectrum(std::span<const double> values);
  Spectrum(std::initializer_list<double> values);

  [[nodiscard]] int dim() const { return dim_; }
  double operator[](int i) const { return data_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] std::span<const double> values() const {
    return {data_.data(), static_cast<std::size_t>(dim_)};
  }
  operator std::span<const double>() const { return values(); }  // NOLINT

  [[nodiscard]] Spectrum scaled(double s) const;
  [[nodiscard]] Spectrum negated() const { return scaled(-1.0); }

 private:
  int dim_ = 0;
  std::array<double, kMaxDim> data_{};
};

}  // namespace sigmak
