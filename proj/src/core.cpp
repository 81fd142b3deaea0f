#include "sigmak/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace sigmak {

namespace {

void check_tensor_dim(int dim) {
  if (dim < 3 || dim > kMaxDim) {
    throw std::domain_error("tensor dimension must be in 3..6, got " + std::to_string(dim));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Vec

Vec::Vec(int dim) : dim_(dim) {
  if (dim < 0 || dim > kMaxDim) {
    throw std::domain_error("vector dimension must be in 0..6, got " + std::to_string(dim));
  }
}

Vec::Vec(std::initializer_list<double> values) : Vec(static_cast<int>(values.size())) {
  std::copy(values.begin(), values.end(), data_.begin());
}

double Vec::dot(const Vec& other) const {
  if (other.dim_ != dim_) {
    throw std::invalid_argument("Vec::dot: dimension mismatch");
  }
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    s += (*this)[i] * other[i];
  }
  return s;
}

Vec& Vec::operator+=(const Vec& other) {
  for (int i = 0; i < dim_; ++i) {
    (*this)[i] += other[i];
  }
  return *this;
}

Vec& Vec::operator-=(const Vec& other) {
  for (int i = 0; i < dim_; ++i) {
    (*this)[i] -= other[i];
  }
  return *this;
}

Vec& Vec::operator*=(double s) {
  for (int i = 0; i < dim_; ++i) {
    (*this)[i] *= s;
  }
  return *this;
}

Vec operator+(Vec a, const Vec& b) { return a += b; }
Vec operator-(Vec a, const Vec& b) { return a -= b; }
Vec operator*(double s, Vec a) { return a *= s; }

// ---------------------------------------------------------------------------
// SymTensor

SymTensor::SymTensor(int dim) : dim_(dim) { check_tensor_dim(dim); }

SymTensor SymTensor::identity(int dim) {
  SymTensor t(dim);
  for (int i = 0; i < dim; ++i) {
    t(i, i) = 1.0;
  }
  return t;
}

SymTensor SymTensor::diagonal(std::span<const double> diag) {
  SymTensor t(static_cast<int>(diag.size()));
  for (int i = 0; i < t.dim(); ++i) {
    t(i, i) = diag[static_cast<std::size_t>(i)];
  }
  return t;
}

SymTensor SymTensor::diagonal(std::initializer_list<double> diag) {
  return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

SymTensor SymTensor::sym_outer(const Vec& a, const Vec& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("sym_outer: dimension mismatch");
  }
  SymTensor t(a.dim());
  for (int i = 0; i < t.dim(); ++i) {
    for (int j = 0; j <= i; ++j) {
      t(i, j) = 0.5 * (a[i] * b[j] + b[i] * a[j]);
    }
  }
  return t;
}

SymTensor SymTensor::symmetric_part(const Mat& m) {
  SymTensor t(m.dim());
  for (int i = 0; i < t.dim(); ++i) {
    for (int j = 0; j <= i; ++j) {
      t(i, j) = 0.5 * (m(i, j) + m(j, i));
    }
  }
  return t;
}

double SymTensor::trace() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    s += (*this)(i, i);
  }
  return s;
}

double SymTensor::contract(const SymTensor& other) const {
  check_same_dim(other);
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    s += (*this)(i, i) * other(i, i);
    for (int j = 0; j < i; ++j) {
      s += 2.0 * (*this)(i, j) * other(i, j);
    }
  }
  return s;
}

double SymTensor::frobenius_norm() const { return std::sqrt(contract(*this)); }

double SymTensor::max_abs() const {
  double m = 0.0;
  const auto n = static_cast<std::size_t>(dim_ * (dim_ + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    m = std::max(m, std::abs(data_[i]));
  }
  return m;
}

Mat SymTensor::dense() const {
  Mat m(dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      m(i, j) = (*this)(i, j);
    }
  }
  return m;
}

SymTensor& SymTensor::operator+=(const SymTensor& other) {
  check_same_dim(other);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    data_[i] += other.data_[i];
  }
  return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& other) {
  check_same_dim(other);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    data_[i] -= other.data_[i];
  }
  return *this;
}

SymTensor& SymTensor::operator*=(double s) {
  for (auto& x : data_) {
    x *= s;
  }
  return *this;
}

SymTensor SymTensor::operator-() const {
  SymTensor t = *this;
  t *= -1.0;
  return t;
}

void SymTensor::check_same_dim(const SymTensor& other) const {
  if (other.dim_ != dim_) {
    throw std::invalid_argument("SymTensor: dimension mismatch (" + std::to_string(dim_) +
                                " vs " + std::to_string(other.dim_) + ")");
  }
}

SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
SymTensor operator*(double s, SymTensor a) { return a *= s; }

// ---------------------------------------------------------------------------
// Mat

Mat::Mat(int dim) : dim_(dim) { check_tensor_dim(dim); }

Mat Mat::identity(int dim) {
  Mat m(dim);
  for (int i = 0; i < dim; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

Mat Mat::transpose() const {
  Mat t(dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      t(i, j) = (*this)(j, i);
    }
  }
  return t;
}

double Mat::trace() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    s += (*this)(i, i);
  }
  return s;
}

namespace {

template <class A, class B>
Mat multiply(const A& a, const B& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("matrix product: dimension mismatch");
  }
  const int n = a.dim();
  Mat c(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int l = 0; l < n; ++l) {
        s += a(i, l) * b(l, j);
      }
      c(i, j) = s;
    }
  }
  return c;
}

}  // namespace

Mat operator*(const Mat& a, const Mat& b) { return multiply(a, b); }
Mat operator*(const Mat& a, const SymTensor& b) { return multiply(a, b); }
Mat operator*(const SymTensor& a, const Mat& b) { return multiply(a, b); }
Mat operator*(const SymTensor& a, const SymTensor& b) { return multiply(a, b); }

// ---------------------------------------------------------------------------
// Spectrum

Spectrum::Spectrum(std::span<const double> values) : dim_(static_cast<int>(values.size())) {
  if (dim_ < 3 || dim_ > kMaxDim) {
    throw std::domain_error("Spectrum length must be in 3..6, got " + std::to_string(dim_));
  }
  std::copy(values.begin(), values.end(), data_.begin());
  std::sort(data_.begin(), data_.begin() + dim_, std::greater<>());
}

Spectrum::Spectrum(std::initializer_list<double> values)
    : Spectrum(std::span<const double>(values.begin(), values.size())) {}

Spectrum Spectrum::scaled(double s) const {
  std::array<double, kMaxDim> v{};
  for (int i = 0; i < dim_; ++i) {
    v[static_cast<std::size_t>(i)] = s * data_[static_cast<std::size_t>(i)];
  }
  return Spectrum(std::span<const double>(v.data(), static_cast<std::size_t>(dim_)));
}

}  // namespace sigmak
