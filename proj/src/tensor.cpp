#include "sigmak/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace sigmak {

namespace {

constexpr double kPivotTolerance = 1e-14;
constexpr double kDiscriminantTolerance = 1e-14;
constexpr int kMaxJacobiSweeps = 100;

struct JacobiResult {
  std::array<double, kMaxDim> values{};
  Mat vectors;
};

// Cyclic Jacobi with rotations applied to a dense copy.
JacobiResult cyclic_jacobi(const SymTensor& a, bool want_vectors) {
  const int n = a.dim();
  Mat m = a.dense();
  Mat v = Mat::identity(n);

  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      scale += m(i, j) * m(i, j);
    }
  }
  scale = std::sqrt(scale);

  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        off += m(i, j) * m(i, j);
      }
    }
    if (std::sqrt(off) <= 1e-17 * scale || off == 0.0) {
      break;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (apq == 0.0) {
          continue;
        }
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (int r = 0; r < n; ++r) {
          const double mrp = m(r, p);
          const double mrq = m(r, q);
          m(r, p) = c * mrp - s * mrq;
          m(r, q) = s * mrp + c * mrq;
        }
        for (int r = 0; r < n; ++r) {
          const double mpr = m(p, r);
          const double mqr = m(q, r);
          m(p, r) = c * mpr - s * mqr;
          m(q, r) = s * mpr + c * mqr;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        if (want_vectors) {
          for (int r = 0; r < n; ++r) {
            const double vrp = v(r, p);
            const double vrq = v(r, q);
            v(r, p) = c * vrp - s * vrq;
            v(r, q) = s * vrp + c * vrq;
          }
        }
      }
    }
  }

  JacobiResult out;
  for (int i = 0; i < n; ++i) {
    out.values[static_cast<std::size_t>(i)] = m(i, i);
  }
  out.vectors = v;
  return out;
}

// Closed form for 3x3; returns false when the spectrum is too close to a
// multiple root for acos to be reliable.
bool trig_eigen3(const SymTensor& a, std::array<double, 3>& out) {
  const double q = a.trace() / 3.0;
  const double a00 = a(0, 0) - q;
  const double a11 = a(1, 1) - q;
  const double a22 = a(2, 2) - q;
  const double a01 = a(0, 1);
  const double a02 = a(0, 2);
  const double a12 = a(1, 2);
  const double p2 = a00 * a00 + a11 * a11 + a22 * a22 + 2.0 * (a01 * a01 + a02 * a02 + a12 * a12);
  const double scale2 = p2 + 9.0 * q * q;
  if (scale2 == 0.0) {
    out = {0.0, 0.0, 0.0};
    return true;
  }
  if (p2 <= kDiscriminantTolerance * scale2) {
    return false;
  }
  const double p = std::sqrt(p2 / 6.0);
  // det(B) with B = (A - qI)/p
  const double b00 = a00 / p;
  const double b11 = a11 / p;
  const double b22 = a22 / p;
  const double b01 = a01 / p;
  const double b02 = a02 / p;
  const double b12 = a12 / p;
  const double det = b00 * (b11 * b22 - b12 * b12) - b01 * (b01 * b22 - b12 * b02) +
                     b02 * (b01 * b12 - b11 * b02);
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  // discriminant of the depressed cubic, relative: 1 - r^2
  if (1.0 - r * r < kDiscriminantTolerance) {
    return false;
  }
  const double phi = std::acos(r) / 3.0;
  out[0] = q + 2.0 * p * std::cos(phi);
  out[2] = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  out[1] = 3.0 * q - out[0] - out[2];
  return true;
}

}  // namespace

Spectrum sym_eigen(const SymTensor& a) {
  if (a.dim() == 3) {
    std::array<double, 3> v{};
    if (trig_eigen3(a, v)) {
      return Spectrum(std::span<const double>(v));
    }
  }
  const auto jr = cyclic_jacobi(a, false);
  return Spectrum(std::span<const double>(jr.values.data(), static_cast<std::size_t>(a.dim())));
}

EigenDecomposition sym_eigen_vectors(const SymTensor& a) {
  const int n = a.dim();
  const auto jr = cyclic_jacobi(a, true);
  std::array<int, kMaxDim> order{};
  std::iota(order.begin(), order.begin() + n, 0);
  std::sort(order.begin(), order.begin() + n, [&](int i, int j) {
    return jr.values[static_cast<std::size_t>(i)] > jr.values[static_cast<std::size_t>(j)];
  });
  Mat vectors(n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      vectors(r, c) = jr.vectors(r, order[static_cast<std::size_t>(c)]);
    }
  }
  return {Spectrum(std::span<const double>(jr.values.data(), static_cast<std::size_t>(n))),
          vectors};
}

// ---------------------------------------------------------------------------
// MetricTensor

MetricTensor::MetricTensor(const SymTensor& g) : g_(g), chol_(g.dim()) {
  const int n = g.dim();
  const double tol = kPivotTolerance * std::abs(g.trace());
  for (int j = 0; j < n; ++j) {
    double d = g(j, j);
    for (int l = 0; l < j; ++l) {
      d -= chol_(j, l) * chol_(j, l);
    }
    if (!(d > tol)) {
      throw std::domain_error("metric is not positive definite (pivot " + std::to_string(j) +
                              " = " + std::to_string(d) + ")");
    }
    chol_(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = g(i, j);
      for (int l = 0; l < j; ++l) {
        s -= chol_(i, l) * chol_(j, l);
      }
      chol_(i, j) = s / chol_(j, j);
    }
  }
  identity_ = (g == SymTensor::identity(n));
}

SymTensor MetricTensor::to_orthonormal(const SymTensor& a) const {
  if (a.dim() != dim()) {
    throw std::invalid_argument("metric/tensor dimension mismatch");
  }
  if (identity_) {
    return a;
  }
  const int n = dim();
  // X = L^{-1} A by forward substitution on each column
  Mat x(n);
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) {
      double s = a(i, c);
      for (int l = 0; l < i; ++l) {
        s -= chol_(i, l) * x(l, c);
      }
      x(i, c) = s / chol_(i, i);
    }
  }
  // B = X L^{-T} = (L^{-1} X^T)^T
  Mat y(n);
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) {
      double s = x(c, i);
      for (int l = 0; l < i; ++l) {
        s -= chol_(i, l) * y(l, c);
      }
      y(i, c) = s / chol_(i, i);
    }
  }
  return SymTensor::symmetric_part(y);
}

SymTensor MetricTensor::from_orthonormal(const SymTensor& b) const {
  if (identity_) {
    return b;
  }
  const int n = dim();
  // A = L B L^T
  Mat l(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      l(i, j) = chol_(i, j);
    }
  }
  return SymTensor::symmetric_part(l * b * l.transpose());
}

double MetricTensor::inner_inverse(const Vec& v, const Vec& w) const {
  if (identity_) {
    return v.dot(w);
  }
  const int n = dim();
  // solve L y = v, L z = w; then g^{-1}(v, w) = y.z
  Vec y(n);
  Vec z(n);
  for (int i = 0; i < n; ++i) {
    double sy = v[i];
    double sz = w[i];
    for (int l = 0; l < i; ++l) {
      sy -= chol_(i, l) * y[l];
      sz -= chol_(i, l) * z[l];
    }
    y[i] = sy / chol_(i, i);
    z[i] = sz / chol_(i, i);
  }
  return y.dot(z);
}

double MetricTensor::trace_of(const SymTensor& a) const { return to_orthonormal(a).trace(); }

MetricTensor MetricTensor::scaled(double s) const { return MetricTensor(s * g_); }

Spectrum gen_eigen(const MetricTensor& g, const SymTensor& a) {
  if (g.is_identity()) {
    return sym_eigen(a);
  }
  return sym_eigen(g.to_orthonormal(a));
}

double eigen_match_distance(const SymTensor& m, const SymTensor& mt) {
  if (m.dim() != mt.dim()) {
    throw std::invalid_argument("eigen_match_distance: dimension mismatch");
  }
  const Spectrum a = sym_eigen(m);
  const Spectrum b = sym_eigen(mt);
  const int n = m.dim();
  std::array<int, kMaxDim> perm{};
  std::iota(perm.begin(), perm.begin() + n, 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      s += std::abs(a[i] - b[perm[static_cast<std::size_t>(i)]]);
    }
    best = std::min(best, s);
  } while (std::next_permutation(perm.begin(), perm.begin() + n));
  return best;
}

}  // namespace sigmak
