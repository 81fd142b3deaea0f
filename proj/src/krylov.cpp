#include "sigmak/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigmak {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * b[i];
  }
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

GmresResult gmres(const LinearOperator& apply, std::span<const double> diagonal,
                  std::span<const double> rhs, std::span<double> x, const GmresOptions& opts) {
  const std::size_t n = rhs.size();
  if (x.size() != n || diagonal.size() != n) {
    throw std::invalid_argument("gmres: size mismatch");
  }
  const int m = std::max(1, std::min<int>(opts.restart, static_cast<int>(n)));
  std::vector<double> inv_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    inv_diag[i] = diagonal[i] != 0.0 && std::isfinite(diagonal[i]) ? 1.0 / diagonal[i] : 1.0;
  }

  GmresResult result;
  const double bnorm = norm(rhs);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    result.converged = true;
    return result;
  }

  std::vector<std::vector<double>> v(static_cast<std::size_t>(m) + 1, std::vector<double>(n));
  std::vector<std::vector<double>> hmat(static_cast<std::size_t>(m) + 1,
                                        std::vector<double>(static_cast<std::size_t>(m)));
  std::vector<double> cs(static_cast<std::size_t>(m));
  std::vector<double> sn(static_cast<std::size_t>(m));
  std::vector<double> g(static_cast<std::size_t>(m) + 1);
  std::vector<double> r(n);
  std::vector<double> z(n);
  std::vector<double> w(n);

  auto residual = [&]() {
    apply(x, w);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = rhs[i] - w[i];
    }
    return norm(r);
  };

  double beta = residual();
  result.rel_residual = beta / bnorm;
  while (result.iterations < opts.max_iterations) {
    if (result.rel_residual <= opts.rel_tol) {
      result.converged = true;
      return result;
    }
    for (std::size_t i = 0; i < n; ++i) {
      v[0][i] = r[i] / beta;
    }
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    int j = 0;
    for (; j < m && result.iterations < opts.max_iterations; ++j) {
      const auto ju = static_cast<std::size_t>(j);
      for (std::size_t i = 0; i < n; ++i) {
        z[i] = v[ju][i] * inv_diag[i];
      }
      apply(z, w);
      // modified Gram-Schmidt
      for (int p = 0; p <= j; ++p) {
        const auto pu = static_cast<std::size_t>(p);
        const double hp = dot(w, v[pu]);
        hmat[pu][ju] = hp;
        for (std::size_t i = 0; i < n; ++i) {
          w[i] -= hp * v[pu][i];
        }
      }
      const double hn = norm(w);
      hmat[ju + 1][ju] = hn;
      if (hn > 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
          v[ju + 1][i] = w[i] / hn;
        }
      }
      for (int p = 0; p < j; ++p) {
        const auto pu = static_cast<std::size_t>(p);
        const double t = cs[pu] * hmat[pu][ju] + sn[pu] * hmat[pu + 1][ju];
        hmat[pu + 1][ju] = -sn[pu] * hmat[pu][ju] + cs[pu] * hmat[pu + 1][ju];
        hmat[pu][ju] = t;
      }
      const double denom = std::hypot(hmat[ju][ju], hmat[ju + 1][ju]);
      cs[ju] = denom == 0.0 ? 1.0 : hmat[ju][ju] / denom;
      sn[ju] = denom == 0.0 ? 0.0 : hmat[ju + 1][ju] / denom;
      hmat[ju][ju] = denom;
      hmat[ju + 1][ju] = 0.0;
      g[ju + 1] = -sn[ju] * g[ju];
      g[ju] = cs[ju] * g[ju];
      ++result.iterations;
      result.rel_residual = std::abs(g[ju + 1]) / bnorm;
      if (result.rel_residual <= opts.rel_tol || hn == 0.0) {
        ++j;
        break;
      }
    }
    // back substitution for y, then x += M^{-1} V y
    std::vector<double> y(static_cast<std::size_t>(j));
    for (int p = j - 1; p >= 0; --p) {
      const auto pu = static_cast<std::size_t>(p);
      double s = g[pu];
      for (int q = p + 1; q < j; ++q) {
        s -= hmat[pu][static_cast<std::size_t>(q)] * y[static_cast<std::size_t>(q)];
      }
      y[pu] = hmat[pu][pu] != 0.0 ? s / hmat[pu][pu] : 0.0;
    }
    std::fill(z.begin(), z.end(), 0.0);
    for (int p = 0; p < j; ++p) {
      const auto pu = static_cast<std::size_t>(p);
      for (std::size_t i = 0; i < n; ++i) {
        z[i] += y[pu] * v[pu][i];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += inv_diag[i] * z[i];
    }
    beta = residual();
    result.rel_residual = beta / bnorm;
    if (beta == 0.0) {
      break;
    }
  }
  result.converged = result.rel_residual <= opts.rel_tol;
  return result;
}

}  // namespace sigmak
