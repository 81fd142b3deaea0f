#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sigmak/conformal.hpp"

namespace sigmak {

/// Periodic flat 3-torus with N nodes per axis at x_i = i * L/N.
struct TorusGrid {
  int nodes_per_axis = 8;
  double period = 1.0;

  /// Throws std::domain_error unless N >= 8 is even and L > 0.
  void validate() const;
  [[nodiscard]] double spacing() const { return period / nodes_per_axis; }
  [[nodiscard]] std::size_t node_count() const;
  [[nodiscard]] std::size_t index(int i, int j, int l) const;
  [[nodiscard]] std::array<int, 3> unpack(std::size_t node) const;
};

enum class RadialKind { euclidean_radial, sphere_polar };

/// Uniform cell-centred 1-D grid: node i sits at (i + 1/2) * extent / count.
///
/// euclidean_radial covers (0, r_max] of R^3 for radial functions;
/// sphere_polar covers (0, pi) of the unit S^3 for functions of the polar angle.
struct RadialGrid {
  RadialKind kind = RadialKind::sphere_polar;
  int count = 64;
  double extent = 0.0;  ///< r_max, or pi for sphere_polar

  static RadialGrid euclidean(int count, double r_max);
  static RadialGrid sphere(int count);

  void validate() const;
  [[nodiscard]] double spacing() const { return extent / count; }
  [[nodiscard]] double node(std::size_t i) const {
    return (static_cast<double>(i) + 0.5) * spacing();
  }
  [[nodiscard]] std::size_t node_count() const { return static_cast<std::size_t>(count); }
};

using Grid = std::variant<TorusGrid, RadialGrid>;

[[nodiscard]] std::size_t node_count(const Grid& grid);
[[nodiscard]] double grid_spacing(const Grid& grid);
/// Coordinates of a node: (x, y, z) on the torus, (r or theta, 0, 0) on radial grids.
[[nodiscard]] std::array<double, 3> node_position(const Grid& grid, std::size_t node);
/// Positive quadrature weights; their sum is the volume of the region.
[[nodiscard]] std::vector<double> quadrature_weights(const Grid& grid);
[[nodiscard]] double grid_volume(const Grid& grid);
[[nodiscard]] std::string kind_name(const Grid& grid);

/// Node values on a grid. Immutable once built; values are finite.
class ScalarField {
 public:
  /// Empty placeholder (no nodes); every real field comes from the other constructor.
  ScalarField() = default;
  ScalarField(Grid grid, std::vector<double> values);

  static ScalarField constant(const Grid& grid, double value);
  static ScalarField sample(const Grid& grid,
                            const std::function<double(const std::array<double, 3>&)>& f);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Jet of the field at a node in the orthonormal frame of the model (g = I):
/// 2nd-order central differences; mixed torus partials by double application.
/// Radial grids use the frame (radial, tangential, tangential) with tangential
/// Hessian u'/r (euclidean) or cot(theta) u' (sphere); within two spacings of a
/// pole it is replaced by the u'' limit. Values past the poles are mirrored.
[[nodiscard]] ConformalJet jet_at(const ScalarField& field, std::size_t node);
[[nodiscard]] ConformalJet jet_at(const Grid& grid, std::span<const double> values,
                                  std::size_t node);

/// Raised when exp(-(n+1)u) overflows at some node.
class QuadratureOverflow : public std::overflow_error {
 public:
  QuadratureOverflow(std::size_t node, double value);
  [[nodiscard]] std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

/// (sum_i w_i exp(-(n+1) u_i))^{2/(n+1)}.
[[nodiscard]] double integrate_exp(const ScalarField& field, int n);
[[nodiscard]] double integrate_exp(const Grid& grid, std::span<const double> values, int n);

/// Discrete sup-norms of the jet, and the ratio
/// (sup|hess u| + sup|grad u|^2) / (1 + exp(-2 inf u)) used as an a-priori bound monitor.
struct FieldNorms {
  double sup_abs = 0.0;
  double sup_grad_sq = 0.0;
  double sup_hess = 0.0;  ///< Frobenius norm of the Hessian
  double inf_u = 0.0;
  double sup_u = 0.0;
  double apriori_ratio = 0.0;
};

[[nodiscard]] FieldNorms field_norms(const ScalarField& field);

/// Snapshot format: "field <kind> <N> <L-or-rmax>" then one value per line (%.17g).
void write_field(std::ostream& out, const ScalarField& field);
[[nodiscard]] ScalarField read_field(std::istream& in);
void save_field(const std::string& path, const ScalarField& field);
[[nodiscard]] ScalarField load_field(const std::string& path);

}  // namespace sigmak
