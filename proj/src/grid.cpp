#include "sigmak/grid.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace sigmak {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

int wrap(int i, int n) { return ((i % n) + n) % n; }

}  // namespace

// ---------------------------------------------------------------------------
// Grids

void TorusGrid::validate() const {
  if (nodes_per_axis < 8 || nodes_per_axis % 2 != 0) {
    throw std::domain_error("torus grid needs an even node count >= 8 per axis");
  }
  if (!(period > 0.0)) {
    throw std::domain_error("torus period must be positive");
  }
}

std::size_t TorusGrid::node_count() const {
  const auto n = static_cast<std::size_t>(nodes_per_axis);
  return n * n * n;
}

std::size_t TorusGrid::index(int i, int j, int l) const {
  const int n = nodes_per_axis;
  return (static_cast<std::size_t>(wrap(i, n)) * static_cast<std::size_t>(n) +
          static_cast<std::size_t>(wrap(j, n))) *
             static_cast<std::size_t>(n) +
         static_cast<std::size_t>(wrap(l, n));
}

std::array<int, 3> TorusGrid::unpack(std::size_t node) const {
  const auto n = static_cast<std::size_t>(nodes_per_axis);
  return {static_cast<int>(node / (n * n)), static_cast<int>((node / n) % n),
          static_cast<int>(node % n)};
}

RadialGrid RadialGrid::euclidean(int count, double r_max) {
  RadialGrid g{RadialKind::euclidean_radial, count, r_max};
  g.validate();
  return g;
}

RadialGrid RadialGrid::sphere(int count) {
  RadialGrid g{RadialKind::sphere_polar, count, std::numbers::pi};
  g.validate();
  return g;
}

void RadialGrid::validate() const {
  if (count < 4) {
    throw std::domain_error("radial grid needs at least 4 nodes");
  }
  if (!(extent > 0.0)) {
    throw std::domain_error("radial grid extent must be positive");
  }
  if (kind == RadialKind::sphere_polar && extent != std::numbers::pi) {
    throw std::domain_error("sphere_polar grid must span (0, pi)");
  }
}

std::size_t node_count(const Grid& grid) {
  return std::visit([](const auto& g) { return g.node_count(); }, grid);
}

double grid_spacing(const Grid& grid) {
  return std::visit([](const auto& g) { return g.spacing(); }, grid);
}

std::array<double, 3> node_position(const Grid& grid, std::size_t node) {
  return std::visit(Overloaded{[&](const TorusGrid& g) {
                                 const auto ijk = g.unpack(node);
                                 const double h = g.spacing();
                                 return std::array<double, 3>{ijk[0] * h, ijk[1] * h, ijk[2] * h};
                               },
                               [&](const RadialGrid& g) {
                                 return std::array<double, 3>{g.node(node), 0.0, 0.0};
                               }},
                    grid);
}

std::vector<double> quadrature_weights(const Grid& grid) {
  return std::visit(
      Overloaded{[](const TorusGrid& g) {
                   const double h = g.spacing();
                   return std::vector<double>(g.node_count(), h * h * h);
                 },
                 [](const RadialGrid& g) {
                   std::vector<double> w(g.node_count());
                   const double h = g.spacing();
                   for (std::size_t i = 0; i < w.size(); ++i) {
                     const double r = g.node(i);
                     if (g.kind == RadialKind::euclidean_radial) {
                       w[i] = 4.0 * std::numbers::pi * r * r * h;
                     } else {
                       // unit S^3: dvol = 4 pi sin^2(theta) dtheta, total 2 pi^2
                       const double s = std::sin(r);
                       w[i] = 4.0 * std::numbers::pi * s * s * h;
                     }
                   }
                   return w;
                 }},
      grid);
}

double grid_volume(const Grid& grid) {
  double v = 0.0;
  for (double w : quadrature_weights(grid)) {
    v += w;
  }
  return v;
}

std::string kind_name(const Grid& grid) {
  return std::visit(Overloaded{[](const TorusGrid&) { return std::string("torus"); },
                               [](const RadialGrid& g) {
                                 return std::string(g.kind == RadialKind::euclidean_radial
                                                        ? "euclidean_radial"
                                                        : "sphere_polar");
                               }},
                    grid);
}

// ---------------------------------------------------------------------------
// ScalarField

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  std::visit([](const auto& g) { g.validate(); }, grid_);
  if (values_.size() != node_count(grid_)) {
    throw std::invalid_argument("field length " + std::to_string(values_.size()) +
                                " does not match grid node count " +
                                std::to_string(node_count(grid_)));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw std::domain_error("field value at node " + std::to_string(i) + " is not finite");
    }
  }
}

ScalarField ScalarField::constant(const Grid& grid, double value) {
  return {grid, std::vector<double>(node_count(grid), value)};
}

ScalarField ScalarField::sample(const Grid& grid,
                                const std::function<double(const std::array<double, 3>&)>& f) {
  std::vector<double> v(node_count(grid));
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = f(node_position(grid, i));
  }
  return {grid, std::move(v)};
}

// ---------------------------------------------------------------------------
// Jets

namespace {

constexpr int kDim = 3;

ConformalJet torus_jet(const TorusGrid& g, std::span<const double> u, std::size_t node) {
  const auto [i, j, l] = g.unpack(node);
  const double h = g.spacing();
  const std::array<int, 3> c{i, j, l};
  auto at = [&](std::array<int, 3> d) {
    return u[g.index(c[0] + d[0], c[1] + d[1], c[2] + d[2])];
  };
  const double u0 = u[node];
  ConformalJet jet;
  jet.u = u0;
  jet.grad_u = Vec(kDim);
  jet.hess_u = SymTensor(kDim);
  for (int a = 0; a < kDim; ++a) {
    std::array<int, 3> e{};
    e[static_cast<std::size_t>(a)] = 1;
    std::array<int, 3> me{};
    me[static_cast<std::size_t>(a)] = -1;
    const double up = at(e);
    const double um = at(me);
    jet.grad_u[a] = (up - um) / (2.0 * h);
    jet.hess_u(a, a) = (up - 2.0 * u0 + um) / (h * h);
    for (int b = 0; b < a; ++b) {
      std::array<int, 3> pp{};
      std::array<int, 3> pm{};
      std::array<int, 3> mp{};
      std::array<int, 3> mm{};
      pp[static_cast<std::size_t>(a)] = 1;
      pp[static_cast<std::size_t>(b)] = 1;
      pm[static_cast<std::size_t>(a)] = 1;
      pm[static_cast<std::size_t>(b)] = -1;
      mp[static_cast<std::size_t>(a)] = -1;
      mp[static_cast<std::size_t>(b)] = 1;
      mm[static_cast<std::size_t>(a)] = -1;
      mm[static_cast<std::size_t>(b)] = -1;
      jet.hess_u(a, b) = (at(pp) - at(pm) - at(mp) + at(mm)) / (4.0 * h * h);
    }
  }
  jet.lap_u = jet.hess_u.trace();
  return jet;
}

ConformalJet radial_jet(const RadialGrid& g, std::span<const double> u, std::size_t node) {
  const auto n = static_cast<std::ptrdiff_t>(g.node_count());
  const auto i = static_cast<std::ptrdiff_t>(node);
  const double h = g.spacing();
  const double x = g.node(node);
  const bool sphere = g.kind == RadialKind::sphere_polar;

  // Mirror across the pole(s): node -1 reflects to 0; past the far pole, N reflects to N-1.
  auto at = [&](std::ptrdiff_t m) {
    if (m < 0) {
      m = -m - 1;
    }
    if (sphere && m >= n) {
      m = 2 * n - m - 1;
    }
    return u[static_cast<std::size_t>(m)];
  };

  double d1 = 0.0;
  double d2 = 0.0;
  if (!sphere && i == n - 1) {
    // outer boundary of the euclidean ball: one-sided 2nd order
    d1 = (3.0 * at(i) - 4.0 * at(i - 1) + at(i - 2)) / (2.0 * h);
    d2 = (2.0 * at(i) - 5.0 * at(i - 1) + 4.0 * at(i - 2) - at(i - 3)) / (h * h);
  } else {
    d1 = (at(i + 1) - at(i - 1)) / (2.0 * h);
    d2 = (at(i + 1) - 2.0 * at(i) + at(i - 1)) / (h * h);
  }

  const bool near_pole = x < 2.0 * h || (sphere && std::numbers::pi - x < 2.0 * h);
  double tangential = 0.0;
  if (near_pole) {
    tangential = d2;
  } else if (sphere) {
    tangential = d1 * std::cos(x) / std::sin(x);
  } else {
    tangential = d1 / x;
  }

  ConformalJet jet;
  jet.u = at(i);
  jet.grad_u = Vec{d1, 0.0, 0.0};
  jet.hess_u = SymTensor::diagonal({d2, tangential, tangential});
  jet.lap_u = d2 + 2.0 * tangential;
  return jet;
}

}  // namespace

ConformalJet jet_at(const Grid& grid, std::span<const double> values, std::size_t node) {
  if (node >= values.size()) {
    throw std::out_of_range("jet_at: node index out of range");
  }
  const ConformalJet jet = std::visit(
      Overloaded{[&](const TorusGrid& g) { return torus_jet(g, values, node); },
                 [&](const RadialGrid& g) { return radial_jet(g, values, node); }},
      grid);
  if (!std::isfinite(jet.u) || !std::isfinite(jet.lap_u) || !std::isfinite(jet.grad_u[0])) {
    throw std::domain_error("jet_at: non-finite jet at node " + std::to_string(node));
  }
  return jet;
}

ConformalJet jet_at(const ScalarField& field, std::size_t node) {
  return jet_at(field.grid(), field.values(), node);
}

// ---------------------------------------------------------------------------
// Quadrature and norms

QuadratureOverflow::QuadratureOverflow(std::size_t node, double value)
    : std::overflow_error("exp(-(n+1)u) overflows at node " + std::to_string(node) +
                          " (u = " + std::to_string(value) + ")"),
      node_(node) {}

double integrate_exp(const Grid& grid, std::span<const double> values, int n) {
  const auto w = quadrature_weights(grid);
  if (values.size() != w.size()) {
    throw std::invalid_argument("integrate_exp: length mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double e = std::exp(-(n + 1) * values[i]);
    if (!std::isfinite(e)) {
      throw QuadratureOverflow(i, values[i]);
    }
    s += w[i] * e;
  }
  if (!std::isfinite(s)) {
    throw QuadratureOverflow(0, values[0]);
  }
  return std::pow(s, 2.0 / (n + 1));
}

double integrate_exp(const ScalarField& field, int n) {
  return integrate_exp(field.grid(), field.values(), n);
}

FieldNorms field_norms(const ScalarField& field) {
  FieldNorms out;
  out.inf_u = std::numeric_limits<double>::infinity();
  out.sup_u = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < field.size(); ++i) {
    const ConformalJet jet = jet_at(field, i);
    out.sup_abs = std::max(out.sup_abs, std::abs(jet.u));
    out.sup_grad_sq = std::max(out.sup_grad_sq, jet.grad_u.norm_sq());
    out.sup_hess = std::max(out.sup_hess, jet.hess_u.frobenius_norm());
    out.inf_u = std::min(out.inf_u, jet.u);
    out.sup_u = std::max(out.sup_u, jet.u);
  }
  out.apriori_ratio = (out.sup_hess + out.sup_grad_sq) / (1.0 + std::exp(-2.0 * out.inf_u));
  return out;
}

// ---------------------------------------------------------------------------
// Snapshots

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("field snapshot: bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void write_field(std::ostream& out, const ScalarField& field) {
  const Grid& g = field.grid();
  const int count = std::visit(Overloaded{[](const TorusGrid& t) { return t.nodes_per_axis; },
                                          [](const RadialGrid& r) { return r.count; }},
                               g);
  const double extent = std::visit(Overloaded{[](const TorusGrid& t) { return t.period; },
                                              [](const RadialGrid& r) { return r.extent; }},
                                   g);
  out << "field " << kind_name(g) << ' ' << count << ' ' << format_double(extent) << '\n';
  for (double v : field.values()) {
    out << format_double(v) << '\n';
  }
}

ScalarField read_field(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("field snapshot: missing header");
  }
  std::istringstream hs(header);
  std::string tag;
  std::string kind;
  int count = 0;
  std::string extent_text;
  if (!(hs >> tag >> kind >> count >> extent_text) || tag != "field") {
    throw std::runtime_error("field snapshot: malformed header '" + header + "'");
  }
  const double extent = parse_double(extent_text);
  Grid grid;
  if (kind == "torus") {
    grid = TorusGrid{count, extent};
  } else if (kind == "euclidean_radial") {
    grid = RadialGrid{RadialKind::euclidean_radial, count, extent};
  } else if (kind == "sphere_polar") {
    grid = RadialGrid{RadialKind::sphere_polar, count, extent};
  } else {
    throw std::runtime_error("field snapshot: unknown kind '" + kind + "'");
  }
  std::visit([](const auto& g) { g.validate(); }, grid);
  std::vector<double> values;
  values.reserve(node_count(grid));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    values.push_back(parse_double(line));
  }
  return {grid, std::move(values)};
}

void save_field(const std::string& path, const ScalarField& field) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  write_field(out, field);
}

ScalarField load_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  return read_field(in);
}

}  // namespace sigmak
