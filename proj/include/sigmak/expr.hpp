#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "sigmak/grid.hpp"

namespace sigmak {

/// Variables visible to an expression.
struct ExprVars {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double theta = 0.0;
  double r = 0.0;
};

/// Small arithmetic language for prescribed functions.
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | primary
///   primary := number | name | func '(' expr ')' | '(' expr ')'
///   name    := x | y | z | theta | r | pi
///   func    := sin | cos | exp
///
/// Parse errors throw std::invalid_argument with the offending position.
class Expression {
 public:
  static Expression parse(std::string_view text);

  [[nodiscard]] double eval(const ExprVars& vars) const;
  [[nodiscard]] const std::string& text() const { return text_; }
  /// Coordinate names the expression refers to.
  [[nodiscard]] const std::set<std::string>& variables() const { return vars_; }

  struct Node;

 private:
  std::string text_;
  std::set<std::string> vars_;
  std::shared_ptr<const Node> root_;
};

/// Builds h on a grid from "@path" (a field snapshot on the same grid) or an
/// expression. Torus grids bind x, y, z; sphere_polar binds theta (and r as an
/// alias); euclidean_radial binds r. Unbound names throw std::invalid_argument.
[[nodiscard]] ScalarField field_from_spec(const std::string& spec, const Grid& grid);

}  // namespace sigmak
