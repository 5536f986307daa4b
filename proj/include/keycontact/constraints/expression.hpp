#pragma once

#include <memory>
#include <string>

#include "keycontact/geometry/mesh.hpp"

namespace keycontact {

/// Arithmetic over numbers and object box fields.
///
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := '-' unary | atom
///   atom   := number | field | ('min' | 'max') '(' expr ',' expr ')' | '(' expr ')'
///   field  := 'obb.' ('x_extent' | 'y_extent' | 'z_extent' | 'center_x' | 'center_y' | 'center_z')
class Expression {
 public:
  /// Throws a schema error with the offending position on bad syntax.
  static Expression parse(const std::string& text);
  static Expression literal(double value);

  /// Throws on division by zero or a non-finite result.
  double evaluate(const Obb& box) const;
  const std::string& text() const { return text_; }
  bool is_literal() const;

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace keycontact
