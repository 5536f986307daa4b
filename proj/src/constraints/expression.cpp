#include "keycontact/constraints/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "keycontact/common/error.hpp"

namespace keycontact {

struct Expression::Node {
  enum class Kind { number, field, add, sub, mul, div, neg, min, max } kind;
  double value = 0.0;
  int field = 0;  // 0..2 extents, 3..5 center
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

NodePtr make(Kind k, NodePtr l = nullptr, NodePtr r = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->lhs = std::move(l);
  n->rhs = std::move(r);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorKind::schema, "expression '" + s_ + "' at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!eat(c)) error(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '.'))
      ++pos_;
    return s_.substr(start, pos_ - start);
  }

  NodePtr expr() {
    NodePtr l = term();
    for (;;) {
      if (eat('+')) l = make(Kind::add, l, term());
      else if (eat('-')) l = make(Kind::sub, l, term());
      else return l;
    }
  }

  NodePtr term() {
    NodePtr l = unary();
    for (;;) {
      if (eat('*')) l = make(Kind::mul, l, unary());
      else if (eat('/')) l = make(Kind::div, l, unary());
      else return l;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Kind::neg, unary());
    return atom();
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) error("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) error("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::number;
      n->value = v;
      return n;
    }
    const std::size_t at = pos_;
    const std::string id = ident();
    if (id == "min" || id == "max") {
      expect('(');
      NodePtr a = expr();
      expect(',');
      NodePtr b = expr();
      expect(')');
      return make(id == "min" ? Kind::min : Kind::max, a, b);
    }
    static const char* const kFields[] = {"obb.x_extent", "obb.y_extent", "obb.z_extent",
                                          "obb.center_x", "obb.center_y", "obb.center_z"};
    for (int f = 0; f < 6; ++f) {
      if (id == kFields[f]) {
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::field;
        n->field = f;
        return n;
      }
    }
    pos_ = at;
    error(id.empty() ? "expected a value" : "unknown name '" + id + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

double eval(const Expression::Node& n, const Obb& box) {
  switch (n.kind) {
    case Kind::number: return n.value;
    case Kind::field: return n.field < 3 ? box.extent()[n.field] : box.center[n.field - 3];
    case Kind::add: return eval(*n.lhs, box) + eval(*n.rhs, box);
    case Kind::sub: return eval(*n.lhs, box) - eval(*n.rhs, box);
    case Kind::mul: return eval(*n.lhs, box) * eval(*n.rhs, box);
    case Kind::div: {
      const double d = eval(*n.rhs, box);
      if (d == 0.0) fail(ErrorKind::invalid_argument, "division by zero");
      return eval(*n.lhs, box) / d;
    }
    case Kind::neg: return -eval(*n.lhs, box);
    case Kind::min: return std::min(eval(*n.lhs, box), eval(*n.rhs, box));
    case Kind::max: return std::max(eval(*n.lhs, box), eval(*n.rhs, box));
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  e.root_ = Parser(e.text_).parse();
  return e;
}

Expression Expression::literal(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  Expression e;
  e.text_ = buf;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::number;
  n->value = value;
  e.root_ = n;
  return e;
}

bool Expression::is_literal() const { return root_ && root_->kind == Node::Kind::number; }

double Expression::evaluate(const Obb& box) const {
  if (!root_) fail(ErrorKind::invalid_argument, "empty expression");
  const double v = eval(*root_, box);
  if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, "expression '" + text_ + "' is not finite");
  return v;
}

}  // namespace keycontact
