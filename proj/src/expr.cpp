#include "bestab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "bestab/errors.hpp"
#include "bestab/fields.hpp"

namespace bestab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::NotAnEquilibrium: return "NotAnEquilibrium";
    case ErrorKind::TangentRightField: return "TangentRightField";
    case ErrorKind::DegenerateGradient: return "DegenerateGradient";
    case ErrorKind::NotOnSurface: return "NotOnSurface";
    case ErrorKind::NotOnTangencyCurve: return "NotOnTangencyCurve";
    case ErrorKind::DegenerateSliding: return "DegenerateSliding";
    case ErrorKind::NearDegenerate: return "NearDegenerate";
    case ErrorKind::NoZeroEigenvalue: return "NoZeroEigenvalue";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::EigenvalueOrderViolation: return "EigenvalueOrderViolation";
    case ErrorKind::NotRotational: return "NotRotational";
    case ErrorKind::RepellingSlidingEncountered: return "RepellingSlidingEncountered";
    case ErrorKind::SimultaneousEvents: return "SimultaneousEvents";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::CorrectionDiverged: return "CorrectionDiverged";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

namespace dsl {
namespace {

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_unary(NodeKind kind, NodePtr arg) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(arg);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    skip_ws();
    if (pos_ == text_.size()) fail("expression");
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) const {
    const std::size_t column = pos_ + 1;
    std::string found = pos_ < text_.size() ? std::string("'") + text_[pos_] + "'"
                                            : std::string("end of input");
    const std::string shown = expected.size() == 1 ? "\"" + expected + "\"" : expected;
    throw ParseError(ErrorKind::Syntax, column, expected,
                     "syntax error at position " + std::to_string(column) +
                         ": expected " + shown + ", found " + found);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string(1, c));
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(NodeKind::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_binary(NodeKind::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_product() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(NodeKind::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(NodeKind::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_unary(NodeKind::Neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make_binary(NodeKind::Pow, base, parse_unary());
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ == text_.size()) fail("operand");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("operand");
  }

  NodePtr parse_number() {
    double v = 0.0;
    auto [end, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v,
                                     std::chars_format::general);
    if (ec != std::errc{} || !std::isfinite(v)) fail("number");
    pos_ = static_cast<std::size_t>(end - text_.data());
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Literal;
    n->value = v;
    return n;
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if (name == "x1" || name == "x2" || name == "x3") {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::Variable;
      n->variable = name[1] - '1';
      return n;
    }

    Func f;
    if (name == "sin") f = Func::Sin;
    else if (name == "cos") f = Func::Cos;
    else if (name == "exp") f = Func::Exp;
    else if (name == "sqrt") f = Func::Sqrt;
    else if (name == "abs") f = Func::Abs;
    else {
      throw ParseError(ErrorKind::UnknownIdentifier, start + 1, "x1, x2, x3 or a function",
                       "unknown identifier '" + std::string(name) + "' at position " +
                           std::to_string(start + 1));
    }

    expect('(');
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Call;
    n->func = f;
    n->lhs = parse_sum();
    expect(')');
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
  return v;
}

double eval_node(const Node& n, const Vec3& x) {
  switch (n.kind) {
    case NodeKind::Literal: return n.value;
    case NodeKind::Variable: return x[n.variable];
    case NodeKind::Neg: return -eval_node(*n.lhs, x);
    case NodeKind::Add: return checked(eval_node(*n.lhs, x) + eval_node(*n.rhs, x), "+");
    case NodeKind::Sub: return checked(eval_node(*n.lhs, x) - eval_node(*n.rhs, x), "-");
    case NodeKind::Mul: return checked(eval_node(*n.lhs, x) * eval_node(*n.rhs, x), "*");
    case NodeKind::Div: {
      const double num = eval_node(*n.lhs, x);
      const double den = eval_node(*n.rhs, x);
      if (den == 0.0) throw DomainError("division by zero");
      return checked(num / den, "/");
    }
    case NodeKind::Pow: {
      const double base = eval_node(*n.lhs, x);
      const double ex = eval_node(*n.rhs, x);
      if (base < 0.0 && std::trunc(ex) != ex)
        throw DomainError("negative base with non-integer exponent");
      if (base == 0.0 && ex < 0.0) throw DomainError("zero raised to a negative power");
      return checked(std::pow(base, ex), "^");
    }
    case NodeKind::Call: {
      const double a = eval_node(*n.lhs, x);
      switch (n.func) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Exp: return checked(std::exp(a), "exp");
        case Func::Sqrt:
          if (a < 0.0) throw DomainError("sqrt of a negative number");
          return std::sqrt(a);
        case Func::Abs: return std::abs(a);
      }
    }
  }
  throw DomainError("malformed expression node");
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
  }
  return "?";
}

void print_node(const Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print_node(*n.lhs, out);
    out += op;
    print_node(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case NodeKind::Literal: {
      char buf[64];
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, n.value);
      out.append(buf, end);
      return;
    }
    case NodeKind::Variable: out += "x"; out += char('1' + n.variable); return;
    case NodeKind::Neg: out += "(-"; print_node(*n.lhs, out); out += ')'; return;
    case NodeKind::Add: binary(" + "); return;
    case NodeKind::Sub: binary(" - "); return;
    case NodeKind::Mul: binary(" * "); return;
    case NodeKind::Div: binary(" / "); return;
    case NodeKind::Pow: binary(" ^ "); return;
    case NodeKind::Call:
      out += func_name(n.func);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
  }
}

}  // namespace

Expr Expr::literal(double v) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Literal;
  n->value = v;
  return Expr(n);
}

Expr Expr::variable(int index) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Variable;
  n->variable = index;
  return Expr(n);
}

double Expr::eval(const Vec3& point) const { return eval_node(*root_, point); }

std::string Expr::to_string() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool same_tree(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Literal: return a.value == b.value;
    case NodeKind::Variable: return a.variable == b.variable;
    case NodeKind::Neg: return same_tree(*a.lhs, *b.lhs);
    case NodeKind::Call: return a.func == b.func && same_tree(*a.lhs, *b.lhs);
    default: return same_tree(*a.lhs, *b.lhs) && same_tree(*a.rhs, *b.rhs);
  }
}

bool operator==(const Expr& a, const Expr& b) { return same_tree(*a.root_, *b.root_); }

Expr parse_expr(std::string_view text) { return Expr(Parser(text).parse()); }

}  // namespace dsl

ScalarFieldSpec parse_scalar_field(std::string_view text) {
  return ScalarFieldSpec{dsl::parse_expr(text)};
}

VectorFieldSpec parse_vector_field(std::string_view f1, std::string_view f2,
                                   std::string_view f3) {
  return VectorFieldSpec{{dsl::parse_expr(f1), dsl::parse_expr(f2), dsl::parse_expr(f3)}};
}

}  // namespace bestab
