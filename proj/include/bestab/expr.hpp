#pragma once

// Scalar expression language over (x1, x2, x3).
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | x1 | x2 | x3 | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp | sqrt | abs
//
// Evaluation never returns NaN or infinity: any undefined or non-finite
// intermediate raises a DomainError instead.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "bestab/errors.hpp"
#include "bestab/linalg.hpp"

namespace bestab::dsl {

enum class NodeKind { Literal, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };
enum class Func { Sin, Cos, Exp, Sqrt, Abs };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  double value = 0.0;    // Literal
  int variable = 0;      // Variable: 0, 1, 2 for x1, x2, x3
  Func func = Func::Sin; // Call
  NodePtr lhs;           // unary operand / call argument / left operand
  NodePtr rhs;
};

/// Syntax and unknown-identifier errors. position is 1-based: the column of
/// the offending character, or length + 1 at end of input.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t position, std::string expected,
             const std::string& what)
      : Error(kind, what), position_(position), expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// Immutable expression tree. Copies share structure.
class Expr {
 public:
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  static Expr literal(double v);
  static Expr variable(int index);

  const Node& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }

  double eval(const Vec3& point) const;

  /// Fully parenthesised text that parses back to an identical tree.
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  NodePtr root_;
};

Expr parse_expr(std::string_view text);

inline double eval(const Expr& e, const Vec3& point) { return e.eval(point); }

bool same_tree(const Node& a, const Node& b);

}  // namespace bestab::dsl
