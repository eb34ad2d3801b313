#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace openmaps::expr {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Arithmetic expression tree. Variables are resolved against the declared
/// environment at parse time, so evaluation is index-based.
struct Expr {
  enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Exp, Sin, Cos, Min, Max };
  Op op = Op::Const;
  double value = 0.0;     // Const
  std::string var;        // Var
  int var_index = -1;     // Var, position in the environment
  ExprPtr a, b;
};

struct Pred;
using PredPtr = std::shared_ptr<const Pred>;

/// Boolean combination of comparisons between expressions.
struct Pred {
  enum class Op { Le, Lt, Eq, Ge, Gt, And, Or, Not, True, False };
  Op op = Pred::Op::True;
  ExprPtr lhs, rhs;  // comparisons
  PredPtr a, b;      // connectives
};

ExprPtr constant(double v);
ExprPtr variable(const std::string& name, int index);
ExprPtr unary(Expr::Op op, ExprPtr x);
ExprPtr binary(Expr::Op op, ExprPtr x, ExprPtr y);
PredPtr comparison(Pred::Op op, ExprPtr l, ExprPtr r);
PredPtr connective(Pred::Op op, PredPtr x, PredPtr y = nullptr);
PredPtr pred_true();

/// Values are positional, aligned with the environment the tree was parsed
/// against. Throws EvalError on near-zero division.
double eval(const Expr& e, std::span<const double> values);

/// Exact comparison semantics; `slack` loosens every comparison by the given
/// nonnegative amount (used for guard checks under integration tolerance).
bool eval(const Pred& p, std::span<const double> values, double slack = 0.0);

std::string to_string(const Expr& e);
std::string to_string(const Pred& p);

bool structural_equal(const Expr& x, const Expr& y);
bool structural_equal(const Pred& x, const Pred& y);

/// Parses against the declared variable environment; unknown identifiers and
/// syntax errors throw ParseError with position information.
ExprPtr parse_expr(const std::string& text, const std::vector<std::string>& env);
PredPtr parse_pred(const std::string& text, const std::vector<std::string>& env);

/// Names every division node, for the Lipschitz flow screening.
std::vector<std::string> division_sites(const Expr& e);

}  // namespace openmaps::expr
