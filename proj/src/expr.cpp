#include "openmaps/expr.hpp"

#include <cctype>
#include <cmath>
#include <format>

namespace openmaps::expr {

ExprPtr constant(double v) {
  auto e = std::make_shared<Expr>();
  e->op = Expr::Op::Const;
  e->value = v;
  return e;
}

ExprPtr variable(const std::string& name, int index) {
  auto e = std::make_shared<Expr>();
  e->op = Expr::Op::Var;
  e->var = name;
  e->var_index = index;
  return e;
}

ExprPtr unary(Expr::Op op, ExprPtr x) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->a = std::move(x);
  return e;
}

ExprPtr binary(Expr::Op op, ExprPtr x, ExprPtr y) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->a = std::move(x);
  e->b = std::move(y);
  return e;
}

PredPtr comparison(Pred::Op op, ExprPtr l, ExprPtr r) {
  auto p = std::make_shared<Pred>();
  p->op = op;
  p->lhs = std::move(l);
  p->rhs = std::move(r);
  return p;
}

PredPtr connective(Pred::Op op, PredPtr x, PredPtr y) {
  auto p = std::make_shared<Pred>();
  p->op = op;
  p->a = std::move(x);
  p->b = std::move(y);
  return p;
}

PredPtr pred_true() {
  auto p = std::make_shared<Pred>();
  p->op = Pred::Op::True;
  return p;
}

double eval(const Expr& e, std::span<const double> values) {
  using Op = Expr::Op;
  switch (e.op) {
    case Op::Const: return e.value;
    case Op::Var:
      if (e.var_index < 0 || e.var_index >= static_cast<int>(values.size()))
        throw EvalError("variable '" + e.var + "' out of range");
      return values[e.var_index];
    case Op::Add: return eval(*e.a, values) + eval(*e.b, values);
    case Op::Sub: return eval(*e.a, values) - eval(*e.b, values);
    case Op::Mul: return eval(*e.a, values) * eval(*e.b, values);
    case Op::Div: {
      double den = eval(*e.b, values);
      if (std::fabs(den) < 1e-12)
        throw EvalError("division by (near) zero in '" + to_string(e) + "'");
      return eval(*e.a, values) / den;
    }
    case Op::Neg: return -eval(*e.a, values);
    case Op::Exp: return std::exp(eval(*e.a, values));
    case Op::Sin: return std::sin(eval(*e.a, values));
    case Op::Cos: return std::cos(eval(*e.a, values));
    case Op::Min: return std::min(eval(*e.a, values), eval(*e.b, values));
    case Op::Max: return std::max(eval(*e.a, values), eval(*e.b, values));
  }
  throw EvalError("unknown operator");
}

bool eval(const Pred& p, std::span<const double> values, double slack) {
  using Op = Pred::Op;
  switch (p.op) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Le: return eval(*p.lhs, values) <= eval(*p.rhs, values) + slack;
    case Op::Lt: return eval(*p.lhs, values) < eval(*p.rhs, values) + slack;
    case Op::Ge: return eval(*p.lhs, values) >= eval(*p.rhs, values) - slack;
    case Op::Gt: return eval(*p.lhs, values) > eval(*p.rhs, values) - slack;
    case Op::Eq:
      return std::fabs(eval(*p.lhs, values) - eval(*p.rhs, values)) <= slack;
    case Op::And: return eval(*p.a, values, slack) && eval(*p.b, values, slack);
    case Op::Or: return eval(*p.a, values, slack) || eval(*p.b, values, slack);
    case Op::Not: return !eval(*p.a, values, -slack);
  }
  throw EvalError("unknown predicate operator");
}

namespace {

int precedence(Expr::Op op) {
  using Op = Expr::Op;
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    default: return 4;
  }
}

std::string print_expr(const Expr& e, int parent_prec) {
  using Op = Expr::Op;
  std::string out;
  int prec = precedence(e.op);
  switch (e.op) {
    case Op::Const: {
      out = std::format("{}", e.value);
      break;
    }
    case Op::Var: out = e.var; break;
    case Op::Add: out = print_expr(*e.a, prec) + " + " + print_expr(*e.b, prec + 1); break;
    case Op::Sub: out = print_expr(*e.a, prec) + " - " + print_expr(*e.b, prec + 1); break;
    case Op::Mul: out = print_expr(*e.a, prec) + " * " + print_expr(*e.b, prec + 1); break;
    case Op::Div: out = print_expr(*e.a, prec) + " / " + print_expr(*e.b, prec + 1); break;
    case Op::Neg: out = "-" + print_expr(*e.a, prec + 1); break;
    case Op::Exp: out = "exp(" + print_expr(*e.a, 0) + ")"; break;
    case Op::Sin: out = "sin(" + print_expr(*e.a, 0) + ")"; break;
    case Op::Cos: out = "cos(" + print_expr(*e.a, 0) + ")"; break;
    case Op::Min:
      out = "min(" + print_expr(*e.a, 0) + ", " + print_expr(*e.b, 0) + ")";
      break;
    case Op::Max:
      out = "max(" + print_expr(*e.a, 0) + ", " + print_expr(*e.b, 0) + ")";
      break;
  }
  if (prec < parent_prec && e.op != Op::Const && e.op != Op::Var)
    return "(" + out + ")";
  return out;
}

}  // namespace

std::string to_string(const Expr& e) { return print_expr(e, 0); }

std::string to_string(const Pred& p) {
  using Op = Pred::Op;
  switch (p.op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Le: return to_string(*p.lhs) + " <= " + to_string(*p.rhs);
    case Op::Lt: return to_string(*p.lhs) + " < " + to_string(*p.rhs);
    case Op::Eq: return to_string(*p.lhs) + " = " + to_string(*p.rhs);
    case Op::Ge: return to_string(*p.lhs) + " >= " + to_string(*p.rhs);
    case Op::Gt: return to_string(*p.lhs) + " > " + to_string(*p.rhs);
    case Op::And: {
      auto wrap = [](const Pred& q) {
        std::string s = to_string(q);
        return q.op == Op::Or ? "(" + s + ")" : s;
      };
      return wrap(*p.a) + " and " + wrap(*p.b);
    }
    case Op::Or: return to_string(*p.a) + " or " + to_string(*p.b);
    case Op::Not: {
      std::string s = to_string(*p.a);
      bool atom = p.a->op == Op::True || p.a->op == Op::False;
      return "not " + (atom ? s : "(" + s + ")");
    }
  }
  return "?";
}

bool structural_equal(const Expr& x, const Expr& y) {
  if (x.op != y.op) return false;
  switch (x.op) {
    case Expr::Op::Const: return x.value == y.value;
    case Expr::Op::Var: return x.var == y.var;
    default:
      if (static_cast<bool>(x.a) != static_cast<bool>(y.a) ||
          static_cast<bool>(x.b) != static_cast<bool>(y.b))
        return false;
      if (x.a && !structural_equal(*x.a, *y.a)) return false;
      if (x.b && !structural_equal(*x.b, *y.b)) return false;
      return true;
  }
}

bool structural_equal(const Pred& x, const Pred& y) {
  if (x.op != y.op) return false;
  if (static_cast<bool>(x.lhs) != static_cast<bool>(y.lhs)) return false;
  if (x.lhs && (!structural_equal(*x.lhs, *y.lhs) || !structural_equal(*x.rhs, *y.rhs)))
    return false;
  if (static_cast<bool>(x.a) != static_cast<bool>(y.a) ||
      static_cast<bool>(x.b) != static_cast<bool>(y.b))
    return false;
  if (x.a && !structural_equal(*x.a, *y.a)) return false;
  if (x.b && !structural_equal(*x.b, *y.b)) return false;
  return true;
}

namespace {

struct Parser {
  const std::string& text;
  const std::vector<std::string>& env;
  size_t at = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(at) + " in '" + text + "'");
  }

  void skip_ws() {
    while (at < text.size() && std::isspace(static_cast<unsigned char>(text[at]))) ++at;
  }

  bool eat(const std::string& tok) {
    skip_ws();
    if (text.compare(at, tok.size(), tok) == 0) {
      // Keywords must not glue onto a following identifier character.
      if (std::isalpha(static_cast<unsigned char>(tok[0]))) {
        size_t end = at + tok.size();
        if (end < text.size() &&
            (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
          return false;
      }
      at += tok.size();
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return at < text.size() ? text[at] : '\0';
  }

  std::string identifier() {
    skip_ws();
    size_t start = at;
    if (at < text.size() && (std::isalpha(static_cast<unsigned char>(text[at])) ||
                             text[at] == '_')) {
      ++at;
      while (at < text.size() && (std::isalnum(static_cast<unsigned char>(text[at])) ||
                                  text[at] == '_'))
        ++at;
    }
    return text.substr(start, at - start);
  }

  ExprPtr number() {
    skip_ws();
    size_t start = at;
    while (at < text.size() && (std::isdigit(static_cast<unsigned char>(text[at])) ||
                                text[at] == '.'))
      ++at;
    if (start == at) fail("expected a number");
    return constant(std::stod(text.substr(start, at - start)));
  }

  ExprPtr primary() {
    char c = peek();
    if (c == '(') {
      ++at;
      ExprPtr e = additive();
      if (!eat(")")) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id = identifier();
      if (id == "exp" || id == "sin" || id == "cos") {
        if (!eat("(")) fail("expected '(' after '" + id + "'");
        ExprPtr x = additive();
        if (!eat(")")) fail("expected ')'");
        auto op = id == "exp" ? Expr::Op::Exp : id == "sin" ? Expr::Op::Sin : Expr::Op::Cos;
        return unary(op, std::move(x));
      }
      if (id == "min" || id == "max") {
        if (!eat("(")) fail("expected '(' after '" + id + "'");
        ExprPtr x = additive();
        if (!eat(",")) fail("expected ','");
        ExprPtr y = additive();
        if (!eat(")")) fail("expected ')'");
        return binary(id == "min" ? Expr::Op::Min : Expr::Op::Max, std::move(x),
                      std::move(y));
      }
      for (int i = 0; i < static_cast<int>(env.size()); ++i)
        if (env[i] == id) return variable(id, i);
      fail("unknown identifier '" + id + "'");
    }
    fail("expected an expression");
  }

  ExprPtr factor() {
    if (eat("-")) return unary(Expr::Op::Neg, factor());
    return primary();
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (true) {
      if (eat("*"))
        e = binary(Expr::Op::Mul, std::move(e), factor());
      else if (eat("/"))
        e = binary(Expr::Op::Div, std::move(e), factor());
      else
        return e;
    }
  }

  ExprPtr additive() {
    ExprPtr e = term();
    while (true) {
      if (eat("+"))
        e = binary(Expr::Op::Add, std::move(e), term());
      else if (eat("-"))
        e = binary(Expr::Op::Sub, std::move(e), term());
      else
        return e;
    }
  }

  PredPtr comparison_pred() {
    if (eat("true")) return pred_true();
    if (eat("false")) return connective(Pred::Op::False, nullptr);
    ExprPtr l = additive();
    Pred::Op op;
    if (eat("<="))
      op = Pred::Op::Le;
    else if (eat(">="))
      op = Pred::Op::Ge;
    else if (eat("<"))
      op = Pred::Op::Lt;
    else if (eat(">"))
      op = Pred::Op::Gt;
    else if (eat("==") || eat("="))
      op = Pred::Op::Eq;
    else
      fail("expected a comparison operator");
    return comparison(op, std::move(l), additive());
  }

  PredPtr not_pred() {
    if (eat("not")) return connective(Pred::Op::Not, not_pred());
    if (peek() == '(') {
      // Could be a parenthesized predicate or expression; try predicate first.
      size_t save = at;
      try {
        ++at;
        PredPtr p = or_pred();
        if (!eat(")")) fail("expected ')'");
        return p;
      } catch (const ParseError&) {
        at = save;
      }
    }
    return comparison_pred();
  }

  PredPtr and_pred() {
    PredPtr p = not_pred();
    while (eat("and")) p = connective(Pred::Op::And, std::move(p), not_pred());
    return p;
  }

  PredPtr or_pred() {
    PredPtr p = and_pred();
    while (eat("or")) p = connective(Pred::Op::Or, std::move(p), and_pred());
    return p;
  }

  void expect_done() {
    skip_ws();
    if (at != text.size()) fail("unexpected trailing input");
  }
};

}  // namespace

ExprPtr parse_expr(const std::string& text, const std::vector<std::string>& env) {
  Parser p{text, env};
  ExprPtr e = p.additive();
  p.expect_done();
  return e;
}

PredPtr parse_pred(const std::string& text, const std::vector<std::string>& env) {
  Parser p{text, env};
  PredPtr pr = p.or_pred();
  p.expect_done();
  return pr;
}

std::vector<std::string> division_sites(const Expr& e) {
  std::vector<std::string> out;
  if (e.op == Expr::Op::Div) out.push_back(to_string(e));
  if (e.a)
    for (auto& s : division_sites(*e.a)) out.push_back(s);
  if (e.b)
    for (auto& s : division_sites(*e.b)) out.push_back(s);
  return out;
}

}  // namespace openmaps::expr
