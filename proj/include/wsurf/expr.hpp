#pragma once

// A small immutable expression language over one scalar variable and the
// named parameters p, q.  It is the common currency of the library:
// Weingarten pairs carry f(nu), g(nu) as expressions, canonical PDE forms
// carry F(lam) and R(lam), and everything that needs derivatives
// (quadrature integrands, Newton Jacobians, chain-rule residuals) obtains
// them symbolically instead of by finite differencing the coefficient
// functions.
//
// Supported grammar (recursive descent, usual precedence):
//   expr   := term  (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?          (right-associative)
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
// Identifiers: the variable ("nu" or "lam" -- both denote *the* variable),
// parameters "p" and "q", the constant "pi", and the functions
// exp, ln, sqrt, sin, cos, tan, arctan, sinh, cosh.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>

#include "wsurf/errors.hpp"

namespace wsurf {

struct EvalEnv {
  double x = 0.0;  // value of the variable (nu or lam, per context)
  double p = 0.0;
  double q = 0.0;
};

class Expr {
 public:
  enum class Kind { Const, Var, Param, Add, Sub, Mul, Div, Pow, Neg, Fun };
  enum class Fn { Exp, Ln, Sqrt, Sin, Cos, Tan, Arctan, Sinh, Cosh };

  Expr() : node_(constant_node(0.0)) {}

  static Expr constant(double v) { return Expr(constant_node(v)); }
  static Expr var(std::string name = "nu") {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->name = std::move(name);
    return Expr(std::move(n));
  }
  static Expr param(const std::string& name) {
    if (name != "p" && name != "q") throw UsageError("unknown parameter: " + name);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Param;
    n->name = name;
    return Expr(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  bool is_const() const { return node_->kind == Kind::Const; }
  bool is_const(double v) const { return is_const() && node_->value == v; }
  double const_value() const { return node_->value; }
  const std::string& symbol_name() const { return node_->name; }

  // ---- evaluation ----
  double eval(const EvalEnv& env) const { return eval_node(*node_, env); }
  double operator()(double x, double p = 0.0, double q = 0.0) const {
    return eval(EvalEnv{x, p, q});
  }

  // ---- symbolic derivative with respect to the variable ----
  Expr diff() const { return diff_node(*this); }

  // ---- structural transforms ----
  // Replace every occurrence of the variable by `repl` (composition).
  Expr substitute_var(const Expr& repl) const { return subst(*this, repl); }
  // Replace parameters by numeric constants (for fully-bound evaluation or
  // printing of a concrete family member).
  Expr bind_params(double p, double q) const { return bind(*this, p, q); }
  // Rename the variable (e.g. print in terms of lam instead of nu).
  Expr rename_var(const std::string& name) const { return rename(*this, name); }

  bool depends_on_var() const { return depends(*node_); }

  // ---- printing (canonical, minimal parentheses) ----
  std::string str() const { return print(*node_, 0); }

  // ---- parsing ----
  static Expr parse(const std::string& text) {
    Parser p(text);
    Expr e = p.parse_expr();
    p.skip_ws();
    if (!p.done()) throw UsageError("trailing input in expression: '" + text + "'");
    return e;
  }

  // ---- smart constructors (light algebraic simplification) ----
  friend Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return constant(a.const_value() + b.const_value());
    if (a.is_const(0.0)) return b;
    if (b.is_const(0.0)) return a;
    return make(Kind::Add, a, b);
  }
  friend Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return constant(a.const_value() - b.const_value());
    if (b.is_const(0.0)) return a;
    if (a.is_const(0.0)) return -b;
    return make(Kind::Sub, a, b);
  }
  friend Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const()) return constant(a.const_value() * b.const_value());
    if (a.is_const(0.0) || b.is_const(0.0)) return constant(0.0);
    if (a.is_const(1.0)) return b;
    if (b.is_const(1.0)) return a;
    if (a.is_const(-1.0)) return -b;
    if (b.is_const(-1.0)) return -a;
    return make(Kind::Mul, a, b);
  }
  friend Expr operator/(const Expr& a, const Expr& b) {
    if (a.is_const() && b.is_const() && b.const_value() != 0.0)
      return constant(a.const_value() / b.const_value());
    if (a.is_const(0.0)) return constant(0.0);
    if (b.is_const(1.0)) return a;
    return make(Kind::Div, a, b);
  }
  friend Expr operator-(const Expr& a) {
    if (a.is_const()) return constant(-a.const_value());
    if (a.kind() == Kind::Neg) return Expr(a.node_->a);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Neg;
    n->a = a.node_;
    return Expr(std::move(n));
  }
  friend Expr operator+(const Expr& a, double b) { return a + constant(b); }
  friend Expr operator+(double a, const Expr& b) { return constant(a) + b; }
  friend Expr operator-(const Expr& a, double b) { return a - constant(b); }
  friend Expr operator-(double a, const Expr& b) { return constant(a) - b; }
  friend Expr operator*(const Expr& a, double b) { return a * constant(b); }
  friend Expr operator*(double a, const Expr& b) { return constant(a) * b; }
  friend Expr operator/(const Expr& a, double b) { return a / constant(b); }
  friend Expr operator/(double a, const Expr& b) { return constant(a) / b; }

  friend Expr pow(const Expr& a, const Expr& b) {
    if (b.is_const(1.0)) return a;
    if (b.is_const(0.0)) return constant(1.0);
    if (a.is_const() && b.is_const())
      return constant(std::pow(a.const_value(), b.const_value()));
    return make(Kind::Pow, a, b);
  }
  friend Expr pow(const Expr& a, double b) { return pow(a, constant(b)); }

  friend Expr exp(const Expr& a) { return fun(Fn::Exp, a); }
  friend Expr ln(const Expr& a) { return fun(Fn::Ln, a); }
  friend Expr sqrt(const Expr& a) { return fun(Fn::Sqrt, a); }
  friend Expr sin(const Expr& a) { return fun(Fn::Sin, a); }
  friend Expr cos(const Expr& a) { return fun(Fn::Cos, a); }
  friend Expr tan(const Expr& a) { return fun(Fn::Tan, a); }
  friend Expr arctan(const Expr& a) { return fun(Fn::Arctan, a); }
  friend Expr sinh(const Expr& a) { return fun(Fn::Sinh, a); }
  friend Expr cosh(const Expr& a) { return fun(Fn::Cosh, a); }

 private:
  struct Node {
    Kind kind = Kind::Const;
    double value = 0.0;        // Const
    std::string name;          // Var / Param
    Fn fn = Fn::Exp;           // Fun
    std::shared_ptr<const Node> a, b;
  };
  using NodePtr = std::shared_ptr<const Node>;

  explicit Expr(NodePtr n) : node_(std::move(n)) {}

  static NodePtr constant_node(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->value = v;
    return n;
  }
  static Expr make(Kind k, const Expr& a, const Expr& b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(std::move(n));
  }
  static Expr fun(Fn f, const Expr& a) {
    if (a.is_const()) {
      const double v = a.const_value();
      switch (f) {
        case Fn::Exp: return constant(std::exp(v));
        case Fn::Ln: return constant(std::log(v));
        case Fn::Sqrt: return constant(std::sqrt(v));
        case Fn::Sin: return constant(std::sin(v));
        case Fn::Cos: return constant(std::cos(v));
        case Fn::Tan: return constant(std::tan(v));
        case Fn::Arctan: return constant(std::atan(v));
        case Fn::Sinh: return constant(std::sinh(v));
        case Fn::Cosh: return constant(std::cosh(v));
      }
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Fun;
    n->fn = f;
    n->a = a.node_;
    return Expr(std::move(n));
  }

  static double eval_node(const Node& n, const EvalEnv& env) {
    switch (n.kind) {
      case Kind::Const: return n.value;
      case Kind::Var: return env.x;
      case Kind::Param: return n.name == "p" ? env.p : env.q;
      case Kind::Add: return eval_node(*n.a, env) + eval_node(*n.b, env);
      case Kind::Sub: return eval_node(*n.a, env) - eval_node(*n.b, env);
      case Kind::Mul: return eval_node(*n.a, env) * eval_node(*n.b, env);
      case Kind::Div: return eval_node(*n.a, env) / eval_node(*n.b, env);
      case Kind::Pow: return std::pow(eval_node(*n.a, env), eval_node(*n.b, env));
      case Kind::Neg: return -eval_node(*n.a, env);
      case Kind::Fun: {
        const double v = eval_node(*n.a, env);
        switch (n.fn) {
          case Fn::Exp: return std::exp(v);
          case Fn::Ln: return std::log(v);
          case Fn::Sqrt: return std::sqrt(v);
          case Fn::Sin: return std::sin(v);
          case Fn::Cos: return std::cos(v);
          case Fn::Tan: return std::tan(v);
          case Fn::Arctan: return std::atan(v);
          case Fn::Sinh: return std::sinh(v);
          case Fn::Cosh: return std::cosh(v);
        }
      }
    }
    return 0.0;  // unreachable
  }

  static bool depends(const Node& n) {
    switch (n.kind) {
      case Kind::Const:
      case Kind::Param: return false;
      case Kind::Var: return true;
      case Kind::Neg:
      case Kind::Fun: return depends(*n.a);
      default: return depends(*n.a) || depends(*n.b);
    }
  }

  static Expr diff_node(const Expr& e) {
    const Node& n = *e.node_;
    switch (n.kind) {
      case Kind::Const:
      case Kind::Param: return constant(0.0);
      case Kind::Var: return constant(1.0);
      case Kind::Add: return diff_node(Expr(n.a)) + diff_node(Expr(n.b));
      case Kind::Sub: return diff_node(Expr(n.a)) - diff_node(Expr(n.b));
      case Kind::Mul: {
        Expr a(n.a), b(n.b);
        return diff_node(a) * b + a * diff_node(b);
      }
      case Kind::Div: {
        Expr a(n.a), b(n.b);
        return (diff_node(a) * b - a * diff_node(b)) / (b * b);
      }
      case Kind::Pow: {
        Expr a(n.a), b(n.b);
        const bool base_dep = a.depends_on_var();
        const bool exp_dep = b.depends_on_var();
        if (!exp_dep && !base_dep) return constant(0.0);
        if (!exp_dep) return b * pow(a, b - constant(1.0)) * diff_node(a);
        if (!base_dep) return pow(a, b) * ln(a) * diff_node(b);
        return pow(a, b) * (diff_node(b) * ln(a) + b * diff_node(a) / a);
      }
      case Kind::Neg: return -diff_node(Expr(n.a));
      case Kind::Fun: {
        Expr a(n.a);
        Expr ad = diff_node(a);
        switch (n.fn) {
          case Fn::Exp: return exp(a) * ad;
          case Fn::Ln: return ad / a;
          case Fn::Sqrt: return ad / (constant(2.0) * sqrt(a));
          case Fn::Sin: return cos(a) * ad;
          case Fn::Cos: return -(sin(a) * ad);
          case Fn::Tan: return ad / pow(cos(a), 2.0);
          case Fn::Arctan: return ad / (constant(1.0) + a * a);
          case Fn::Sinh: return cosh(a) * ad;
          case Fn::Cosh: return sinh(a) * ad;
        }
      }
    }
    return constant(0.0);  // unreachable
  }

  static Expr subst(const Expr& e, const Expr& repl) {
    const Node& n = *e.node_;
    switch (n.kind) {
      case Kind::Const:
      case Kind::Param: return e;
      case Kind::Var: return repl;
      case Kind::Add: return subst(Expr(n.a), repl) + subst(Expr(n.b), repl);
      case Kind::Sub: return subst(Expr(n.a), repl) - subst(Expr(n.b), repl);
      case Kind::Mul: return subst(Expr(n.a), repl) * subst(Expr(n.b), repl);
      case Kind::Div: return subst(Expr(n.a), repl) / subst(Expr(n.b), repl);
      case Kind::Pow: return pow(subst(Expr(n.a), repl), subst(Expr(n.b), repl));
      case Kind::Neg: return -subst(Expr(n.a), repl);
      case Kind::Fun: return fun(n.fn, subst(Expr(n.a), repl));
    }
    return e;  // unreachable
  }

  static Expr bind(const Expr& e, double p, double q) {
    const Node& n = *e.node_;
    switch (n.kind) {
      case Kind::Const:
      case Kind::Var: return e;
      case Kind::Param: return constant(n.name == "p" ? p : q);
      case Kind::Add: return bind(Expr(n.a), p, q) + bind(Expr(n.b), p, q);
      case Kind::Sub: return bind(Expr(n.a), p, q) - bind(Expr(n.b), p, q);
      case Kind::Mul: return bind(Expr(n.a), p, q) * bind(Expr(n.b), p, q);
      case Kind::Div: return bind(Expr(n.a), p, q) / bind(Expr(n.b), p, q);
      case Kind::Pow: return pow(bind(Expr(n.a), p, q), bind(Expr(n.b), p, q));
      case Kind::Neg: return -bind(Expr(n.a), p, q);
      case Kind::Fun: return fun(n.fn, bind(Expr(n.a), p, q));
    }
    return e;  // unreachable
  }

  static Expr rename(const Expr& e, const std::string& name) {
    const Node& n = *e.node_;
    switch (n.kind) {
      case Kind::Const:
      case Kind::Param: return e;
      case Kind::Var: return var(name);
      case Kind::Add: return make(Kind::Add, rename(Expr(n.a), name), rename(Expr(n.b), name));
      case Kind::Sub: return make(Kind::Sub, rename(Expr(n.a), name), rename(Expr(n.b), name));
      case Kind::Mul: return make(Kind::Mul, rename(Expr(n.a), name), rename(Expr(n.b), name));
      case Kind::Div: return make(Kind::Div, rename(Expr(n.a), name), rename(Expr(n.b), name));
      case Kind::Pow: return make(Kind::Pow, rename(Expr(n.a), name), rename(Expr(n.b), name));
      case Kind::Neg: return -rename(Expr(n.a), name);
      case Kind::Fun: {
        auto m = std::make_shared<Node>();
        m->kind = Kind::Fun;
        m->fn = n.fn;
        m->a = rename(Expr(n.a), name).node_;
        return Expr(std::move(m));
      }
    }
    return e;  // unreachable
  }

  // Precedence for printing: Add/Sub 1, Mul/Div 2, Neg 2, Pow 3, atoms 4.
  static int prec(const Node& n) {
    switch (n.kind) {
      case Kind::Add:
      case Kind::Sub: return 1;
      case Kind::Mul:
      case Kind::Div: return 2;
      case Kind::Neg: return 2;
      case Kind::Pow: return 3;
      default: return 4;
    }
  }

  static std::string num_str(double v) {
    if (v == static_cast<long long>(v) && std::abs(v) < 1e15) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
      return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  static std::string wrap(const Node& n, int min_prec) {
    std::string s = print(n, 0);
    if (prec(n) < min_prec) return "(" + s + ")";
    return s;
  }

  static std::string print(const Node& n, int /*ctx*/) {
    switch (n.kind) {
      case Kind::Const:
        if (n.value < 0.0) return "(" + num_str(n.value) + ")";
        return num_str(n.value);
      case Kind::Var:
      case Kind::Param: return n.name;
      case Kind::Add: return wrap(*n.a, 1) + "+" + wrap(*n.b, 2);
      case Kind::Sub: return wrap(*n.a, 1) + "-" + wrap(*n.b, 2);
      case Kind::Mul: return wrap(*n.a, 2) + "*" + wrap(*n.b, 3);
      case Kind::Div: return wrap(*n.a, 2) + "/" + wrap(*n.b, 3);
      case Kind::Pow: return wrap(*n.a, 4) + "^" + wrap(*n.b, 4);
      case Kind::Neg: return "-" + wrap(*n.a, 2);
      case Kind::Fun: {
        const char* name = "";
        switch (n.fn) {
          case Fn::Exp: name = "exp"; break;
          case Fn::Ln: name = "ln"; break;
          case Fn::Sqrt: name = "sqrt"; break;
          case Fn::Sin: name = "sin"; break;
          case Fn::Cos: name = "cos"; break;
          case Fn::Tan: name = "tan"; break;
          case Fn::Arctan: name = "arctan"; break;
          case Fn::Sinh: name = "sinh"; break;
          case Fn::Cosh: name = "cosh"; break;
        }
        return std::string(name) + "(" + print(*n.a, 0) + ")";
      }
    }
    return "";  // unreachable
  }

  class Parser {
   public:
    explicit Parser(const std::string& s) : s_(s) {}

    Expr parse_expr() {
      Expr e = parse_term();
      for (;;) {
        skip_ws();
        if (accept('+')) {
          e = raw(Kind::Add, e, parse_term());
        } else if (accept('-')) {
          e = raw(Kind::Sub, e, parse_term());
        } else {
          return e;
        }
      }
    }

    void skip_ws() {
      while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool done() const { return i_ >= s_.size(); }

   private:
    Expr parse_term() {
      Expr e = parse_unary();
      for (;;) {
        skip_ws();
        if (accept('*')) {
          e = raw(Kind::Mul, e, parse_unary());
        } else if (accept('/')) {
          e = raw(Kind::Div, e, parse_unary());
        } else {
          return e;
        }
      }
    }

    Expr parse_unary() {
      skip_ws();
      if (accept('-')) {
        Expr inner = parse_unary();
        auto n = std::make_shared<Node>();
        n->kind = Kind::Neg;
        n->a = inner.node_;
        return Expr(std::move(n));
      }
      return parse_power();
    }

    Expr parse_power() {
      Expr base = parse_atom();
      skip_ws();
      if (accept('^')) {
        Expr expo = parse_unary();
        return raw(Kind::Pow, base, expo);
      }
      return base;
    }

    Expr parse_atom() {
      skip_ws();
      if (done()) throw UsageError("unexpected end of expression");
      const char c = s_[i_];
      if (accept('(')) {
        Expr e = parse_expr();
        skip_ws();
        if (!accept(')')) throw UsageError("missing ')' in expression");
        return e;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
      throw UsageError(std::string("unexpected character '") + c + "' in expression");
    }

    Expr parse_number() {
      size_t end = i_;
      while (end < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
              s_[end] == 'e' || s_[end] == 'E' ||
              ((s_[end] == '+' || s_[end] == '-') && end > i_ &&
               (s_[end - 1] == 'e' || s_[end - 1] == 'E')))) {
        ++end;
      }
      const std::string tok = s_.substr(i_, end - i_);
      try {
        const double v = std::stod(tok);
        i_ = end;
        return constant(v);
      } catch (const std::exception&) {
        throw UsageError("bad numeric literal '" + tok + "'");
      }
    }

    Expr parse_ident() {
      size_t end = i_;
      while (end < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) {
        ++end;
      }
      const std::string id = s_.substr(i_, end - i_);
      i_ = end;
      if (id == "nu" || id == "lam" || id == "lambda") return var(id == "lambda" ? "lam" : id);
      if (id == "p" || id == "q") return param(id);
      if (id == "pi") return constant(3.14159265358979323846);
      static const std::pair<const char*, Fn> fns[] = {
          {"exp", Fn::Exp},   {"ln", Fn::Ln},     {"sqrt", Fn::Sqrt},
          {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"tan", Fn::Tan},
          {"arctan", Fn::Arctan}, {"atan", Fn::Arctan},
          {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh},
      };
      for (const auto& [name, f] : fns) {
        if (id == name) {
          skip_ws();
          if (!accept('(')) throw UsageError("expected '(' after function " + id);
          Expr arg = parse_expr();
          skip_ws();
          if (!accept(')')) throw UsageError("missing ')' after argument of " + id);
          auto n = std::make_shared<Node>();
          n->kind = Kind::Fun;
          n->fn = f;
          n->a = arg.node_;
          return Expr(std::move(n));
        }
      }
      throw UsageError("unknown identifier '" + id + "' in expression");
    }

    // Raw constructor: preserves the written shape (no folding), so that
    // parse/print round-trips keep the canonical spelling.
    static Expr raw(Kind k, const Expr& a, const Expr& b) { return make(k, a, b); }

    bool accept(char c) {
      if (i_ < s_.size() && s_[i_] == c) {
        ++i_;
        return true;
      }
      return false;
    }

    const std::string& s_;
    size_t i_ = 0;
  };

  NodePtr node_;
};

}  // namespace wsurf
