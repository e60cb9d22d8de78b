#include "myller/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace myller {

namespace {

ExprPtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

bool is_const(const ExprPtr& p, double v) {
  return p->kind == NodeKind::Constant && p->value == v;
}

double checked_pow(double base, double expo) {
  double r = std::floor(expo);
  if (expo != r && base <= 0.0)
    throw EvalError("fractional power of non-positive base");
  double out = std::pow(base, expo);
  if (!std::isfinite(out)) throw EvalError("power overflow or domain error");
  return out;
}

double eval_node(const ExprNode& n, double s) {
  switch (n.kind) {
    case NodeKind::Constant: return n.value;
    case NodeKind::Var: return s;
    case NodeKind::Unary: {
      double x = eval_node(*n.a, s);
      switch (n.uop) {
        case UnaryOp::Neg: return -x;
        case UnaryOp::Sin: return std::sin(x);
        case UnaryOp::Cos: return std::cos(x);
        case UnaryOp::Tan: {
          double v = std::tan(x);
          if (!std::isfinite(v)) throw EvalError("tan pole");
          return v;
        }
        case UnaryOp::Exp: {
          double v = std::exp(x);
          if (!std::isfinite(v)) throw EvalError("exp overflow");
          return v;
        }
        case UnaryOp::Log:
          if (x <= 0.0) throw EvalError("log of non-positive value");
          return std::log(x);
        case UnaryOp::Sqrt:
          if (x < 0.0) throw EvalError("sqrt of negative value");
          return std::sqrt(x);
        case UnaryOp::Abs: return std::fabs(x);
      }
      break;
    }
    case NodeKind::Binary: {
      double x = eval_node(*n.a, s);
      double y = eval_node(*n.b, s);
      switch (n.bop) {
        case BinaryOp::Add: return x + y;
        case BinaryOp::Sub: return x - y;
        case BinaryOp::Mul: return x * y;
        case BinaryOp::Div:
          if (y == 0.0) throw EvalError("division by zero");
          return x / y;
        case BinaryOp::Pow: return checked_pow(x, y);
      }
      break;
    }
  }
  throw EvalError("corrupt expression node");
}

}  // namespace

double ExprAst::eval(double s) const {
  if (!root_) throw EvalError("empty expression");
  double v = eval_node(*root_, s);
  if (!std::isfinite(v)) throw EvalError("non-finite result");
  return v;
}

bool ExprAst::as_constant(double& out) const {
  if (root_ && root_->kind == NodeKind::Constant) {
    out = root_->value;
    return true;
  }
  if (root_ && root_->kind == NodeKind::Unary && root_->uop == UnaryOp::Neg &&
      root_->a->kind == NodeKind::Constant) {
    out = -root_->a->value;
    return true;
  }
  return false;
}

ExprAst ExprAst::constant(double v) {
  // negatives are stored as Neg(positive) so printing round-trips
  if (v < 0.0 || std::signbit(v))
    return unary(UnaryOp::Neg, constant(-v));
  return ExprAst(make_node({NodeKind::Constant, v, {}, {}, nullptr, nullptr}));
}

ExprAst ExprAst::var() {
  return ExprAst(make_node({NodeKind::Var, 0.0, {}, {}, nullptr, nullptr}));
}

ExprAst ExprAst::unary(UnaryOp op, ExprAst a) {
  if (op == UnaryOp::Neg) {
    // --x -> x
    if (a.root()->kind == NodeKind::Unary && a.root()->uop == UnaryOp::Neg)
      return ExprAst(a.root()->a);
    if (is_const(a.root(), 0.0)) return a;
  }
  ExprNode n;
  n.kind = NodeKind::Unary;
  n.uop = op;
  n.a = a.root();
  return ExprAst(make_node(std::move(n)));
}

ExprAst ExprAst::binary(BinaryOp op, ExprAst a, ExprAst b) {
  const ExprPtr& x = a.root();
  const ExprPtr& y = b.root();
  double ca, cb;
  bool xa = a.as_constant(ca), xb = b.as_constant(cb);
  switch (op) {
    case BinaryOp::Add:
      if (is_const(x, 0.0)) return b;
      if (is_const(y, 0.0)) return a;
      if (xa && xb) return constant(ca + cb);
      break;
    case BinaryOp::Sub:
      if (is_const(y, 0.0)) return a;
      if (is_const(x, 0.0)) return unary(UnaryOp::Neg, b);
      if (xa && xb) return constant(ca - cb);
      break;
    case BinaryOp::Mul:
      if (is_const(x, 0.0) || is_const(y, 0.0)) return constant(0.0);
      if (is_const(x, 1.0)) return b;
      if (is_const(y, 1.0)) return a;
      if (xa && xb) return constant(ca * cb);
      break;
    case BinaryOp::Div:
      if (is_const(x, 0.0) && !is_const(y, 0.0)) return constant(0.0);
      if (is_const(y, 1.0)) return a;
      break;
    case BinaryOp::Pow:
      if (is_const(y, 1.0)) return a;
      if (is_const(y, 0.0)) return constant(1.0);
      if (xa && xb) {
        double r = std::pow(ca, cb);
        if (std::isfinite(r) && (ca > 0.0 || cb == std::floor(cb))) return constant(r);
      }
      break;
  }
  ExprNode n;
  n.kind = NodeKind::Binary;
  n.bop = op;
  n.a = x;
  n.b = y;
  return ExprAst(make_node(std::move(n)));
}

// ---- symbolic differentiation ----

namespace {

ExprAst diff_ast(const ExprPtr& p);

ExprAst A(const ExprPtr& p) { return ExprAst(p); }

ExprAst diff_unary(const ExprNode& n) {
  ExprAst f = A(n.a);
  ExprAst fd = diff_ast(n.a);
  using U = UnaryOp;
  using B = BinaryOp;
  switch (n.uop) {
    case U::Neg: return ExprAst::unary(U::Neg, fd);
    case U::Sin: return ExprAst::binary(B::Mul, ExprAst::unary(U::Cos, f), fd);
    case U::Cos:
      return ExprAst::unary(U::Neg, ExprAst::binary(B::Mul, ExprAst::unary(U::Sin, f), fd));
    case U::Tan:
      return ExprAst::binary(
          B::Div, fd,
          ExprAst::binary(B::Pow, ExprAst::unary(U::Cos, f), ExprAst::constant(2.0)));
    case U::Exp: return ExprAst::binary(B::Mul, ExprAst::unary(U::Exp, f), fd);
    case U::Log: return ExprAst::binary(B::Div, fd, f);
    case U::Sqrt:
      return ExprAst::binary(
          B::Div, fd,
          ExprAst::binary(B::Mul, ExprAst::constant(2.0), ExprAst::unary(U::Sqrt, f)));
    case U::Abs:
      // sign(f) * f' written as f/|f| * f'
      return ExprAst::binary(
          B::Mul, ExprAst::binary(B::Div, f, ExprAst::unary(U::Abs, f)), fd);
  }
  throw EvalError("corrupt unary node");
}

ExprAst diff_binary(const ExprNode& n) {
  ExprAst f = A(n.a), g = A(n.b);
  ExprAst fd = diff_ast(n.a), gd = diff_ast(n.b);
  using B = BinaryOp;
  switch (n.bop) {
    case B::Add: return ExprAst::binary(B::Add, fd, gd);
    case B::Sub: return ExprAst::binary(B::Sub, fd, gd);
    case B::Mul:
      return ExprAst::binary(B::Add, ExprAst::binary(B::Mul, fd, g),
                             ExprAst::binary(B::Mul, f, gd));
    case B::Div:
      return ExprAst::binary(
          B::Div,
          ExprAst::binary(B::Sub, ExprAst::binary(B::Mul, fd, g),
                          ExprAst::binary(B::Mul, f, gd)),
          ExprAst::binary(B::Pow, g, ExprAst::constant(2.0)));
    case B::Pow: {
      // exponent is constant by construction: c*f^(c-1)*f'
      double c;
      if (!g.as_constant(c)) throw EvalError("non-constant exponent in derivative");
      return ExprAst::binary(
          B::Mul, ExprAst::constant(c),
          ExprAst::binary(B::Mul,
                          ExprAst::binary(B::Pow, f, ExprAst::constant(c - 1.0)), fd));
    }
  }
  throw EvalError("corrupt binary node");
}

ExprAst diff_ast(const ExprPtr& p) {
  switch (p->kind) {
    case NodeKind::Constant: return ExprAst::constant(0.0);
    case NodeKind::Var: return ExprAst::constant(1.0);
    case NodeKind::Unary: return diff_unary(*p);
    case NodeKind::Binary: return diff_binary(*p);
  }
  throw EvalError("corrupt expression node");
}

}  // namespace

ExprAst ExprAst::derivative() const {
  if (!root_) throw EvalError("empty expression");
  return diff_ast(root_);
}

// ---- printing ----

namespace {

// precedence: add/sub 1, mul/div 2, neg 3, pow 4, atoms 5
int node_prec(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::Constant:
    case NodeKind::Var: return 5;
    case NodeKind::Unary: return n.uop == UnaryOp::Neg ? 3 : 5;
    case NodeKind::Binary:
      switch (n.bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub: return 1;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 2;
        case BinaryOp::Pow: return 4;
      }
  }
  return 5;
}

const char* func_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Tan: return "tan";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Abs: return "abs";
    default: return "?";
  }
}

std::string fmt_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const ExprNode& n, std::string& out, int parent_prec) {
  int prec = node_prec(n);
  bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (n.kind) {
    case NodeKind::Constant: out += fmt_number(n.value); break;
    case NodeKind::Var: out += 's'; break;
    case NodeKind::Unary:
      if (n.uop == UnaryOp::Neg) {
        out += '-';
        // grammar: '-' applies to a base, so anything below a bare atom
        // or function call needs parens
        print_node(*n.a, out, 5);
      } else {
        out += func_name(n.uop);
        out += '(';
        print_node(*n.a, out, 0);
        out += ')';
      }
      break;
    case NodeKind::Binary: {
      char op = 0;
      int lp = prec, rp = prec + 1;
      switch (n.bop) {
        case BinaryOp::Add: op = '+'; break;
        case BinaryOp::Sub: op = '-'; break;
        case BinaryOp::Mul: op = '*'; break;
        case BinaryOp::Div: op = '/'; break;
        case BinaryOp::Pow:
          op = '^';
          lp = prec + 1;  // '^' is right-associative, base must bind tighter
          rp = prec;
          break;
      }
      print_node(*n.a, out, lp);
      out += op;
      print_node(*n.b, out, rp);
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace

std::string ExprAst::str() const {
  if (!root_) return "";
  std::string out;
  print_node(*root_, out, 0);
  return out;
}

bool ExprAst::equals(const ExprAst& other) const {
  struct Cmp {
    static bool eq(const ExprPtr& a, const ExprPtr& b) {
      if (a == b) return true;
      if (!a || !b) return false;
      if (a->kind != b->kind) return false;
      switch (a->kind) {
        case NodeKind::Constant: return a->value == b->value;
        case NodeKind::Var: return true;
        case NodeKind::Unary: return a->uop == b->uop && eq(a->a, b->a);
        case NodeKind::Binary:
          return a->bop == b->bop && eq(a->a, b->a) && eq(a->b, b->b);
      }
      return false;
    }
  };
  return Cmp::eq(root_, other.root_);
}

// ---- parser ----

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  ExprAst parse() {
    ExprAst e = parse_expr_();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError(pos_, "unexpected trailing input");
    return e;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek_char(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek_char(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) throw ParseError(pos_, std::string("expected ") + what);
  }

  ExprAst parse_expr_() {
    ExprAst e = parse_term();
    for (;;) {
      if (accept('+')) e = ExprAst::binary(BinaryOp::Add, e, parse_term());
      else if (accept('-')) e = ExprAst::binary(BinaryOp::Sub, e, parse_term());
      else return e;
    }
  }

  ExprAst parse_term() {
    ExprAst e = parse_factor();
    for (;;) {
      if (accept('*')) e = ExprAst::binary(BinaryOp::Mul, e, parse_factor());
      else if (accept('/')) e = ExprAst::binary(BinaryOp::Div, e, parse_factor());
      else return e;
    }
  }

  ExprAst parse_factor() {
    ExprAst base = parse_base();
    if (accept('^')) {
      std::size_t at = pos_;
      ExprAst expo = parse_factor();
      double c;
      if (!expo.as_constant(c))
        throw ParseError(at, "exponent must be a constant");
      return ExprAst::binary(BinaryOp::Pow, base, ExprAst::constant(c));
    }
    return base;
  }

  ExprAst parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(pos_, "unexpected end of input");
    char c = text_[pos_];
    if (c == '-') {
      ++pos_;
      return ExprAst::unary(UnaryOp::Neg, parse_base());
    }
    if (c == '(') {
      ++pos_;
      ExprAst e = parse_expr_();
      expect(')', "')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

  ExprAst parse_number() {
    std::size_t start = pos_;
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError(start, "malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    if (!std::isfinite(v)) throw ParseError(start, "number out of range");
    return ExprAst::constant(v);
  }

  ExprAst parse_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string name = text_.substr(start, pos_ - start);
    if (name == "s") return ExprAst::var();
    UnaryOp op;
    if (name == "sin") op = UnaryOp::Sin;
    else if (name == "cos") op = UnaryOp::Cos;
    else if (name == "tan") op = UnaryOp::Tan;
    else if (name == "exp") op = UnaryOp::Exp;
    else if (name == "log") op = UnaryOp::Log;
    else if (name == "sqrt") op = UnaryOp::Sqrt;
    else if (name == "abs") op = UnaryOp::Abs;
    else throw ParseError(start, "unknown identifier '" + name + "'");
    if (!accept('('))
      throw ParseError(pos_, "function '" + name + "' requires an argument list");
    ExprAst arg = parse_expr_();
    expect(')', "')'");
    return ExprAst::unary(op, arg);
  }
};

}  // namespace

ExprAst parse_expr(const std::string& text) {
  Parser p(text);
  return p.parse();
}

}  // namespace myller
