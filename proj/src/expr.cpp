#include "ccrlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <utility>

namespace ccrlab {

enum class NodeKind { Number, Var, Param, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };

struct PotentialExpr::Node {
  NodeKind kind;
  double number = 0.0;       // Number
  std::string name;          // Param
  long long exponent = 0;    // Pow
  NodePtr lhs, rhs;
};

namespace {

using Node = PotentialExpr::Node;

bool is_unary_kind(NodeKind k) {
  return k == NodeKind::Neg || k == NodeKind::Sin || k == NodeKind::Cos ||
         k == NodeKind::Exp;
}

}  // namespace

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  std::shared_ptr<const Node> run() {
    auto e = parse_sum();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  using NodePtr = std::shared_ptr<const Node>;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) fail(std::string("expected ") + what);
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  static NodePtr make(NodeKind k, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr parse_sum() {
    auto lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = make(NodeKind::Add, lhs, parse_term());
      else if (accept('-'))
        lhs = make(NodeKind::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    auto lhs = parse_unary();
    for (;;) {
      if (accept('*'))
        lhs = make(NodeKind::Mul, lhs, parse_unary());
      else if (accept('/'))
        lhs = make(NodeKind::Div, lhs, parse_unary());
      else
        return lhs;
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make(NodeKind::Neg, parse_unary());
    return parse_power();
  }

  NodePtr parse_power() {
    auto base = parse_atom();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == start) fail("exponent must be a nonnegative integer literal");
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Pow;
    n->lhs = base;
    n->exponent = std::strtoll(std::string(src_.substr(start, pos_ - start)).c_str(), nullptr, 10);
    if (peek() == '^') fail("chained ^ is not supported");
    return n;
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("expected an operand");
    const char c = src_[pos_];
    if (accept('(')) {
      auto e = parse_sum();
      expect(')', "')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("expected an operand");
  }

  NodePtr parse_number() {
    const char* begin = src_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Number;
    n->number = v;
    return n;
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                  src_[pos_] == '_'))
      ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    if (peek() == '(') {
      NodeKind kind;
      if (name == "sin")
        kind = NodeKind::Sin;
      else if (name == "cos")
        kind = NodeKind::Cos;
      else if (name == "exp")
        kind = NodeKind::Exp;
      else {
        pos_ = start;
        fail("unknown function '" + name + "'");
      }
      expect('(', "'('");
      auto arg = parse_sum();
      expect(')', "')'");
      return make(kind, arg);
    }
    if (name == "x") return make(NodeKind::Var);
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Param;
    n->name = name;
    return n;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

double eval_node(const Node& n, double x, const Bindings& params) {
  switch (n.kind) {
    case NodeKind::Number: return n.number;
    case NodeKind::Var: return x;
    case NodeKind::Param: {
      auto it = params.find(n.name);
      if (it == params.end()) throw EvalError("unbound parameter '" + n.name + "'");
      return it->second;
    }
    case NodeKind::Add: return eval_node(*n.lhs, x, params) + eval_node(*n.rhs, x, params);
    case NodeKind::Sub: return eval_node(*n.lhs, x, params) - eval_node(*n.rhs, x, params);
    case NodeKind::Mul: return eval_node(*n.lhs, x, params) * eval_node(*n.rhs, x, params);
    case NodeKind::Div: return eval_node(*n.lhs, x, params) / eval_node(*n.rhs, x, params);
    case NodeKind::Pow: {
      const double base = eval_node(*n.lhs, x, params);
      double r = 1.0;
      for (long long i = 0; i < n.exponent; ++i) r *= base;
      return r;
    }
    case NodeKind::Neg: return -eval_node(*n.lhs, x, params);
    case NodeKind::Sin: return std::sin(eval_node(*n.lhs, x, params));
    case NodeKind::Cos: return std::cos(eval_node(*n.lhs, x, params));
    case NodeKind::Exp: return std::exp(eval_node(*n.lhs, x, params));
  }
  throw EvalError("corrupt expression node");
}

void print_node(const Node& n, std::ostringstream& os) {
  switch (n.kind) {
    case NodeKind::Number: os << n.number; return;
    case NodeKind::Var: os << "x"; return;
    case NodeKind::Param: os << n.name; return;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div: {
      const char op = n.kind == NodeKind::Add   ? '+'
                      : n.kind == NodeKind::Sub ? '-'
                      : n.kind == NodeKind::Mul ? '*'
                                                : '/';
      os << '(';
      print_node(*n.lhs, os);
      os << op;
      print_node(*n.rhs, os);
      os << ')';
      return;
    }
    case NodeKind::Pow:
      os << '(';
      print_node(*n.lhs, os);
      os << '^' << n.exponent << ')';
      return;
    case NodeKind::Neg:
      os << "(-";
      print_node(*n.lhs, os);
      os << ')';
      return;
    case NodeKind::Sin:
    case NodeKind::Cos:
    case NodeKind::Exp:
      os << (n.kind == NodeKind::Sin ? "sin(" : n.kind == NodeKind::Cos ? "cos(" : "exp(");
      print_node(*n.lhs, os);
      os << ')';
      return;
  }
}

bool equal_nodes(const Node* a, const Node* b) {
  if (a == b) return true;
  if (a == nullptr || b == nullptr) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::Number: return a->number == b->number;
    case NodeKind::Var: return true;
    case NodeKind::Param: return a->name == b->name;
    case NodeKind::Pow:
      return a->exponent == b->exponent && equal_nodes(a->lhs.get(), b->lhs.get());
    default:
      if (is_unary_kind(a->kind)) return equal_nodes(a->lhs.get(), b->lhs.get());
      return equal_nodes(a->lhs.get(), b->lhs.get()) && equal_nodes(a->rhs.get(), b->rhs.get());
  }
}

}  // namespace

PotentialExpr PotentialExpr::parse(std::string_view src) {
  return PotentialExpr(Parser(src).run());
}

double PotentialExpr::eval(double x, const Bindings& params) const {
  if (!root_) throw EvalError("empty expression");
  return eval_node(*root_, x, params);
}

std::string PotentialExpr::print() const {
  if (!root_) return "";
  std::ostringstream os;
  os.precision(17);
  print_node(*root_, os);
  return os.str();
}

bool PotentialExpr::structurally_equal(const PotentialExpr& other) const {
  return equal_nodes(root_.get(), other.root_.get());
}

}  // namespace ccrlab
