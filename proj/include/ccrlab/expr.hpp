#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ccrlab {

using Bindings = std::map<std::string, double>;

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset;
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parsed potential v(x): literals, the variable x, named parameters, + - * /,
// ^ with a nonnegative integer literal exponent, unary minus, sin/cos/exp.
// Precedence: ^ binds tighter than unary minus, then * /, then + -.
class PotentialExpr {
 public:
  struct Node;  // defined in expr.cpp
  using NodePtr = std::shared_ptr<const Node>;

  PotentialExpr() = default;

  static PotentialExpr parse(std::string_view src);  // throws ParseError

  // IEEE double evaluation; throws EvalError on unbound identifiers.
  double eval(double x, const Bindings& params = {}) const;

  // Canonical fully parenthesized form; parse(print()) is structurally equal.
  std::string print() const;

  bool structurally_equal(const PotentialExpr& other) const;
  bool empty() const { return root_ == nullptr; }

 private:
  explicit PotentialExpr(NodePtr root) : root_(std::move(root)) {}
  NodePtr root_;
};

}  // namespace ccrlab
