#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "stepanov/errors.hpp"
#include "stepanov/taylor.hpp"

namespace stepanov {

struct ExprNode {
    enum class Kind { Number, Variable, Unary, Binary, Call };
    Kind kind;
    double number = 0.0;
    std::string name; // variable or function name, or operator symbol
    std::vector<std::shared_ptr<const ExprNode>> args;
    int line = 1, col = 1;
};

// Parsed metric-component formula. Whitespace-insensitive, deterministic.
class Expression {
  public:
    Expression() = default;
    Expression(std::string source, std::shared_ptr<const ExprNode> root)
        : source_(std::move(source)), root_(std::move(root)) {}

    const std::string& source() const { return source_; }
    bool empty() const { return root_ == nullptr; }

    // All variable identifiers, in first-appearance order.
    std::vector<std::string> identifiers() const;
    // Throws ParseError (with position) on identifiers outside the coordinate list.
    void validate(std::span<const std::string> coords) const;

    double eval(std::span<const std::string> coords, std::span<const double> values) const;
    TaylorPoly eval_taylor(std::span<const std::string> coords, std::span<const double> point, int order) const;

  private:
    std::string source_;
    std::shared_ptr<const ExprNode> root_;
};

// Grammar: literals, coordinate identifiers, + - * / ^, unary -, parentheses,
// sin cos tan exp log sinh cosh sqrt atan, constant pi.
Expression parse_expression(const std::string& src);

// Truncated Taylor expansion of e at p, all mixed partials up to total order k.
TaylorPoly taylor_jet(const Expression& e, std::span<const std::string> coords, std::span<const double> p, int order);

} // namespace stepanov
