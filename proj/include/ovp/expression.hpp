#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ovp {

/// Closed expression grammar for scenario files: numbers, + - * / ^,
/// parentheses, a caller-supplied variable whitelist, and the functions
/// sin cos exp log sqrt abs pow min max. '^' is right-associative.
class Expression {
  public:
    /// Parse `text`; identifiers outside `variables` raise ParseError.
    static Expression parse(const std::string& text,
                            const std::vector<std::string>& variables);

    /// Evaluate with values bound to the declared variables (same order).
    double eval(std::span<const double> args) const;

    double eval1(double x) const { return eval({&x, 1}); }
    double eval3(double x, double u, double v) const {
        const double a[3] = {x, u, v};
        return eval({a, 3});
    }

    const std::string& text() const { return text_; }
    /// True if the named variable actually appears in the parsed tree.
    bool uses_variable(const std::string& name) const;

    struct Node;

  private:
    std::shared_ptr<const Node> root_;
    std::string text_;
    std::vector<std::string> variables_;
};

}  // namespace ovp
