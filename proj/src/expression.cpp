#include "ovp/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <span>

#include "ovp/errors.hpp"

namespace ovp {

struct Expression::Node {
    enum class Kind { number, variable, unary_minus, binary, call } kind;
    double number = 0;
    int var_index = -1;
    char op = 0;  // + - * / ^
    std::string fn;
    std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

struct Token {
    enum class Kind { number, ident, op, lparen, rparen, comma, end } kind;
    std::string text;
    double value = 0;
    int column = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const int col = static_cast<int>(pos_) + 1;
        if (pos_ >= s_.size()) return {Token::Kind::end, "", 0, col};
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t end = 0;
            double v = 0;
            try {
                v = std::stod(s_.substr(pos_), &end);
            } catch (const std::exception&) {
                throw ParseError("malformed number", 1, col);
            }
            pos_ += end;
            return {Token::Kind::number, s_.substr(pos_ - end, end), v, col};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            return {Token::Kind::ident, s_.substr(start, pos_ - start), 0, col};
        }
        ++pos_;
        switch (c) {
            case '+': case '-': case '*': case '/': case '^':
                return {Token::Kind::op, std::string(1, c), 0, col};
            case '(': return {Token::Kind::lparen, "(", 0, col};
            case ')': return {Token::Kind::rparen, ")", 0, col};
            case ',': return {Token::Kind::comma, ",", 0, col};
            default: throw ParseError(std::string("unexpected character '") + c + "'", 1, col);
        }
    }

  private:
    const std::string& s_;
    size_t pos_ = 0;
};

const std::map<std::string, int>& function_arity() {
    static const std::map<std::string, int> t = {
        {"sin", 1}, {"cos", 1}, {"exp", 1}, {"log", 1},
        {"sqrt", 1}, {"abs", 1}, {"pow", 2}, {"min", 2}, {"max", 2}};
    return t;
}

class Parser {
  public:
    Parser(const std::string& text, const std::vector<std::string>& vars)
        : lex_(text), vars_(vars) {
        advance();
    }

    NodePtr parse_all() {
        NodePtr e = parse_expr(0);
        if (tok_.kind != Token::Kind::end)
            throw ParseError("trailing input '" + tok_.text + "'", 1, tok_.column);
        return e;
    }

  private:
    Lexer lex_;
    Token tok_;
    const std::vector<std::string>& vars_;

    void advance() { tok_ = lex_.next(); }

    static int precedence(char op) {
        switch (op) {
            case '+': case '-': return 1;
            case '*': case '/': return 2;
            case '^': return 3;
        }
        return -1;
    }

    NodePtr parse_expr(int min_prec) {
        NodePtr lhs = parse_unary();
        while (tok_.kind == Token::Kind::op) {
            const char op = tok_.text[0];
            const int prec = precedence(op);
            if (prec < min_prec) break;
            advance();
            // '^' binds right: a^b^c = a^(b^c)
            NodePtr rhs = parse_expr(op == '^' ? prec : prec + 1);
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::binary;
            n->op = op;
            n->args = {lhs, rhs};
            lhs = n;
        }
        return lhs;
    }

    NodePtr parse_unary() {
        if (tok_.kind == Token::Kind::op && tok_.text == "-") {
            const int col = tok_.column;
            advance();
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::unary_minus;
            n->args = {parse_expr(precedence('*') + 1)};
            (void)col;
            return n;
        }
        if (tok_.kind == Token::Kind::op && tok_.text == "+") {
            advance();
            return parse_unary();
        }
        return parse_primary();
    }

    NodePtr parse_primary() {
        switch (tok_.kind) {
            case Token::Kind::number: {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::number;
                n->number = tok_.value;
                advance();
                return n;
            }
            case Token::Kind::lparen: {
                advance();
                NodePtr e = parse_expr(0);
                expect_rparen();
                return e;
            }
            case Token::Kind::ident: {
                const std::string name = tok_.text;
                const int col = tok_.column;
                advance();
                if (tok_.kind == Token::Kind::lparen) return parse_call(name, col);
                for (size_t i = 0; i < vars_.size(); ++i) {
                    if (vars_[i] == name) {
                        auto n = std::make_shared<Node>();
                        n->kind = Node::Kind::variable;
                        n->var_index = static_cast<int>(i);
                        return n;
                    }
                }
                throw ParseError("unknown identifier '" + name + "'", 1, col);
            }
            default:
                throw ParseError("expected expression", 1, tok_.column);
        }
    }

    NodePtr parse_call(const std::string& name, int col) {
        auto it = function_arity().find(name);
        if (it == function_arity().end())
            throw ParseError("unknown function '" + name + "'", 1, col);
        advance();  // consume '('
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::call;
        n->fn = name;
        n->args.push_back(parse_expr(0));
        for (int i = 1; i < it->second; ++i) {
            if (tok_.kind != Token::Kind::comma)
                throw ParseError("function '" + name + "' expects " +
                                     std::to_string(it->second) + " arguments",
                                 1, tok_.column);
            advance();
            n->args.push_back(parse_expr(0));
        }
        expect_rparen();
        return n;
    }

    void expect_rparen() {
        if (tok_.kind != Token::Kind::rparen)
            throw ParseError("expected ')'", 1, tok_.column);
        advance();
    }
};

double eval_node(const Node& n, std::span<const double> args) {
    switch (n.kind) {
        case Node::Kind::number: return n.number;
        case Node::Kind::variable: return args[static_cast<size_t>(n.var_index)];
        case Node::Kind::unary_minus: return -eval_node(*n.args[0], args);
        case Node::Kind::binary: {
            const double a = eval_node(*n.args[0], args);
            const double b = eval_node(*n.args[1], args);
            switch (n.op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                case '^': return std::pow(a, b);
            }
            return 0;
        }
        case Node::Kind::call: {
            const double a = eval_node(*n.args[0], args);
            if (n.fn == "sin") return std::sin(a);
            if (n.fn == "cos") return std::cos(a);
            if (n.fn == "exp") return std::exp(a);
            if (n.fn == "log") return std::log(a);
            if (n.fn == "sqrt") return std::sqrt(a);
            if (n.fn == "abs") return std::abs(a);
            const double b = eval_node(*n.args[1], args);
            if (n.fn == "pow") return std::pow(a, b);
            if (n.fn == "min") return std::min(a, b);
            return std::max(a, b);
        }
    }
    return 0;
}

bool node_uses(const Node& n, int idx) {
    if (n.kind == Node::Kind::variable) return n.var_index == idx;
    for (const auto& c : n.args)
        if (node_uses(*c, idx)) return true;
    return false;
}

}  // namespace

Expression Expression::parse(const std::string& text,
                             const std::vector<std::string>& variables) {
    Expression e;
    e.text_ = text;
    e.variables_ = variables;
    Parser p(text, variables);
    e.root_ = p.parse_all();
    return e;
}

double Expression::eval(std::span<const double> args) const {
    return eval_node(*root_, args);
}

bool Expression::uses_variable(const std::string& name) const {
    for (size_t i = 0; i < variables_.size(); ++i)
        if (variables_[i] == name) return node_uses(*root_, static_cast<int>(i));
    return false;
}

}  // namespace ovp
