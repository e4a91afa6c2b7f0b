#include "stepanov/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <set>

namespace stepanov {

namespace {

const std::set<std::string> kFunctions = {"sin", "cos", "tan", "exp", "log",
                                          "sinh", "cosh", "sqrt", "atan"};

struct Token {
    enum class Kind { Number, Ident, Op, LParen, RParen, End };
    Kind kind;
    double number = 0.0;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= src_.size()) {
            tok_.kind = Token::Kind::End;
            tok_.text = "<end>";
            return;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) bump();
            // exponent part
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                std::size_t save = pos_;
                bump();
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) bump();
                if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
                } else {
                    pos_ = save; // 'e' belongs to an identifier-ish context; leave it
                }
            }
            tok_.kind = Token::Kind::Number;
            tok_.text = src_.substr(start, pos_ - start);
            char* end = nullptr;
            tok_.number = std::strtod(tok_.text.c_str(), &end);
            if (end != tok_.text.c_str() + tok_.text.size())
                throw ParseError(tok_.line, tok_.col, "malformed number '" + tok_.text + "'");
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || static_cast<unsigned char>(c) >= 0x80) {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                    static_cast<unsigned char>(src_[pos_]) >= 0x80)) bump();
            tok_.kind = Token::Kind::Ident;
            tok_.text = src_.substr(start, pos_ - start);
            return;
        }
        switch (c) {
            case '+': case '-': case '*': case '/': case '^':
                tok_.kind = Token::Kind::Op;
                tok_.text = std::string(1, c);
                bump();
                return;
            case '(':
                tok_.kind = Token::Kind::LParen;
                tok_.text = "(";
                bump();
                return;
            case ')':
                tok_.kind = Token::Kind::RParen;
                tok_.text = ")";
                bump();
                return;
            default:
                throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
        }
    }
    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

class Parser {
  public:
    explicit Parser(const std::string& src) : lex_(src) {}

    NodePtr parse() {
        NodePtr e = sum();
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::End)
            throw ParseError(t.line, t.col, "unexpected '" + t.text + "'");
        return e;
    }

  private:
    NodePtr sum() {
        NodePtr left = term();
        while (lex_.peek().kind == Token::Kind::Op && (lex_.peek().text == "+" || lex_.peek().text == "-")) {
            Token op = lex_.take();
            NodePtr right = term();
            left = make({ExprNode::Kind::Binary, 0.0, op.text, {left, right}, op.line, op.col});
        }
        return left;
    }
    NodePtr term() {
        NodePtr left = unary();
        while (lex_.peek().kind == Token::Kind::Op && (lex_.peek().text == "*" || lex_.peek().text == "/")) {
            Token op = lex_.take();
            NodePtr right = unary();
            left = make({ExprNode::Kind::Binary, 0.0, op.text, {left, right}, op.line, op.col});
        }
        return left;
    }
    NodePtr unary() {
        if (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "-") {
            Token op = lex_.take();
            NodePtr arg = unary();
            return make({ExprNode::Kind::Unary, 0.0, "-", {arg}, op.line, op.col});
        }
        if (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "+") {
            lex_.take();
            return unary();
        }
        return power();
    }
    NodePtr power() {
        NodePtr base = atom();
        if (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == "^") {
            Token op = lex_.take();
            NodePtr expo = unary(); // right-associative, allows 2^-3
            return make({ExprNode::Kind::Binary, 0.0, "^", {base, expo}, op.line, op.col});
        }
        return base;
    }
    NodePtr atom() {
        Token t = lex_.take();
        switch (t.kind) {
            case Token::Kind::Number:
                return make({ExprNode::Kind::Number, t.number, "", {}, t.line, t.col});
            case Token::Kind::Ident: {
                if (kFunctions.count(t.text)) {
                    const Token& open = lex_.peek();
                    if (open.kind != Token::Kind::LParen)
                        throw ParseError(open.line, open.col, "expected '(' after function '" + t.text + "'");
                    lex_.take();
                    NodePtr arg = sum();
                    const Token& close = lex_.peek();
                    if (close.kind != Token::Kind::RParen)
                        throw ParseError(close.line, close.col, "expected ')'");
                    lex_.take();
                    return make({ExprNode::Kind::Call, 0.0, t.text, {arg}, t.line, t.col});
                }
                return make({ExprNode::Kind::Variable, 0.0, t.text, {}, t.line, t.col});
            }
            case Token::Kind::LParen: {
                NodePtr e = sum();
                const Token& close = lex_.peek();
                if (close.kind != Token::Kind::RParen)
                    throw ParseError(close.line, close.col, "expected ')'");
                lex_.take();
                return e;
            }
            default:
                throw ParseError(t.line, t.col, "unexpected '" + t.text + "'");
        }
    }

    Lexer lex_;
};

void collect_vars(const NodePtr& n, std::vector<std::string>& out) {
    if (n->kind == ExprNode::Kind::Variable && n->name != "pi") {
        bool seen = false;
        for (const auto& s : out)
            if (s == n->name) seen = true;
        if (!seen) out.push_back(n->name);
    }
    for (const auto& a : n->args) collect_vars(a, out);
}

template <class S, class Ops>
S eval_node(const ExprNode& n, std::span<const std::string> coords, const Ops& ops) {
    switch (n.kind) {
        case ExprNode::Kind::Number:
            return ops.constant(n.number);
        case ExprNode::Kind::Variable: {
            if (n.name == "pi") return ops.constant(3.14159265358979323846264338327950288);
            for (std::size_t i = 0; i < coords.size(); ++i)
                if (coords[i] == n.name) return ops.variable(static_cast<int>(i));
            throw ParseError(n.line, n.col, "unknown identifier '" + n.name + "'");
        }
        case ExprNode::Kind::Unary:
            return ops.neg(eval_node<S>(*n.args[0], coords, ops));
        case ExprNode::Kind::Binary: {
            S a = eval_node<S>(*n.args[0], coords, ops);
            S b = eval_node<S>(*n.args[1], coords, ops);
            try {
                if (n.name == "+") return ops.add(a, b);
                if (n.name == "-") return ops.sub(a, b);
                if (n.name == "*") return ops.mul(a, b);
                if (n.name == "/") return ops.div(a, b);
                return ops.pow(a, b);
            } catch (const DomainError& e) {
                throw DomainError(std::string(e.what()) + " in '" + n.name + "' at " +
                                  std::to_string(n.line) + ":" + std::to_string(n.col));
            }
        }
        case ExprNode::Kind::Call: {
            S a = eval_node<S>(*n.args[0], coords, ops);
            try {
                return ops.call(n.name, a);
            } catch (const DomainError& e) {
                throw DomainError(std::string(e.what()) + " in '" + n.name + "' at " +
                                  std::to_string(n.line) + ":" + std::to_string(n.col));
            }
        }
    }
    throw Error("unreachable expression node");
}

struct DoubleOps {
    std::span<const double> values;
    double constant(double v) const { return v; }
    double variable(int i) const { return values[static_cast<std::size_t>(i)]; }
    double neg(double a) const { return -a; }
    double add(double a, double b) const { return a + b; }
    double sub(double a, double b) const { return a - b; }
    double mul(double a, double b) const { return a * b; }
    double div(double a, double b) const {
        if (std::abs(b) < 1e-14) throw DomainError("division by (near-)zero");
        return a / b;
    }
    double pow(double a, double b) const {
        if (b == std::floor(b)) return std::pow(a, b);
        if (a <= 0.0) throw DomainError("non-integer power of nonpositive base");
        return std::pow(a, b);
    }
    double call(const std::string& f, double a) const {
        if (f == "sin") return std::sin(a);
        if (f == "cos") return std::cos(a);
        if (f == "tan") return std::tan(a);
        if (f == "exp") return std::exp(a);
        if (f == "log") {
            if (a <= 0.0) throw DomainError("log of nonpositive value");
            return std::log(a);
        }
        if (f == "sinh") return std::sinh(a);
        if (f == "cosh") return std::cosh(a);
        if (f == "sqrt") {
            if (a < 0.0) throw DomainError("sqrt of negative value");
            return std::sqrt(a);
        }
        if (f == "atan") return std::atan(a);
        throw Error("unknown function '" + f + "'");
    }
};

struct TaylorOps {
    std::span<const double> point;
    int order;
    TaylorPoly constant(double v) const {
        return TaylorPoly::constant(static_cast<int>(point.size()), order, v);
    }
    TaylorPoly variable(int i) const {
        return TaylorPoly::variable(static_cast<int>(point.size()), order, i, point[static_cast<std::size_t>(i)]);
    }
    TaylorPoly neg(const TaylorPoly& a) const { return -a; }
    TaylorPoly add(const TaylorPoly& a, const TaylorPoly& b) const { return a + b; }
    TaylorPoly sub(const TaylorPoly& a, const TaylorPoly& b) const { return a - b; }
    TaylorPoly mul(const TaylorPoly& a, const TaylorPoly& b) const { return a * b; }
    TaylorPoly div(const TaylorPoly& a, const TaylorPoly& b) const { return a / b; }
    TaylorPoly pow(const TaylorPoly& a, const TaylorPoly& b) const { return stepanov::pow(a, b); }
    TaylorPoly call(const std::string& f, const TaylorPoly& a) const {
        if (f == "sin") return stepanov::sin(a);
        if (f == "cos") return stepanov::cos(a);
        if (f == "tan") return stepanov::tan(a);
        if (f == "exp") return stepanov::exp(a);
        if (f == "log") return stepanov::log(a);
        if (f == "sinh") return stepanov::sinh(a);
        if (f == "cosh") return stepanov::cosh(a);
        if (f == "sqrt") return stepanov::sqrt(a);
        if (f == "atan") return stepanov::atan(a);
        throw Error("unknown function '" + f + "'");
    }
};

void validate_node(const ExprNode& n, std::span<const std::string> coords) {
    if (n.kind == ExprNode::Kind::Variable && n.name != "pi") {
        bool known = false;
        for (const auto& c : coords)
            if (c == n.name) known = true;
        if (!known) throw ParseError(n.line, n.col, "unknown identifier '" + n.name + "'");
    }
    for (const auto& a : n.args) validate_node(*a, coords);
}

const ExprNode& root_of(const Expression& e, const std::shared_ptr<const ExprNode>& r) {
    if (!r) throw Error("empty expression '" + e.source() + "'");
    return *r;
}

} // namespace

Expression parse_expression(const std::string& src) {
    Parser p(src);
    return Expression(src, p.parse());
}

std::vector<std::string> Expression::identifiers() const {
    std::vector<std::string> out;
    if (root_) collect_vars(root_, out);
    return out;
}

void Expression::validate(std::span<const std::string> coords) const {
    if (!root_) throw Error("empty expression");
    validate_node(*root_, coords);
}

double Expression::eval(std::span<const std::string> coords, std::span<const double> values) const {
    return eval_node<double>(root_of(*this, root_), coords, DoubleOps{values});
}

TaylorPoly Expression::eval_taylor(std::span<const std::string> coords, std::span<const double> point,
                                   int order) const {
    return eval_node<TaylorPoly>(root_of(*this, root_), coords, TaylorOps{point, order});
}

TaylorPoly taylor_jet(const Expression& e, std::span<const std::string> coords, std::span<const double> p,
                      int order) {
    return e.eval_taylor(coords, p, order);
}

} // namespace stepanov
