#pragma once

#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fragkin/common.hpp"

namespace fragkin {

// Minimal arithmetic expression parser for user-supplied densities b(x).
// Grammar: + - * / ^ (right assoc), unary minus, parentheses, the variable x,
// numeric literals, and exp, log, ln, sqrt, abs, pow(a,b).
class Expression {
public:
    static Expression parse(const std::string& text) {
        Parser p(text);
        Expression e;
        e.root_ = p.parse_expr();
        p.skip_ws();
        if (!p.done()) throw config_error("expression: trailing input at '" + p.rest() + "'");
        return e;
    }

    double operator()(double x) const { return root_->eval(x); }

    std::function<double(double)> fn() const {
        auto r = root_;
        return [r](double x) { return r->eval(x); };
    }

private:
    struct Node {
        virtual ~Node() = default;
        virtual double eval(double x) const = 0;
    };
    using NodePtr = std::shared_ptr<const Node>;

    struct Const : Node {
        double v;
        explicit Const(double v) : v(v) {}
        double eval(double) const override { return v; }
    };
    struct Var : Node {
        double eval(double x) const override { return x; }
    };
    struct Unary : Node {
        char op;
        NodePtr a;
        double eval(double x) const override { return -a->eval(x); }
    };
    struct Binary : Node {
        char op;
        NodePtr a, b;
        double eval(double x) const override {
            const double u = a->eval(x), v = b->eval(x);
            switch (op) {
                case '+': return u + v;
                case '-': return u - v;
                case '*': return u * v;
                case '/': return u / v;
                default: return std::pow(u, v);
            }
        }
    };
    struct Call : Node {
        int fn;  // 0 exp, 1 log, 2 sqrt, 3 abs, 4 pow
        NodePtr a, b;
        double eval(double x) const override {
            const double u = a->eval(x);
            switch (fn) {
                case 0: return std::exp(u);
                case 1: return std::log(u);
                case 2: return std::sqrt(u);
                case 3: return std::fabs(u);
                default: return std::pow(u, b->eval(x));
            }
        }
    };

    class Parser {
    public:
        explicit Parser(const std::string& s) : s_(s) {}

        NodePtr parse_expr() {
            NodePtr lhs = parse_term();
            for (;;) {
                skip_ws();
                if (peek() == '+' || peek() == '-') {
                    const char op = get();
                    auto n = std::make_shared<Binary>();
                    n->op = op;
                    n->a = lhs;
                    n->b = parse_term();
                    lhs = n;
                } else {
                    return lhs;
                }
            }
        }

        void skip_ws() {
            while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        }
        bool done() const { return i_ >= s_.size(); }
        std::string rest() const { return s_.substr(i_); }

    private:
        char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }
        char get() { return s_[i_++]; }

        NodePtr parse_term() {
            NodePtr lhs = parse_factor();
            for (;;) {
                skip_ws();
                if (peek() == '*' || peek() == '/') {
                    const char op = get();
                    auto n = std::make_shared<Binary>();
                    n->op = op;
                    n->a = lhs;
                    n->b = parse_factor();
                    lhs = n;
                } else {
                    return lhs;
                }
            }
        }

        NodePtr parse_factor() {
            NodePtr base = parse_unary();
            skip_ws();
            if (peek() == '^') {
                get();
                auto n = std::make_shared<Binary>();
                n->op = '^';
                n->a = base;
                n->b = parse_factor();  // right associative
                return n;
            }
            return base;
        }

        NodePtr parse_unary() {
            skip_ws();
            if (peek() == '-') {
                get();
                auto n = std::make_shared<Unary>();
                n->op = '-';
                n->a = parse_unary();
                return n;
            }
            return parse_primary();
        }

        NodePtr parse_primary() {
            skip_ws();
            const char c = peek();
            if (c == '(') {
                get();
                NodePtr e = parse_expr();
                expect(')');
                return e;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
            if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
            throw config_error("expression: unexpected character '" + std::string(1, c) + "'");
        }

        NodePtr parse_number() {
            std::size_t end = 0;
            const double v = std::stod(s_.substr(i_), &end);
            i_ += end;
            return std::make_shared<Const>(v);
        }

        NodePtr parse_ident() {
            std::string name;
            while (i_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                name += s_[i_++];
            if (name == "x") return std::make_shared<Var>();
            if (name == "pi") return std::make_shared<Const>(M_PI);
            if (name == "e") return std::make_shared<Const>(std::exp(1.0));
            int fn = -1;
            if (name == "exp") fn = 0;
            else if (name == "log" || name == "ln") fn = 1;
            else if (name == "sqrt") fn = 2;
            else if (name == "abs") fn = 3;
            else if (name == "pow") fn = 4;
            if (fn < 0) throw config_error("expression: unknown identifier '" + name + "'");
            expect('(');
            auto n = std::make_shared<Call>();
            n->fn = fn;
            n->a = parse_expr();
            if (fn == 4) {
                expect(',');
                n->b = parse_expr();
            }
            expect(')');
            return n;
        }

        void expect(char c) {
            skip_ws();
            if (peek() != c)
                throw config_error("expression: expected '" + std::string(1, c) + "' at '" +
                                   rest() + "'");
            get();
        }

        const std::string& s_;
        std::size_t i_ = 0;
    };

    NodePtr root_;
};

}  // namespace fragkin
