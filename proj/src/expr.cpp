/*
 * Copyright 2026 The racert Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "racert/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "racert/errors.hpp"

namespace racert {

// Appends nodes to an Expr with light algebraic simplification (constant
// folding, additive/multiplicative identities).
class ExprBuilder {
public:
    using Node = Expr::Node;
    using Op = Expr::Op;

    explicit ExprBuilder(Expr& e) : e_(e) {}

    int constant(double v)
    {
        Node n;
        n.op = Op::Const;
        n.value = v;
        return push(n);
    }

    int variable(int index)
    {
        Node n;
        n.op = Op::Var;
        n.k = index;
        return push(n);
    }

    int add(int a, int b)
    {
        if (is_const(a) && is_const(b)) {
            return constant(value(a) + value(b));
        }
        if (is_value(a, 0.0)) {
            return b;
        }
        if (is_value(b, 0.0)) {
            return a;
        }
        return binary(Op::Add, a, b);
    }

    int sub(int a, int b)
    {
        if (is_const(a) && is_const(b)) {
            return constant(value(a) - value(b));
        }
        if (is_value(b, 0.0)) {
            return a;
        }
        if (is_value(a, 0.0)) {
            return neg(b);
        }
        return binary(Op::Sub, a, b);
    }

    int mul(int a, int b)
    {
        if (is_const(a) && is_const(b)) {
            return constant(value(a) * value(b));
        }
        if (is_value(a, 0.0) || is_value(b, 0.0)) {
            return constant(0.0);
        }
        if (is_value(a, 1.0)) {
            return b;
        }
        if (is_value(b, 1.0)) {
            return a;
        }
        return binary(Op::Mul, a, b);
    }

    int neg(int a)
    {
        if (is_const(a)) {
            return constant(-value(a));
        }
        if (node(a).op == Op::Neg) {
            return node(a).a;
        }
        Node n;
        n.op = Op::Neg;
        n.a = a;
        return push(n);
    }

    int unary(Op op, int a)
    {
        if (is_const(a)) {
            return constant(op == Op::Sin ? std::sin(value(a)) : std::cos(value(a)));
        }
        Node n;
        n.op = op;
        n.a = a;
        return push(n);
    }

    int sin(int a) { return unary(Op::Sin, a); }
    int cos(int a) { return unary(Op::Cos, a); }

    int pow(int a, int k)
    {
        if (k == 0) {
            return constant(1.0);
        }
        if (k == 1) {
            return a;
        }
        if (is_const(a)) {
            return constant(std::pow(value(a), k));
        }
        Node n;
        n.op = Op::Pow;
        n.a = a;
        n.k = k;
        return push(n);
    }

    const Node& node(int i) const { return e_.nodes_[static_cast<std::size_t>(i)]; }
    bool is_const(int i) const { return node(i).op == Op::Const; }
    double value(int i) const { return node(i).value; }
    bool is_value(int i, double v) const { return is_const(i) && value(i) == v; }

private:
    int binary(Op op, int a, int b)
    {
        Node n;
        n.op = op;
        n.a = a;
        n.b = b;
        return push(n);
    }

    int push(const Node& n)
    {
        e_.nodes_.push_back(n);
        return static_cast<int>(e_.nodes_.size()) - 1;
    }

    Expr& e_;
};

namespace {

class Parser {
public:
    Parser(std::string_view text, std::size_t n, std::size_t m, Expr& out)
        : text_(text), n_(n), m_(m), b_(out)
    {
    }

    int parse()
    {
        const int root = expr();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return root;
    }

private:
    int expr()
    {
        int lhs = term();
        for (;;) {
            skip_ws();
            if (accept('+')) {
                lhs = b_.add(lhs, term());
            } else if (accept('-')) {
                lhs = b_.sub(lhs, term());
            } else {
                return lhs;
            }
        }
    }

    int term()
    {
        int lhs = unary();
        for (;;) {
            skip_ws();
            if (accept('*')) {
                lhs = b_.mul(lhs, unary());
            } else if (peek() == '/') {
                fail("division is not part of the expression grammar");
            } else {
                return lhs;
            }
        }
    }

    int unary()
    {
        skip_ws();
        if (accept('-')) {
            return b_.neg(unary());
        }
        if (accept('+')) {
            return unary();
        }
        return power();
    }

    int power()
    {
        const int base = primary();
        skip_ws();
        if (accept('^')) {
            skip_ws();
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            if (start == pos_) {
                fail("expected a non-negative integer exponent after '^'");
            }
            int k = 0;
            std::from_chars(text_.data() + start, text_.data() + pos_, k);
            if (k > 64) {
                fail("exponent too large");
            }
            return b_.pow(base, k);
        }
        return base;
    }

    int primary()
    {
        skip_ws();
        if (pos_ >= text_.size()) {
            fail("unexpected end of expression");
        }
        const char c = text_[pos_];
        if (accept('(')) {
            const int inner = expr();
            skip_ws();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (starts_with("\xCE\xB8")) { // θ
            pos_ += 2;
            return indexed_variable(n_, m_, "θ");
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            const std::string_view word = text_.substr(start, pos_ - start);
            if (word == "sin" || word == "cos") {
                skip_ws();
                if (!accept('(')) {
                    fail("expected '(' after " + std::string(word));
                }
                const int arg = expr();
                skip_ws();
                if (!accept(')')) {
                    fail("expected ')'");
                }
                return word == "sin" ? b_.sin(arg) : b_.cos(arg);
            }
            if (word == "x") {
                return indexed_variable(0, n_, "x");
            }
            if (word == "theta") {
                return indexed_variable(n_, m_, "theta");
            }
            pos_ = start;
            fail("unknown identifier '" + std::string(word) + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    int indexed_variable(std::size_t offset, std::size_t count, const char* name)
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) {
            fail(std::string("expected an index after '") + name + "'");
        }
        std::size_t idx = 0;
        std::from_chars(text_.data() + start, text_.data() + pos_, idx);
        if (idx < 1 || idx > count) {
            pos_ = start;
            fail(std::string("variable ") + name + std::to_string(idx) + " out of range (1.." +
                 std::to_string(count) + ")");
        }
        return b_.variable(static_cast<int>(offset + idx - 1));
    }

    int number()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                ++pos_;
            }
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return b_.constant(v);
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    bool accept(char c)
    {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw ParseError("", msg + " at offset " + std::to_string(pos_) + " in '" +
                                 std::string(text_) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t n_;
    std::size_t m_;
    ExprBuilder b_;
};

} // namespace

namespace {

// Drops nodes not reachable from `root`; `root` ends up last.
template <class Node>
std::vector<Node> prune(const std::vector<Node>& nodes, int root)
{
    std::vector<char> live(nodes.size(), 0);
    live[static_cast<std::size_t>(root)] = 1;
    for (int i = root; i >= 0; --i) {
        if (!live[static_cast<std::size_t>(i)]) {
            continue;
        }
        const Node& n = nodes[static_cast<std::size_t>(i)];
        if (n.a >= 0) {
            live[static_cast<std::size_t>(n.a)] = 1;
        }
        if (n.b >= 0) {
            live[static_cast<std::size_t>(n.b)] = 1;
        }
    }
    std::vector<int> remap(nodes.size(), -1);
    std::vector<Node> out;
    for (int i = 0; i <= root; ++i) {
        if (!live[static_cast<std::size_t>(i)]) {
            continue;
        }
        Node n = nodes[static_cast<std::size_t>(i)];
        if (n.a >= 0) {
            n.a = remap[static_cast<std::size_t>(n.a)];
        }
        if (n.b >= 0) {
            n.b = remap[static_cast<std::size_t>(n.b)];
        }
        remap[static_cast<std::size_t>(i)] = static_cast<int>(out.size());
        out.push_back(n);
    }
    return out;
}

} // namespace

Expr Expr::parse(std::string_view text, std::size_t state_dim, std::size_t disturbance_dim)
{
    Expr e;
    e.state_dim_ = state_dim;
    e.disturbance_dim_ = disturbance_dim;
    Parser p(text, state_dim, disturbance_dim, e);
    const int root = p.parse();
    e.nodes_ = prune(e.nodes_, root);
    return e;
}

Expr Expr::constant(double value)
{
    Expr e;
    ExprBuilder(e).constant(value);
    return e;
}

Expr Expr::variable(std::size_t index)
{
    Expr e;
    e.state_dim_ = index + 1;
    ExprBuilder(e).variable(static_cast<int>(index));
    return e;
}

bool Expr::is_constant() const
{
    return nodes_.size() == 1 && nodes_[0].op == Op::Const;
}

namespace {

template <class T, class Node, class Op>
T eval_nodes(const std::vector<Node>& nodes, std::span<const T> vars, T* buf)
{
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node& n = nodes[i];
        switch (n.op) {
        case Op::Const: buf[i] = T(n.value); break;
        case Op::Var: buf[i] = vars[static_cast<std::size_t>(n.k)]; break;
        case Op::Add: buf[i] = buf[n.a] + buf[n.b]; break;
        case Op::Sub: buf[i] = buf[n.a] - buf[n.b]; break;
        case Op::Mul: buf[i] = buf[n.a] * buf[n.b]; break;
        case Op::Neg: buf[i] = -buf[n.a]; break;
        case Op::Sin: {
            using std::sin;
            buf[i] = sin(buf[n.a]);
            break;
        }
        case Op::Cos: {
            using std::cos;
            buf[i] = cos(buf[n.a]);
            break;
        }
        case Op::Pow: {
            if constexpr (std::is_same_v<T, double>) {
                double r = 1.0;
                for (int j = 0; j < n.k; ++j) {
                    r *= buf[n.a];
                }
                buf[i] = r;
            } else {
                buf[i] = pow(buf[n.a], n.k);
            }
            break;
        }
        }
    }
    return buf[nodes.size() - 1];
}

} // namespace

double Expr::eval(std::span<const double> vars) const
{
    constexpr std::size_t small = 128;
    if (nodes_.size() <= small) {
        std::array<double, small> buf;
        return eval_nodes<double, Node, Op>(nodes_, vars, buf.data());
    }
    std::vector<double> buf(nodes_.size());
    return eval_nodes<double, Node, Op>(nodes_, vars, buf.data());
}

Interval Expr::eval(std::span<const Interval> vars) const
{
    std::vector<Interval> buf(nodes_.size());
    return eval_nodes<Interval, Node, Op>(nodes_, vars, buf.data());
}

Expr Expr::derivative(std::size_t index) const
{
    Expr d;
    d.state_dim_ = state_dim_;
    d.disturbance_dim_ = disturbance_dim_;
    d.nodes_ = nodes_;
    ExprBuilder b(d);
    std::vector<int> dn(nodes_.size(), -1);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node n = nodes_[i];
        switch (n.op) {
        case Op::Const: dn[i] = b.constant(0.0); break;
        case Op::Var: dn[i] = b.constant(static_cast<std::size_t>(n.k) == index ? 1.0 : 0.0); break;
        case Op::Add: dn[i] = b.add(dn[n.a], dn[n.b]); break;
        case Op::Sub: dn[i] = b.sub(dn[n.a], dn[n.b]); break;
        case Op::Mul: dn[i] = b.add(b.mul(dn[n.a], n.b), b.mul(n.a, dn[n.b])); break;
        case Op::Neg: dn[i] = b.neg(dn[n.a]); break;
        case Op::Sin: dn[i] = b.mul(b.unary(Op::Cos, n.a), dn[n.a]); break;
        case Op::Cos: dn[i] = b.neg(b.mul(b.unary(Op::Sin, n.a), dn[n.a])); break;
        case Op::Pow:
            dn[i] = b.mul(b.mul(b.constant(static_cast<double>(n.k)), b.pow(n.a, n.k - 1)), dn[n.a]);
            break;
        }
    }
    d.nodes_ = prune(d.nodes_, dn.back());
    return d;
}

std::string Expr::str() const
{
    return str_node(static_cast<int>(nodes_.size()) - 1, 0);
}

// Precedence: 1 additive, 2 multiplicative, 3 unary minus, 4 power/atoms.
std::string Expr::str_node(int i, int parent_prec) const
{
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    std::string s;
    int prec = 4;
    switch (n.op) {
    case Op::Const: {
        std::ostringstream os;
        os.precision(17);
        os << n.value;
        s = os.str();
        if (n.value < 0) {
            prec = 3;
        }
        break;
    }
    case Op::Var: {
        const auto k = static_cast<std::size_t>(n.k);
        s = k < state_dim_ ? "x" + std::to_string(k + 1) : "θ" + std::to_string(k - state_dim_ + 1);
        break;
    }
    case Op::Add:
        prec = 1;
        s = str_node(n.a, 1) + " + " + str_node(n.b, 2);
        break;
    case Op::Sub:
        prec = 1;
        s = str_node(n.a, 1) + " - " + str_node(n.b, 2);
        break;
    case Op::Mul:
        prec = 2;
        s = str_node(n.a, 2) + "*" + str_node(n.b, 3);
        break;
    case Op::Neg:
        prec = 3;
        s = "-" + str_node(n.a, 3);
        break;
    case Op::Sin: s = "sin(" + str_node(n.a, 0) + ")"; break;
    case Op::Cos: s = "cos(" + str_node(n.a, 0) + ")"; break;
    case Op::Pow: s = str_node(n.a, 4) + "^" + std::to_string(n.k); break;
    }
    return prec < parent_prec ? "(" + s + ")" : s;
}

} // namespace racert
