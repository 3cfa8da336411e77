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

#ifndef RACERT_EXPR_HPP
#define RACERT_EXPR_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "racert/interval.hpp"

namespace racert {

// Total scalar expression over the variables (x1..xn, θ1..θm).
//
// Grammar (whitespace insensitive):
//
//     expr    := term (('+' | '-') term)*
//     term    := unary ('*' unary)*
//     unary   := '-' unary | power
//     power   := primary ('^' integer)?
//     primary := number | variable | ('sin' | 'cos') '(' expr ')' | '(' expr ')'
//
// Variables are `x1`..`xn` for state coordinates and `θ1`..`θm` (ASCII
// spelling `theta1`..`thetam` also accepted) for disturbance coordinates.
// There is no division, so every expression is defined on all of R^(n+m).
//
// Internally a flat node list in topological order; the root is the last
// node. Variables are indexed 0..n-1 (state) then n..n+m-1 (disturbance).
class Expr {
public:
    static Expr parse(std::string_view text, std::size_t state_dim, std::size_t disturbance_dim);
    static Expr constant(double value);
    static Expr variable(std::size_t index);

    double eval(std::span<const double> vars) const;
    Interval eval(std::span<const Interval> vars) const;

    // Symbolic partial derivative with respect to variable `index`.
    Expr derivative(std::size_t index) const;

    bool is_constant() const;
    std::size_t node_count() const { return nodes_.size(); }
    std::string str() const;

private:
    enum class Op : unsigned char { Const, Var, Add, Sub, Mul, Neg, Sin, Cos, Pow };

    struct Node {
        Op op = Op::Const;
        int a = -1;
        int b = -1;
        int k = 0;          // variable index or integer exponent
        double value = 0.0; // constants only
    };

    friend class ExprBuilder;

    std::string str_node(int i, int parent_prec) const;

    std::vector<Node> nodes_;
    std::size_t state_dim_ = 0;
    std::size_t disturbance_dim_ = 0;
};

} // namespace racert

#endif
