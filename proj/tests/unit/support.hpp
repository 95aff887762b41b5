#pragma once

#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "pencil_forge/context.hpp"
#include "pencil_forge/diffgeo.hpp"
#include "pencil_forge/expr.hpp"

namespace pencil_forge::testing {

inline Context ctx2(std::vector<std::string> params = {}) {
    Context c({"u", "v"});
    for (auto& p : params) c.add_parameter(p);
    return c;
}

inline Context ctx3(std::vector<std::string> params = {}) {
    Context c({"u", "v", "w"});
    for (auto& p : params) c.add_parameter(p);
    return c;
}

inline std::vector<Var> coords(const Context& c) {
    std::vector<Var> out;
    for (std::size_t i = 0; i < c.dimension(); ++i) out.push_back(c.field_var(i));
    return out;
}

inline Metric metric(const Context& c, const std::vector<std::vector<std::string>>& text) {
    Matrix m;
    for (const auto& row : text) {
        std::vector<Expr> r;
        for (const auto& s : row) r.push_back(c.parse(s));
        m.push_back(std::move(r));
    }
    return Metric(std::move(m), coords(c));
}

inline VectorField field(const Context& c, const std::vector<std::string>& text) {
    VectorField f;
    for (const auto& s : text) f.push_back(c.parse(s));
    return f;
}

inline ::testing::AssertionResult zero(const Expr& e) {
    if (is_zero(e)) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "nonzero: " << render(e);
}

inline ::testing::AssertionResult same(const Expr& a, const Expr& b) {
    if (is_zero(a - b)) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << render(a) << " != " << render(b);
}

inline ::testing::AssertionResult holds(const Verdict& v) {
    if (v.holds) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << v.witness;
}

/// Random polynomial in the given names with small integer coefficients.
inline std::string random_poly(std::mt19937& rng, const std::vector<std::string>& names, int terms, int max_degree) {
    std::uniform_int_distribution<int> coeff(-5, 5);
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::string out = std::to_string(coeff(rng));
    for (int t = 0; t < terms; ++t) {
        int c = coeff(rng);
        if (c == 0) continue;
        out += (c < 0 ? " - " : " + ") + std::to_string(std::abs(c));
        for (const auto& n : names) {
            int d = deg(rng);
            if (d > 0) out += "*" + n + "^" + std::to_string(d);
        }
    }
    return out;
}

}  // namespace pencil_forge::testing
