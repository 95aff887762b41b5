#pragma once

#include "pencil_forge/operators.hpp"

namespace pencil_forge {

/// Pencil g + lambda*h with lambda adjoined as a free symbol.
class Pencil {
public:
    /// Throws Error if lambda already occurs in g or h.
    Pencil(Metric g, Metric h);

    static Var lambda();

    const Metric& first() const noexcept { return g_; }
    const Metric& second() const noexcept { return h_; }
    /// g + lambda h; throws DegenerateMetricError when its determinant vanishes identically.
    Metric combined() const;

private:
    Metric g_;
    Metric h_;
};

/// Levi-Civita symbols of g + lambda h equal Gamma_g + lambda Gamma_h identically in lambda.
Verdict almost_compatible(const Metric& g, const Metric& h);
/// Almost compatible and R_lambda = R_g + lambda R_h.
Verdict compatible(const Metric& g, const Metric& h);

/// Checks "compatible" (eta with g_B), "killing_eta" and "killing_g".
Report pair_check(const ConstantOp& a, const NonlocalIsometryOp& b);

}  // namespace pencil_forge
