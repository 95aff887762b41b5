#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pencil_forge/context.hpp"
#include "pencil_forge/hierarchy.hpp"
#include "pencil_forge/operators.hpp"
#include "pencil_forge/report.hpp"

namespace pencil_forge {

struct ParameterSpec {
    std::string name;
    std::string nonzero;  ///< empty when nothing is assumed
};

struct SymbolText {
    std::string dx = "0";
    std::string mult = "0";
    std::vector<std::pair<std::string, std::string>> nonlocal;
};

struct RecursionReference {
    std::map<std::string, std::string> substitute;
    std::vector<std::vector<SymbolText>> matrix;  ///< empty: no printed reference
    std::string note;
};

struct FlowReference {
    std::string name;
    std::string kind;  ///< "apply", "density" or "magri"
    std::vector<std::string> covector;  ///< apply
    std::string density;                ///< density, magri (starting density)
    std::string expected_density;       ///< magri, optional
    std::vector<std::string> expected;  ///< right-hand sides
    bool up_to_sign = false;
    std::map<std::string, std::string> substitute;
};

struct References {
    std::vector<std::vector<std::vector<std::string>>> christoffel;  ///< [i][j][k] = Gamma^{ij}_k
    std::vector<std::vector<std::string>> liouville;
    std::vector<std::string> h_potentials;
    std::optional<RecursionReference> recursion;
    std::vector<FlowReference> flows;
    std::optional<bool> degenerate_split;
    bool wdvv_identities = false;
};

/// A named, parameterized bi-Hamiltonian case: the nonlocal operator B, the
/// constant operator A = eta d_x (antidiagonal), and reference data to
/// compare against. All expressions are kept as text in the parser grammar.
struct CaseRecord {
    std::string name;
    std::string description;
    std::size_t n = 2;
    std::vector<std::string> coordinates;
    std::vector<ParameterSpec> parameters;
    std::vector<ParameterSpec> functions;  ///< opaque univariate functions
    std::vector<std::vector<std::string>> metric;
    std::vector<std::string> isometry;
    std::string epsilon = "1";
    std::string c = "0";
    References references;
    /// Checks expected to fail (negative controls); everything else must pass.
    std::vector<std::string> expected_failures;
    /// Parameter specialization applied after parsing, e.g. alpha -> beta^2.
    std::map<std::string, std::string> bindings;
};

/// Parsed form of a case with bindings applied.
struct LoadedCase {
    Context ctx;
    Metric metric;
    VectorField isometry;
    Expr epsilon;
    Expr c;
    ConstantOp eta;
    Substitution bindings;

    /// Parses in ctx and applies the bindings.
    Expr parse(const std::string& text) const;
    /// Builds B; throws DegenerateMetricError.
    NonlocalIsometryOp op() const;
};

/// Throws ParseError / UnknownSymbolError / ShapeError on malformed records.
LoadedCase load_case(const CaseRecord& record);

std::vector<CaseRecord> builtin_cases();
std::optional<CaseRecord> find_builtin(const std::string& name);

/// Copy with `+ <first coordinate>` added to metric entry (i, j).
CaseRecord inject_fault(const CaseRecord& record, std::size_t i, std::size_t j);

struct VerificationReport {
    std::string name;
    Report report;
    double seconds = 0;

    bool valid() const { return report.valid(); }
};

struct VerifyOptions {
    /// Stop after the first failing check.
    bool fail_fast = false;
};

/// Runs the nonlocal validity checks, pair_check against eta and every
/// reference comparison. Sub-check errors are reported, not thrown; only
/// load errors propagate.
VerificationReport verify_case(const CaseRecord& record, const VerifyOptions& options = {});

/// verify_case over all records, evaluated concurrently, ordered by name.
std::vector<VerificationReport> verify_all(const std::vector<CaseRecord>& records, const VerifyOptions& options = {},
                                           unsigned threads = 0);

// ---------------------------------------------------------------- three-component WDVV identities

/// Context with fields u, v, w, independents x, t and the opaque function gamma.
Context wdvv_context();
/// F = u^2 w/2 + u v^2/2 - v^4 gamma(w)/16.
Expr wdvv_ansatz(const Context& ctx);
/// f_www - f_vvw^2 + f_vww f_vvv for f = F - u^2 w/2 - u v^2/2. Throws ShapeError if f depends on u.
Expr wdvv_residual(const Expr& f, const Context& ctx);
/// gamma''' - 6 gamma gamma'' + 9 gamma'^2 with derivatives in w.
Expr chazy_residual(const Expr& gamma, Var w);

/// Nonhomogeneous system with a single characteristic root (rhs in u, v, w).
std::vector<Expr> isometry_extended_system(const Context& ctx);
/// The two commuting flows for gamma = -2/w, rhs in u, v, w.
std::vector<Expr> reduced_flow_t(const Context& ctx);
std::vector<Expr> reduced_flow_y(const Context& ctx);

/// Substitutes w = z_x, v = z_t, eliminates u through (u_x)_t = (u_t)_x and
/// returns the difference from z_ttt - (3 z_t^2/(2 z_x))_xt + (z_t^3/(2 z_x^2))_xx + 1.
/// `system` holds rhs in the context of wdvv_context().
Expr elimination_residual(const std::vector<Expr>& system, const Context& ctx);
bool elimination_check();

/// det(g - eta) vanishes identically.
Verdict degenerate_split(const Metric& g, const ConstantOp& eta);

}  // namespace pencil_forge
