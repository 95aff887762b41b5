#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pencil_forge/expr.hpp"

namespace pencil_forge {

/// Naming environment for one problem: field variables u^1..u^n, the
/// independent variables they depend on, constant parameters with
/// nonvanishing assumptions, and opaque univariate functions.
///
/// Jet variables are spelled `<field>_<letters>`, one letter per derivative,
/// e.g. `u_x`, `u_xx`, `z_xt`. Independent variable names are therefore
/// single letters.
class Context {
public:
    struct Jet {
        std::size_t field = 0;
        std::vector<int> orders;  // one entry per independent variable
        int total() const;
    };

    Context() = default;
    explicit Context(std::vector<std::string> fields, std::vector<std::string> independents = {"x"});

    Context& add_parameter(std::string name);
    Context& add_function(std::string name);
    /// Records an assumption; the text is parsed in this context.
    Context& assume_nonzero(std::string expression);
    Context& set_max_jet_order(int order);

    std::size_t dimension() const noexcept { return fields_.size(); }
    const std::vector<std::string>& fields() const noexcept { return fields_; }
    const std::vector<std::string>& independents() const noexcept { return independents_; }
    const std::vector<std::string>& parameters() const noexcept { return parameters_; }
    const std::vector<std::string>& functions() const noexcept { return functions_; }
    const std::vector<std::string>& assumption_texts() const noexcept { return assumptions_; }
    int max_jet_order() const noexcept { return max_jet_order_; }

    Expr field(std::size_t i) const;
    Var field_var(std::size_t i) const;
    Expr independent(std::string_view name) const;
    Var independent_var(std::string_view name) const;
    std::size_t independent_index(std::string_view name) const;
    /// First-order jet of field i with respect to an independent variable.
    Expr jet(std::size_t field, std::string_view independent, int order = 1) const;
    Expr jet(const Jet& j) const;
    std::string jet_name(const Jet& j) const;

    /// Decodes a field or jet name; nullopt for anything else.
    std::optional<Jet> decode_jet(std::string_view name) const;
    std::optional<Jet> jet_of(Var v) const;

    bool is_parameter(std::string_view name) const;
    bool is_function(std::string_view name) const;
    /// True for any name the parser resolves to a plain symbol.
    bool declares(std::string_view name) const;

    std::vector<Expr> assumptions() const;
    /// True when e is a nonzero constant or a nonzero rational multiple of an assumption.
    bool nonzero_by_assumption(const Expr& e) const;

    /// Parses and normalizes.
    Expr parse(std::string_view text) const;

private:
    void check_name(const std::string& name) const;

    std::vector<std::string> fields_;
    std::vector<std::string> independents_;
    std::vector<std::string> parameters_;
    std::vector<std::string> functions_;
    std::vector<std::string> assumptions_;
    int max_jet_order_ = 3;
};

}  // namespace pencil_forge
