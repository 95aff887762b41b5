#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "pencil_forge/poly.hpp"

namespace pencil_forge {

class Expr;

enum class SymbolKind {
    plain,     ///< field, jet, independent variable or parameter
    function,  ///< derivative of an opaque univariate function at an argument
    logarithm  ///< ln of an argument, never expanded
};

struct SymbolInfo {
    SymbolKind kind = SymbolKind::plain;
    /// Display name; also the interning key, so it is unique.
    std::string name;
    std::string function;  // function atoms only
    int order = 0;         // function atoms only
    std::shared_ptr<const Expr> argument;
};

/// Process-wide interning of symbol names to Var indices. Thread-safe.
///
/// Plain symbols are keyed by name. Function atoms `g'(v)` are keyed by
/// function name, derivative order and the rendered normal form of the
/// argument, so equal arguments give the same atom.
class SymbolTable {
public:
    static SymbolTable& instance();

    Var plain(std::string_view name);
    Var function(const std::string& name, int order, const Expr& argument);
    Var logarithm(const Expr& argument);

    const SymbolInfo& info(Var v) const;
    const std::string& name(Var v) const { return info(v).name; }
    std::optional<Var> find(std::string_view name) const;

private:
    SymbolTable() = default;
    Var intern(SymbolInfo info);

    mutable std::shared_mutex mutex_;
    std::deque<SymbolInfo> symbols_;
    std::unordered_map<std::string, Var> index_;
};

inline const std::string& symbol_name(Var v) { return SymbolTable::instance().name(v); }

}  // namespace pencil_forge
