#include "pencil_forge/context.hpp"

#include <algorithm>
#include <cctype>

#include "pencil_forge/errors.hpp"
#include "pencil_forge/parse.hpp"

namespace pencil_forge {

int Context::Jet::total() const {
    int t = 0;
    for (int o : orders) t += o;
    return t;
}

namespace {

bool valid_identifier(const std::string& s) {
    if (s.empty() || std::isalpha(static_cast<unsigned char>(s[0])) == 0) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; });
}

bool contains(const std::vector<std::string>& v, std::string_view s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

Context::Context(std::vector<std::string> fields, std::vector<std::string> independents) {
    for (auto& x : independents) {
        check_name(x);
        if (x.size() != 1) throw Error("independent variable names must be single letters: '" + x + "'");
        independents_.push_back(std::move(x));
    }
    for (auto& f : fields) {
        check_name(f);
        fields_.push_back(std::move(f));
    }
}

void Context::check_name(const std::string& name) const {
    if (!valid_identifier(name)) throw Error("invalid identifier '" + name + "'");
    if (name == "sqrt" || name == "ln") throw Error("reserved name '" + name + "'");
    if (contains(fields_, name) || contains(independents_, name) || contains(parameters_, name) ||
        contains(functions_, name)) {
        throw Error("duplicate name '" + name + "'");
    }
    if (decode_jet(name)) throw Error("name '" + name + "' collides with a jet variable");
    for (const auto& f : fields_) {
        Context probe;
        probe.fields_ = {name};
        probe.independents_ = independents_;
        if (probe.decode_jet(f)) throw Error("name '" + name + "' makes field '" + f + "' ambiguous");
    }
}

Context& Context::add_parameter(std::string name) {
    check_name(name);
    parameters_.push_back(std::move(name));
    return *this;
}

Context& Context::add_function(std::string name) {
    check_name(name);
    functions_.push_back(std::move(name));
    return *this;
}

Context& Context::assume_nonzero(std::string expression) {
    Expr e = parse(expression);
    if (e.is_zero()) throw Error("assumption '" + expression + "' is identically zero");
    assumptions_.push_back(std::move(expression));
    return *this;
}

Context& Context::set_max_jet_order(int order) {
    max_jet_order_ = order;
    return *this;
}

Expr Context::field(std::size_t i) const { return Expr::symbol(fields_.at(i)); }

Var Context::field_var(std::size_t i) const { return SymbolTable::instance().plain(fields_.at(i)); }

std::size_t Context::independent_index(std::string_view name) const {
    auto it = std::find(independents_.begin(), independents_.end(), name);
    if (it == independents_.end()) throw UnknownSymbolError(std::string(name));
    return static_cast<std::size_t>(it - independents_.begin());
}

Expr Context::independent(std::string_view name) const {
    return Expr::symbol(independents_.at(independent_index(name)));
}

Var Context::independent_var(std::string_view name) const {
    return SymbolTable::instance().plain(independents_.at(independent_index(name)));
}

std::string Context::jet_name(const Jet& j) const {
    std::string name = fields_.at(j.field);
    if (j.total() == 0) return name;
    name += "_";
    for (std::size_t k = 0; k < independents_.size(); ++k) {
        const int o = k < j.orders.size() ? j.orders[k] : 0;
        name.append(static_cast<std::size_t>(o), independents_[k][0]);
    }
    return name;
}

Expr Context::jet(const Jet& j) const { return Expr::symbol(jet_name(j)); }

Expr Context::jet(std::size_t field, std::string_view independent, int order) const {
    Jet j;
    j.field = field;
    j.orders.assign(independents_.size(), 0);
    j.orders[independent_index(independent)] = order;
    return jet(j);
}

std::optional<Context::Jet> Context::decode_jet(std::string_view name) const {
    for (std::size_t i = 0; i < fields_.size(); ++i) {
        const std::string& f = fields_[i];
        Jet j;
        j.field = i;
        j.orders.assign(independents_.size(), 0);
        if (name == f) return j;
        if (name.size() < f.size() + 2 || name.substr(0, f.size()) != f || name[f.size()] != '_') continue;
        bool ok = true;
        for (char c : name.substr(f.size() + 1)) {
            auto it = std::find_if(independents_.begin(), independents_.end(),
                                   [c](const std::string& x) { return x[0] == c; });
            if (it == independents_.end()) {
                ok = false;
                break;
            }
            ++j.orders[static_cast<std::size_t>(it - independents_.begin())];
        }
        if (ok) return j;
    }
    return std::nullopt;
}

std::optional<Context::Jet> Context::jet_of(Var v) const {
    const SymbolInfo& info = SymbolTable::instance().info(v);
    if (info.kind != SymbolKind::plain) return std::nullopt;
    auto j = decode_jet(info.name);
    if (j && jet_name(*j) != info.name) return std::nullopt;
    return j;
}

bool Context::is_parameter(std::string_view name) const { return contains(parameters_, name); }

bool Context::is_function(std::string_view name) const { return contains(functions_, name); }

bool Context::declares(std::string_view name) const {
    return contains(independents_, name) || contains(parameters_, name) || decode_jet(name).has_value();
}

std::vector<Expr> Context::assumptions() const {
    std::vector<Expr> out;
    out.reserve(assumptions_.size());
    for (const auto& a : assumptions_) out.push_back(parse(a));
    return out;
}

bool Context::nonzero_by_assumption(const Expr& e) const {
    if (e.is_zero()) return false;
    if (e.is_constant()) return true;
    auto known = assumptions();
    // products of at most two assumptions, each possibly squared
    std::vector<Expr> candidates;
    for (const auto& a : known) {
        candidates.push_back(a);
        candidates.push_back(a * a);
    }
    const std::size_t single = candidates.size();
    for (std::size_t i = 0; i < single; ++i) {
        for (std::size_t j = i + 1; j < single; ++j) candidates.push_back(candidates[i] * candidates[j]);
    }
    for (const auto& c : candidates) {
        Expr q = e / c;
        if (q.is_constant()) return true;
    }
    return false;
}

Expr Context::parse(std::string_view text) const { return normalize(pencil_forge::parse(text, *this)); }

}  // namespace pencil_forge
