#include "pencil_forge/expr.hpp"

#include <algorithm>
#include <mutex>

#include "pencil_forge/errors.hpp"

namespace pencil_forge {

// ---------------------------------------------------------------- symbols

SymbolTable& SymbolTable::instance() {
    static SymbolTable table;
    return table;
}

Var SymbolTable::intern(SymbolInfo info) {
    {
        std::shared_lock lock(mutex_);
        auto it = index_.find(info.name);
        if (it != index_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto it = index_.find(info.name);
    if (it != index_.end()) return it->second;
    auto id = static_cast<Var>(symbols_.size());
    index_.emplace(info.name, id);
    symbols_.push_back(std::move(info));
    return id;
}

Var SymbolTable::plain(std::string_view name) {
    SymbolInfo info;
    info.kind = SymbolKind::plain;
    info.name = std::string(name);
    return intern(std::move(info));
}

Var SymbolTable::function(const std::string& name, int order, const Expr& argument) {
    SymbolInfo info;
    info.kind = SymbolKind::function;
    info.function = name;
    info.order = order;
    info.name = name + std::string(static_cast<std::size_t>(order), '\'') + "(" + render(argument) + ")";
    info.argument = std::make_shared<const Expr>(argument);
    return intern(std::move(info));
}

Var SymbolTable::logarithm(const Expr& argument) {
    SymbolInfo info;
    info.kind = SymbolKind::logarithm;
    info.name = "ln(" + render(argument) + ")";
    info.argument = std::make_shared<const Expr>(argument);
    return intern(std::move(info));
}

const SymbolInfo& SymbolTable::info(Var v) const {
    std::shared_lock lock(mutex_);
    return symbols_.at(v);
}

std::optional<Var> SymbolTable::find(std::string_view name) const {
    std::shared_lock lock(mutex_);
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------- construction

Expr Expr::symbol(std::string_view name) { return symbol(SymbolTable::instance().plain(name)); }

namespace {

/// Square-free part of a positive integer with respect to small primes:
/// returns (root, rest) with n = root^2 * rest.
std::pair<mpz_class, mpz_class> extract_square(mpz_class n) {
    mpz_class root = 1;
    if (mpz_perfect_square_p(n.get_mpz_t()) != 0) {
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
        return {r, 1};
    }
    for (unsigned long p = 2; p < 1000; ++p) {
        mpz_class sq = p * p;
        if (sq > n) break;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p * p) != 0) {
            n /= sq;
            root *= p;
        }
    }
    return {root, n};
}

}  // namespace

Expr Expr::sqrt(const Expr& radicand) {
    if (radicand.has_radical()) throw MultipleRadicandsError("nested radicals are not supported");
    if (radicand.is_zero()) return {};
    const RationalFunction& r = radicand.rational_;
    // sqrt(p/q) = sqrt(p*q)/q
    Poly s = r.numerator() * r.denominator();
    Expr factor(RationalFunction(Poly(1), r.denominator()));

    mpz_class lcm = 1;
    for (const auto& t : s.terms())
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), t.coefficient.get_den_mpz_t());
    if (lcm != 1) {
        s = s.scaled(mpq_class(lcm * lcm));
        factor = factor * Expr(mpq_class(1, 1) / mpq_class(lcm));
    }
    mpq_class content = s.numeric_content();
    auto [root, rest] = extract_square(content.get_num());
    s = s.scaled(mpq_class(rest) / content);

    Monomial m = s.monomial_content();
    Monomial half;
    for (const auto& [v, e] : m.factors()) half = half * Monomial::variable(v, e / 2);
    if (!half.is_one()) s = s.divide_monomial(half * half);
    factor = factor * Expr(RationalFunction(Poly::term(half, mpq_class(root))));

    if (s.is_constant() && s.constant_value() == 1) return factor;
    Expr out;
    out.radical_ = factor.rational_;
    out.radicand_ = std::move(s);
    return out;
}

Expr Expr::function(const std::string& name, int order, const Expr& argument) {
    if (argument.has_radical()) throw MultipleRadicandsError("radicals inside function atoms are not supported");
    return symbol(SymbolTable::instance().function(name, order, argument));
}

Expr Expr::log(const Expr& argument) {
    if (argument.has_radical()) throw MultipleRadicandsError("radicals inside logarithms are not supported");
    if (argument.is_zero()) throw DivisionByZeroError("ln(0)");
    if (argument.is_constant() && argument.constant_value() == 1) return {};
    return symbol(SymbolTable::instance().logarithm(argument));
}

mpq_class Expr::constant_value() const {
    if (!is_constant()) throw Error("constant_value() on a non-constant expression");
    return rational_.constant_value();
}

std::vector<Var> Expr::variables() const {
    std::set<Var> vars;
    for (Var v : rational_.variables()) vars.insert(v);
    for (Var v : radical_.variables()) vars.insert(v);
    for (Var v : radicand_.variables()) vars.insert(v);
    return {vars.begin(), vars.end()};
}

Var as_symbol(const Expr& e) {
    const auto& r = e.rational_part();
    if (e.has_radical() || !r.denominator().is_constant() || !r.numerator().is_monomial()) {
        throw Error("expression '" + render(e) + "' is not a symbol");
    }
    const Term& t = r.numerator().leading();
    if (t.coefficient != 1 || t.monomial.factors().size() != 1 || t.monomial.factors()[0].second != 1) {
        throw Error("expression '" + render(e) + "' is not a symbol");
    }
    return t.monomial.factors()[0].first;
}

// ---------------------------------------------------------------- arithmetic

namespace {

const Poly& common_radicand(const Expr& a, const Expr& b) {
    if (!a.has_radical()) return b.radicand();
    if (!b.has_radical()) return a.radicand();
    if (a.radicand() != b.radicand()) {
        throw MultipleRadicandsError("two distinct radicands: sqrt(" + render(a.radicand()) + ") and sqrt(" +
                                     render(b.radicand()) + ")");
    }
    return a.radicand();
}

}  // namespace

Expr Expr::operator-() const {
    Expr out = *this;
    out.rational_ = -rational_;
    out.radical_ = -radical_;
    return out;
}

Expr operator+(const Expr& a, const Expr& b) {
    Expr out;
    const Poly& s = common_radicand(a, b);
    out.rational_ = a.rational_ + b.rational_;
    out.radical_ = a.radical_ + b.radical_;
    if (!out.radical_.is_zero()) out.radicand_ = s;
    return out;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
    if (!a.has_radical() && !b.has_radical()) return Expr(a.rational_ * b.rational_);
    const Poly& s = common_radicand(a, b);
    Expr out;
    out.rational_ = a.rational_ * b.rational_;
    if (a.has_radical() && b.has_radical()) out.rational_ += a.radical_ * b.radical_ * RationalFunction(s);
    out.radical_ = a.rational_ * b.radical_ + a.radical_ * b.rational_;
    if (!out.radical_.is_zero()) out.radicand_ = s;
    return out;
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_zero()) throw DivisionByZeroError("division by zero");
    if (!b.has_radical()) {
        Expr out;
        out.rational_ = a.rational_ / b.rational_;
        out.radical_ = a.radical_ / b.rational_;
        if (!out.radical_.is_zero()) out.radicand_ = a.radicand_;
        return out;
    }
    // (a)/(c + d sqrt s) = a (c - d sqrt s) / (c^2 - d^2 s)
    Expr conjugate = b;
    conjugate.radical_ = -b.radical_;
    RationalFunction norm =
        b.rational_ * b.rational_ - b.radical_ * b.radical_ * RationalFunction(b.radicand_);
    if (norm.is_zero()) throw DivisionByZeroError("radicand is a perfect square; division is singular");
    return (a * conjugate) / Expr(norm);
}

Expr Expr::pow(int exponent) const {
    if (exponent < 0) return Expr(1) / pow(-exponent);
    if (!has_radical()) return Expr(rational_.pow(exponent));
    Expr result(1);
    Expr base = *this;
    auto e = static_cast<unsigned>(exponent);
    while (e > 0) {
        if (e & 1U) result *= base;
        e >>= 1U;
        if (e > 0) base = base * base;
    }
    return result;
}

// ---------------------------------------------------------------- zero test

namespace {

std::mutex observer_mutex;
std::function<void(const Expr&, bool)>& observer_slot() {
    static std::function<void(const Expr&, bool)> slot;
    return slot;
}

}  // namespace

void set_zero_test_observer(std::function<void(const Expr&, bool)> observer) {
    std::lock_guard lock(observer_mutex);
    observer_slot() = std::move(observer);
}

bool is_zero(const Expr& e) {
    const bool zero = e.is_zero();
    std::function<void(const Expr&, bool)> observer;
    {
        std::lock_guard lock(observer_mutex);
        observer = observer_slot();
    }
    if (observer) observer(e, zero);
    return zero;
}

// ---------------------------------------------------------------- calculus

std::set<Var> free_symbols(const Expr& e) {
    std::set<Var> out;
    for (Var v : e.variables()) {
        const SymbolInfo& info = SymbolTable::instance().info(v);
        if (info.kind == SymbolKind::plain) {
            out.insert(v);
        } else {
            auto inner = free_symbols(*info.argument);
            out.insert(inner.begin(), inner.end());
        }
    }
    return out;
}

bool depends_on(const Expr& e, Var v) { return free_symbols(e).count(v) > 0; }

namespace {

Expr symbol_derivative(Var y, Var v) {
    if (y == v) return Expr(1);
    const SymbolInfo& info = SymbolTable::instance().info(y);
    if (info.kind == SymbolKind::plain) return {};
    Expr darg = diff(*info.argument, v);
    if (darg.is_zero()) return {};
    if (info.kind == SymbolKind::function) {
        return darg * Expr::function(info.function, info.order + 1, *info.argument);
    }
    return darg / *info.argument;
}

Expr diff_rational(const RationalFunction& r, Var v) {
    Expr total;
    for (Var y : r.variables()) {
        Expr dy = symbol_derivative(y, v);
        if (dy.is_zero()) continue;
        total += Expr(r.derivative(y)) * dy;
    }
    return total;
}

}  // namespace

Expr diff(const Expr& e, Var v) {
    Expr out = diff_rational(e.rational_part(), v);
    if (!e.has_radical()) return out;
    // d(b sqrt s) = (b' + b s'/(2 s)) sqrt s
    const RationalFunction& b = e.radical_coefficient();
    RationalFunction s(e.radicand());
    Expr coeff = diff_rational(b, v) + Expr(b) * diff_rational(s, v) / Expr(s * RationalFunction(2));
    if (coeff.is_zero()) return out;
    if (coeff.has_radical()) throw MultipleRadicandsError("radicand depends on a radical");
    Expr root;
    root = Expr::sqrt(Expr(RationalFunction(e.radicand())));
    return out + coeff * root;
}

// ---------------------------------------------------------------- substitution

namespace {

Expr bound_value(Var y, const Substitution& sub, std::map<Var, Expr>& cache) {
    auto cached = cache.find(y);
    if (cached != cache.end()) return cached->second;
    Expr value;
    auto direct = sub.symbols.find(y);
    const SymbolInfo& info = SymbolTable::instance().info(y);
    if (direct != sub.symbols.end()) {
        value = direct->second;
    } else if (info.kind == SymbolKind::plain) {
        value = Expr::symbol(y);
    } else {
        Expr arg = substitute(*info.argument, sub);
        if (info.kind == SymbolKind::logarithm) {
            value = Expr::log(arg);
        } else {
            auto fb = sub.functions.find(info.function);
            if (fb == sub.functions.end()) {
                value = Expr::function(info.function, info.order, arg);
            } else {
                Expr body = fb->second.body;
                for (int k = 0; k < info.order; ++k) body = diff(body, fb->second.parameter);
                Substitution inner;
                inner.symbols.emplace(fb->second.parameter, arg);
                value = substitute(body, inner);
            }
        }
    }
    cache.emplace(y, value);
    return value;
}

Expr substitute_poly(const Poly& p, const Substitution& sub, std::map<Var, Expr>& cache) {
    bool polynomial = true;
    for (Var y : p.variables()) {
        Expr v = bound_value(y, sub, cache);
        if (v.has_radical() || !v.rational_part().is_polynomial()) polynomial = false;
    }
    if (polynomial) {
        Poly out;
        std::map<std::pair<Var, std::uint32_t>, Poly> powers;
        for (const auto& t : p.terms()) {
            Poly term(t.coefficient);
            for (const auto& [y, e] : t.monomial.factors()) {
                auto key = std::make_pair(y, e);
                auto it = powers.find(key);
                if (it == powers.end()) {
                    const RationalFunction& r = cache.at(y).rational_part();
                    Poly base = r.numerator().scaled(1 / r.denominator().constant_value());
                    it = powers.emplace(key, base.pow(e)).first;
                }
                term *= it->second;
            }
            out += term;
        }
        return Expr(RationalFunction(std::move(out)));
    }
    Expr out;
    std::map<std::pair<Var, std::uint32_t>, Expr> powers;
    for (const auto& t : p.terms()) {
        Expr term(t.coefficient);
        for (const auto& [y, e] : t.monomial.factors()) {
            auto key = std::make_pair(y, e);
            auto it = powers.find(key);
            if (it == powers.end()) it = powers.emplace(key, cache.at(y).pow(static_cast<int>(e))).first;
            term *= it->second;
        }
        out += term;
    }
    return out;
}

}  // namespace

Expr substitute(const Expr& e, const Substitution& sub) {
    if (sub.empty()) return e;
    std::map<Var, Expr> cache;
    const RationalFunction& a = e.rational_part();
    Expr out = substitute_poly(a.numerator(), sub, cache) / substitute_poly(a.denominator(), sub, cache);
    if (!e.has_radical()) return out;
    const RationalFunction& b = e.radical_coefficient();
    Expr coeff = substitute_poly(b.numerator(), sub, cache) / substitute_poly(b.denominator(), sub, cache);
    Expr root = Expr::sqrt(substitute_poly(e.radicand(), sub, cache));
    return out + coeff * root;
}

// ---------------------------------------------------------------- rendering

namespace {

struct PrintTerm {
    std::vector<std::pair<std::string, std::uint32_t>> factors;
    std::uint32_t degree = 0;
    mpq_class coefficient;
};

bool print_before(const PrintTerm& a, const PrintTerm& b) {
    if (a.degree != b.degree) return a.degree > b.degree;
    const std::size_t n = std::min(a.factors.size(), b.factors.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.factors[i].first != b.factors[i].first) return a.factors[i].first < b.factors[i].first;
        if (a.factors[i].second != b.factors[i].second) return a.factors[i].second > b.factors[i].second;
    }
    return a.factors.size() > b.factors.size();
}

std::vector<PrintTerm> print_terms(const Poly& p) {
    std::vector<PrintTerm> out;
    out.reserve(p.size());
    for (const auto& t : p.terms()) {
        PrintTerm pt;
        for (const auto& [v, e] : t.monomial.factors()) {
            pt.factors.emplace_back(symbol_name(v), e);
            pt.degree += e;
        }
        std::sort(pt.factors.begin(), pt.factors.end());
        pt.coefficient = t.coefficient;
        out.push_back(std::move(pt));
    }
    std::sort(out.begin(), out.end(), print_before);
    return out;
}

std::string monomial_text(const PrintTerm& t) {
    std::string s;
    for (const auto& [name, e] : t.factors) {
        if (!s.empty()) s += "*";
        s += name;
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

std::string terms_text(const std::vector<PrintTerm>& terms, const mpq_class& scale) {
    if (terms.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& t : terms) {
        mpq_class c = t.coefficient * scale;
        const bool negative = c < 0;
        if (negative) c = -c;
        if (first) {
            if (negative) s += "-";
        } else {
            s += negative ? " - " : " + ";
        }
        first = false;
        std::string mono = monomial_text(t);
        if (mono.empty()) {
            s += c.get_str();
        } else if (c == 1) {
            s += mono;
        } else {
            s += c.get_str() + "*" + mono;
        }
    }
    return s;
}

struct Rendered {
    std::string text;
    bool negative = false;  // leading unary minus applies to the whole value
};

// value = sign * (p/q) * N/D with N, D integer primitive and their first
// printed terms positive; this is canonical whatever the internal order.
Rendered render_rational(const RationalFunction& r) {
    if (r.is_zero()) return {"0", false};
    auto num = print_terms(r.numerator());
    auto den = print_terms(r.denominator());
    if (r.is_polynomial() && num.size() > 1 && r.numerator().numeric_content() == r.denominator().constant_value()) {
        std::string text = terms_text(num, 1 / r.denominator().constant_value());
        return {text, text[0] == '-'};
    }
    const mpq_class num_scale = r.numerator().numeric_content() * (num.front().coefficient < 0 ? -1 : 1);
    const mpq_class den_scale = r.denominator().numeric_content() * (den.front().coefficient < 0 ? -1 : 1);
    mpq_class k = num_scale / den_scale;
    const bool negative = k < 0;
    if (negative) k = -k;
    const std::string n_text = terms_text(num, 1 / num_scale);
    const std::string d_text = terms_text(den, 1 / den_scale);
    const bool n_one = num.size() == 1 && num.front().factors.empty();
    const bool d_one = den.size() == 1 && den.front().factors.empty();
    const bool n_sum = num.size() > 1;
    const bool d_sum = den.size() > 1;
    const mpz_class p = k.get_num();
    const mpz_class q = k.get_den();

    std::string numerator;
    if (n_one) {
        numerator = p.get_str();
    } else if (p == 1) {
        numerator = (n_sum && (negative || q != 1 || !d_one)) ? "(" + n_text + ")" : n_text;
    } else {
        numerator = p.get_str() + "*" + (n_sum ? "(" + n_text + ")" : n_text);
    }
    std::string text = (negative ? "-" : "") + numerator;
    if (q != 1 || !d_one) {
        std::string denominator;
        if (d_one) {
            denominator = q.get_str();
        } else if (q == 1 && !d_sum && den.front().factors.size() == 1) {
            denominator = d_text;
        } else {
            denominator = "(" + (q == 1 ? d_text : q.get_str() + "*" + (d_sum ? "(" + d_text + ")" : d_text)) + ")";
        }
        text += "/" + denominator;
    }
    return {text, negative};
}

}  // namespace

std::string render(const Poly& p) { return terms_text(print_terms(p), 1); }

std::string render(const Expr& e) {
    Rendered a = render_rational(e.rational_part());
    if (!e.has_radical()) return a.text;
    Rendered b = render_rational(e.radical_coefficient());
    bool negative = b.negative;
    std::string coeff = negative ? render_rational(-e.radical_coefficient()).text : b.text;
    std::string root = "sqrt(" + render(e.radicand()) + ")";
    std::string term;
    if (coeff == "1") {
        term = root;
    } else if (coeff.find(' ') != std::string::npos) {
        term = "(" + coeff + ")*" + root;
    } else {
        term = coeff + "*" + root;
    }
    if (e.rational_part().is_zero()) return (negative ? "-" : "") + term;
    return a.text + (negative ? " - " : " + ") + term;
}

// ---------------------------------------------------------------- evaluation

namespace {

mpq_class evaluate_poly(const Poly& p, const std::map<Var, mpq_class>& point) {
    mpq_class total = 0;
    for (const auto& t : p.terms()) {
        mpq_class term = t.coefficient;
        for (const auto& [v, e] : t.monomial.factors()) {
            auto it = point.find(v);
            if (it == point.end()) throw Error("evaluate: no value for symbol '" + symbol_name(v) + "'");
            mpq_class power = 1;
            for (std::uint32_t i = 0; i < e; ++i) power *= it->second;
            term *= power;
        }
        total += term;
    }
    return total;
}

mpq_class evaluate_rational(const RationalFunction& r, const std::map<Var, mpq_class>& point) {
    mpq_class d = evaluate_poly(r.denominator(), point);
    if (d == 0) throw DivisionByZeroError("denominator vanishes at evaluation point");
    return evaluate_poly(r.numerator(), point) / d;
}

}  // namespace

Evaluation evaluate(const Expr& e, const std::map<Var, mpq_class>& point) {
    Evaluation out;
    out.rational = evaluate_rational(e.rational_part(), point);
    if (e.has_radical()) {
        out.radical = evaluate_rational(e.radical_coefficient(), point);
        out.radicand = evaluate_poly(e.radicand(), point);
    }
    return out;
}

}  // namespace pencil_forge
