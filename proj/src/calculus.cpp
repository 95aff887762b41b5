#include "pencil_forge/calculus.hpp"

#include <algorithm>

#include "pencil_forge/errors.hpp"

namespace pencil_forge {

std::vector<Var> jets_in(const Expr& e, const Context& ctx) {
    std::vector<Var> out;
    for (Var v : free_symbols(e)) {
        if (ctx.jet_of(v)) out.push_back(v);
    }
    return out;
}

int jet_order(const Expr& e, const Context& ctx) {
    int order = -1;
    for (Var v : jets_in(e, ctx)) order = std::max(order, ctx.jet_of(v)->total());
    return order;
}

Expr total_derivative(const Expr& e, const Context& ctx, std::string_view independent) {
    const std::size_t k = ctx.independent_index(independent);
    Expr out = diff(e, ctx.independent_var(independent));
    for (Var y : jets_in(e, ctx)) {
        Expr dy = diff(e, y);
        if (dy.is_zero()) continue;
        Context::Jet j = *ctx.jet_of(y);
        ++j.orders[k];
        if (j.total() > ctx.max_jet_order()) {
            throw JetOrderError("total derivative of '" + symbol_name(y) + "' exceeds jet order " +
                                std::to_string(ctx.max_jet_order()));
        }
        out += dy * ctx.jet(j);
    }
    return out;
}

// ---------------------------------------------------------------- antiderivative

namespace {

using K = RationalFunction;

/// Univariate polynomial in the integration variable with coefficients
/// free of it; c[i] multiplies s^i.
struct UPoly {
    std::vector<K> c;

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const K& lead() const { return c.back(); }

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
};

UPoly from_poly(const Poly& p, Var s) {
    UPoly u;
    for (auto& [d, coeff] : p.coefficients(s)) {
        if (u.c.size() <= d) u.c.resize(d + 1);
        u.c[d] = K(coeff);
    }
    u.trim();
    return u;
}

UPoly add(const UPoly& a, const UPoly& b) {
    UPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    r.trim();
    return r;
}

UPoly scale(const UPoly& a, const K& k) {
    UPoly r;
    if (k.is_zero()) return r;
    r.c.reserve(a.c.size());
    for (const auto& x : a.c) r.c.push_back(x * k);
    return r;
}

UPoly sub(const UPoly& a, const UPoly& b) { return add(a, scale(b, K(-1))); }

UPoly mul(const UPoly& a, const UPoly& b) {
    UPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.c.resize(a.c.size() + b.c.size() - 1);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    r.trim();
    return r;
}

UPoly derivative(const UPoly& a) {
    UPoly r;
    for (std::size_t i = 1; i < a.c.size(); ++i) r.c.push_back(a.c[i] * K(static_cast<long>(i)));
    r.trim();
    return r;
}

std::pair<UPoly, UPoly> divmod(UPoly a, const UPoly& b) {
    UPoly q;
    const int db = b.degree();
    if (a.degree() >= db) q.c.resize(static_cast<std::size_t>(a.degree() - db + 1));
    const K inv = b.lead().inverse();
    while (!a.is_zero() && a.degree() >= db) {
        const auto shift = static_cast<std::size_t>(a.degree() - db);
        K f = a.lead() * inv;
        q.c[shift] = f;
        for (std::size_t i = 0; i < b.c.size(); ++i) a.c[shift + i] -= f * b.c[i];
        a.c.pop_back();
        a.trim();
    }
    q.trim();
    return {q, a};
}

UPoly mod(const UPoly& a, const UPoly& b) { return divmod(a, b).second; }

/// s*a + t*b = 1 for coprime a, b.
std::pair<UPoly, UPoly> bezout(const UPoly& a, const UPoly& b) {
    UPoly r0 = a, r1 = b;
    UPoly s0{{K(1)}}, s1;
    UPoly t0, t1{{K(1)}};
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = r1;
        r1 = r;
        UPoly s2 = sub(s0, mul(q, s1));
        UPoly t2 = sub(t0, mul(q, t1));
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if (r0.degree() != 0) throw NotIntegrableError("internal: factors are not coprime");
    const K inv = r0.lead().inverse();
    return {scale(s0, inv), scale(t0, inv)};
}

Expr to_expr(const UPoly& p, Var s) {
    Expr out;
    Expr power(1);
    const Expr x = Expr::symbol(s);
    for (const auto& k : p.c) {
        out += Expr(k) * power;
        power *= x;
    }
    return out;
}

UPoly integrate_poly(const UPoly& p) {
    UPoly r;
    r.c.resize(p.c.size() + 1);
    for (std::size_t i = 0; i < p.c.size(); ++i) r.c[i + 1] = p.c[i] / K(static_cast<long>(i + 1));
    r.trim();
    return r;
}

/// Splits num/prod(dens) into sum num_j/dens_j for pairwise coprime dens.
std::vector<UPoly> partial_fractions(const UPoly& num, const std::vector<UPoly>& dens) {
    std::vector<UPoly> out;
    UPoly rest = num;
    for (std::size_t j = 0; j < dens.size(); ++j) {
        if (j + 1 == dens.size()) {
            out.push_back(mod(rest, dens[j]));
            break;
        }
        UPoly others{{K(1)}};
        for (std::size_t k = j + 1; k < dens.size(); ++k) others = mul(others, dens[k]);
        auto [sa, tb] = bezout(dens[j], others);  // sa*F + tb*G = 1
        out.push_back(mod(mul(rest, tb), dens[j]));
        rest = mod(mul(rest, sa), others);
    }
    return out;
}

std::vector<Poly> squarefree_factors(const Poly& p, Var s) {
    // Yun; factors[i] has multiplicity i+1
    std::vector<Poly> factors;
    Poly dp = p.derivative(s);
    Poly b = gcd(p, dp);
    Poly c = *p.divide_exact(b);
    Poly d = *dp.divide_exact(b) - c.derivative(s);
    while (c.degree(s) > 0) {
        Poly a = gcd(c, d);
        factors.push_back(a);
        c = *c.divide_exact(a);
        d = *d.divide_exact(a) - c.derivative(s);
    }
    return factors;
}

std::vector<mpz_class> divisors(mpz_class n) {
    if (n < 0) n = -n;
    std::vector<mpz_class> out;
    if (n == 0) return out;
    if (n > 1000000) throw NotIntegrableError("coefficients too large for rational root search");
    for (mpz_class k = 1; k * k <= n; ++k) {
        if (n % k == 0) {
            out.push_back(k);
            if (k * k != n) out.push_back(n / k);
        }
    }
    return out;
}

/// Splits a square-free polynomial into factors linear in s.
std::vector<Poly> linear_factors(Poly f, Var s) {
    std::vector<Poly> out;
    if (f.degree(s) <= 1) return {f};
    if (f.monomial_content().degree(s) > 0) {
        out.push_back(Poly::variable(s));
        f = f.divide_monomial(Monomial::variable(s));
    }
    if (f.degree(s) > 1 && f.variables() == std::vector<Var>{s}) {
        Poly g = f.primitive();
        auto cs = g.coefficients(s);
        for (const mpz_class& p : divisors(cs.count(0) ? cs[0].constant_value().get_num() : mpz_class(0))) {
            for (const mpz_class& q : divisors(cs.rbegin()->second.constant_value().get_num())) {
                for (int sign : {1, -1}) {
                    if (g.degree(s) <= 1) break;
                    Poly lin = Poly::variable(s).scaled(mpq_class(q)) - Poly(mpq_class(sign * p));
                    if (auto quotient = g.divide_exact(lin)) {
                        out.push_back(lin.primitive());
                        g = *quotient;
                    }
                }
            }
        }
        f = g;
    }
    if (f.degree(s) == 2) {
        // a s^2 + b s + c splits over the coefficient field iff b^2 - 4ac is a square
        auto cs = f.coefficients(s);
        const Poly& a = cs[2];
        const Poly& b = cs[1];
        const Poly& c = cs[0];
        if (auto root = square_root(b * b - a * c * Poly(4))) {
            const Poly base = Poly::variable(s) * a * Poly(2) + b;
            out.push_back((base - *root).primitive());
            out.push_back((base + *root).primitive());
            return out;
        }
    }
    if (f.degree(s) > 1) {
        throw NotIntegrableError("denominator factor " + render(f) + " of degree " + std::to_string(f.degree(s)) +
                                 " in " + symbol_name(s) + " is out of scope");
    }
    if (f.degree(s) == 1) out.push_back(f);
    return out;
}

/// Integral of a/f for square-free f with deg a < deg f.
Expr log_part(const UPoly& a, const Poly& f, Var s) {
    if (a.is_zero()) return {};
    auto lins = linear_factors(f, s);
    std::vector<UPoly> dens;
    UPoly prod{{K(1)}};
    for (const auto& l : lins) {
        dens.push_back(from_poly(l, s));
        prod = mul(prod, dens.back());
    }
    // prod equals f up to a factor free of s
    UPoly fu = from_poly(f, s);
    K ratio = fu.lead() / prod.lead();
    auto parts = partial_fractions(scale(a, ratio.inverse()), dens);
    Expr out;
    for (std::size_t j = 0; j < lins.size(); ++j) {
        if (parts[j].is_zero()) continue;
        // parts[j] is free of s; d/ds ln(l) = l_1 / l
        K coeff = parts[j].c[0] / dens[j].c[1];
        out += Expr(coeff) * Expr::log(Expr(K(lins[j])));
    }
    return out;
}

Expr integrate_rational(const K& r, Var s) {
    if (!r.contains(s)) return Expr(r) * Expr::symbol(s);
    const Poly& num = r.numerator();
    const Poly& den = r.denominator();

    const Poly c = content(den, s);
    const Poly p = *den.divide_exact(c);
    const UPoly n = scale(from_poly(num, s), K(Poly(1), c));
    const UPoly pu = from_poly(p, s);
    auto [q, rem] = divmod(n, pu);
    Expr out = to_expr(integrate_poly(q), s);
    if (rem.is_zero()) return out;

    auto sqf = squarefree_factors(p, s);
    std::vector<Poly> fs;
    std::vector<int> mult;
    std::vector<UPoly> dens;
    UPoly prod{{K(1)}};
    for (std::size_t i = 0; i < sqf.size(); ++i) {
        if (sqf[i].degree(s) == 0) continue;
        fs.push_back(sqf[i]);
        mult.push_back(static_cast<int>(i + 1));
        dens.push_back(from_poly(sqf[i].pow(static_cast<std::uint32_t>(i + 1)), s));
        prod = mul(prod, dens.back());
    }
    const K ratio = pu.lead() / prod.lead();
    auto parts = partial_fractions(scale(rem, ratio.inverse()), dens);

    for (std::size_t j = 0; j < fs.size(); ++j) {
        UPoly a = parts[j];
        const UPoly f = from_poly(fs[j], s);
        const UPoly df = derivative(f);
        auto [sigma, tau] = bezout(df, f);  // sigma*f' + tau*f = 1
        (void)tau;
        for (int k = mult[j]; k > 1; --k) {
            UPoly b = mod(mul(a, sigma), f);
            UPoly cpart = divmod(sub(a, mul(b, df)), f).first;
            // int a/f^k = -b/((k-1) f^(k-1)) + int (c + b'/(k-1))/f^(k-1)
            const K km1(static_cast<long>(k - 1));
            out -= to_expr(b, s) / (Expr(km1) * to_expr(f, s).pow(k - 1));
            a = add(cpart, scale(derivative(b), km1.inverse()));
        }
        auto [qa, ra] = divmod(a, f);
        out += to_expr(integrate_poly(qa), s);
        out += log_part(ra, fs[j], s);
    }
    return out;
}

void require_free_atoms(const std::vector<Var>& vars, Var s) {
    for (Var y : vars) {
        if (y == s) continue;
        if (SymbolTable::instance().info(y).kind != SymbolKind::plain && depends_on(Expr::symbol(y), s)) {
            throw NotIntegrableError("atom '" + symbol_name(y) + "' depends on " + symbol_name(s));
        }
    }
}

}  // namespace

Expr antiderivative(const Expr& e, Var s) {
    require_free_atoms(e.rational_part().variables(), s);
    Expr out = integrate_rational(e.rational_part(), s);
    if (!e.has_radical()) return out;
    if (depends_on(Expr(K(e.radicand())), s)) {
        throw NotIntegrableError("radicand depends on " + symbol_name(s));
    }
    require_free_atoms(e.radical_coefficient().variables(), s);
    return out + integrate_rational(e.radical_coefficient(), s) * Expr::sqrt(Expr(K(e.radicand())));
}

}  // namespace pencil_forge
