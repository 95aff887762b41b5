#include "pencil_forge/poly.hpp"

#include <algorithm>
#include <set>

#include "pencil_forge/errors.hpp"

namespace pencil_forge {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(Var v, std::uint32_t exponent) {
    if (exponent == 0) return {};
    return Monomial({{v, exponent}});
}

std::uint32_t Monomial::degree(Var v) const noexcept {
    for (const auto& [var, e] : factors_) {
        if (var == v) return e;
        if (var > v) break;
    }
    return 0;
}

std::uint32_t Monomial::total_degree() const noexcept {
    std::uint32_t d = 0;
    for (const auto& f : factors_) d += f.second;
    return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
    std::vector<Factor> out;
    out.reserve(factors_.size() + other.factors_.size());
    auto a = factors_.begin();
    auto b = other.factors_.begin();
    while (a != factors_.end() && b != other.factors_.end()) {
        if (a->first < b->first) {
            out.push_back(*a++);
        } else if (b->first < a->first) {
            out.push_back(*b++);
        } else {
            out.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    out.insert(out.end(), a, factors_.end());
    out.insert(out.end(), b, other.factors_.end());
    return Monomial(std::move(out));
}

bool Monomial::divides(const Monomial& other) const noexcept {
    auto b = other.factors_.begin();
    for (const auto& [var, e] : factors_) {
        while (b != other.factors_.end() && b->first < var) ++b;
        if (b == other.factors_.end() || b->first != var || b->second < e) return false;
    }
    return true;
}

Monomial Monomial::quotient(const Monomial& divisor) const {
    std::vector<Factor> out;
    out.reserve(factors_.size());
    auto d = divisor.factors_.begin();
    for (const auto& [var, e] : factors_) {
        std::uint32_t sub = 0;
        if (d != divisor.factors_.end() && d->first == var) sub = (d++)->second;
        if (e > sub) out.emplace_back(var, e - sub);
    }
    return Monomial(std::move(out));
}

Monomial Monomial::without(Var v) const {
    std::vector<Factor> out;
    out.reserve(factors_.size());
    for (const auto& f : factors_)
        if (f.first != v) out.push_back(f);
    return Monomial(std::move(out));
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
    std::vector<Factor> out;
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() && j != b.factors_.end()) {
        if (i->first < j->first) {
            ++i;
        } else if (j->first < i->first) {
            ++j;
        } else {
            out.emplace_back(i->first, std::min(i->second, j->second));
            ++i;
            ++j;
        }
    }
    return Monomial(std::move(out));
}

int compare(const Monomial& a, const Monomial& b) noexcept {
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    for (; i != a.factors_.end() && j != b.factors_.end(); ++i, ++j) {
        if (i->first != j->first) return i->first < j->first ? 1 : -1;
        if (i->second != j->second) return i->second > j->second ? 1 : -1;
    }
    if (i != a.factors_.end()) return 1;
    if (j != b.factors_.end()) return -1;
    return 0;
}

// ---------------------------------------------------------------- Poly

namespace {

bool term_greater(const Term& a, const Term& b) { return compare(a.monomial, b.monomial) > 0; }

}  // namespace

Poly::Poly(const mpq_class& constant) {
    if (constant != 0) terms_.push_back({Monomial{}, constant});
}

Poly Poly::variable(Var v, std::uint32_t exponent) {
    return term(Monomial::variable(v, exponent), 1);
}

Poly Poly::term(const Monomial& m, const mpq_class& c) {
    Poly p;
    if (c != 0) p.terms_.push_back({m, c});
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), term_greater);
    Poly p;
    p.terms_.reserve(terms.size());
    for (auto& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
            p.terms_.back().coefficient += t.coefficient;
        } else {
            if (!p.terms_.empty() && p.terms_.back().coefficient == 0) p.terms_.pop_back();
            p.terms_.push_back(std::move(t));
        }
    }
    if (!p.terms_.empty() && p.terms_.back().coefficient == 0) p.terms_.pop_back();
    return p;
}

bool Poly::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one());
}

mpq_class Poly::constant_value() const {
    if (terms_.empty()) return 0;
    if (!is_constant()) throw Error("constant_value() on a non-constant polynomial");
    return terms_[0].coefficient;
}

std::vector<Var> Poly::variables() const {
    std::set<Var> vars;
    for (const auto& t : terms_)
        for (const auto& f : t.monomial.factors()) vars.insert(f.first);
    return {vars.begin(), vars.end()};
}

bool Poly::contains(Var v) const noexcept {
    return std::any_of(terms_.begin(), terms_.end(),
                       [v](const Term& t) { return t.monomial.degree(v) > 0; });
}

std::uint32_t Poly::degree(Var v) const noexcept {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.monomial.degree(v));
    return d;
}

std::uint32_t Poly::total_degree() const noexcept {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.monomial.total_degree());
    return d;
}

std::map<std::uint32_t, Poly> Poly::coefficients(Var x) const {
    std::map<std::uint32_t, std::vector<Term>> buckets;
    for (const auto& t : terms_)
        buckets[t.monomial.degree(x)].push_back({t.monomial.without(x), t.coefficient});
    std::map<std::uint32_t, Poly> out;
    for (auto& [d, ts] : buckets) {
        // Removing x preserves the relative order of the remaining terms.
        Poly p;
        p.terms_ = std::move(ts);
        out.emplace(d, std::move(p));
    }
    return out;
}

Poly Poly::leading_coefficient(Var x) const {
    auto cs = coefficients(x);
    if (cs.empty()) return {};
    return cs.rbegin()->second;
}

Poly Poly::operator-() const {
    Poly p = *this;
    for (auto& t : p.terms_) t.coefficient = -t.coefficient;
    return p;
}

namespace {

std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        int c = compare(i->monomial, j->monomial);
        if (c > 0) {
            out.push_back(*i++);
        } else if (c < 0) {
            out.push_back({j->monomial, subtract ? mpq_class(-j->coefficient) : j->coefficient});
            ++j;
        } else {
            mpq_class s = subtract ? mpq_class(i->coefficient - j->coefficient)
                                   : mpq_class(i->coefficient + j->coefficient);
            if (s != 0) out.push_back({i->monomial, std::move(s)});
            ++i;
            ++j;
        }
    }
    for (; i != a.end(); ++i) out.push_back(*i);
    for (; j != b.end(); ++j)
        out.push_back({j->monomial, subtract ? mpq_class(-j->coefficient) : j->coefficient});
    return out;
}

}  // namespace

Poly& Poly::operator+=(const Poly& other) {
    if (other.is_zero()) return *this;
    terms_ = merge_terms(terms_, other.terms_, false);
    return *this;
}

Poly& Poly::operator-=(const Poly& other) {
    if (other.is_zero()) return *this;
    terms_ = merge_terms(terms_, other.terms_, true);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b.scaled(a.terms_[0].coefficient);
    if (b.is_constant()) return a.scaled(b.terms_[0].coefficient);
    if (a.size() == 1) return b.times_monomial(a.terms_[0].monomial).scaled(a.terms_[0].coefficient);
    if (b.size() == 1) return a.times_monomial(b.terms_[0].monomial).scaled(b.terms_[0].coefficient);
    std::vector<Term> products;
    products.reserve(a.size() * b.size());
    for (const auto& s : a.terms_)
        for (const auto& t : b.terms_)
            products.push_back({s.monomial * t.monomial, s.coefficient * t.coefficient});
    return Poly::from_terms(std::move(products));
}

Poly& Poly::operator*=(const Poly& other) { return *this = *this * other; }

Poly Poly::scaled(const mpq_class& c) const {
    if (c == 0) return {};
    Poly p = *this;
    for (auto& t : p.terms_) t.coefficient *= c;
    return p;
}

Poly Poly::times_monomial(const Monomial& m) const {
    Poly p = *this;
    for (auto& t : p.terms_) t.monomial = t.monomial * m;
    return p;
}

Poly Poly::pow(std::uint32_t exponent) const {
    Poly result(1);
    Poly base = *this;
    while (exponent > 0) {
        if (exponent & 1U) result *= base;
        exponent >>= 1U;
        if (exponent > 0) base = base * base;
    }
    return result;
}

Poly Poly::derivative(Var v) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        std::uint32_t d = t.monomial.degree(v);
        if (d == 0) continue;
        Monomial m = t.monomial.quotient(Monomial::variable(v));
        out.push_back({std::move(m), t.coefficient * d});
    }
    return from_terms(std::move(out));
}

Monomial Poly::monomial_content() const {
    if (terms_.empty()) return {};
    Monomial m = terms_[0].monomial;
    for (std::size_t i = 1; i < terms_.size() && !m.is_one(); ++i)
        m = Monomial::gcd(m, terms_[i].monomial);
    return m;
}

mpq_class Poly::numeric_content() const {
    if (terms_.empty()) return 1;
    mpz_class num = 0;
    mpz_class den = 1;
    for (const auto& t : terms_) {
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), t.coefficient.get_num_mpz_t());
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.coefficient.get_den_mpz_t());
    }
    mpq_class c(num, den);
    c.canonicalize();
    return c;
}

Poly Poly::primitive() const {
    if (terms_.empty()) return {};
    mpq_class c = numeric_content();
    if (terms_[0].coefficient < 0) c = -c;
    if (c == 1) return *this;
    return scaled(1 / c);
}

Poly Poly::monic() const {
    if (terms_.empty()) return {};
    if (terms_[0].coefficient == 1) return *this;
    return scaled(1 / terms_[0].coefficient);
}

Poly Poly::divide_monomial(const Monomial& m) const {
    if (m.is_one()) return *this;
    Poly p = *this;
    for (auto& t : p.terms_) t.monomial = t.monomial.quotient(m);
    return p;
}

std::optional<Poly> Poly::divide_exact(const Poly& divisor) const {
    if (divisor.is_zero()) throw DivisionByZeroError("polynomial division by zero");
    if (is_zero()) return Poly{};
    if (divisor.is_constant()) return scaled(1 / divisor.terms_[0].coefficient);
    if (divisor.size() == 1) {
        const Term& d = divisor.terms_[0];
        for (const auto& t : terms_)
            if (!d.monomial.divides(t.monomial)) return std::nullopt;
        return divide_monomial(d.monomial).scaled(1 / d.coefficient);
    }
    for (const auto& [v, e] : divisor.leading().monomial.factors())
        if (degree(v) < e) return std::nullopt;
    if (size() < 1 || total_degree() < divisor.total_degree()) return std::nullopt;

    const Term& lead = divisor.terms_[0];
    std::vector<std::pair<Var, std::uint32_t>> bounds;
    for (Var v : variables()) bounds.emplace_back(v, degree(v) - std::min(degree(v), divisor.degree(v)));
    std::vector<Term> quotient;
    Poly rest = *this;
    while (!rest.is_zero()) {
        const Term& r = rest.terms_[0];
        if (!lead.monomial.divides(r.monomial)) return std::nullopt;
        Term q{r.monomial.quotient(lead.monomial), r.coefficient / lead.coefficient};
        for (const auto& [v, e] : q.monomial.factors()) {
            auto it = std::lower_bound(bounds.begin(), bounds.end(), std::make_pair(v, 0U));
            if (it == bounds.end() || it->first != v || e > it->second) return std::nullopt;
        }
        rest -= divisor.times_monomial(q.monomial).scaled(q.coefficient);
        quotient.push_back(std::move(q));
    }
    Poly out;
    out.terms_ = std::move(quotient);
    return out;
}

bool Poly::operator==(const Poly& other) const {
    if (terms_.size() != other.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].coefficient != other.terms_[i].coefficient) return false;
        if (terms_[i].monomial != other.terms_[i].monomial) return false;
    }
    return true;
}

// ---------------------------------------------------------------- gcd

Poly pseudo_remainder(const Poly& a, const Poly& b, Var x) {
    const std::uint32_t db = b.degree(x);
    const Poly lb = b.leading_coefficient(x);
    Poly r = a;
    while (!r.is_zero()) {
        const std::uint32_t dr = r.degree(x);
        if (dr < db) break;
        Poly lr = r.leading_coefficient(x);
        r = lb * r - (lr * b).times_monomial(Monomial::variable(x, dr - db));
    }
    return r;
}

namespace {

Poly gcd_no_monomial_content(Poly a, Poly b);

// Heuristic gcd by evaluation at a large integer and xi-adic reconstruction
// (Char, Geddes and Gonnet). Inputs have integer coefficients; the result
// includes the integer gcd of the contents. nullopt when the heuristic gives up.

mpz_class max_norm(const Poly& p) {
    mpz_class m = 0;
    for (const auto& t : p.terms()) {
        mpz_class c = abs(t.coefficient.get_num());
        if (c > m) m = c;
    }
    return m;
}

mpz_class integer_content(const Poly& p) {
    mpz_class g = 0;
    for (const auto& t : p.terms()) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coefficient.get_num_mpz_t());
    return g;
}

Poly evaluate_at(const Poly& p, Var x, const mpz_class& xi) {
    std::vector<mpz_class> powers{1};
    std::vector<Term> out;
    out.reserve(p.size());
    for (const auto& t : p.terms()) {
        const std::uint32_t e = t.monomial.degree(x);
        while (powers.size() <= e) powers.push_back(powers.back() * xi);
        out.push_back({t.monomial.without(x), t.coefficient * mpq_class(powers[e])});
    }
    return Poly::from_terms(std::move(out));
}

Poly interpolate(Poly h, Var x, const mpz_class& xi) {
    const mpz_class half = xi / 2;
    std::vector<Term> out;
    for (std::uint32_t i = 0; !h.is_zero(); ++i) {
        std::vector<Term> digit;
        for (const auto& t : h.terms()) {
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), t.coefficient.get_num_mpz_t(), xi.get_mpz_t());
            if (r > half) r -= xi;
            if (r != 0) digit.push_back({t.monomial, mpq_class(r)});
        }
        Poly g = Poly::from_terms(digit);
        for (const auto& t : digit) out.push_back({t.monomial * Monomial::variable(x, i), t.coefficient});
        h = (h - g).scaled(mpq_class(1, 1) / mpq_class(xi));
    }
    return Poly::from_terms(std::move(out));
}

std::optional<Poly> heuristic_gcd(const Poly& a0, const Poly& b0) {
    if (a0.is_zero()) return b0;
    if (b0.is_zero()) return a0;
    const mpz_class ca = integer_content(a0);
    const mpz_class cb = integer_content(b0);
    mpz_class g0;
    mpz_gcd(g0.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    if (a0.is_constant() || b0.is_constant()) return Poly(mpq_class(g0));
    const Poly a = a0.scaled(mpq_class(1) / mpq_class(ca));
    const Poly b = b0.scaled(mpq_class(1) / mpq_class(cb));

    std::vector<Var> vars = a.variables();
    for (Var v : b.variables()) vars.push_back(v);
    const Var x = *std::min_element(vars.begin(), vars.end());

    const mpz_class na = max_norm(a);
    const mpz_class nb = max_norm(b);
    const mpz_class bound = 2 * std::min(na, nb) + 29;
    mpz_class xi = std::min(bound, mpz_class(99 * sqrt(bound)));
    const mpz_class la = abs(a.leading().coefficient.get_num());
    const mpz_class lb = abs(b.leading().coefficient.get_num());
    xi = std::max(xi, mpz_class(2 * std::min(mpz_class(na / la), mpz_class(nb / lb)) + 4));

    for (int attempt = 0; attempt < 6; ++attempt) {
        const Poly ea = evaluate_at(a, x, xi);
        const Poly eb = evaluate_at(b, x, xi);
        if (!ea.is_zero() && !eb.is_zero()) {
            auto h = heuristic_gcd(ea, eb);
            if (!h) return std::nullopt;
            Poly candidate = interpolate(*h, x, xi).primitive();
            if (!candidate.is_zero() && a.divide_exact(candidate) && b.divide_exact(candidate))
                return candidate.scaled(mpq_class(g0));
        }
        xi = 73794 * xi * mpz_class(sqrt(mpz_class(sqrt(xi)))) / 27011;
    }
    return std::nullopt;
}


Poly primitive_part(const Poly& p, Var x) {
    Poly c = content(p, x);
    auto q = p.divide_exact(c);
    return q->primitive();
}

Poly gcd_no_monomial_content(Poly a, Poly b) {
    if (a.is_constant() || b.is_constant()) return Poly(1);
    if (a.primitive() == b.primitive()) return a.primitive();

    // A variable present in only one argument can only live in the gcd through
    // that argument's content with respect to it.
    for (bool changed = true; changed;) {
        changed = false;
        for (Var y : a.variables()) {
            if (!b.contains(y)) {
                a = content(a, y);
                if (a.is_constant()) return Poly(1);
                changed = true;
                break;
            }
        }
        for (Var y : b.variables()) {
            if (!a.contains(y)) {
                b = content(b, y);
                if (b.is_constant()) return Poly(1);
                changed = true;
                break;
            }
        }
    }
    if (a.size() >= b.size()) {
        if (a.divide_exact(b)) return b.primitive();
    } else if (b.divide_exact(a)) {
        return a.primitive();
    }

    if (auto h = heuristic_gcd(a.primitive(), b.primitive())) return h->primitive();

    const auto vars = a.variables();
    Var x = vars.front();
    std::uint32_t best = ~0U;
    for (Var v : vars) {
        std::uint32_t d = std::max(a.degree(v), b.degree(v));
        if (d < best) {
            best = d;
            x = v;
        }
    }

    Poly ca = content(a, x);
    Poly cb = content(b, x);
    Poly c = gcd(ca, cb);
    Poly pa = a.divide_exact(ca)->primitive();
    Poly pb = b.divide_exact(cb)->primitive();
    if (pa.degree(x) < pb.degree(x)) std::swap(pa, pb);
    while (true) {
        if (pb.degree(x) == 0) {
            pb = Poly(1);
            break;
        }
        Poly r = pseudo_remainder(pa, pb, x);
        if (r.is_zero()) break;
        pa = std::move(pb);
        pb = primitive_part(r, x);
    }
    return (c * pb).primitive();
}

}  // namespace

std::optional<Poly> square_root(const Poly& p) {
    if (p.is_zero()) return Poly();
    auto rational_root = [](const mpq_class& q) -> std::optional<mpq_class> {
        if (q <= 0) return std::nullopt;
        if (mpz_perfect_square_p(q.get_num_mpz_t()) == 0 || mpz_perfect_square_p(q.get_den_mpz_t()) == 0)
            return std::nullopt;
        mpz_class n, d;
        mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
        mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
        return mpq_class(n, d);
    };
    // Leading term first, then long division by 2*lead(r); every monomial of a
    // square root has at most half the degree of p in each variable.
    const Term& lead = p.leading();
    auto c0 = rational_root(lead.coefficient);
    if (!c0) return std::nullopt;
    Monomial m0;
    for (const auto& [v, e] : lead.monomial.factors()) {
        if (e % 2 != 0) return std::nullopt;
        m0 = m0 * Monomial::variable(v, e / 2);
    }
    Poly r = Poly::term(m0, *c0);
    Poly rest = p - r * r;
    while (!rest.is_zero()) {
        const Term& t = rest.leading();
        if (!m0.divides(t.monomial)) return std::nullopt;
        const Monomial q = t.monomial.quotient(m0);
        if (compare(q, m0) >= 0) return std::nullopt;
        for (const auto& [v, e] : q.factors())
            if (2 * e > p.degree(v)) return std::nullopt;
        const Poly next = Poly::term(q, t.coefficient / (2 * *c0));
        rest -= next * (r.scaled(2) + next);
        r += next;
    }
    return r;
}

Poly content(const Poly& p, Var x) {
    auto cs = p.coefficients(x);
    Poly g;
    for (auto& [d, c] : cs) {
        g = gcd(g, c);
        if (g.is_constant()) return Poly(1);
    }
    return g;
}

Poly gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return b.primitive();
    if (b.is_zero()) return a.primitive();
    if (a.is_constant() || b.is_constant()) return Poly(1);
    Monomial ma = a.monomial_content();
    Monomial mb = b.monomial_content();
    Monomial mg = Monomial::gcd(ma, mb);
    if (a.is_monomial() || b.is_monomial()) return Poly::term(mg, 1);
    Poly g = gcd_no_monomial_content(a.divide_monomial(ma), b.divide_monomial(mb));
    return g.times_monomial(mg).primitive();
}

}  // namespace pencil_forge
