#include "pencil_forge/parse.hpp"

#include <cctype>
#include <cmath>
#include <utility>

#include "pencil_forge/context.hpp"
#include "pencil_forge/errors.hpp"

namespace pencil_forge {

namespace tree {

namespace {
Tree make(Node n) { return std::make_shared<const Node>(std::move(n)); }
}  // namespace

Tree number(const mpq_class& v) {
    Node n;
    n.kind = NodeKind::number;
    n.value = v;
    return make(std::move(n));
}

Tree symbol(std::string name) {
    Node n;
    n.kind = NodeKind::symbol;
    n.name = std::move(name);
    return make(std::move(n));
}

Tree sum(std::vector<Tree> terms) {
    Node n;
    n.kind = NodeKind::sum;
    n.children = std::move(terms);
    return make(std::move(n));
}

Tree product(std::vector<Tree> factors) {
    Node n;
    n.kind = NodeKind::product;
    n.children = std::move(factors);
    return make(std::move(n));
}

Tree power(Tree base, int exponent) {
    Node n;
    n.kind = NodeKind::power;
    n.exponent = exponent;
    n.children.push_back(std::move(base));
    return make(std::move(n));
}

Tree sqrt(Tree arg) {
    Node n;
    n.kind = NodeKind::sqrt;
    n.children.push_back(std::move(arg));
    return make(std::move(n));
}

Tree log(Tree arg) {
    Node n;
    n.kind = NodeKind::log;
    n.children.push_back(std::move(arg));
    return make(std::move(n));
}

Tree function(std::string name, int order, Tree arg) {
    Node n;
    n.kind = NodeKind::function;
    n.name = std::move(name);
    n.order = order;
    n.children.push_back(std::move(arg));
    return make(std::move(n));
}

}  // namespace tree

namespace {

class Parser {
public:
    Parser(std::string_view text, const Context& ctx) : text_(text), ctx_(ctx) {}

    Tree run() {
        Tree t = expression();
        skip_space();
        if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        for (const auto& [name, position] : pending_) {
            (void)position;
            throw UnknownSymbolError(name);
        }
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    Tree expression() {
        std::vector<Tree> terms;
        terms.push_back(term());
        for (;;) {
            if (accept('+')) {
                terms.push_back(term());
            } else if (accept('-')) {
                terms.push_back(negate(term()));
            } else {
                break;
            }
        }
        return terms.size() == 1 ? terms.front() : tree::sum(std::move(terms));
    }

    static Tree negate(const Tree& t) {
        if (t->kind == NodeKind::number) return tree::number(-t->value);
        std::vector<Tree> factors{tree::number(-1)};
        if (t->kind == NodeKind::product) {
            factors.insert(factors.end(), t->children.begin(), t->children.end());
        } else {
            factors.push_back(t);
        }
        return tree::product(std::move(factors));
    }

    static void append_factor(std::vector<Tree>& factors, const Tree& t) {
        if (t->kind == NodeKind::product) {
            factors.insert(factors.end(), t->children.begin(), t->children.end());
        } else {
            factors.push_back(t);
        }
    }

    Tree term() {
        std::vector<Tree> factors;
        append_factor(factors, unary());
        for (;;) {
            if (accept('*')) {
                append_factor(factors, unary());
            } else if (accept('/')) {
                const std::size_t at = pos_;
                Tree d = unary();
                if (d->kind == NodeKind::number) {
                    if (d->value == 0) throw ParseError("division by zero", at);
                    mpq_class inv = 1 / d->value;
                    if (factors.size() == 1 && factors.front()->kind == NodeKind::number) {
                        factors.front() = tree::number(factors.front()->value * inv);
                    } else {
                        factors.push_back(tree::number(inv));
                    }
                } else if (d->kind == NodeKind::power) {
                    factors.push_back(tree::power(d->children.front(), -d->exponent));
                } else {
                    factors.push_back(tree::power(d, -1));
                }
            } else {
                break;
            }
        }
        return factors.size() == 1 ? factors.front() : tree::product(std::move(factors));
    }

    Tree unary() {
        if (accept('-')) return negate(unary());
        if (accept('+')) return unary();
        return power();
    }

    Tree power() {
        Tree base = atom();
        if (!accept('^')) return base;
        const bool paren = accept('(');
        int sign = 1;
        if (accept('-')) {
            sign = -1;
        } else {
            accept('+');
        }
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
        if (start == pos_) fail("expected an integer exponent");
        if (pos_ - start > 6) throw ParseError("exponent too large", start);
        const int e = sign * std::stoi(std::string(text_.substr(start, pos_ - start)));
        if (paren) expect(')');
        return tree::power(base, e);
    }

    Tree atom() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Tree t = expression();
            expect(')');
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
            return tree::number(mpq_class(std::string(text_.substr(start, pos_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) != 0) return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Tree identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '_')) {
            ++pos_;
        }
        std::string name(text_.substr(start, pos_ - start));
        int primes = 0;
        while (pos_ < text_.size() && text_[pos_] == '\'') {
            ++primes;
            ++pos_;
        }
        skip_space();
        const bool call = pos_ < text_.size() && text_[pos_] == '(';
        if (primes > 0 && !call) fail("expected '(' after derivative marks");
        if (call) {
            ++pos_;
            Tree arg = expression();
            expect(')');
            if (primes == 0 && name == "sqrt") return tree::sqrt(arg);
            if (primes == 0 && name == "ln") return tree::log(arg);
            if (!ctx_.is_function(name)) {
                pending_.emplace_back(name, start);
                return tree::function(name, primes, arg);
            }
            return tree::function(name, primes, arg);
        }
        if (name == "sqrt" || name == "ln" || ctx_.is_function(name)) {
            throw ParseError("function '" + name + "' needs an argument", pos_);
        }
        if (auto jet = ctx_.decode_jet(name)) return tree::symbol(ctx_.jet_name(*jet));
        if (!ctx_.declares(name)) pending_.emplace_back(name, start);
        return tree::symbol(name);
    }

    std::string_view text_;
    const Context& ctx_;
    std::size_t pos_ = 0;
    std::vector<std::pair<std::string, std::size_t>> pending_;
};

}  // namespace

Tree parse(std::string_view text, const Context& ctx) { return Parser(text, ctx).run(); }

Expr normalize(const Tree& t) {
    switch (t->kind) {
        case NodeKind::number:
            return Expr(t->value);
        case NodeKind::symbol:
            return Expr::symbol(t->name);
        case NodeKind::sum: {
            Expr out;
            for (const auto& c : t->children) out += normalize(c);
            return out;
        }
        case NodeKind::product: {
            Expr out(1);
            for (const auto& c : t->children) out *= normalize(c);
            return out;
        }
        case NodeKind::power:
            return normalize(t->children.front()).pow(t->exponent);
        case NodeKind::sqrt:
            return Expr::sqrt(normalize(t->children.front()));
        case NodeKind::log:
            return Expr::log(normalize(t->children.front()));
        case NodeKind::function:
            return Expr::function(t->name, t->order, normalize(t->children.front()));
    }
    return {};
}

namespace {

int precedence(const Tree& t) {
    switch (t->kind) {
        case NodeKind::sum:
            return 1;
        case NodeKind::product:
            return 2;
        case NodeKind::number:
            return (t->value < 0 || t->value.get_den() != 1) ? 2 : 4;
        case NodeKind::power:
            return 3;
        default:
            return 4;
    }
}

std::string wrap(const Tree& t, int required) {
    std::string s = render(t);
    return precedence(t) < required ? "(" + s + ")" : s;
}

}  // namespace

std::string render(const Tree& t) {
    switch (t->kind) {
        case NodeKind::number:
            return t->value.get_str();
        case NodeKind::symbol:
            return t->name;
        case NodeKind::sum: {
            std::string s;
            for (std::size_t i = 0; i < t->children.size(); ++i) {
                std::string c = wrap(t->children[i], 2);
                if (i == 0) {
                    s = c;
                } else if (c[0] == '-') {
                    s += " - " + c.substr(1);
                } else {
                    s += " + " + c;
                }
            }
            return s;
        }
        case NodeKind::product: {
            std::string s;
            for (std::size_t i = 0; i < t->children.size(); ++i) {
                const Tree& c = t->children[i];
                if (i == 0 && c->kind == NodeKind::number) {
                    if (c->value == -1 && t->children.size() > 1) {
                        s = "-";
                        continue;
                    }
                    s = c->value.get_str();
                    continue;
                }
                if (!s.empty() && s != "-") s += "*";
                s += wrap(c, 3);
            }
            return s;
        }
        case NodeKind::power: {
            std::string base = wrap(t->children.front(), 4);
            if (t->exponent < 0) return base + "^(" + std::to_string(t->exponent) + ")";
            return base + "^" + std::to_string(t->exponent);
        }
        case NodeKind::sqrt:
            return "sqrt(" + render(t->children.front()) + ")";
        case NodeKind::log:
            return "ln(" + render(t->children.front()) + ")";
        case NodeKind::function:
            return t->name + std::string(static_cast<std::size_t>(t->order), '\'') + "(" +
                   render(t->children.front()) + ")";
    }
    return {};
}

mpq_class evaluate(const Tree& t, const std::map<std::string, mpq_class>& symbols) {
    switch (t->kind) {
        case NodeKind::number:
            return t->value;
        case NodeKind::symbol: {
            auto it = symbols.find(t->name);
            if (it == symbols.end()) throw Error("evaluate: no value for symbol '" + t->name + "'");
            return it->second;
        }
        case NodeKind::sum: {
            mpq_class s = 0;
            for (const auto& c : t->children) s += evaluate(c, symbols);
            return s;
        }
        case NodeKind::product: {
            mpq_class p = 1;
            for (const auto& c : t->children) p *= evaluate(c, symbols);
            return p;
        }
        case NodeKind::power: {
            const mpq_class b = evaluate(t->children.front(), symbols);
            if (b == 0 && t->exponent < 0) throw DivisionByZeroError("evaluate: zero to a negative power");
            mpq_class p = 1;
            for (int i = 0; i < std::abs(t->exponent); ++i) p *= b;
            return t->exponent < 0 ? mpq_class(1 / p) : p;
        }
        case NodeKind::sqrt: {
            const mpq_class a = evaluate(t->children.front(), symbols);
            if (a < 0 || mpz_perfect_square_p(a.get_num_mpz_t()) == 0 ||
                mpz_perfect_square_p(a.get_den_mpz_t()) == 0) {
                throw Error("evaluate: square root of " + a.get_str() + " is not rational");
            }
            mpz_class n;
            mpz_class d;
            mpz_sqrt(n.get_mpz_t(), a.get_num_mpz_t());
            mpz_sqrt(d.get_mpz_t(), a.get_den_mpz_t());
            return mpq_class(n, d);
        }
        case NodeKind::log:
        case NodeKind::function: {
            const std::string key = render(normalize(t));
            auto it = symbols.find(key);
            if (it == symbols.end()) throw Error("evaluate: no value for atom '" + key + "'");
            return it->second;
        }
    }
    return 0;
}

}  // namespace pencil_forge
