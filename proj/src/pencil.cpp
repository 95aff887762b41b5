#include "pencil_forge/pencil.hpp"

#include "pencil_forge/errors.hpp"

namespace pencil_forge {

Var Pencil::lambda() { return SymbolTable::instance().plain("lambda"); }

Pencil::Pencil(Metric g, Metric h) : g_(std::move(g)), h_(std::move(h)) {
    if (g_.dim() != h_.dim()) throw ShapeError("pencil metrics have different dimensions");
    for (const Metric* m : {&g_, &h_})
        for (const auto& row : m->entries())
            for (const auto& e : row)
                if (depends_on(e, lambda())) throw Error("pencil parameter lambda already occurs in a metric");
}

Metric Pencil::combined() const {
    Metric m(add(g_.entries(), scale(h_.entries(), Expr::symbol(lambda()))), g_.coords());
    if (is_zero(m.determinant())) throw DegenerateMetricError("pencil g + lambda*h is degenerate");
    return m;
}

namespace {

struct PencilData {
    Connection g;
    Connection h;
    Connection combined;
    Metric combined_metric;
};

PencilData connections(const Pencil& p) {
    PencilData d;
    d.combined_metric = p.combined();
    d.g = levi_civita(p.first());
    d.h = levi_civita(p.second());
    d.combined = levi_civita(d.combined_metric);
    return d;
}

Verdict affine_symbols(const PencilData& d) {
    const std::size_t n = d.combined_metric.dim();
    const Expr lambda = Expr::symbol(Pencil::lambda());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Expr diff = d.combined.contravariant(i, j, k) - d.g.contravariant(i, j, k) -
                            lambda * d.h.contravariant(i, j, k);
                if (!is_zero(diff)) return Verdict::fail(index_label("Gamma_lambda", {i, j}, {k}) + " - affine = " + render(diff));
            }
    return Verdict::pass();
}

}  // namespace

Verdict almost_compatible(const Metric& g, const Metric& h) { return affine_symbols(connections(Pencil(g, h))); }

Verdict compatible(const Metric& g, const Metric& h) {
    Pencil p(g, h);
    PencilData d = connections(p);
    Verdict v = affine_symbols(d);
    if (!v) return v;
    const Curvature rg = riemann(p.first(), d.g);
    const Curvature rh = riemann(p.second(), d.h);
    const Curvature rl = riemann(d.combined_metric, d.combined);
    const Expr lambda = Expr::symbol(Pencil::lambda());
    const std::size_t n = g.dim();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = k + 1; l < n; ++l) {
                    Expr diff = rl.raised(i, j, k, l) - rg.raised(i, j, k, l) - lambda * rh.raised(i, j, k, l);
                    if (!is_zero(diff))
                        return Verdict::fail(index_label("R_lambda", {i, j}, {k, l}) + " - split = " + render(diff));
                }
    return Verdict::pass();
}

Report pair_check(const ConstantOp& a, const NonlocalIsometryOp& b) {
    Report r;
    const Metric eta = a.metric(b.g.coords());
    r.add("compatible", compatible(eta, b.g));
    r.add("killing_eta", killing_check(eta, b.f));
    r.add("killing_g", killing_check(b.g, b.f));
    return r;
}

}  // namespace pencil_forge
