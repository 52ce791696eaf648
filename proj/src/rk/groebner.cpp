#include "groebner.hpp"

#include <algorithm>
#include <set>

namespace rk {

bool Ideal::is_zero_ideal() const {
    for (auto& g : gens)
        if (!g.is_zero()) return false;
    return true;
}

Ideal make_ideal(const Ctx& ctx, std::vector<Polynomial> gens) {
    return Ideal(ctx, std::move(gens));
}

Ideal make_ideal(const Ctx& ctx, const std::vector<std::string>& texts) {
    std::vector<Polynomial> gens;
    gens.reserve(texts.size());
    for (auto& t : texts) gens.push_back(parse_poly(t, ctx));
    return Ideal(ctx, std::move(gens));
}

DivisionResult reduce(const Polynomial& f, const std::vector<Polynomial>& G,
                      const MonomialOrder& order) {
    if (!(order == f.ctx()->order))
        throw ContextMismatch("division order must match the ring order");
    const auto& field = f.ctx()->field;
    DivisionResult res;
    res.quotients.assign(G.size(), Polynomial::zero(f.ctx()));
    res.remainder = Polynomial::zero(f.ctx());
    Polynomial p = f;
    while (!p.is_zero()) {
        const Term& lt = p.leading();
        bool divided = false;
        for (size_t i = 0; i < G.size(); ++i) {
            if (G[i].is_zero()) continue;
            const Term& lg = G[i].leading();
            if (mono_divides(lg.m, lt.m)) {
                Monomial q = mono_div(lt.m, lg.m);
                mpq_class c = field.div(lt.c, lg.c);
                p = p - G[i].times_term(q, c);
                res.quotients[i] =
                    res.quotients[i] + Polynomial::monomial(f.ctx(), q, c);
                divided = true;
                break;
            }
        }
        if (!divided) {
            res.remainder = res.remainder + Polynomial::monomial(f.ctx(), lt.m, lt.c);
            p = p - Polynomial::monomial(f.ctx(), lt.m, lt.c);
        }
    }
    return res;
}

Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& G,
                       const MonomialOrder& order) {
    return reduce(f, G, order).remainder;
}

Polynomial s_polynomial(const Polynomial& f, const Polynomial& g,
                        const MonomialOrder& order) {
    if (f.is_zero() || g.is_zero()) throw Error("S-polynomial of zero polynomial");
    if (!(order == f.ctx()->order))
        throw ContextMismatch("S-polynomial order must match the ring order");
    const auto& field = f.ctx()->field;
    const Term& lf = f.leading();
    const Term& lg = g.leading();
    Monomial l = mono_lcm(lf.m, lg.m);
    return f.times_term(mono_div(l, lf.m), field.inv(lf.c)) -
           g.times_term(mono_div(l, lg.m), field.inv(lg.c));
}

namespace {

struct PairKey {
    int deg;
    int i, j;
    bool operator<(const PairKey& o) const {
        if (deg != o.deg) return deg < o.deg;
        if (i != o.i) return i < o.i;
        return j < o.j;
    }
    bool operator==(const PairKey&) const = default;
};

std::vector<Polynomial> interreduce(std::vector<Polynomial> G, const MonomialOrder& ord) {
    // Minimalize: drop elements whose lm is divisible by another's lm.
    std::sort(G.begin(), G.end(), [&](const Polynomial& a, const Polynomial& b) {
        return mono_cmp(a.leading().m, b.leading().m, ord) < 0;
    });
    std::vector<Polynomial> kept;
    for (auto& g : G) {
        bool redundant = false;
        for (auto& h : kept)
            if (mono_divides(h.leading().m, g.leading().m)) { redundant = true; break; }
        if (!redundant) kept.push_back(g);
    }
    // Tail-reduce each element against the others.
    for (size_t i = 0; i < kept.size(); ++i) {
        std::vector<Polynomial> others;
        others.reserve(kept.size() - 1);
        for (size_t j = 0; j < kept.size(); ++j)
            if (j != i) others.push_back(kept[j]);
        kept[i] = normal_form(kept[i], others, ord).monic();
    }
    std::sort(kept.begin(), kept.end(), [&](const Polynomial& a, const Polynomial& b) {
        return mono_cmp(a.leading().m, b.leading().m, ord) > 0;
    });
    return kept;
}

// Sound for arbitrary generating sets (unlike interreduce, which may only
// minimalize a completed basis): each element is replaced by its full normal
// form against the others until stable.
std::vector<Polynomial> autoreduce(std::vector<Polynomial> G, const MonomialOrder& ord) {
    for (auto& g : G) g = g.monic();
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t i = 0; i < G.size(); ++i) {
            std::vector<Polynomial> others;
            others.reserve(G.size() - 1);
            for (size_t j = 0; j < G.size(); ++j)
                if (j != i) others.push_back(G[j]);
            if (others.empty()) break;
            Polynomial r = normal_form(G[i], others, ord);
            if (r.is_zero()) {
                G.erase(G.begin() + i);
                --i;
                changed = true;
            } else if (r.monic() != G[i]) {
                G[i] = r.monic();
                changed = true;
            }
        }
    }
    std::sort(G.begin(), G.end(), [&](const Polynomial& a, const Polynomial& b) {
        return mono_cmp(a.leading().m, b.leading().m, ord) > 0;
    });
    return G;
}

GroebnerBasis run_buchberger(const std::vector<Polynomial>& gens, bool use_criteria,
                             bool parallel) {
    Ctx ctx;
    std::vector<Polynomial> G;
    for (auto& g : gens) {
        if (g.is_zero()) continue;
        if (!ctx) ctx = g.ctx();
        G.push_back(g);
    }
    if (!ctx) throw ValidationError("Groebner basis of the zero list");
    const MonomialOrder ord = ctx->order;

    G = autoreduce(std::move(G), ord);
    if (G.empty()) throw ValidationError("Groebner basis of the zero list");

    std::set<PairKey> pending;
    auto add_pairs = [&](int j) {
        for (int i = 0; i < j; ++i)
            pending.insert({mono_lcm(G[i].leading().m, G[j].leading().m).deg, i, j});
    };
    for (int j = 1; j < (int)G.size(); ++j) add_pairs(j);

    auto chain_skippable = [&](const PairKey& p) {
        const Monomial l = mono_lcm(G[p.i].leading().m, G[p.j].leading().m);
        for (int k = 0; k < (int)G.size(); ++k) {
            if (k == p.i || k == p.j) continue;
            if (!mono_divides(G[k].leading().m, l)) continue;
            PairKey ik{mono_lcm(G[p.i].leading().m, G[k].leading().m).deg,
                       std::min(p.i, k), std::max(p.i, k)};
            PairKey jk{mono_lcm(G[p.j].leading().m, G[k].leading().m).deg,
                       std::min(p.j, k), std::max(p.j, k)};
            if (!pending.count(ik) && !pending.count(jk)) return true;
        }
        return false;
    };

    while (!pending.empty()) {
        // Normal strategy: take the whole batch of minimal lcm degree.
        int dmin = pending.begin()->deg;
        std::vector<PairKey> batch;
        for (auto it = pending.begin(); it != pending.end() && it->deg == dmin; ++it)
            batch.push_back(*it);

        std::vector<PairKey> work;
        for (auto& p : batch) {
            pending.erase(p);
            if (use_criteria) {
                if (mono_coprime(G[p.i].leading().m, G[p.j].leading().m)) continue;
                if (chain_skippable(p)) continue;
            }
            work.push_back(p);
        }

        std::vector<Polynomial> rems(work.size(), Polynomial::zero(ctx));
        if (parallel) {
#pragma omp parallel for schedule(dynamic)
            for (long idx = 0; idx < (long)work.size(); ++idx)
                rems[idx] = normal_form(
                    s_polynomial(G[work[idx].i], G[work[idx].j], ord), G, ord);
        } else {
            for (size_t idx = 0; idx < work.size(); ++idx)
                rems[idx] = normal_form(
                    s_polynomial(G[work[idx].i], G[work[idx].j], ord), G, ord);
        }

        // Deterministic merge: survivors sorted by leading monomial, then
        // re-reduced against additions from the same batch.
        std::vector<size_t> idxs;
        for (size_t k = 0; k < rems.size(); ++k)
            if (!rems[k].is_zero()) idxs.push_back(k);
        std::sort(idxs.begin(), idxs.end(), [&](size_t a, size_t b) {
            int c = mono_cmp(rems[a].leading().m, rems[b].leading().m, ord);
            if (c != 0) return c < 0;
            return work[a] < work[b];
        });
        for (size_t k : idxs) {
            Polynomial r = normal_form(rems[k], G, ord);
            if (r.is_zero()) continue;
            G.push_back(r.monic());
            add_pairs((int)G.size() - 1);
        }
    }

    GroebnerBasis out;
    out.order = ord;
    out.elements = interreduce(std::move(G), ord);
    return out;
}

} // namespace

GroebnerBasis buchberger(const std::vector<Polynomial>& gens, BuchbergerOptions opts) {
#ifdef _OPENMP
    bool par = opts.parallel;
#else
    bool par = false;
#endif
    return run_buchberger(gens, opts.use_criteria, par);
}

GroebnerBasis buchberger_reference(const std::vector<Polynomial>& gens) {
    return run_buchberger(gens, false, false);
}

const GroebnerBasis& gb_of(const Ideal& I) {
    if (!I.cached_gb) I.cached_gb = buchberger(I.gens);
    return *I.cached_gb;
}

bool ideal_member(const Polynomial& f, const Ideal& I) {
    if (f.is_zero()) return true;
    if (I.is_zero_ideal()) return false;
    const auto& G = gb_of(I);
    return normal_form(f, G.elements, G.order).is_zero();
}

bool ideal_equal(const Ideal& I, const Ideal& J) {
    if (I.is_zero_ideal() && J.is_zero_ideal()) return true;
    if (I.is_zero_ideal() || J.is_zero_ideal()) return false;
    return gb_of(I).elements == gb_of(J).elements;
}

bool is_unit_ideal(const Ideal& I) {
    if (I.is_zero_ideal()) return false;
    for (auto& g : gb_of(I).elements)
        if (g.is_constant() && !g.is_zero()) return true;
    return false;
}

Ideal eliminate(const Ideal& I, const std::vector<std::string>& drop_vars) {
    const Ctx& ctx = I.ctx;
    std::vector<std::string> keep;
    for (auto& v : ctx->vars) {
        bool dropped = std::find(drop_vars.begin(), drop_vars.end(), v) != drop_vars.end();
        if (!dropped) keep.push_back(v);
    }
    for (auto& v : drop_vars)
        if (ctx->var(v) < 0) throw ValidationError("drop variable not in ring: " + v);
    std::vector<std::string> vars = keep;
    vars.insert(vars.end(), drop_vars.begin(), drop_vars.end());
    MonomialOrder ord{ctx->order.kind, (int)drop_vars.size()};
    Ctx elim_ctx = make_ring(vars, ctx->field, ord, 0);

    std::vector<Polynomial> mapped;
    for (auto& g : I.gens)
        if (!g.is_zero()) mapped.push_back(map_poly(g, elim_ctx));
    if (mapped.empty()) return Ideal(ctx, {});
    GroebnerBasis G = buchberger(mapped);

    int nkeep = (int)keep.size();
    std::vector<Polynomial> out;
    for (auto& g : G.elements) {
        bool pure = true;
        for (auto& t : g.terms())
            for (int i = nkeep; i < elim_ctx->nvars() && pure; ++i)
                if (t.m.e[i] != 0) pure = false;
        if (pure) out.push_back(map_poly(g, ctx));
    }
    return Ideal(ctx, std::move(out));
}

bool gb_self_check(const GroebnerBasis& G) {
    for (size_t i = 0; i < G.elements.size(); ++i)
        for (size_t j = i + 1; j < G.elements.size(); ++j) {
            Polynomial s = s_polynomial(G.elements[i], G.elements[j], G.order);
            if (!s.is_zero() && !normal_form(s, G.elements, G.order).is_zero())
                return false;
        }
    return true;
}

} // namespace rk
