#include "ring.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rk {

std::string MonomialOrder::describe() const {
    std::string s = kind == OrderKind::degrevlex ? "degrevlex" : "lex";
    if (elim_block > 0) s += "+elim(" + std::to_string(elim_block) + ")";
    return s;
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (size_t i = 0; i < r.e.size(); ++i) r.e[i] += b.e[i];
    r.deg += b.deg;
    return r;
}

bool mono_divides(const Monomial& a, const Monomial& b) {
    if (a.deg > b.deg) return false;
    for (size_t i = 0; i < a.e.size(); ++i)
        if (a.e[i] > b.e[i]) return false;
    return true;
}

Monomial mono_div(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    for (size_t i = 0; i < r.e.size(); ++i) r.e[i] -= b.e[i];
    r.deg -= b.deg;
    return r;
}

Monomial mono_lcm(const Monomial& a, const Monomial& b) {
    Monomial r = a;
    r.deg = 0;
    for (size_t i = 0; i < r.e.size(); ++i) {
        r.e[i] = std::max(a.e[i], b.e[i]);
        r.deg += r.e[i];
    }
    return r;
}

bool mono_coprime(const Monomial& a, const Monomial& b) {
    for (size_t i = 0; i < a.e.size(); ++i)
        if (a.e[i] > 0 && b.e[i] > 0) return false;
    return true;
}

namespace {

// Compare restricted to the variable range [lo, hi).
int cmp_range(const Monomial& a, const Monomial& b, OrderKind kind, int lo, int hi) {
    if (kind == OrderKind::degrevlex) {
        int da = 0, db = 0;
        for (int i = lo; i < hi; ++i) { da += a.e[i]; db += b.e[i]; }
        if (da != db) return da < db ? -1 : 1;
        // Tie: scan upward from the smallest variable; the monomial with
        // the larger exponent there is the smaller one.
        for (int i = lo; i < hi; ++i)
            if (a.e[i] != b.e[i]) return a.e[i] > b.e[i] ? -1 : 1;
        return 0;
    }
    // lex: largest variable first.
    for (int i = hi - 1; i >= lo; --i)
        if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? -1 : 1;
    return 0;
}

} // namespace

int mono_cmp(const Monomial& a, const Monomial& b, const MonomialOrder& ord) {
    int nv = (int)a.e.size();
    if (ord.elim_block > 0) {
        int lo = nv - ord.elim_block;
        if (int c = cmp_range(a, b, OrderKind::degrevlex, lo, nv)) return c;
        return cmp_range(a, b, ord.kind, 0, lo);
    }
    return cmp_range(a, b, ord.kind, 0, nv);
}

int RingContext::var(const std::string& name) const {
    for (int i = 0; i < (int)vars.size(); ++i)
        if (vars[i] == name) return i;
    return -1;
}

int RingContext::var_checked(const std::string& name) const {
    int i = var(name);
    if (i < 0) throw ParseError("unknown variable: " + name);
    return i;
}

Ctx make_pipeline_ring(int n, Field field, MonomialOrder order) {
    if (n <= 0) throw ValidationError("pipeline ring needs n > 0");
    if (field.p != 0 && field.p <= (unsigned long)n)
        throw ValidationError("prime field characteristic must exceed n");
    std::vector<std::string> vars = {"x", "y", "z"};
    for (int i = 0; i < n; ++i) vars.push_back("w" + std::to_string(i));
    return make_ring(std::move(vars), field, order, n);
}

Ctx make_ring(std::vector<std::string> vars, Field field, MonomialOrder order, int n) {
    auto ctx = std::make_shared<RingContext>();
    ctx->vars = std::move(vars);
    ctx->field = field;
    ctx->order = order;
    ctx->n = n;
    return ctx;
}

Ctx with_order(const Ctx& ctx, MonomialOrder order) {
    return make_ring(ctx->vars, ctx->field, order, ctx->n);
}

Ctx extend_top(const Ctx& ctx, const std::vector<std::string>& extra) {
    std::vector<std::string> vars = ctx->vars;
    for (auto& v : extra) {
        if (ctx->var(v) >= 0) throw ValidationError("variable already present: " + v);
        vars.push_back(v);
    }
    MonomialOrder ord = ctx->order;
    ord.elim_block = (int)extra.size();
    return make_ring(std::move(vars), ctx->field, ord, 0);
}

Polynomial::Polynomial(Ctx ctx, std::vector<Term> terms) : ctx_(std::move(ctx)) {
    std::map<Monomial, mpq_class, std::function<bool(const Monomial&, const Monomial&)>> acc(
        [this](const Monomial& a, const Monomial& b) {
            return mono_cmp(a, b, ctx_->order) > 0;
        });
    for (auto& t : terms) {
        if ((int)t.m.e.size() != ctx_->nvars())
            throw ContextMismatch("monomial arity mismatch");
        auto c = ctx_->field.normalize(t.c);
        if (c == 0) continue;
        auto [it, fresh] = acc.try_emplace(t.m, c);
        if (!fresh) {
            it->second = ctx_->field.add(it->second, c);
            if (it->second == 0) acc.erase(it);
        }
    }
    t_.reserve(acc.size());
    for (auto& [m, c] : acc) t_.push_back({m, c});
}

Polynomial Polynomial::constant(const Ctx& ctx, const mpq_class& c) {
    return Polynomial(ctx, {Term{Monomial::one(ctx->nvars()), c}});
}

Polynomial Polynomial::variable(const Ctx& ctx, int idx) {
    Monomial m = Monomial::one(ctx->nvars());
    m.e[idx] = 1;
    m.deg = 1;
    return Polynomial(ctx, {Term{std::move(m), 1}});
}

Polynomial Polynomial::monomial(const Ctx& ctx, Monomial m, mpq_class c) {
    return Polynomial(ctx, {Term{std::move(m), std::move(c)}});
}

int Polynomial::total_degree() const {
    int d = -1;
    for (auto& t : t_) d = std::max(d, t.m.deg);
    return d;
}

const Term& Polynomial::leading() const {
    if (t_.empty()) throw Error("leading term of zero polynomial");
    return t_.front();
}

void Polynomial::check_ctx(const Polynomial& o) const {
    if (ctx_ != o.ctx_) {
        if (!ctx_ || !o.ctx_ || ctx_->vars != o.ctx_->vars ||
            !(ctx_->field == o.ctx_->field) || !(ctx_->order == o.ctx_->order))
            throw ContextMismatch("operands belong to different rings");
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial r(ctx_);
    r.t_.reserve(t_.size());
    for (auto& t : t_) r.t_.push_back({t.m, ctx_->field.neg(t.c)});
    return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    check_ctx(o);
    Polynomial r(ctx_);
    r.t_.reserve(t_.size() + o.t_.size());
    size_t i = 0, j = 0;
    const auto& ord = ctx_->order;
    while (i < t_.size() && j < o.t_.size()) {
        int c = mono_cmp(t_[i].m, o.t_[j].m, ord);
        if (c > 0) r.t_.push_back(t_[i++]);
        else if (c < 0) r.t_.push_back(o.t_[j++]);
        else {
            mpq_class s = ctx_->field.add(t_[i].c, o.t_[j].c);
            if (s != 0) r.t_.push_back({t_[i].m, std::move(s)});
            ++i; ++j;
        }
    }
    for (; i < t_.size(); ++i) r.t_.push_back(t_[i]);
    for (; j < o.t_.size(); ++j) r.t_.push_back(o.t_[j]);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::times_term(const Monomial& m, const mpq_class& c) const {
    Polynomial r(ctx_);
    if (c == 0) return r;
    mpq_class cc = ctx_->field.normalize(c);
    r.t_.reserve(t_.size());
    for (auto& t : t_) r.t_.push_back({mono_mul(t.m, m), ctx_->field.mul(t.c, cc)});
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    check_ctx(o);
    std::map<Monomial, mpq_class, std::function<bool(const Monomial&, const Monomial&)>> acc(
        [this](const Monomial& a, const Monomial& b) {
            return mono_cmp(a, b, ctx_->order) > 0;
        });
    for (auto& a : t_)
        for (auto& b : o.t_) {
            Monomial m = mono_mul(a.m, b.m);
            mpq_class c = ctx_->field.mul(a.c, b.c);
            auto [it, fresh] = acc.try_emplace(std::move(m), c);
            if (!fresh) {
                it->second = ctx_->field.add(it->second, c);
                if (it->second == 0) acc.erase(it);
            }
        }
    Polynomial r(ctx_);
    r.t_.reserve(acc.size());
    for (auto& [m, c] : acc) r.t_.push_back({m, c});
    return r;
}

bool Polynomial::operator==(const Polynomial& o) const {
    if (t_.size() != o.t_.size()) return false;
    for (size_t i = 0; i < t_.size(); ++i)
        if (t_[i].m != o.t_[i].m || t_[i].c != o.t_[i].c) return false;
    return true;
}

Polynomial Polynomial::scaled(const mpq_class& c) const {
    return times_term(Monomial::one(ctx_->nvars()), c);
}

Polynomial Polynomial::monic() const {
    if (is_zero()) return *this;
    return scaled(ctx_->field.inv(t_.front().c));
}

Term leading_term(const Polynomial& f, const MonomialOrder& order) {
    if (f.is_zero()) throw Error("leading term of zero polynomial");
    if (order == f.ctx()->order) return f.terms().front();
    const Term* best = &f.terms().front();
    for (auto& t : f.terms())
        if (mono_cmp(t.m, best->m, order) > 0) best = &t;
    return *best;
}

Bidegree bidegree_of(const Polynomial& f) {
    if (f.is_zero()) throw ValidationError("bidegree of zero polynomial");
    const auto& ctx = *f.ctx();
    if (ctx.n <= 0) throw ValidationError("bidegree needs a pipeline ring");
    std::optional<Bidegree> bd;
    for (auto& t : f.terms()) {
        int dx = t.m.e[0] + t.m.e[1] + t.m.e[2];
        int dw = t.m.deg - dx;
        Bidegree cur{dx, dw};
        if (!bd) bd = cur;
        else if (!(*bd == cur)) throw ValidationError("polynomial is not bihomogeneous");
    }
    return *bd;
}

// ---------------------------------------------------------------------
// Parser: expr := ['+'|'-'] term (('+'|'-') term)* ;
//         term := factor ('*' factor)* ; factor := base ('^' nat)? ;
//         base := name | integer ['/' integer] | '(' expr ')'
// ---------------------------------------------------------------------
namespace {

struct Parser {
    const std::string& s;
    const Ctx& ctx;
    size_t pos = 0;

    void skip() { while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos; }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) { ++pos; return true; }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg + " at position " + std::to_string(pos) + " in \"" + s + "\"");
    }

    Polynomial expr() {
        skip();
        bool neg = false;
        if (eat('-')) neg = true; else eat('+');
        Polynomial acc = term();
        if (neg) acc = -acc;
        for (;;) {
            skip();
            if (eat('+')) acc = acc + term();
            else if (eat('-')) acc = acc - term();
            else break;
        }
        return acc;
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (eat('*')) acc = acc * factor();
        return acc;
    }

    Polynomial factor() {
        Polynomial b = base();
        if (eat('^')) {
            skip();
            size_t start = pos;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
            if (pos == start) fail("expected exponent");
            int e = std::stoi(s.substr(start, pos - start));
            Polynomial r = Polynomial::constant(ctx, 1);
            for (int i = 0; i < e; ++i) r = r * b;
            return r;
        }
        return b;
    }

    Polynomial base() {
        skip();
        if (pos >= s.size()) fail("unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            Polynomial e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit((unsigned char)c)) {
            size_t start = pos;
            while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
            mpz_class num(s.substr(start, pos - start));
            mpz_class den(1);
            size_t save = pos;
            if (eat('/')) {
                skip();
                size_t dstart = pos;
                while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
                if (pos == dstart) { pos = save; }
                else {
                    den = mpz_class(s.substr(dstart, pos - dstart));
                    if (den == 0) fail("zero denominator");
                }
            }
            mpq_class q(num, den);
            q.canonicalize();
            return Polynomial::constant(ctx, q);
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            size_t start = pos;
            while (pos < s.size() &&
                   (std::isalnum((unsigned char)s[pos]) || s[pos] == '_'))
                ++pos;
            std::string name = s.substr(start, pos - start);
            int idx = ctx->var(name);
            if (idx < 0) fail("unknown variable '" + name + "'");
            return Polynomial::variable(ctx, idx);
        }
        fail("unexpected character");
    }
};

} // namespace

Polynomial parse_poly(const std::string& text, const Ctx& ctx) {
    Parser p{text, ctx};
    Polynomial r = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    return r;
}

std::string Polynomial::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& t : t_) {
        mpq_class c = t.c;
        if (first) {
            if (c < 0) { os << "-"; c = -c; }
        } else {
            if (c < 0) { os << " - "; c = -c; }
            else os << " + ";
        }
        bool coeff_shown = (c != 1) || t.m.is_one();
        if (coeff_shown) os << c.get_str();
        bool need_star = coeff_shown;
        for (int i = (int)t.m.e.size() - 1; i >= 0; --i) {
            if (t.m.e[i] == 0) continue;
            if (need_star) os << "*";
            os << ctx_->vars[i];
            if (t.m.e[i] > 1) os << "^" << t.m.e[i];
            need_star = true;
        }
        first = false;
    }
    return os.str();
}

Polynomial map_poly(const Polynomial& f, const Ctx& to) {
    const auto& from = *f.ctx();
    std::vector<int> remap(from.nvars());
    for (int i = 0; i < from.nvars(); ++i) remap[i] = to->var(from.vars[i]);
    std::vector<Term> terms;
    terms.reserve(f.terms().size());
    for (auto& t : f.terms()) {
        Monomial m = Monomial::one(to->nvars());
        for (int i = 0; i < from.nvars(); ++i) {
            if (t.m.e[i] == 0) continue;
            if (remap[i] < 0)
                throw ContextMismatch("variable " + from.vars[i] + " absent in target ring");
            m.e[remap[i]] = t.m.e[i];
        }
        m.deg = t.m.deg;
        terms.push_back({std::move(m), t.c});
    }
    return Polynomial(to, std::move(terms));
}

PolyMatrix PolyMatrix::zero(const Ctx& ctx, int rows, int cols) {
    PolyMatrix m;
    m.rows = rows;
    m.cols = cols;
    m.ctx = ctx;
    m.entries.assign((size_t)rows * cols, Polynomial::zero(ctx));
    return m;
}

namespace {

void index_subsets(int n, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(k);
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) { out.push_back(cur); return; }
        for (int i = start; i <= n - (k - depth); ++i) {
            cur[depth] = i;
            rec(i + 1, depth + 1);
        }
    };
    if (k >= 0 && k <= n) rec(0, 0);
}

// Determinant of the submatrix (rows, cols) by Laplace expansion along the
// first remaining column, with memoization keyed on the index masks.
Polynomial subdet(const PolyMatrix& M, uint64_t rowmask, uint64_t colmask,
                  std::map<std::pair<uint64_t, uint64_t>, Polynomial>& memo) {
    if (rowmask == 0) return Polynomial::constant(M.ctx, 1);
    auto key = std::make_pair(rowmask, colmask);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    int c0 = __builtin_ctzll(colmask);
    uint64_t rest_cols = colmask & (colmask - 1);
    Polynomial det = Polynomial::zero(M.ctx);
    int sign = 1;
    for (uint64_t rm = rowmask; rm; rm &= rm - 1) {
        int r = __builtin_ctzll(rm);
        const Polynomial& a = M.at(r, c0);
        if (!a.is_zero()) {
            Polynomial sub = subdet(M, rowmask & ~(1ull << r), rest_cols, memo);
            Polynomial contrib = a * sub;
            det = sign > 0 ? det + contrib : det - contrib;
        }
        sign = -sign;
    }
    memo.emplace(key, det);
    return det;
}

std::vector<Polynomial> minors_impl(const PolyMatrix& M, int k, bool parallel) {
    if (k < 0 || k > std::min(M.rows, M.cols)) throw ValidationError("minor size out of range");
    if (k == 0) return {Polynomial::constant(M.ctx, 1)};
    std::vector<std::vector<int>> rsets, csets;
    index_subsets(M.rows, k, rsets);
    index_subsets(M.cols, k, csets);
    std::vector<std::pair<uint64_t, uint64_t>> jobs;
    jobs.reserve(rsets.size() * csets.size());
    for (auto& rs : rsets)
        for (auto& cs : csets) {
            uint64_t rm = 0, cm = 0;
            for (int r : rs) rm |= 1ull << r;
            for (int c : cs) cm |= 1ull << c;
            jobs.emplace_back(rm, cm);
        }
    std::vector<Polynomial> out(jobs.size());
    if (parallel) {
#pragma omp parallel
        {
            std::map<std::pair<uint64_t, uint64_t>, Polynomial> memo;
#pragma omp for schedule(dynamic)
            for (long i = 0; i < (long)jobs.size(); ++i)
                out[i] = subdet(M, jobs[i].first, jobs[i].second, memo);
        }
    } else {
        std::map<std::pair<uint64_t, uint64_t>, Polynomial> memo;
        for (size_t i = 0; i < jobs.size(); ++i)
            out[i] = subdet(M, jobs[i].first, jobs[i].second, memo);
    }
    return out;
}

} // namespace

std::vector<Polynomial> matrix_minors(const PolyMatrix& M, int k) {
#ifdef _OPENMP
    return minors_impl(M, k, true);
#else
    return minors_impl(M, k, false);
#endif
}

std::vector<Polynomial> matrix_minors_serial(const PolyMatrix& M, int k) {
    return minors_impl(M, k, false);
}

} // namespace rk
