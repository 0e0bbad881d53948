#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "corners.hpp"

namespace salamander {

// A_n = ⊕_i A(i, n-i) with blocks ordered by increasing i; δ = δ2 + (-1)^n δ1.
template <class F>
struct TotalComplex {
    explicit TotalComplex(const F& f) : field(f) {}

    F field;
    int nmin = 0, nmax = -1;
    std::map<int, std::vector<std::pair<int, std::size_t>>> degrees;
    std::map<int, Matrix<F>> delta, delta1, delta2;  // keyed by source degree

    std::size_t dim(int n) const {
        auto it = degrees.find(n);
        if (it == degrees.end()) return 0;
        std::size_t s = 0;
        for (auto& [i, d] : it->second) s += d;
        return s;
    }
    // Offset of block i inside A_n, or npos when absent.
    std::size_t offset(int n, int i) const {
        auto it = degrees.find(n);
        if (it == degrees.end()) return npos;
        std::size_t s = 0;
        for (auto& [j, d] : it->second) {
            if (j == i) return s;
            s += d;
        }
        return npos;
    }
    const Matrix<F>& get(const std::map<int, Matrix<F>>& m, int n) const {
        auto it = m.find(n);
        if (it != m.end()) return it->second;
        auto [z, ok] = zeros_.try_emplace(n, Matrix<F>(field, dim(n + 1), dim(n)));
        return z->second;
    }
    const Matrix<F>& d(int n) const { return get(delta, n); }
    const Matrix<F>& d1(int n) const { return get(delta1, n); }
    const Matrix<F>& d2(int n) const { return get(delta2, n); }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    mutable std::map<int, Matrix<F>> zeros_;
};

template <class F>
TotalComplex<F> total_complex(const DoubleComplex<F>& c) {
    if (!validate(c).valid()) throw PreconditionUnmet("input is not a double complex");
    TotalComplex<F> t(c.field());
    auto support = c.support();
    if (support.empty()) return t;
    t.nmin = support.front().i + support.front().r;
    t.nmax = t.nmin;
    for (Position p : support) {
        t.nmin = std::min(t.nmin, p.i + p.r);
        t.nmax = std::max(t.nmax, p.i + p.r);
    }
    for (Position p : support) t.degrees[p.i + p.r].push_back({p.i, c.dim(p)});
    for (auto& [n, blocks] : t.degrees) std::sort(blocks.begin(), blocks.end());
    const F& f = c.field();
    for (int n = t.nmin - 1; n <= t.nmax; ++n) {
        Matrix<F> m1(f, t.dim(n + 1), t.dim(n)), m2(f, t.dim(n + 1), t.dim(n));
        auto it = t.degrees.find(n);
        if (it != t.degrees.end()) {
            for (auto& [i, d] : it->second) {
                Position p{i, n - i};
                std::size_t src = t.offset(n, i);
                if (std::size_t tgt = t.offset(n + 1, i + 1); tgt != t.npos) m1.set_block(tgt, src, c.dv(p));
                if (std::size_t tgt = t.offset(n + 1, i); tgt != t.npos) m2.set_block(tgt, src, c.dh(p));
            }
        }
        Matrix<F> m = n % 2 == 0 ? m2 + m1 : m2 - m1;
        t.delta1.emplace(n, m1);
        t.delta2.emplace(n, m2);
        t.delta.emplace(n, m);
    }
    for (int n = t.nmin - 1; n < t.nmax; ++n)
        if (!(t.d(n + 1) * t.d(n)).is_zero()) throw InternalCheckFailed("total differential does not square to zero");
    return t;
}

enum class TotalKind { diag, donor, receptor };

inline const char* to_string(TotalKind k) {
    switch (k) {
        case TotalKind::diag: return "diag";
        case TotalKind::donor: return "donor";
        case TotalKind::receptor: return "receptor";
    }
    return "?";
}

template <class F>
struct TotalCorner {
    int n = 0;
    TotalKind kind = TotalKind::diag;
    SubquotientPtr<F> value;
    std::string label() const {
        std::string a = "A_" + std::to_string(n);
        switch (kind) {
            case TotalKind::diag: return a + "◺";
            case TotalKind::donor: return a + "□";
            case TotalKind::receptor: return "□" + a;
        }
        return a;
    }
};

// Total objects of one complex, memoized.
template <class F>
class TotalContext {
public:
    explicit TotalContext(const DoubleComplex<F>& c) : c_(c), t_(total_complex(c)), corners_(c) {}

    const TotalComplex<F>& total() const { return t_; }
    const DoubleComplex<F>& complex() const { return c_; }

    SubquotientPtr<F> object(int n, TotalKind k) {
        auto key = std::make_pair(n, k);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        const F& f = t_.field;
        Subquotient<F> s = [&] {
            switch (k) {
                case TotalKind::diag: return Subquotient<F>(kernel(t_.d(n)), image(t_.d(n - 1)));
                case TotalKind::donor:
                    return Subquotient<F>(kernel(t_.d1(n + 1) * t_.d2(n)),
                                          subspace_sum(image(t_.d1(n - 1)), image(t_.d2(n - 1))));
                case TotalKind::receptor:
                    return Subquotient<F>(subspace_intersect(kernel(t_.d1(n)), kernel(t_.d2(n))),
                                          image(t_.d1(n - 1) * t_.d2(n - 2)));
            }
            return Subquotient<F>(Subspace<F>::zero(f, 0), Subspace<F>::zero(f, 0));
        }();
        auto v = share(std::move(s));
        cache_.emplace(key, v);
        return v;
    }
    TotalCorner<F> corner(int n, TotalKind k) { return {n, k, object(n, k)}; }

    // Total donor (receptor) equals the direct sum of the positionwise ones,
    // as subquotients of A_n.
    bool block_identity(int n, TotalKind k) {
        if (k == TotalKind::diag) return true;
        CornerKind ck = k == TotalKind::donor ? CornerKind::donor : CornerKind::receptor;
        const F& f = t_.field;
        std::size_t dn = t_.dim(n);
        Matrix<F> top(f, 0, dn), bottom(f, 0, dn);
        auto it = t_.degrees.find(n);
        std::size_t sum = 0;
        if (it != t_.degrees.end()) {
            for (auto& [i, d] : it->second) {
                auto obj = corners_.object({i, n - i}, ck);
                sum += obj->dim();
                std::size_t off = t_.offset(n, i);
                auto embed = [&](const Matrix<F>& b) {
                    Matrix<F> e(f, b.rows(), dn);
                    e.set_block(0, off, b);
                    return e;
                };
                top = vstack(top, embed(obj->top().basis()));
                bottom = vstack(bottom, embed(obj->bottom().basis()));
            }
        }
        auto tot = object(n, k);
        return tot->dim() == sum && tot->top() == Subspace<F>::span(top) && tot->bottom() == Subspace<F>::span(bottom);
    }

    SubquotientMap<F> bar(int n, int which) {
        const Matrix<F>& m = which == 1 ? t_.d1(n) : which == 2 ? t_.d2(n) : t_.d(n);
        return induced_map(m, object(n, TotalKind::donor), object(n + 1, TotalKind::receptor));
    }
    SubquotientMap<F> intramural(int n, TotalKind from, TotalKind to) {
        bool ok = (from == TotalKind::receptor && to == TotalKind::diag) || (from == TotalKind::diag && to == TotalKind::donor) ||
                  (from == TotalKind::receptor && to == TotalKind::donor);
        if (!ok) throw InvalidPair(std::string("no total intramural map ") + to_string(from) + " -> " + to_string(to));
        return induced_map(Matrix<F>::identity(t_.field, t_.dim(n)), object(n, from), object(n, to));
    }

private:
    const DoubleComplex<F>& c_;
    TotalComplex<F> t_;
    CornerContext<F> corners_;
    std::map<std::pair<int, TotalKind>, SubquotientPtr<F>> cache_;
};

template <class F>
TotalCorner<F> total_homology(const DoubleComplex<F>& c, int n) {
    TotalContext<F> ctx(c);
    return ctx.corner(n, TotalKind::diag);
}

template <class F>
TotalCorner<F> total_donor(const DoubleComplex<F>& c, int n) {
    TotalContext<F> ctx(c);
    if (!ctx.block_identity(n, TotalKind::donor)) throw InternalCheckFailed("total donor differs from the blockwise sum");
    return ctx.corner(n, TotalKind::donor);
}

template <class F>
TotalCorner<F> total_receptor(const DoubleComplex<F>& c, int n) {
    TotalContext<F> ctx(c);
    if (!ctx.block_identity(n, TotalKind::receptor)) throw InternalCheckFailed("total receptor differs from the blockwise sum");
    return ctx.corner(n, TotalKind::receptor);
}

template <class F>
struct BarDeltas {
    SubquotientMap<F> d1, d2, d;
};

template <class F>
BarDeltas<F> bar_deltas(TotalContext<F>& ctx, int n) {
    BarDeltas<F> b{ctx.bar(n, 1), ctx.bar(n, 2), ctx.bar(n, 0)};
    const F& f = ctx.total().field;
    auto sign = n % 2 == 0 ? f.one() : f.neg(f.one());
    if (!(b.d.matrix == b.d2.matrix + b.d1.matrix.scaled(sign)))
        throw InternalCheckFailed("δ̄ differs from δ̄2 + (-1)^n δ̄1");
    // composites with the intramural maps agree up to sign
    auto msign = f.neg(sign);
    auto after = ctx.intramural(n + 1, TotalKind::receptor, TotalKind::diag);
    if (!compose(b.d, after).matrix.is_zero() ||
        !(compose(b.d1, after).matrix == compose(b.d2, after).matrix.scaled(msign)))
        throw InternalCheckFailed("composites of δ̄1, δ̄2 into total homology do not agree up to sign");
    auto before = ctx.intramural(n, TotalKind::diag, TotalKind::donor);
    if (!compose(before, b.d).matrix.is_zero() ||
        !(compose(before, b.d1).matrix == compose(before, b.d2).matrix.scaled(msign)))
        throw InternalCheckFailed("composites of δ̄1, δ̄2 out of total homology do not agree up to sign");
    return b;
}

template <class F>
BarDeltas<F> bar_deltas(const DoubleComplex<F>& c, int n) {
    TotalContext<F> ctx(c);
    return bar_deltas(ctx, n);
}

// The skew complex B(i,r) = A_{i+r}, horizontal maps δ and vertical maps δ1,
// on rows -radius..radius and columns n-radius..n+radius.
template <class F>
DoubleComplex<F> skew_complex(const TotalComplex<F>& t, int n, int radius = 3) {
    DoubleComplex<F> b(t.field);
    b.set_window({-radius, radius, n - radius, n + radius});
    for (int i = -radius; i <= radius; ++i)
        for (int r = n - radius; r <= n + radius; ++r) b.set_dim({i, r}, t.dim(i + r));
    for (int i = -radius; i <= radius; ++i)
        for (int r = n - radius; r <= n + radius; ++r) {
            int m = i + r;
            if (r < n + radius) b.set_dh({i, r}, t.d(m));
            if (i < radius) b.set_dv({i, r}, t.d1(m));
        }
    b.set_window({-radius, radius, n - radius, n + radius});
    return b;
}

template <class F>
struct TotalSalamanderReport {
    SequenceReport<F> direct;
    SequenceReport<F> skew;
    bool dims_match = false;
};

template <class F>
SequenceReport<F> total_salamander_direct(TotalContext<F>& ctx, int n) {
    using T = TotalKind;
    SequenceReport<F> rep;
    rep.name = "total salamander " + std::to_string(n);
    std::vector<TotalCorner<F>> terms{ctx.corner(n - 1, T::donor), ctx.corner(n, T::diag),     ctx.corner(n, T::donor),
                                      ctx.corner(n + 1, T::receptor), ctx.corner(n + 1, T::diag), ctx.corner(n + 2, T::receptor)};
    for (auto& t : terms) rep.add_term(t.label(), t.value);
    rep.maps.push_back(compose(ctx.bar(n - 1, 1), ctx.intramural(n, T::receptor, T::diag)));
    rep.maps.push_back(ctx.intramural(n, T::diag, T::donor));
    rep.maps.push_back(ctx.bar(n, 0));
    rep.maps.push_back(ctx.intramural(n + 1, T::receptor, T::diag));
    rep.maps.push_back(compose(ctx.intramural(n + 1, T::diag, T::donor), ctx.bar(n + 1, 1)));
    rep.trace.push_back({"total", {0, n}, "δ̄1 then □A_n -> A_n◺"});
    rep.evaluate();
    return rep;
}

template <class F>
TotalSalamanderReport<F> total_salamander(TotalContext<F>& ctx, int n) {
    TotalSalamanderReport<F> out;
    out.direct = total_salamander_direct(ctx, n);
    auto b = skew_complex(ctx.total(), n);
    out.skew = salamander(b, Position{0, n}, Direction::horizontal);
    out.dims_match = out.direct.dims() == out.skew.dims() && out.direct.verdicts == out.skew.verdicts;
    return out;
}

template <class F>
TotalSalamanderReport<F> total_salamander(const DoubleComplex<F>& c, int n) {
    TotalContext<F> ctx(c);
    return total_salamander(ctx, n);
}

// Corner dimensions of the skew complex at (0,n) against the total objects.
template <class F>
bool skew_dims_match(TotalContext<F>& ctx, int n) {
    auto b = skew_complex(ctx.total(), n, 2);
    CornerContext<F> bc(b);
    Position p{0, n};
    return bc.object(p, CornerKind::horizontal)->dim() == ctx.object(n, TotalKind::diag)->dim() &&
           bc.object(p, CornerKind::donor)->dim() == ctx.object(n, TotalKind::donor)->dim() &&
           bc.object(p, CornerKind::receptor)->dim() == ctx.object(n, TotalKind::receptor)->dim();
}

template <class F>
void require_exact_columns(const DoubleComplex<F>& c) {
    if (!exactness_profile(c).cols_exact()) throw PreconditionUnmet("columns are not exact");
}

template <class F>
SequenceReport<F> total_long(TotalContext<F>& ctx) {
    require_exact_columns(ctx.complex());
    using T = TotalKind;
    const auto& t = ctx.total();
    SequenceReport<F> rep;
    rep.name = "total long";
    int lo = t.nmin - 1, hi = t.nmax + 1;
    for (int n = lo; n <= hi; ++n) {
        for (T k : {T::receptor, T::diag, T::donor}) {
            auto c = ctx.corner(n, k);
            rep.add_term(c.label(), c.value);
        }
        rep.maps.push_back(ctx.intramural(n, T::receptor, T::diag));
        rep.maps.push_back(ctx.intramural(n, T::diag, T::donor));
        if (n < hi) rep.maps.push_back(ctx.bar(n, 0));
    }
    rep.evaluate();
    return rep;
}

template <class F>
SequenceReport<F> total_long(const DoubleComplex<F>& c) {
    TotalContext<F> ctx(c);
    return total_long(ctx);
}

template <class F>
struct StaircaseColimit {
    int n = 0;
    std::vector<SubquotientMap<F>> steps;  // δ̄2 ∘ δ̄1⁻¹ along the staircase of degree n
    SubquotientPtr<F> colimit;             // the far end of the finite system
    Subquotient<F> cokernel_delta;         // Cok(δ̄: A_{n-1}□ -> □A_n)
    Subquotient<F> cokernel_system;        // Cok(δ̄1 - δ̄2)
    std::size_t homology_dim = 0;
    bool agree = false;
};

// Cokernel of f as a subquotient of the ambient space of its target.
template <class F>
Subquotient<F> cokernel_of(const SubquotientMap<F>& f) {
    const auto& t = *f.target;
    // images in the ambient space are the coordinate combinations of the target's basis
    Matrix<F> img = f.matrix.transpose() * t.coord_basis();
    return Subquotient<F>(t.top(), subspace_sum(t.bottom(), Subspace<F>::span(img)));
}

template <class F>
StaircaseColimit<F> staircase_colimit(TotalContext<F>& ctx, int n) {
    const auto& c = ctx.complex();
    require_exact_columns(c);
    CornerContext<F> cc(c);
    StaircaseColimit<F> out{n};
    // receptors □A(i, n-i) on the staircase, from the bottom end upward-right
    const Window w = c.window();
    int ibot = w.i1 + 1, itop = w.i0 - 1;
    for (int i = ibot; i > itop; --i) {
        // □A(i, n-i) ≅ A(i-1, n-i)□ via δ̄1⁻¹, then δ̄2 to □A(i-1, n-i+1)
        Position donor{i - 1, n - i};
        auto e1 = cc.extramural(donor, Direction::vertical);
        if (!is_iso(e1)) throw InternalCheckFailed("δ̄1 on the staircase is not invertible at " + donor.to_string());
        auto e2 = cc.extramural(donor, Direction::horizontal);
        out.steps.push_back(compose(invert(e1), e2));
    }
    out.colimit = out.steps.empty() ? cc.object({itop, n - itop}, CornerKind::receptor) : out.steps.back().target;
    out.cokernel_delta = cokernel_of(ctx.bar(n - 1, 0));
    auto b1 = ctx.bar(n - 1, 1), b2 = ctx.bar(n - 1, 2);
    out.cokernel_system = cokernel_of(SubquotientMap<F>{b1.source, b1.target, b1.matrix - b2.matrix});
    out.homology_dim = ctx.object(n, TotalKind::diag)->dim();
    out.agree = out.colimit->dim() == out.cokernel_delta.dim() && out.cokernel_delta.dim() == out.cokernel_system.dim() &&
                out.cokernel_delta.dim() == out.homology_dim;
    return out;
}

template <class F>
StaircaseColimit<F> staircase_colimit(const DoubleComplex<F>& c, int n) {
    TotalContext<F> ctx(c);
    return staircase_colimit(ctx, n);
}

}  // namespace salamander
