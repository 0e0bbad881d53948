#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "construct.hpp"

namespace salamander {

using Position3 = std::array<int, 3>;

inline std::string to_string(const Position3& p) {
    return "(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + "," + std::to_string(p[2]) + ")";
}

// Moves p by `mask` (bit k = axis k), forwards or backwards.
inline Position3 shifted(Position3 p, unsigned mask, int sign = 1) {
    for (int k = 0; k < 3; ++k)
        if (mask >> k & 1u) p[static_cast<std::size_t>(k)] += sign;
    return p;
}

// A finite complex graded by Z^n (n = 2 or 3) with commuting differentials
// d_k : A_p -> A_{p+e_k}. For n = 2 the third coordinate stays 0.
template <class F>
class CubicalComplex {
public:
    CubicalComplex(const F& f, int arity) : f_(f), n_(arity) {
        if (arity != 2 && arity != 3) throw PreconditionUnmet("arity must be 2 or 3");
    }

    const F& field() const { return f_; }
    int arity() const { return n_; }
    unsigned full_mask() const { return (1u << n_) - 1; }

    std::size_t dim(const Position3& p) const {
        auto it = dims_.find(p);
        return it == dims_.end() ? 0 : it->second;
    }
    void set_dim(const Position3& p, std::size_t d) {
        if (n_ == 2 && p[2] != 0) throw PreconditionUnmet("third coordinate of a double complex must be 0");
        if (d != dim(p))
            for (int k = 0; k < n_; ++k) {
                maps_.erase({p, k});
                maps_.erase({shifted(p, 1u << k, -1), k});
            }
        if (d == 0)
            dims_.erase(p);
        else
            dims_[p] = d;
        if (lo_.empty()) lo_ = hi_ = {p};
        for (std::size_t k = 0; k < 3; ++k) {
            lo_[0][k] = std::min(lo_[0][k], p[k]);
            hi_[0][k] = std::max(hi_[0][k], p[k]);
        }
    }

    Matrix<F> d(const Position3& p, int axis) const {
        auto it = maps_.find({p, axis});
        Position3 t = shifted(p, 1u << axis);
        return it == maps_.end() ? Matrix<F>(f_, dim(t), dim(p)) : it->second;
    }
    void set_d(const Position3& p, int axis, const Matrix<F>& m) {
        Position3 t = shifted(p, 1u << axis);
        if (m.rows() != dim(t) || m.cols() != dim(p))
            throw PreconditionUnmet("d" + std::to_string(axis + 1) + " at " + to_string(p) + " has shape " + m.shape());
        if (m.empty()) {
            maps_.erase({p, axis});
            return;
        }
        maps_[{p, axis}] = m;
    }

    // Composite along the axes in `mask`, starting at p.
    Matrix<F> composite(const Position3& p, unsigned mask) const {
        Matrix<F> m = Matrix<F>::identity(f_, dim(p));
        Position3 at = p;
        for (int k = 0; k < n_; ++k)
            if (mask >> k & 1u) {
                m = d(at, k) * m;
                at = shifted(at, 1u << k);
            }
        return m;
    }

    std::vector<Position3> support() const {
        std::vector<Position3> out;
        for (const auto& [p, d] : dims_) out.push_back(p);
        return out;
    }
    std::size_t total_dim() const {
        std::size_t s = 0;
        for (const auto& [p, d] : dims_) s += d;
        return s;
    }
    // All positions of the bounding box widened by `k` (third axis kept at 0 for n = 2).
    std::vector<Position3> box(int k = 0) const {
        std::vector<Position3> out;
        if (lo_.empty()) return out;
        int k2 = n_ == 3 ? k : 0;
        for (int a = lo_[0][0] - k; a <= hi_[0][0] + k; ++a)
            for (int b = lo_[0][1] - k; b <= hi_[0][1] + k; ++b)
                for (int c = lo_[0][2] - k2; c <= hi_[0][2] + k2; ++c) out.push_back({a, b, c});
        return out;
    }
    const std::map<std::pair<Position3, int>, Matrix<F>>& maps() const { return maps_; }

    bool operator==(const CubicalComplex& o) const { return n_ == o.n_ && dims_ == o.dims_ && maps_ == o.maps_; }

private:
    F f_;
    int n_;
    std::map<Position3, std::size_t> dims_;
    std::map<std::pair<Position3, int>, Matrix<F>> maps_;
    std::vector<Position3> lo_, hi_;
};

template <class F>
using TripleComplex = CubicalComplex<F>;

// Each d_k squares to zero and each pair commutes.
template <class F>
std::vector<std::string> cubical_issues(const CubicalComplex<F>& t) {
    std::vector<std::string> out;
    for (const auto& p : t.box(1)) {
        for (int k = 0; k < t.arity(); ++k) {
            unsigned e = 1u << k;
            if (!(t.d(shifted(p, e), k) * t.d(p, k)).is_zero()) out.push_back("d" + std::to_string(k + 1) + "^2 at " + to_string(p));
            for (int j = k + 1; j < t.arity(); ++j) {
                unsigned f = 1u << j;
                if (!(t.d(shifted(p, e), j) * t.d(p, k) == t.d(shifted(p, f), k) * t.d(p, j)))
                    out.push_back("square " + std::to_string(k + 1) + std::to_string(j + 1) + " at " + to_string(p));
            }
        }
    }
    return out;
}

template <class F>
bool is_valid(const CubicalComplex<F>& t) {
    return cubical_issues(t).empty();
}

template <class F>
CubicalComplex<F> from_double(const DoubleComplex<F>& c) {
    CubicalComplex<F> t(c.field(), 2);
    for (Position p : c.support()) t.set_dim({p.i, p.r, 0}, c.dim(p));
    for (Position p : c.support()) {
        t.set_d({p.i, p.r, 0}, 0, c.dv(p));
        t.set_d({p.i, p.r, 0}, 1, c.dh(p));
    }
    return t;
}

// Proper nonempty down-sets, stored as the complementary up-sets S of {0,1}^n
// with 0 not in S. Bit k of a member is coordinate k.
struct DownSet {
    int n = 3;
    std::vector<unsigned> members;  // sorted

    bool contains(unsigned v) const { return std::binary_search(members.begin(), members.end(), v); }
    bool includes(const DownSet& o) const {
        return std::includes(members.begin(), members.end(), o.members.begin(), o.members.end());
    }
    std::vector<unsigned> minimal() const {
        std::vector<unsigned> out;
        for (auto s : members) {
            bool min = true;
            for (auto t : members)
                if (t != s && (t & s) == t) min = false;
            if (min) out.push_back(s);
        }
        return out;
    }
    // Maximal vectors outside S.
    std::vector<unsigned> outer_maximal() const {
        std::vector<unsigned> out;
        unsigned full = (1u << n) - 1;
        for (unsigned t = 0; t <= full; ++t) {
            if (contains(t)) continue;
            bool max = true;
            for (unsigned u = 0; u <= full; ++u)
                if (u != t && !contains(u) && (u & t) == t) max = false;
            if (max) out.push_back(t);
        }
        return out;
    }
    std::string label() const {
        std::string s = "{";
        for (std::size_t k = 0; k < members.size(); ++k) {
            if (k) s += ",";
            for (int b = 0; b < n; ++b) s += (members[k] >> b & 1u) ? '1' : '0';
        }
        return s + "}";
    }
    bool operator==(const DownSet&) const = default;
    bool operator<(const DownSet& o) const { return std::pair(n, members) < std::pair(o.n, o.members); }
};

struct DownSetCatalog {
    std::vector<DownSet> sets;
    std::vector<std::vector<std::size_t>> orbits;  // indices into sets

    std::vector<std::size_t> orbit_sizes() const {
        std::vector<std::size_t> s;
        for (const auto& o : orbits) s.push_back(o.size());
        std::sort(s.begin(), s.end());
        return s;
    }
};

inline DownSetCatalog enumerate_downsets(int n) {
    if (n != 2 && n != 3) throw PreconditionUnmet("enumerate_downsets needs n = 2 or 3");
    unsigned full = (1u << n) - 1;
    DownSetCatalog cat;
    for (unsigned bits = 1; bits < (1u << (full + 1)); ++bits) {
        if (bits & 1u) continue;  // contains 0
        DownSet s{n, {}};
        for (unsigned v = 1; v <= full; ++v)
            if (bits >> v & 1u) s.members.push_back(v);
        bool up = true;
        for (auto v : s.members)
            for (unsigned w = 0; w <= full; ++w)
                if ((w & v) == v && !s.contains(w)) up = false;
        if (up) cat.sets.push_back(s);
    }
    std::vector<std::vector<int>> perms;
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) p[static_cast<std::size_t>(k)] = k;
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    auto apply = [&](const DownSet& s, const std::vector<int>& pm) {
        DownSet o{n, {}};
        for (auto v : s.members) {
            unsigned w = 0;
            for (int k = 0; k < n; ++k)
                if (v >> k & 1u) w |= 1u << pm[static_cast<std::size_t>(k)];
            o.members.push_back(w);
        }
        std::sort(o.members.begin(), o.members.end());
        return o;
    };
    std::vector<bool> seen(cat.sets.size(), false);
    for (std::size_t a = 0; a < cat.sets.size(); ++a) {
        if (seen[a]) continue;
        std::set<DownSet> orbit;
        for (const auto& pm : perms) orbit.insert(apply(cat.sets[a], pm));
        std::vector<std::size_t> idx;
        for (std::size_t b = 0; b < cat.sets.size(); ++b)
            if (orbit.count(cat.sets[b])) idx.push_back(b), seen[b] = true;
        cat.orbits.push_back(idx);
    }
    return cat;
}

// Up-closure of the given vectors.
inline DownSet up_closure(int n, std::vector<unsigned> gens) {
    DownSet s{n, {}};
    unsigned full = (1u << n) - 1;
    for (unsigned w = 1; w <= full; ++w)
        for (auto g : gens)
            if ((w & g) == g) {
                s.members.push_back(w);
                break;
            }
    return s;
}

template <class F>
struct DownSetParts {
    Subspace<F> numerator, denominator;
};

template <class F>
DownSetParts<F> downset_parts(const CubicalComplex<F>& t, const Position3& pos, const DownSet& s) {
    if (s.n != t.arity()) throw PreconditionUnmet("down-set arity does not match the complex");
    const F& f = t.field();
    std::size_t n = t.dim(pos);
    Subspace<F> num = Subspace<F>::full(f, n), den = Subspace<F>::zero(f, n);
    for (auto v : s.minimal()) num = subspace_intersect(num, kernel(t.composite(pos, v)));
    unsigned full = t.full_mask();
    for (auto v : s.outer_maximal()) {
        unsigned u = full & ~v;
        den = subspace_sum(den, image(t.composite(shifted(pos, u, -1), u)));
    }
    if (!contains(num, den)) throw InternalCheckFailed("denominator not inside numerator for " + s.label() + " at " + to_string(pos));
    return {num, den};
}

template <class F>
Subquotient<F> downset_homology(const CubicalComplex<F>& t, const Position3& pos, const DownSet& s) {
    auto parts = downset_parts(t, pos, s);
    return Subquotient<F>(parts.numerator, parts.denominator);
}

// Map from the homology of S to that of a smaller S' at the same position.
template <class F>
SubquotientMap<F> downset_intramural(const CubicalComplex<F>& t, const Position3& pos, const DownSet& s, const DownSet& s2) {
    if (!s.includes(s2)) throw PreconditionUnmet(s.label() + " does not contain " + s2.label());
    return induced_map(Matrix<F>::identity(t.field(), t.dim(pos)), downset_homology(t, pos, s), downset_homology(t, pos, s2));
}

template <class F>
bool axis_exact(const CubicalComplex<F>& t, const Position3& p, int axis) {
    return kernel(t.d(p, axis)) == image(t.d(shifted(p, 1u << axis, -1), axis));
}

struct VanishingProbe {
    std::size_t evaluated = 0;
    std::vector<std::pair<Position3, std::string>> nonzero;
    bool vanishes() const { return nonzero.empty(); }
};

// Evaluates every construction at every position of the widened box; the input
// must be exact along every axis everywhere.
template <class F>
VanishingProbe triple_vanishing_probe(const CubicalComplex<F>& t) {
    if (!is_valid(t)) throw PreconditionUnmet("input is not a valid cubical complex");
    auto box = t.box(1);
    for (const auto& p : box)
        for (int k = 0; k < t.arity(); ++k)
            if (!axis_exact(t, p, k))
                throw NotTriplyExact("not exact along axis " + std::to_string(k + 1) + " at " + to_string(p));
    VanishingProbe out;
    auto cat = enumerate_downsets(t.arity());
    for (const auto& p : box)
        for (const auto& s : cat.sets) {
            ++out.evaluated;
            if (downset_homology(t, p, s).dim()) out.nonzero.push_back({p, s.label()});
        }
    return out;
}

// 2^n copies of F^d on the unit cube at `anchor` with identity maps.
template <class F>
CubicalComplex<F> elementary_cube(const F& f, int arity, Position3 anchor, std::size_t d) {
    CubicalComplex<F> t(f, arity);
    unsigned full = (1u << arity) - 1;
    for (unsigned v = 0; v <= full; ++v) t.set_dim(shifted(anchor, v), d);
    auto id = Matrix<F>::identity(f, d);
    for (unsigned v = 0; v <= full; ++v)
        for (int k = 0; k < arity; ++k)
            if (!(v >> k & 1u) && d) t.set_d(shifted(anchor, v), k, id);
    return t;
}

// Random extension 0 -> a -> b -> q -> 0 with block upper-triangular differentials.
template <class F>
CubicalComplex<F> random_cubical_extension(const CubicalComplex<F>& a, const CubicalComplex<F>& q, Rng& rng) {
    const F& f = a.field();
    int n = a.arity();
    std::set<Position3> pts;
    for (const auto& p : a.support()) pts.insert(p);
    for (const auto& p : q.support()) pts.insert(p);
    LinearSystem<F> sys(f);
    std::map<std::pair<Position3, int>, int> x;
    for (const auto& p : q.support())
        for (int k = 0; k < n; ++k) {
            Position3 t = shifted(p, 1u << k);
            if (a.dim(t)) x[{p, k}] = sys.add_unknown(a.dim(t), q.dim(p));
        }
    auto id = [&](std::size_t m) { return Matrix<F>::identity(f, m); };
    using T = typename LinearSystem<F>::Term;
    for (const auto& p : q.support())
        for (int k = 0; k < n; ++k) {
            unsigned ek = 1u << k;
            // d_k d_k = 0: a_k(p+e_k) X_k(p) + X_k(p+e_k) q_k(p) = 0
            Position3 pk = shifted(p, ek), pkk = shifted(pk, ek);
            if (a.dim(pkk)) {
                std::vector<T> c;
                if (x.count({p, k})) c.push_back({a.d(pk, k), x[{p, k}], id(q.dim(p))});
                if (x.count({pk, k})) c.push_back({id(a.dim(pkk)), x[{pk, k}], q.d(p, k)});
                sys.add_constraint(c);
            }
            for (int j = k + 1; j < n; ++j) {
                unsigned ej = 1u << j;
                Position3 pj = shifted(p, ej), pjk = shifted(pj, ek);
                if (!a.dim(pjk)) continue;
                std::vector<T> c;
                if (x.count({p, k})) c.push_back({a.d(pk, j), x[{p, k}], id(q.dim(p))});
                if (x.count({pk, j})) c.push_back({id(a.dim(pjk)), x[{pk, j}], q.d(p, k)});
                if (x.count({p, j})) c.push_back({-a.d(pj, k), x[{p, j}], id(q.dim(p))});
                if (x.count({pj, k})) c.push_back({-id(a.dim(pjk)), x[{pj, k}], q.d(p, j)});
                sys.add_constraint(c);
            }
        }
    auto sol = sys.sample(rng);
    CubicalComplex<F> b(f, n);
    for (const auto& p : pts) b.set_dim(p, a.dim(p) + q.dim(p));
    for (const auto& p : pts)
        for (int k = 0; k < n; ++k) {
            Position3 t = shifted(p, 1u << k);
            if (!b.dim(t)) continue;
            Matrix<F> m(f, b.dim(t), b.dim(p));
            m.set_block(0, 0, a.d(p, k));
            m.set_block(a.dim(t), a.dim(p), q.d(p, k));
            if (x.count({p, k})) m.set_block(0, a.dim(p), sol[static_cast<std::size_t>(x[{p, k}])]);
            b.set_d(p, k, m);
        }
    return b;
}

template <class F>
CubicalComplex<F> conjugate(const CubicalComplex<F>& t, Rng& rng) {
    std::map<Position3, Matrix<F>> g, gi;
    for (const auto& p : t.support()) {
        g[p] = random_invertible(t.field(), t.dim(p), rng);
        gi[p] = inverse(g[p]);
    }
    CubicalComplex<F> out = t;
    for (const auto& [key, m] : t.maps()) {
        auto [p, k] = key;
        out.set_d(p, k, g[shifted(p, 1u << k)] * m * gi[p]);
    }
    return out;
}

// Iterated random extensions of `count` elementary cubes with anchors in [0, extent)^n.
template <class F>
CubicalComplex<F> cube_extensions(const F& f, int arity, int extent, std::size_t count, std::size_t max_dim, Rng& rng) {
    CubicalComplex<F> t(f, arity);
    for (std::size_t k = 0; k < count; ++k) {
        Position3 anchor{static_cast<int>(rng.below(static_cast<std::size_t>(extent))),
                         static_cast<int>(rng.below(static_cast<std::size_t>(extent))),
                         arity == 3 ? static_cast<int>(rng.below(static_cast<std::size_t>(extent))) : 0};
        std::size_t d = rng.range(1, std::max<std::size_t>(1, max_dim));
        auto e = elementary_cube(f, arity, anchor, d);
        t = rng.coin() ? random_cubical_extension(t, e, rng) : random_cubical_extension(e, t, rng);
    }
    return conjugate(t, rng);
}

// A = P ⊗ Q ⊗ R with d1 = dP ⊗ 1 ⊗ 1, d2 = 1 ⊗ dQ ⊗ 1, d3 = 1 ⊗ 1 ⊗ dR.
template <class F>
CubicalComplex<F> tensor3(const ChainComplex<F>& p, const ChainComplex<F>& q, const ChainComplex<F>& r) {
    const F& f = p.field;
    CubicalComplex<F> t(f, 3);
    auto id = [&](std::size_t n) { return Matrix<F>::identity(f, n); };
    for (int a = p.lo; a <= p.hi(); ++a)
        for (int b = q.lo; b <= q.hi(); ++b)
            for (int c = r.lo; c <= r.hi(); ++c) t.set_dim({a, b, c}, p.dim(a) * q.dim(b) * r.dim(c));
    for (int a = p.lo; a <= p.hi(); ++a)
        for (int b = q.lo; b <= q.hi(); ++b)
            for (int c = r.lo; c <= r.hi(); ++c) {
                Position3 x{a, b, c};
                if (!t.dim(x)) continue;
                t.set_d(x, 0, kron(kron(p.d(a), id(q.dim(b))), id(r.dim(c))));
                t.set_d(x, 1, kron(kron(id(p.dim(a)), q.d(b)), id(r.dim(c))));
                t.set_d(x, 2, kron(kron(id(p.dim(a)), id(q.dim(b))), r.d(c)));
            }
    return t;
}

}  // namespace salamander
