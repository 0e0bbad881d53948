#pragma once

#include <memory>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace salamander {

// A subspace of F^n held by its reduced row-echelon basis, so equal
// subspaces have identical representations.
template <class F>
class Subspace {
public:
    Subspace() = default;

    static Subspace zero(const F& f, std::size_t n) { return Subspace(Matrix<F>(f, 0, n), {}); }
    static Subspace full(const F& f, std::size_t n) {
        std::vector<std::size_t> piv(n);
        for (std::size_t k = 0; k < n; ++k) piv[k] = k;
        return Subspace(Matrix<F>::identity(f, n), std::move(piv));
    }
    // Row span of m.
    static Subspace span(const Matrix<F>& m) {
        auto r = rref(m);
        return Subspace(r.matrix.block(0, 0, r.rank, m.cols()), std::move(r.pivots));
    }

    const F& field() const { return basis_.field(); }
    std::size_t ambient() const { return basis_.cols(); }
    std::size_t dim() const { return basis_.rows(); }
    const Matrix<F>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    bool operator==(const Subspace& o) const { return basis_ == o.basis_; }

    // Residue of each row of v after eliminating this subspace's pivot columns.
    Matrix<F> reduce(Matrix<F> v) const {
        const F& f = field();
        for (std::size_t a = 0; a < v.rows(); ++a)
            for (std::size_t k = 0; k < pivots_.size(); ++k) {
                auto t = v(a, pivots_[k]);
                if (f.is_zero(t)) continue;
                for (std::size_t j = 0; j < v.cols(); ++j) v(a, j) = f.sub(v(a, j), f.mul(t, basis_(k, j)));
            }
        return v;
    }

    bool contains_rows(const Matrix<F>& v) const {
        if (v.cols() != ambient()) throw AmbientMismatch("ambient mismatch in containment test");
        return reduce(v).is_zero();
    }

private:
    Subspace(Matrix<F> b, std::vector<std::size_t> p) : basis_(std::move(b)), pivots_(std::move(p)) {}

    Matrix<F> basis_;
    std::vector<std::size_t> pivots_;
};

template <class F>
Subspace<F> kernel(const Matrix<F>& m) {
    const F& f = m.field();
    auto r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto p : r.pivots) is_pivot[p] = true;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (!is_pivot[j]) free.push_back(j);
    Matrix<F> b(f, free.size(), m.cols());
    for (std::size_t a = 0; a < free.size(); ++a) {
        b(a, free[a]) = f.one();
        for (std::size_t k = 0; k < r.pivots.size(); ++k) b(a, r.pivots[k]) = f.neg(r.matrix(k, free[a]));
    }
    return Subspace<F>::span(b);
}

template <class F>
Subspace<F> image(const Matrix<F>& m) {
    return Subspace<F>::span(m.transpose());
}

template <class F>
Subspace<F> subspace_sum(const Subspace<F>& u, const Subspace<F>& v) {
    if (u.ambient() != v.ambient()) throw AmbientMismatch("ambient mismatch in subspace sum");
    return Subspace<F>::span(vstack(u.basis(), v.basis()));
}

// Zassenhaus: rows of [u|u ; v|0] whose left half vanishes span u ∩ v.
template <class F>
Subspace<F> subspace_intersect(const Subspace<F>& u, const Subspace<F>& v) {
    if (u.ambient() != v.ambient()) throw AmbientMismatch("ambient mismatch in subspace intersection");
    std::size_t n = u.ambient();
    auto r = rref(vstack(hstack(u.basis(), u.basis()), hstack(v.basis(), Matrix<F>(u.field(), v.dim(), n))));
    std::vector<std::size_t> rows;
    for (std::size_t k = 0; k < r.rank; ++k)
        if (r.pivots[k] >= n) rows.push_back(k);
    return Subspace<F>::span(r.matrix.select_rows(rows).block(0, n, rows.size(), n));
}

// True iff v ⊆ u.
template <class F>
bool contains(const Subspace<F>& u, const Subspace<F>& v) {
    if (u.ambient() != v.ambient()) throw AmbientMismatch("ambient mismatch in containment test");
    return u.contains_rows(v.basis());
}

// X/Y with deterministic coordinates: coord_basis holds the reductions
// modulo Y of those RREF rows of X that extend Y greedily.
template <class F>
class Subquotient {
public:
    Subquotient() = default;
    Subquotient(Subspace<F> x, Subspace<F> y) : top_(std::move(x)), bottom_(std::move(y)) {
        if (top_.ambient() != bottom_.ambient()) throw AmbientMismatch("ambient mismatch in subquotient");
        if (!contains(top_, bottom_)) throw NotNested("bottom subspace is not contained in top subspace");
        const F& f = top_.field();
        std::size_t n = top_.ambient(), dx = top_.dim(), dy = bottom_.dim();

        // Semi-echelon of Y ∪ kept rows, used for the independence test.
        std::vector<std::vector<typename F::value_type>> ech;
        std::vector<std::size_t> ech_piv;
        auto push = [&](std::vector<typename F::value_type> v) -> bool {
            for (std::size_t k = 0; k < ech.size(); ++k) {
                auto t = v[ech_piv[k]];
                if (f.is_zero(t)) continue;
                for (std::size_t j = 0; j < n; ++j) v[j] = f.sub(v[j], f.mul(t, ech[k][j]));
            }
            std::size_t p = 0;
            while (p < n && f.is_zero(v[p])) ++p;
            if (p == n) return false;
            auto s = f.inv(v[p]);
            for (auto& x : v) x = f.mul(x, s);
            ech.push_back(std::move(v));
            ech_piv.push_back(p);
            return true;
        };
        auto row_of = [&](const Matrix<F>& m, std::size_t i) {
            std::vector<typename F::value_type> v(n);
            for (std::size_t j = 0; j < n; ++j) v[j] = m(i, j);
            return v;
        };
        for (std::size_t i = 0; i < dy; ++i) push(row_of(bottom_.basis(), i));

        Matrix<F> reduced = bottom_.reduce(top_.basis());
        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < dx && kept.size() < dx - dy; ++i)
            if (push(row_of(reduced, i))) kept.push_back(i);
        coord_ = reduced.select_rows(kept);

        Matrix<F> w = vstack(bottom_.basis(), coord_);
        Matrix<F> tinv = inverse(w.select_cols(top_.pivots()));
        proj_ = Matrix<F>(f, n, dx - dy);
        for (std::size_t k = 0; k < dx; ++k)
            for (std::size_t j = 0; j < dx - dy; ++j) proj_(top_.pivots()[k], j) = tinv(k, dy + j);
    }

    const F& field() const { return top_.field(); }
    std::size_t ambient() const { return top_.ambient(); }
    std::size_t dim() const { return coord_.rows(); }
    const Subspace<F>& top() const { return top_; }
    const Subspace<F>& bottom() const { return bottom_; }
    const Matrix<F>& coord_basis() const { return coord_; }

    // Quotient coordinates of the rows of v; each row must lie in top().
    Matrix<F> coordinates(const Matrix<F>& v) const { return v * proj_; }

    bool operator==(const Subquotient& o) const { return top_ == o.top_ && bottom_ == o.bottom_; }

private:
    Subspace<F> top_;
    Subspace<F> bottom_;
    Matrix<F> coord_;
    Matrix<F> proj_;
};

template <class F>
Subquotient<F> make_subquotient(const Subspace<F>& x, const Subspace<F>& y) {
    return Subquotient<F>(x, y);
}

template <class F>
using SubquotientPtr = std::shared_ptr<const Subquotient<F>>;

template <class F>
SubquotientPtr<F> share(Subquotient<F> s) {
    return std::make_shared<const Subquotient<F>>(std::move(s));
}

template <class F>
struct SubquotientMap {
    SubquotientPtr<F> source;
    SubquotientPtr<F> target;
    Matrix<F> matrix;  // target.dim x source.dim

    const F& field() const { return matrix.field(); }
};

template <class F>
bool same_subquotient(const SubquotientPtr<F>& a, const SubquotientPtr<F>& b) {
    return a == b || *a == *b;
}

template <class F>
SubquotientMap<F> identity_map(const SubquotientPtr<F>& s) {
    return {s, s, Matrix<F>::identity(s->field(), s->dim())};
}

template <class F>
SubquotientMap<F> zero_map(const SubquotientPtr<F>& s, const SubquotientPtr<F>& t) {
    return {s, t, Matrix<F>(s->field(), t->dim(), s->dim())};
}

// The map s -> t induced by an ambient matrix (shape t.ambient x s.ambient).
template <class F>
SubquotientMap<F> induced_map(const Matrix<F>& ambient, const SubquotientPtr<F>& s, const SubquotientPtr<F>& t) {
    if (ambient.cols() != s->ambient() || ambient.rows() != t->ambient())
        throw AmbientMismatch("ambient matrix " + ambient.shape() + " does not map F^" +
                              std::to_string(s->ambient()) + " to F^" + std::to_string(t->ambient()));
    Matrix<F> mt = ambient.transpose();
    if (!t->top().contains_rows(s->top().basis() * mt))
        throw NotWellDefined("image of source top is not contained in target top");
    if (!t->bottom().contains_rows(s->bottom().basis() * mt))
        throw NotWellDefined("image of source bottom is not contained in target bottom");
    return {s, t, t->coordinates(s->coord_basis() * mt).transpose()};
}

template <class F>
SubquotientMap<F> induced_map(const Matrix<F>& ambient, const Subquotient<F>& s, const Subquotient<F>& t) {
    return induced_map(ambient, share(s), share(t));
}

// Left-to-right composition: first f, then g.
template <class F>
SubquotientMap<F> compose(const SubquotientMap<F>& f, const SubquotientMap<F>& g) {
    if (!same_subquotient(f.target, g.source))
        throw SourceTargetMismatch("target of first map differs from source of second");
    return {f.source, g.target, g.matrix * f.matrix};
}

template <class F>
bool is_iso(const SubquotientMap<F>& f) {
    return f.matrix.rows() == f.matrix.cols() && rank(f.matrix) == f.matrix.rows();
}

template <class F>
SubquotientMap<F> invert(const SubquotientMap<F>& f) {
    if (!is_iso(f)) throw NotInvertible("map of shape " + f.matrix.shape() + " is not an isomorphism");
    return {f.target, f.source, inverse(f.matrix)};
}

template <class F>
Subspace<F> map_kernel(const SubquotientMap<F>& f) {
    return kernel(f.matrix);
}

template <class F>
Subspace<F> map_image(const SubquotientMap<F>& f) {
    return image(f.matrix);
}

template <class F>
bool exact_at(const SubquotientMap<F>& f, const SubquotientMap<F>& g) {
    if (!same_subquotient(f.target, g.source))
        throw SourceTargetMismatch("maps do not meet at a common term");
    return map_image(f) == map_kernel(g);
}

template <class F>
bool maps_equal(const SubquotientMap<F>& a, const SubquotientMap<F>& b) {
    return same_subquotient(a.source, b.source) && same_subquotient(a.target, b.target) && a.matrix == b.matrix;
}

}  // namespace salamander
