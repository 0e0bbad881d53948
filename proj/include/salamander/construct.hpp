#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "corners.hpp"

namespace salamander {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t next() { return eng_(); }
    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(eng_() % n); }
    std::size_t range(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
    bool coin(unsigned percent = 50) { return below(100) < percent; }

private:
    std::mt19937_64 eng_;
};

template <class F>
typename F::value_type random_scalar(const F& f, Rng& rng) {
    if constexpr (std::is_same_v<F, PrimeField>)
        return static_cast<typename F::value_type>(rng.below(f.modulus()));
    else
        return f.from_int(static_cast<std::int64_t>(rng.below(7)) - 3);
}

template <class F>
Matrix<F> random_matrix(const F& f, std::size_t rows, std::size_t cols, Rng& rng) {
    Matrix<F> m(f, rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = random_scalar(f, rng);
    return m;
}

template <class F>
Matrix<F> random_invertible(const F& f, std::size_t n, Rng& rng) {
    for (;;) {
        auto m = random_matrix(f, n, n, rng);
        if (rank(m) == n) return m;
    }
}

// Homogeneous linear constraints  sum_k L_k X_k R_k = 0  on unknown matrices X_k.
template <class F>
class LinearSystem {
public:
    struct Term {
        Matrix<F> left;
        int unknown;
        Matrix<F> right;
    };

    explicit LinearSystem(const F& f) : f_(f) {}

    int add_unknown(std::size_t rows, std::size_t cols) {
        shapes_.push_back({rows, cols});
        offsets_.push_back(count_);
        count_ += rows * cols;
        return static_cast<int>(shapes_.size()) - 1;
    }
    std::size_t unknowns() const { return count_; }

    void add_constraint(const std::vector<Term>& terms) {
        if (terms.empty()) return;
        std::size_t a = terms.front().left.rows(), b = terms.front().right.cols();
        std::vector<std::vector<typename F::value_type>> block(a * b, std::vector<typename F::value_type>(count_, f_.zero()));
        for (const auto& t : terms) {
            auto [xr, xc] = shapes_[t.unknown];
            if (t.left.rows() != a || t.right.cols() != b || t.left.cols() != xr || t.right.rows() != xc)
                throw InternalCheckFailed("constraint term shape mismatch");
            std::size_t off = offsets_[t.unknown];
            // row-major vec(L X R) = (L kron R^T) vec(X)
            for (std::size_t p = 0; p < a; ++p)
                for (std::size_t i = 0; i < xr; ++i) {
                    const auto& l = t.left(p, i);
                    if (f_.is_zero(l)) continue;
                    for (std::size_t q = 0; q < b; ++q)
                        for (std::size_t j = 0; j < xc; ++j) {
                            const auto& rr = t.right(j, q);
                            if (f_.is_zero(rr)) continue;
                            auto& cell = block[p * b + q][off + i * xc + j];
                            cell = f_.add(cell, f_.mul(l, rr));
                        }
                }
        }
        for (auto& row : block) rows_.push_back(std::move(row));
    }

    // Basis of the solution space, one solution per row.
    Matrix<F> solution_basis() const {
        Matrix<F> m(f_, rows_.size(), count_);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            for (std::size_t j = 0; j < count_; ++j) m(i, j) = rows_[i][j];
        return kernel(m).basis();
    }

    std::vector<Matrix<F>> unpack(const Matrix<F>& vec) const {
        std::vector<Matrix<F>> out;
        for (std::size_t k = 0; k < shapes_.size(); ++k) {
            auto [r, c] = shapes_[k];
            Matrix<F> x(f_, r, c);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < c; ++j) x(i, j) = vec(0, offsets_[k] + i * c + j);
            out.push_back(std::move(x));
        }
        return out;
    }

    // A uniformly random element of the solution space.
    std::vector<Matrix<F>> sample(Rng& rng) const {
        auto basis = solution_basis();
        auto coeff = random_matrix(f_, 1, basis.rows(), rng);
        Matrix<F> v = basis.rows() ? coeff * basis : Matrix<F>(f_, 1, count_);
        return unpack(v);
    }

private:
    F f_;
    std::vector<std::pair<std::size_t, std::size_t>> shapes_;
    std::vector<std::size_t> offsets_;
    std::size_t count_ = 0;
    std::vector<std::vector<typename F::value_type>> rows_;
};

// Cochain complex C_lo -> ... -> C_hi with d(k): C_k -> C_{k+1}.
template <class F>
struct ChainComplex {
    F field;
    int lo = 0;
    std::vector<std::size_t> dims;
    std::vector<Matrix<F>> diffs;  // diffs[k] : degree lo+k -> lo+k+1

    int hi() const { return lo + static_cast<int>(dims.size()) - 1; }
    std::size_t dim(int deg) const {
        return deg < lo || deg > hi() ? 0 : dims[static_cast<std::size_t>(deg - lo)];
    }
    Matrix<F> d(int deg) const {
        if (deg < lo || deg >= hi()) return Matrix<F>(field, dim(deg + 1), dim(deg));
        return diffs[static_cast<std::size_t>(deg - lo)];
    }
    bool exact_at(int deg) const { return kernel(d(deg)) == image(d(deg - 1)); }
};

// Random complex on degrees lo..hi: two-term identity blocks between
// neighbouring degrees plus one-term blocks wherever homology is allowed,
// conjugated by random changes of basis.
template <class F>
ChainComplex<F> random_chain(const F& f, int lo, int hi, std::size_t max_dim, Rng& rng,
                             const std::vector<int>& homology_degrees = {}, unsigned homology_percent = 60) {
    std::size_t n = static_cast<std::size_t>(hi - lo + 1);
    std::vector<std::size_t> pair_in(n + 1, 0), hom(n, 0);
    std::vector<std::size_t> pairs(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t used = k ? pairs[k - 1] : 0;
        std::size_t room = max_dim > used ? max_dim - used : 0;
        bool allowed = std::find(homology_degrees.begin(), homology_degrees.end(), lo + static_cast<int>(k)) !=
                       homology_degrees.end();
        if (allowed && room && rng.coin(homology_percent)) {
            hom[k] = rng.range(1, std::min<std::size_t>(room, 2));
            room -= hom[k];
        }
        if (k + 1 < n && room) pairs[k] = rng.range(0, room);
    }
    ChainComplex<F> c{f, lo, {}, {}};
    for (std::size_t k = 0; k < n; ++k) c.dims.push_back((k ? pairs[k - 1] : 0) + hom[k] + pairs[k]);
    std::vector<Matrix<F>> g;
    for (std::size_t k = 0; k < n; ++k) g.push_back(random_invertible(f, c.dims[k], rng));
    for (std::size_t k = 0; k + 1 < n; ++k) {
        Matrix<F> d(f, c.dims[k + 1], c.dims[k]);
        std::size_t src0 = (k ? pairs[k - 1] : 0) + hom[k];
        for (std::size_t t = 0; t < pairs[k]; ++t) d(t, src0 + t) = f.one();
        c.diffs.push_back(g[k + 1] * d * inverse(g[k]));
    }
    return c;
}

template <class F>
void place_row(DoubleComplex<F>& c, int row, const ChainComplex<F>& ch) {
    for (int k = ch.lo; k <= ch.hi(); ++k) c.set_dim({row, k}, ch.dim(k));
    for (int k = ch.lo; k < ch.hi(); ++k) c.set_dh({row, k}, ch.d(k));
}

template <class F>
DoubleComplex<F> tensor(const ChainComplex<F>& p, const ChainComplex<F>& q) {
    const F& f = p.field;
    DoubleComplex<F> c(f);
    for (int i = p.lo; i <= p.hi(); ++i)
        for (int r = q.lo; r <= q.hi(); ++r) c.set_dim({i, r}, p.dim(i) * q.dim(r));
    for (int i = p.lo; i <= p.hi(); ++i)
        for (int r = q.lo; r <= q.hi(); ++r) {
            if (i < p.hi()) c.set_dv({i, r}, kron(p.d(i), Matrix<F>::identity(f, q.dim(r))));
            if (r < q.hi()) c.set_dh({i, r}, kron(Matrix<F>::identity(f, p.dim(i)), q.d(r)));
        }
    return c;
}

// Four copies of F^d at anchor, anchor+right, anchor+down, anchor+diagonal, with identity maps.
template <class F>
DoubleComplex<F> elementary(const F& f, Position anchor, std::size_t d) {
    DoubleComplex<F> c(f);
    for (Position p : {anchor, anchor.right(), anchor.down(), anchor.down().right()}) {
        c.extend_window(p);
        c.set_dim(p, d);
    }
    if (d == 0) return c;
    auto id = Matrix<F>::identity(f, d);
    c.set_dh(anchor, id);
    c.set_dh(anchor.down(), id);
    c.set_dv(anchor, id);
    c.set_dv(anchor.right(), id);
    return c;
}

template <class F>
DoubleComplex<F> direct_sum(const DoubleComplex<F>& a, const DoubleComplex<F>& b) {
    DoubleComplex<F> c(a.field());
    Window w = a.window();
    if (!b.window().empty()) {
        w.include({b.window().i0, b.window().r0});
        w.include({b.window().i1, b.window().r1});
    }
    c.set_window(w);
    std::vector<Position> ps = a.support();
    for (Position p : b.support()) ps.push_back(p);
    for (Position p : ps) c.set_dim(p, a.dim(p) + b.dim(p));
    for (Position p : ps) {
        c.set_dv(p, direct_sum(a.dv(p), b.dv(p)));
        c.set_dh(p, direct_sum(a.dh(p), b.dh(p)));
    }
    return c;
}

// Replaces each object's basis by a random one.
template <class F>
DoubleComplex<F> conjugate(const DoubleComplex<F>& c, Rng& rng) {
    std::map<Position, Matrix<F>> g, gi;
    for (Position p : c.support()) {
        g[p] = random_invertible(c.field(), c.dim(p), rng);
        gi[p] = inverse(g[p]);
    }
    DoubleComplex<F> out = c;
    for (const auto& [p, m] : c.dv_map()) out.set_dv(p, g[p.down()] * m * gi[p]);
    for (const auto& [p, m] : c.dh_map()) out.set_dh(p, g[p.right()] * m * gi[p]);
    return out;
}

// Zig-zag of identity maps starting at `start` (its lower-left end) and
// moving up ('u') or right ('r') alternately. A first move 'u' leaves the
// start row non-exact, a first move 'r' the start column; likewise the last
// move decides whether the end row or the end column is non-exact.
template <class F>
DoubleComplex<F> staircase(const F& f, Position start, const std::string& moves, std::size_t d) {
    DoubleComplex<F> c(f);
    std::vector<Position> ps{start};
    for (char m : moves) ps.push_back(m == 'u' ? ps.back().up() : ps.back().right());
    for (Position p : ps) c.set_dim(p, d);
    auto id = Matrix<F>::identity(f, d);
    for (std::size_t k = 0; k < moves.size(); ++k) {
        if (k && moves[k] == moves[k - 1]) throw Error("staircase moves must alternate");
        if (moves[k] == 'u')
            c.set_dv(ps[k + 1], id);
        else
            c.set_dh(ps[k], id);
    }
    return c;
}

// A non-exact line: a row or a column with its index.
struct Line {
    bool is_row = true;
    int index = 0;
    bool operator==(const Line&) const = default;
};

// Staircase joining two non-exact lines; `lower` is the line carrying the
// lower-left end. Rows: lower row must be greater than the upper row;
// columns: the lower end's column must be smaller.
template <class F>
DoubleComplex<F> staircase_between(const F& f, Line lower, Line upper, int free_coord, std::size_t d) {
    // free_coord fixes the coordinate not determined by the lines.
    Position start;
    if (lower.is_row)
        start = {lower.index, free_coord};
    else
        start = {free_coord, lower.index};
    if (lower == upper) throw Error("staircase needs two distinct lines");
    char first = lower.is_row ? 'u' : 'r';
    char last = upper.is_row ? 'u' : 'r';
    std::string moves;
    Position p = start;
    char next = first;
    for (int guard = 0; guard < 64; ++guard) {
        moves.push_back(next);
        p = next == 'u' ? p.up() : p.right();
        next = next == 'u' ? 'r' : 'u';
        bool reached = upper.is_row ? p.i == upper.index : p.r == upper.index;
        if (moves.back() == last && reached) return staircase(f, start, moves, d);
        if (upper.is_row ? p.i < upper.index : p.r > upper.index) break;
    }
    throw Error("staircase cannot join the requested lines");
}

template <class F>
struct Extension {
    DoubleComplex<F> total;
    // Inclusion a -> total and projection total -> q at each support position.
    std::map<Position, Matrix<F>> inclusion, projection;
};

// Random extension 0 -> a -> b -> q -> 0 with block upper-triangular differentials.
template <class F>
Extension<F> random_extension(const DoubleComplex<F>& a, const DoubleComplex<F>& q, Rng& rng) {
    const F& f = a.field();
    Window w = a.window();
    if (!q.window().empty()) {
        w.include({q.window().i0, q.window().r0});
        w.include({q.window().i1, q.window().r1});
    }
    LinearSystem<F> sys(f);
    std::map<Position, int> xv, xh;
    std::vector<Position> all = w.widened(1).positions();
    for (Position p : all) {
        if (q.dim(p) && a.dim(p.down())) xv[p] = sys.add_unknown(a.dim(p.down()), q.dim(p));
        if (q.dim(p) && a.dim(p.right())) xh[p] = sys.add_unknown(a.dim(p.right()), q.dim(p));
    }
    auto id = [&](std::size_t n) { return Matrix<F>::identity(f, n); };
    using T = typename LinearSystem<F>::Term;
    for (Position p : all) {
        if (!q.dim(p)) continue;
        std::vector<T> vv, hh, sq;
        // dv dv = 0 off-diagonal: Da_v(p+d) Xv(p) + Xv(p+d) Dq_v(p)
        if (xv.count(p) && a.dim(p.down().down())) vv.push_back({a.dv(p.down()), xv[p], id(q.dim(p))});
        if (xv.count(p.down()) && q.dim(p.down())) vv.push_back({id(a.dim(p.down().down())), xv[p.down()], q.dv(p)});
        if (!vv.empty()) sys.add_constraint(vv);
        if (xh.count(p) && a.dim(p.right().right())) hh.push_back({a.dh(p.right()), xh[p], id(q.dim(p))});
        if (xh.count(p.right()) && q.dim(p.right())) hh.push_back({id(a.dim(p.right().right())), xh[p.right()], q.dh(p)});
        if (!hh.empty()) sys.add_constraint(hh);
        Position diag = p.down().right();
        if (!a.dim(diag)) continue;
        auto minus_id = [&](std::size_t n) { return -id(n); };
        if (xv.count(p)) sq.push_back({a.dh(p.down()), xv[p], id(q.dim(p))});
        if (xh.count(p.down())) sq.push_back({id(a.dim(diag)), xh[p.down()], q.dv(p)});
        if (xh.count(p)) sq.push_back({-a.dv(p.right()), xh[p], id(q.dim(p))});
        if (xv.count(p.right())) sq.push_back({minus_id(a.dim(diag)), xv[p.right()], q.dh(p)});
        if (!sq.empty()) sys.add_constraint(sq);
    }
    auto sol = sys.sample(rng);
    Extension<F> ext{DoubleComplex<F>(f), {}, {}};
    auto& b = ext.total;
    b.set_window(w);
    for (Position p : all)
        if (a.dim(p) + q.dim(p)) b.set_dim(p, a.dim(p) + q.dim(p));
    for (Position p : all) {
        if (!b.dim(p)) continue;
        for (Direction dir : {Direction::vertical, Direction::horizontal}) {
            Position t = step(p, dir);
            if (!b.dim(t)) continue;
            Matrix<F> m(f, b.dim(t), b.dim(p));
            m.set_block(0, 0, a.d(p, dir));
            m.set_block(a.dim(t), a.dim(p), q.d(p, dir));
            auto& xs = dir == Direction::vertical ? xv : xh;
            if (xs.count(p)) m.set_block(0, a.dim(p), sol[static_cast<std::size_t>(xs[p])]);
            b.set_d(p, dir, m);
        }
        Matrix<F> inc(f, b.dim(p), a.dim(p)), pr(f, q.dim(p), b.dim(p));
        inc.set_block(0, 0, Matrix<F>::identity(f, a.dim(p)));
        pr.set_block(0, a.dim(p), Matrix<F>::identity(f, q.dim(p)));
        ext.inclusion[p] = inc;
        ext.projection[p] = pr;
    }
    return ext;
}

// Random chain map between two complexes on the same degrees; `after`
// (optional) is a previous map u with the requirement v * u = 0.
template <class F>
std::vector<Matrix<F>> random_chain_map(const ChainComplex<F>& src, const ChainComplex<F>& tgt, Rng& rng,
                                        const std::type_identity_t<std::vector<Matrix<F>>>* after = nullptr, int lo = 0,
                                        int hi = -1) {
    const F& f = src.field;
    if (hi < lo) {
        lo = std::min(src.lo, tgt.lo);
        hi = std::max(src.hi(), tgt.hi());
    }
    LinearSystem<F> sys(f);
    std::vector<int> ids;
    for (int k = lo; k <= hi; ++k) ids.push_back(sys.add_unknown(tgt.dim(k), src.dim(k)));
    using T = typename LinearSystem<F>::Term;
    auto id = [&](std::size_t n) { return Matrix<F>::identity(f, n); };
    for (int k = lo - 1; k <= hi; ++k) {
        // v(k+1) dsrc(k) - dtgt(k) v(k) = 0
        std::vector<T> t;
        if (k + 1 <= hi && k + 1 >= lo) t.push_back({id(tgt.dim(k + 1)), ids[k + 1 - lo], src.d(k)});
        if (k >= lo) t.push_back({-tgt.d(k), ids[k - lo], id(src.dim(k))});
        if (!t.empty() && tgt.dim(k + 1) && src.dim(k)) sys.add_constraint(t);
    }
    if (after)
        for (int k = lo; k <= hi; ++k) {
            const auto& u = (*after)[static_cast<std::size_t>(k - lo)];
            if (u.cols() && tgt.dim(k)) sys.add_constraint({{id(tgt.dim(k)), ids[k - lo], u}});
        }
    return sys.sample(rng);
}

// Random rows stacked with vertical chain maps whose consecutive composites vanish.
template <class F>
DoubleComplex<F> chain_map_fill(const F& f, const Window& w, std::size_t max_dim, Rng& rng) {
    DoubleComplex<F> c(f);
    c.set_window(w);
    std::vector<int> all;
    for (int r = w.r0; r <= w.r1; ++r) all.push_back(r);
    std::vector<ChainComplex<F>> rows;
    for (int i = w.i0; i <= w.i1; ++i) {
        rows.push_back(random_chain(f, w.r0, w.r1, max_dim, rng, all, 35));
        place_row(c, i, rows.back());
    }
    std::vector<Matrix<F>> prev;
    for (int i = w.i0; i < w.i1; ++i) {
        auto& s = rows[static_cast<std::size_t>(i - w.i0)];
        auto& t = rows[static_cast<std::size_t>(i - w.i0 + 1)];
        auto v = random_chain_map(s, t, rng, prev.empty() ? nullptr : &prev, w.r0, w.r1);
        for (int r = w.r0; r <= w.r1; ++r) c.set_dv({i, r}, v[static_cast<std::size_t>(r - w.r0)]);
        prev = v;
    }
    return c;
}

// Sum of staircases joining the given non-exact lines (every neighbouring
// pair, other pairs at random), extended by random elementary blocks.
template <class F>
DoubleComplex<F> nonexact_lines(const F& f, const Window& w, const std::vector<Line>& lines, std::size_t max_dim,
                                Rng& rng, std::size_t noise_blocks = 2) {
    DoubleComplex<F> c(f);
    c.set_window(w);
    auto order_pair = [&](Line a, Line b) {
        if (a.is_row && b.is_row) return a.index > b.index ? std::make_pair(a, b) : std::make_pair(b, a);
        if (!a.is_row && !b.is_row) return a.index < b.index ? std::make_pair(a, b) : std::make_pair(b, a);
        return rng.coin() ? std::make_pair(a, b) : std::make_pair(b, a);
    };
    auto fits = [&](const DoubleComplex<F>& s) {
        for (Position p : s.support())
            if (!w.contains(p)) return false;
        return true;
    };
    for (std::size_t a = 0; a < lines.size(); ++a)
        for (std::size_t b = a + 1; b < lines.size(); ++b) {
            if (b != a + 1 && !rng.coin(50)) continue;
            std::size_t d = rng.range(1, std::max<std::size_t>(1, max_dim / 2));
            for (int attempt = 0; attempt < 30; ++attempt) {
                auto [lo, up] = order_pair(lines[a], lines[b]);
                int free = lo.is_row ? w.r0 + static_cast<int>(rng.below(static_cast<std::size_t>(w.r1 - w.r0 + 1)))
                                     : w.i0 + static_cast<int>(rng.below(static_cast<std::size_t>(w.i1 - w.i0 + 1)));
                try {
                    auto s = staircase_between(f, lo, up, free, d);
                    bool room = true;
                    for (Position p : s.support())
                        if (c.dim(p) + d > max_dim) room = false;
                    if (fits(s) && room) {
                        c = direct_sum(c, s);
                        break;
                    }
                } catch (const Error&) {
                }
            }
        }
    DoubleComplex<F> noise(f);
    for (std::size_t k = 0; k < noise_blocks; ++k) {
        if (w.i1 - w.i0 < 1 || w.r1 - w.r0 < 1) break;
        Position anchor{w.i0 + static_cast<int>(rng.below(static_cast<std::size_t>(w.i1 - w.i0))),
                        w.r0 + static_cast<int>(rng.below(static_cast<std::size_t>(w.r1 - w.r0)))};
        bool room = true;
        for (Position p : {anchor, anchor.right(), anchor.down(), anchor.down().right()})
            if (c.dim(p) + noise.dim(p) + 1 > max_dim) room = false;
        if (room) noise = direct_sum(noise, elementary(f, anchor, 1));
    }
    DoubleComplex<F> out = noise.support().empty() ? c : random_extension(c, noise, rng).total;
    out.set_window(w);
    return conjugate(out, rng);
}

// The two-row input of the snake construction: X in row 1, Y in row 2, columns 1..3.
template <class F>
DoubleComplex<F> snake_instance(const F& f, std::size_t max_dim, Rng& rng) {
    auto x = random_chain(f, 1, 3, max_dim, rng, {1});
    auto y = random_chain(f, 1, 3, max_dim, rng, {3});
    auto v = random_chain_map(x, y, rng, nullptr, 1, 3);
    DoubleComplex<F> c(f);
    place_row(c, 1, x);
    place_row(c, 2, y);
    for (int k = 1; k <= 3; ++k) c.set_dv({1, k}, v[static_cast<std::size_t>(k - 1)]);
    c.set_window({1, 2, 1, 3});
    return c;
}

// Rows 1..3, columns 1..3: the first row is the kernel row of a random chain
// map between two exact rows. In the augmented form the middle row is also
// exact at its last term and the map is onto in the first column.
template <class F>
DoubleComplex<F> sharp_instance(const F& f, std::size_t max_dim, Rng& rng, bool augmented) {
    for (;;) {
        auto mid = random_chain(f, 1, 3, max_dim, rng, augmented ? std::vector<int>{} : std::vector<int>{3});
        auto bot = random_chain(f, 1, 3, max_dim, rng, {3});
        auto v = random_chain_map(mid, bot, rng, nullptr, 1, 3);
        if (augmented && rank(v[0]) != bot.dim(1)) continue;
        DoubleComplex<F> c(f);
        place_row(c, 2, mid);
        place_row(c, 3, bot);
        for (int k = 1; k <= 3; ++k) c.set_dv({2, k}, v[static_cast<std::size_t>(k - 1)]);
        c.set_window({2, 3, 1, 3});
        auto out = complete_with_kercoker(c, Side::top);
        out.set_window({0, 4, 0, 4});
        return out;
    }
}

enum class GeneratorMode { tensor, ex_extensions, chain_map_fill, snake_instance, sharp3x3_instance, nonexact_rows };

inline const char* to_string(GeneratorMode m) {
    switch (m) {
        case GeneratorMode::tensor: return "tensor";
        case GeneratorMode::ex_extensions: return "ex-extensions";
        case GeneratorMode::chain_map_fill: return "chain-map-fill";
        case GeneratorMode::snake_instance: return "snake-instance";
        case GeneratorMode::sharp3x3_instance: return "sharp3x3-instance";
        case GeneratorMode::nonexact_rows: return "nonexact-rows";
    }
    return "?";
}

struct GeneratorSpec {
    std::uint64_t seed = 1;
    Window window{0, 4, 0, 4};
    std::size_t max_dim = 4;
    GeneratorMode mode = GeneratorMode::tensor;
    bool rows_exact = false;     // tensor
    bool cols_exact = false;     // tensor
    std::size_t count = 3;       // ex-extensions
    bool augmented = false;      // sharp3x3-instance
    std::vector<Line> lines;     // nonexact-rows (rows and/or columns)
};

// Iterated random extensions of `count` elementary blocks; returns the block list too.
template <class F>
DoubleComplex<F> ex_extensions(const F& f, const Window& w, std::size_t count, std::size_t max_dim, Rng& rng,
                               std::vector<std::pair<Position, std::size_t>>* blocks = nullptr) {
    DoubleComplex<F> c(f);
    c.set_window(w);
    for (std::size_t k = 0; k < count; ++k) {
        for (int attempt = 0; attempt < 50; ++attempt) {
            Position anchor{w.i0 + static_cast<int>(rng.below(static_cast<std::size_t>(std::max(1, w.i1 - w.i0)))),
                            w.r0 + static_cast<int>(rng.below(static_cast<std::size_t>(std::max(1, w.r1 - w.r0))))};
            std::size_t d = rng.range(1, std::max<std::size_t>(1, max_dim / 2));
            bool room = true;
            for (Position p : {anchor, anchor.right(), anchor.down(), anchor.down().right()})
                if (c.dim(p) + d > max_dim) room = false;
            if (!room) continue;
            auto e = elementary(f, anchor, d);
            c = rng.coin() ? random_extension(c, e, rng).total : random_extension(e, c, rng).total;
            if (blocks) blocks->push_back({anchor, d});
            break;
        }
    }
    c.set_window(w);
    return conjugate(c, rng);
}

template <class F>
DoubleComplex<F> generate(const F& f, const GeneratorSpec& spec) {
    Rng rng(spec.seed);
    const Window& w = spec.window;
    switch (spec.mode) {
        case GeneratorMode::tensor: {
            std::size_t pd = std::max<std::size_t>(1, spec.max_dim >= 4 ? 2 : 1);
            std::vector<int> prow, qcol;
            for (int i = w.i0; i <= w.i1; ++i) prow.push_back(i);
            for (int r = w.r0; r <= w.r1; ++r) qcol.push_back(r);
            auto p = random_chain(f, w.i0, w.i1, pd, rng, spec.cols_exact ? std::vector<int>{} : prow);
            auto q = random_chain(f, w.r0, w.r1, pd, rng, spec.rows_exact ? std::vector<int>{} : qcol);
            auto c = tensor(p, q);
            c.set_window(w);
            return conjugate(c, rng);
        }
        case GeneratorMode::ex_extensions: return ex_extensions(f, w, spec.count, spec.max_dim, rng);
        case GeneratorMode::chain_map_fill: return chain_map_fill(f, w, spec.max_dim, rng);
        case GeneratorMode::snake_instance: return snake_instance(f, spec.max_dim, rng);
        case GeneratorMode::sharp3x3_instance: return sharp_instance(f, spec.max_dim, rng, spec.augmented);
        case GeneratorMode::nonexact_rows: return nonexact_lines(f, w, spec.lines, spec.max_dim, rng);
    }
    throw Error("unknown generator mode");
}


struct ElementaryBlock {
    Position anchor;
    std::size_t dim = 0;
    bool operator==(const ElementaryBlock&) const = default;
};

template <class F>
DoubleComplex<F> elementary(const F& f, const ElementaryBlock& b) {
    return elementary(f, b.anchor, b.dim);
}

// One peeling step: the block split off at `corner` and the total dimension
// before and after; kernel_exact records that the kernel complex is again
// exact in every row and column.
struct FxStep {
    Position corner;
    std::size_t dim_before = 0, dim_after = 0;
    bool kernel_exact = false;
};

struct FxDecomposition {
    std::vector<ElementaryBlock> blocks;
    std::vector<FxStep> certificate;
};

namespace detail {

// Matrix of m restricted to Ker-bases: rows of `src` and `tgt` are RREF bases.
template <class F>
Matrix<F> restrict_to(const Matrix<F>& m, const Subspace<F>& src, const Subspace<F>& tgt) {
    Matrix<F> img = m * src.basis().transpose();
    if (!tgt.contains_rows(img.transpose())) throw InternalCheckFailed("restriction leaves the kernel");
    Matrix<F> out(m.field(), tgt.dim(), src.dim());
    for (std::size_t j = 0; j < tgt.dim(); ++j)
        for (std::size_t k = 0; k < src.dim(); ++k) out(j, k) = img(tgt.pivots()[j], k);
    return out;
}

}  // namespace detail

// Peels elementary blocks off a finite complex that is exact in every row and
// column. Each step takes the lexicographically last support position D, maps
// the complex onto the block with D in its lower-right corner (A -> D by the
// diagonal composite, D.up -> D by dv, D.left -> D by dh) and continues with
// the kernel.
template <class F>
FxDecomposition decompose_fx(DoubleComplex<F> c) {
    if (!validate(c).valid()) throw PreconditionUnmet("input is not a double complex");
    if (!exactness_profile(c).all_exact()) throw NotExact("input is not exact in every row and column");
    const F& f = c.field();
    FxDecomposition out;
    while (c.total_dim() > 0) {
        auto sup = c.support();
        Position d = *std::max_element(sup.begin(), sup.end(),
                                       [](Position a, Position b) { return std::pair(a.i, a.r) < std::pair(b.i, b.r); });
        CornerContext<F> ctx(c);
        if (ctx.object(d, CornerKind::receptor)->dim() != 0)
            throw InternalCheckFailed("receptor at " + d.to_string() + " is nonzero");
        Position a = d.up().left(), b = d.up(), cc = d.left();
        std::map<Position, Matrix<F>> phi{{a, c.dv(b) * c.dh(a)}, {b, c.dv(b)}, {cc, c.dh(cc)},
                                          {d, Matrix<F>::identity(f, c.dim(d))}};
        for (const auto& [p, m] : phi)
            if (rank(m) != c.dim(d)) throw InternalCheckFailed("map onto the block is not onto at " + p.to_string());
        std::map<Position, Subspace<F>> ker;
        for (Position p : sup) ker[p] = phi.count(p) ? kernel(phi[p]) : Subspace<F>::full(f, c.dim(p));
        for (Position p : {a, b, cc})
            if (!ker.count(p)) ker[p] = Subspace<F>::full(f, 0);
        DoubleComplex<F> k(f);
        k.set_window(c.window());
        for (const auto& [p, s] : ker)
            if (s.dim()) k.set_dim(p, s.dim());
        for (const auto& [p, s] : ker)
            for (Direction dir : {Direction::vertical, Direction::horizontal}) {
                Position t = step(p, dir);
                if (!s.dim() || !ker.count(t) || !ker[t].dim()) continue;
                k.set_d(p, dir, detail::restrict_to(c.d(p, dir), s, ker[t]));
            }
        FxStep st{d, c.total_dim(), k.total_dim(), false};
        st.kernel_exact = validate(k).valid() && exactness_profile(k).all_exact();
        if (!st.kernel_exact) throw InternalCheckFailed("kernel complex after peeling " + d.to_string() + " is not exact");
        if (st.dim_after + 4 * c.dim(d) != st.dim_before) throw InternalCheckFailed("dimension count after peeling");
        out.blocks.push_back({a, c.dim(d)});
        out.certificate.push_back(st);
        c = std::move(k);
    }
    return out;
}

}  // namespace salamander
