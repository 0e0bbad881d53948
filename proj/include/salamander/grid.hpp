#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <string>
#include <vector>

#include "subquotient.hpp"

namespace salamander {

// Rows increase downward, columns to the right.
struct Position {
    int i = 0;
    int r = 0;

    auto operator<=>(const Position&) const = default;

    Position operator+(const Position& o) const { return {i + o.i, r + o.r}; }
    Position operator-(const Position& o) const { return {i - o.i, r - o.r}; }
    Position up() const { return {i - 1, r}; }
    Position down() const { return {i + 1, r}; }
    Position left() const { return {i, r - 1}; }
    Position right() const { return {i, r + 1}; }

    std::string to_string() const { return "(" + std::to_string(i) + "," + std::to_string(r) + ")"; }
};

enum class Direction { horizontal, vertical };

inline Position step(Position p, Direction d) { return d == Direction::horizontal ? p.right() : p.down(); }
inline const char* to_string(Direction d) { return d == Direction::horizontal ? "h" : "v"; }

struct Window {
    int i0 = 0, i1 = -1, r0 = 0, r1 = -1;

    bool empty() const { return i0 > i1 || r0 > r1; }
    bool contains(Position p) const { return !empty() && p.i >= i0 && p.i <= i1 && p.r >= r0 && p.r <= r1; }
    void include(Position p) {
        if (empty()) {
            i0 = i1 = p.i;
            r0 = r1 = p.r;
            return;
        }
        i0 = std::min(i0, p.i);
        i1 = std::max(i1, p.i);
        r0 = std::min(r0, p.r);
        r1 = std::max(r1, p.r);
    }
    Window widened(int k) const { return empty() ? *this : Window{i0 - k, i1 + k, r0 - k, r1 + k}; }
    std::vector<Position> positions() const {
        std::vector<Position> out;
        for (int i = i0; i <= i1; ++i)
            for (int r = r0; r <= r1; ++r) out.push_back({i, r});
        return out;
    }
    bool operator==(const Window&) const = default;
};

// Finite-support double complex. dv(i,r): A(i,r) -> A(i+1,r); dh(i,r): A(i,r) -> A(i,r+1).
// Missing objects are zero and missing matrices are zero matrices.
template <class F>
class DoubleComplex {
public:
    using matrix_type = Matrix<F>;

    explicit DoubleComplex(const F& f = F()) : f_(f) {}

    const F& field() const { return f_; }
    const Window& window() const { return window_; }
    void extend_window(Position p) { window_.include(p); }
    void set_window(const Window& w) {
        window_ = w;
        for (const auto& [p, d] : dims_) window_.include(p);
    }

    std::size_t dim(Position p) const {
        auto it = dims_.find(p);
        return it == dims_.end() ? 0 : it->second;
    }
    const std::map<Position, std::size_t>& dims() const { return dims_; }
    const std::map<Position, Matrix<F>>& dv_map() const { return dv_; }
    const std::map<Position, Matrix<F>>& dh_map() const { return dh_; }

    void set_dim(Position p, std::size_t d) {
        if (d != dim(p)) {
            dv_.erase(p);
            dh_.erase(p);
            dv_.erase(p.up());
            dh_.erase(p.left());
        }
        if (d == 0)
            dims_.erase(p);
        else
            dims_[p] = d;
        window_.include(p);
    }

    Matrix<F> dv(Position p) const { return lookup(dv_, p, p.down()); }
    Matrix<F> dh(Position p) const { return lookup(dh_, p, p.right()); }
    Matrix<F> d(Position p, Direction dir) const { return dir == Direction::horizontal ? dh(p) : dv(p); }

    void set_dv(Position p, const Matrix<F>& m) { store(dv_, p, p.down(), m, "dv"); }
    void set_dh(Position p, const Matrix<F>& m) { store(dh_, p, p.right(), m, "dh"); }
    void set_d(Position p, Direction dir, const Matrix<F>& m) {
        dir == Direction::horizontal ? set_dh(p, m) : set_dv(p, m);
    }

    // Composite of the differentials along a right/down path of the given lengths.
    Matrix<F> path_map(Position from, int down, int right) const {
        Matrix<F> m = Matrix<F>::identity(f_, dim(from));
        Position p = from;
        for (int k = 0; k < right; ++k, p = p.right()) m = dh(p) * m;
        for (int k = 0; k < down; ++k, p = p.down()) m = dv(p) * m;
        return m;
    }

    std::vector<Position> support() const {
        std::vector<Position> out;
        for (const auto& [p, d] : dims_) out.push_back(p);
        return out;
    }
    std::size_t total_dim() const {
        std::size_t s = 0;
        for (const auto& [p, d] : dims_) s += d;
        return s;
    }

    bool operator==(const DoubleComplex& o) const {
        return f_ == o.f_ && dims_ == o.dims_ && dv_ == o.dv_ && dh_ == o.dh_;
    }

private:
    Matrix<F> lookup(const std::map<Position, Matrix<F>>& m, Position s, Position t) const {
        auto it = m.find(s);
        if (it != m.end()) return it->second;
        return Matrix<F>(f_, dim(t), dim(s));
    }
    void store(std::map<Position, Matrix<F>>& m, Position s, Position t, const Matrix<F>& a, const char* name) {
        if (a.rows() != dim(t) || a.cols() != dim(s))
            throw Error(std::string(name) + " at " + s.to_string() + " has shape " + a.shape() + ", expected " +
                        std::to_string(dim(t)) + "x" + std::to_string(dim(s)));
        if (a.is_zero())
            m.erase(s);
        else
            m[s] = a;
    }

    F f_;
    Window window_;
    std::map<Position, std::size_t> dims_;
    std::map<Position, Matrix<F>> dv_;
    std::map<Position, Matrix<F>> dh_;
};

enum class SquareMode { commuting, anticommuting };

struct ValidationIssue {
    enum Kind { vertical_square, horizontal_square, square } kind;
    Position pos;

    std::string to_string() const {
        const char* names[] = {"dv*dv != 0", "dh*dh != 0", "square fails"};
        return std::string(names[kind]) + " at " + pos.to_string();
    }
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool valid() const { return issues.empty(); }
};

template <class F>
ValidationReport validate(const DoubleComplex<F>& c, SquareMode mode = SquareMode::commuting) {
    ValidationReport rep;
    for (Position p : c.window().positions()) {
        if (!(c.dv(p.down()) * c.dv(p)).is_zero()) rep.issues.push_back({ValidationIssue::vertical_square, p});
        if (!(c.dh(p.right()) * c.dh(p)).is_zero()) rep.issues.push_back({ValidationIssue::horizontal_square, p});
        auto a = c.dh(p.down()) * c.dv(p);
        auto b = c.dv(p.right()) * c.dh(p);
        bool ok = mode == SquareMode::commuting ? a == b : (a + b).is_zero();
        if (!ok) rep.issues.push_back({ValidationIssue::square, p});
    }
    return rep;
}

template <class F>
bool is_valid(const DoubleComplex<F>& c) {
    return validate(c).valid();
}

template <class F>
DoubleComplex<F> anticommute_toggle(const DoubleComplex<F>& c) {
    DoubleComplex<F> out = c;
    for (const auto& [p, m] : c.dh_map())
        if (p.i % 2 != 0) out.set_dh(p, -m);
    return out;
}

template <class F>
DoubleComplex<F> transpose(const DoubleComplex<F>& c) {
    DoubleComplex<F> out(c.field());
    auto flip = [](Position p) { return Position{p.r, p.i}; };
    if (!c.window().empty()) {
        out.extend_window(flip({c.window().i0, c.window().r0}));
        out.extend_window(flip({c.window().i1, c.window().r1}));
    }
    for (const auto& [p, d] : c.dims()) out.set_dim(flip(p), d);
    for (const auto& [p, m] : c.dv_map()) out.set_dh(flip(p), m);
    for (const auto& [p, m] : c.dh_map()) out.set_dv(flip(p), m);
    return out;
}

// Dual complex: (i,r) -> (-i,-r), every matrix transposed.
template <class F>
DoubleComplex<F> reverse(const DoubleComplex<F>& c) {
    DoubleComplex<F> out(c.field());
    auto neg = [](Position p) { return Position{-p.i, -p.r}; };
    if (!c.window().empty()) {
        out.extend_window(neg({c.window().i0, c.window().r0}));
        out.extend_window(neg({c.window().i1, c.window().r1}));
    }
    for (const auto& [p, d] : c.dims()) out.set_dim(neg(p), d);
    for (const auto& [p, m] : c.dv_map()) out.set_dv(neg(p.down()), m.transpose());
    for (const auto& [p, m] : c.dh_map()) out.set_dh(neg(p.right()), m.transpose());
    return out;
}

template <class F>
DoubleComplex<F> pad(const DoubleComplex<F>& c, int k = 1) {
    DoubleComplex<F> out = c;
    out.set_window(c.window().widened(k));
    return out;
}

enum class Side { top, bottom, left, right };

// Adds a row (or column) of kernels of the outgoing boundary maps (top/left)
// or cokernels of the incoming boundary maps (bottom/right).
template <class F>
DoubleComplex<F> complete_with_kercoker(const DoubleComplex<F>& c, Side side) {
    const F& f = c.field();
    DoubleComplex<F> out = c;
    const Window& w = c.window();
    if (w.empty()) return out;
    bool rows = side == Side::top || side == Side::bottom;
    int lo = rows ? w.r0 : w.i0, hi = rows ? w.r1 : w.i1;
    auto at = [&](int line, int k) { return rows ? Position{line, k} : Position{k, line}; };
    int edge = side == Side::top ? w.i0 : side == Side::bottom ? w.i1 : side == Side::left ? w.r0 : w.r1;
    int fresh = (side == Side::top || side == Side::left) ? edge - 1 : edge + 1;
    Direction across = rows ? Direction::vertical : Direction::horizontal;
    Direction along = rows ? Direction::horizontal : Direction::vertical;

    std::vector<SubquotientPtr<F>> sq;
    for (int k = lo; k <= hi; ++k) {
        Position p = at(edge, k);
        std::size_t n = c.dim(p);
        if (side == Side::top || side == Side::left)
            sq.push_back(share(Subquotient<F>(kernel(c.d(p, across)), Subspace<F>::zero(f, n))));
        else {
            Position src = rows ? p.up() : p.left();
            sq.push_back(share(Subquotient<F>(Subspace<F>::full(f, n), image(c.d(src, across)))));
        }
    }
    for (int k = lo; k <= hi; ++k) {
        auto& s = *sq[k - lo];
        out.set_dim(at(fresh, k), s.dim());
    }
    for (int k = lo; k <= hi; ++k) {
        auto& s = *sq[k - lo];
        Position p = at(edge, k);
        if (side == Side::top || side == Side::left)
            out.set_d(at(fresh, k), across, s.coord_basis().transpose());
        else
            out.set_d(p, across, s.coordinates(Matrix<F>::identity(f, s.ambient())).transpose());
        if (k < hi) out.set_d(at(fresh, k), along, induced_map(c.d(p, along), sq[k - lo], sq[k - lo + 1]).matrix);
    }
    return out;
}

struct ExactnessFlags {
    bool row = true;
    bool col = true;
};

struct ExactnessProfile {
    Window window;
    std::map<Position, ExactnessFlags> flags;

    bool row_exact(Position p) const {
        auto it = flags.find(p);
        return it == flags.end() || it->second.row;
    }
    bool col_exact(Position p) const {
        auto it = flags.find(p);
        return it == flags.end() || it->second.col;
    }
    bool row_exact_everywhere(int i) const {
        for (const auto& [p, fl] : flags)
            if (p.i == i && !fl.row) return false;
        return true;
    }
    bool col_exact_everywhere(int r) const {
        for (const auto& [p, fl] : flags)
            if (p.r == r && !fl.col) return false;
        return true;
    }
    bool rows_exact() const {
        for (const auto& [p, fl] : flags)
            if (!fl.row) return false;
        return true;
    }
    bool cols_exact() const {
        for (const auto& [p, fl] : flags)
            if (!fl.col) return false;
        return true;
    }
    bool all_exact() const { return rows_exact() && cols_exact(); }
    std::vector<int> nonexact_rows() const {
        std::vector<int> out;
        for (const auto& [p, fl] : flags)
            if (!fl.row && (out.empty() || out.back() != p.i)) out.push_back(p.i);
        return out;
    }
    std::vector<int> nonexact_cols() const {
        std::vector<int> out;
        for (const auto& [p, fl] : flags)
            if (!fl.col) out.push_back(p.r);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

template <class F>
bool row_exact_at(const DoubleComplex<F>& c, Position p) {
    return kernel(c.dh(p)) == image(c.dh(p.left()));
}

template <class F>
bool col_exact_at(const DoubleComplex<F>& c, Position p) {
    return kernel(c.dv(p)) == image(c.dv(p.up()));
}

template <class F>
ExactnessProfile exactness_profile(const DoubleComplex<F>& c) {
    ExactnessProfile prof;
    prof.window = c.window();
    for (Position p : c.window().positions()) prof.flags[p] = {row_exact_at(c, p), col_exact_at(c, p)};
    return prof;
}

struct WeakBoundedness {
    bool holds = true;
    // Donors and receptors vanish at every position with |i| + |r| > bound.
    int bound = 0;
};

template <class F>
WeakBoundedness is_weakly_bounded(const DoubleComplex<F>& c) {
    WeakBoundedness wb;
    for (const auto& [p, d] : c.dims()) wb.bound = std::max(wb.bound, std::abs(p.i) + std::abs(p.r));
    return wb;
}

}  // namespace salamander
