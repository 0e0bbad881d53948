#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corners.hpp"

namespace salamander {

struct PathStep {
    enum class Kind { intramural, inverse_intramural, extramural, inverse_extramural };

    Kind kind;
    Position at;
    CornerKind from = CornerKind::receptor;
    CornerKind to = CornerKind::receptor;
    Direction dir = Direction::horizontal;

    static PathStep intra(Position p, CornerKind f, CornerKind t) { return {Kind::intramural, p, f, t}; }
    static PathStep inverse_intra(Position p, CornerKind f, CornerKind t) {
        return {Kind::inverse_intramural, p, f, t};
    }
    static PathStep ext(Position p, Direction d) { return {Kind::extramural, p, CornerKind::donor, CornerKind::receptor, d}; }
    static PathStep inverse_ext(Position p, Direction d) {
        return {Kind::inverse_extramural, p, CornerKind::donor, CornerKind::receptor, d};
    }

    CornerRef source() const {
        switch (kind) {
            case Kind::intramural: return {at, from};
            case Kind::inverse_intramural: return {at, to};
            case Kind::extramural: return {at, CornerKind::donor};
            case Kind::inverse_extramural: return {step(at, dir), CornerKind::receptor};
        }
        return {at, from};
    }
    CornerRef target() const {
        switch (kind) {
            case Kind::intramural: return {at, to};
            case Kind::inverse_intramural: return {at, from};
            case Kind::extramural: return {step(at, dir), CornerKind::receptor};
            case Kind::inverse_extramural: return {at, CornerKind::donor};
        }
        return {at, to};
    }
    std::string kind_name() const {
        switch (kind) {
            case Kind::intramural: return "intramural";
            case Kind::inverse_intramural: return "inverse-intramural";
            case Kind::extramural: return "extramural";
            case Kind::inverse_extramural: return "inverse-extramural";
        }
        return "?";
    }
    TraceStep trace() const { return {kind_name(), at, source().label() + " -> " + target().label()}; }
};

template <class F>
struct PathResult {
    SubquotientMap<F> map;
    CornerRef start;
    CornerRef end;
    std::vector<PathStep> steps;
    std::vector<TraceStep> trace;
};

template <class F>
SubquotientMap<F> path_step_map(CornerContext<F>& ctx, const PathStep& s, std::size_t k) {
    using K = PathStep::Kind;
    switch (s.kind) {
        case K::intramural: return ctx.natural(s.at, s.from, s.to);
        case K::extramural: return ctx.extramural(s.at, s.dir);
        case K::inverse_intramural:
        case K::inverse_extramural: {
            auto m = s.kind == K::inverse_intramural ? ctx.natural(s.at, s.from, s.to) : ctx.extramural(s.at, s.dir);
            if (!is_iso(m)) throw NotInvertibleAtStep(k, s.trace().to_string() + " inverts a non-isomorphism");
            return invert(m);
        }
    }
    throw InternalCheckFailed("unknown path step");
}

template <class F>
PathResult<F> compose_path(CornerContext<F>& ctx, CornerRef start, const std::vector<PathStep>& steps) {
    PathResult<F> out{identity_map(ctx.object(start)), start, start, steps, {}};
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const auto& s = steps[k];
        if (s.source() != out.end)
            throw SourceTargetMismatch("step " + std::to_string(k) + " starts at " + s.source().label() +
                                       " but the path is at " + out.end.label());
        out.map = compose(out.map, path_step_map(ctx, s, k));
        out.end = s.target();
        out.trace.push_back(s.trace());
    }
    return out;
}

template <class F>
PathResult<F> compose_path(const DoubleComplex<F>& c, CornerRef start, const std::vector<PathStep>& steps) {
    CornerContext<F> ctx(c);
    return compose_path(ctx, start, steps);
}

inline int corner_rank(CornerKind k) {
    switch (k) {
        case CornerKind::receptor: return 0;
        case CornerKind::horizontal:
        case CornerKind::vertical: return 1;
        case CornerKind::donor: return 2;
    }
    return 0;
}

// Steps of the natural map between two objects at one position.
inline std::vector<PathStep> intramural_steps(Position p, CornerKind from, CornerKind to) {
    if (from == to) return {};
    if (from == CornerKind::receptor && to == CornerKind::donor)
        return {PathStep::intra(p, from, CornerKind::horizontal), PathStep::intra(p, CornerKind::horizontal, to)};
    if (corner_rank(from) >= corner_rank(to)) throw Error(std::string("no natural map ") + to_string(from) + " -> " + to_string(to));
    return {PathStep::intra(p, from, to)};
}

// The natural map a -> b for objects at one position or at the two ends of an arrow.
inline std::vector<PathStep> natural_steps(CornerRef a, CornerRef b) {
    if (a.pos == b.pos) return intramural_steps(a.pos, a.kind, b.kind);
    Direction d;
    if (b.pos == a.pos.right())
        d = Direction::horizontal;
    else if (b.pos == a.pos.down())
        d = Direction::vertical;
    else
        throw Error("no natural map from " + a.label() + " to " + b.label());
    auto s = intramural_steps(a.pos, a.kind, CornerKind::donor);
    s.push_back(PathStep::ext(a.pos, d));
    for (auto& t : intramural_steps(b.pos, CornerKind::receptor, b.kind)) s.push_back(t);
    return s;
}

template <class F>
SequenceReport<F> build_sequence(CornerContext<F>& ctx, const std::string& name, const std::vector<CornerRef>& refs) {
    SequenceReport<F> rep;
    rep.name = name;
    for (const auto& r : refs) rep.add_term(r, ctx.object(r));
    for (std::size_t k = 0; k + 1 < refs.size(); ++k) {
        auto p = compose_path(ctx, refs[k], natural_steps(refs[k], refs[k + 1]));
        rep.maps.push_back(p.map);
        for (auto& t : p.trace) rep.trace.push_back(t);
    }
    rep.evaluate();
    return rep;
}

// Rows and columns allowed to be non-exact.
struct LineSet {
    std::set<int> rows, cols;
    bool row(int i) const { return rows.count(i) > 0; }
    bool col(int r) const { return cols.count(r) > 0; }
};

enum class Walk { down_left, up_right };

struct WalkPlan {
    std::vector<PathStep> steps;
    CornerRef end;
    bool converted = false;
};

// Extramural isomorphisms from a donor or receptor until a vertical move
// reaches a line of `lines.rows` or a horizontal move one of `lines.cols`;
// then optionally the intramural isomorphism to the homology along that line.
inline WalkPlan plan_walk(CornerRef start, Walk w, const LineSet& lines, bool convert, int guard = 256) {
    WalkPlan plan{{}, start, false};
    CornerRef cur = start;
    bool on_row = false, stopped = false;
    for (int g = 0; g < guard && !stopped; ++g) {
        PathStep s = cur.kind == CornerKind::donor
                         ? PathStep::ext(cur.pos, w == Walk::down_left ? Direction::vertical : Direction::horizontal)
                         : (w == Walk::down_left ? PathStep::inverse_ext(cur.pos.left(), Direction::horizontal)
                                                 : PathStep::inverse_ext(cur.pos.up(), Direction::vertical));
        if (cur.kind != CornerKind::donor && cur.kind != CornerKind::receptor)
            throw Error("walks start at donors or receptors");
        bool vertical_move = (cur.kind == CornerKind::donor) == (w == Walk::down_left);
        plan.steps.push_back(s);
        cur = s.target();
        if (vertical_move && lines.row(cur.pos.i)) {
            on_row = true;
            stopped = true;
        } else if (!vertical_move && lines.col(cur.pos.r)) {
            stopped = true;
        }
    }
    if (!stopped) throw InternalCheckFailed("walk from " + start.label() + " found no line to stop at");
    if (convert) {
        CornerKind h = on_row ? CornerKind::horizontal : CornerKind::vertical;
        if (cur.kind == CornerKind::receptor)
            plan.steps.push_back(PathStep::intra(cur.pos, CornerKind::receptor, h));
        else
            plan.steps.push_back(PathStep::inverse_intra(cur.pos, h, CornerKind::donor));
        cur = plan.steps.back().target();
        plan.converted = true;
    }
    plan.end = cur;
    return plan;
}

template <class F>
struct IsoWitness {
    std::string claim;
    CornerRef from;
    CornerRef to;
    SubquotientMap<F> map;
    bool iso = false;
    std::optional<SubquotientMap<F>> inverse;
    std::vector<TraceStep> trace;
};

template <class F>
IsoWitness<F> witness(const std::string& claim, const PathResult<F>& p) {
    IsoWitness<F> w{claim, p.start, p.end, p.map, is_iso(p.map), std::nullopt, p.trace};
    if (w.iso) w.inverse = invert(p.map);
    return w;
}

template <class F>
IsoWitness<F> path_witness(CornerContext<F>& ctx, CornerRef start, const std::vector<PathStep>& steps) {
    auto p = compose_path(ctx, start, steps);
    return witness(p.start.label() + " ≅ " + p.end.label(), p);
}

// Replaces term t of the report by the target of phi (an isomorphism out of
// the old term) and conjugates the adjacent maps.
template <class F>
void substitute(SequenceReport<F>& rep, std::size_t t, const PathResult<F>& phi) {
    if (!is_iso(phi.map))
        throw PreconditionUnmet("substitution " + phi.start.label() + " -> " + phi.end.label() + " is not invertible");
    auto inv = invert(phi.map);
    if (t > 0) rep.maps[t - 1] = compose(rep.maps[t - 1], phi.map);
    if (t < rep.maps.size()) rep.maps[t] = compose(inv, rep.maps[t]);
    rep.terms[t] = {phi.end.label(), phi.end, phi.map.target};
    rep.trace.push_back({"substitute", phi.start.pos, phi.start.label() + " ≅ " + phi.end.label()});
    for (const auto& s : phi.trace) rep.trace.push_back(s);
}

// ---------------------------------------------------------------------------
// Isomorphism criteria

template <class F>
IsoWitness<F> check_extramural_iso(CornerContext<F>& ctx, Position pos, Direction dir) {
    const auto& c = ctx.complex();
    Position b = step(pos, dir);
    bool ok = dir == Direction::horizontal ? row_exact_at(c, pos) && row_exact_at(c, b)
                                           : col_exact_at(c, pos) && col_exact_at(c, b);
    if (!ok)
        throw PreconditionUnmet(std::string(dir == Direction::horizontal ? "row" : "column") + " through " +
                                pos.to_string() + " is not exact at both ends of the arrow");
    return path_witness(ctx, {pos, CornerKind::donor}, {PathStep::ext(pos, dir)});
}

template <class F>
IsoWitness<F> check_extramural_iso(const DoubleComplex<F>& c, Position pos, Direction dir) {
    CornerContext<F> ctx(c);
    return check_extramural_iso(ctx, pos, dir);
}

enum class IntramuralCase { inter_iso_1, inter_iso_2, inter_iso_3, inter_iso_4, iso_plus_1, iso_plus_2 };

struct IntramuralClaim {
    CornerKind from1, to1, from2, to2;
};

inline IntramuralClaim intramural_claim(IntramuralCase k) {
    using K = CornerKind;
    switch (k) {
        case IntramuralCase::inter_iso_1: return {K::receptor, K::horizontal, K::vertical, K::donor};
        case IntramuralCase::inter_iso_2: return {K::receptor, K::vertical, K::horizontal, K::donor};
        case IntramuralCase::inter_iso_3: return {K::horizontal, K::donor, K::receptor, K::vertical};
        case IntramuralCase::inter_iso_4: return {K::vertical, K::donor, K::receptor, K::horizontal};
        case IntramuralCase::iso_plus_1: return {K::receptor, K::vertical, K::horizontal, K::donor};
        case IntramuralCase::iso_plus_2: return {K::receptor, K::horizontal, K::vertical, K::donor};
    }
    return {};
}

// First unmet hypothesis of the case at A = pos, or empty when all hold.
template <class F>
std::string intramural_hypothesis_failure(CornerContext<F>& ctx, Position a, IntramuralCase k) {
    const auto& c = ctx.complex();
    auto zero = [&](Position p) { return c.dim(p) == 0; };
    auto need = [&](bool ok, const std::string& what) { return ok ? std::string() : what; };
    switch (k) {
        case IntramuralCase::inter_iso_1: {
            Position b = a.down();
            if (!zero(a.left()) || !zero(b.left())) return "objects left of A and B must be zero";
            return need(row_exact_at(c, b), "row through B is not exact at B");
        }
        case IntramuralCase::inter_iso_2: {
            Position b = a.right();
            if (!zero(a.up()) || !zero(b.up())) return "objects above A and B must be zero";
            return need(col_exact_at(c, b), "column through B is not exact at B");
        }
        case IntramuralCase::inter_iso_3: {
            Position b = a.up();
            if (!zero(a.right()) || !zero(b.right())) return "objects right of A and B must be zero";
            return need(row_exact_at(c, b), "row through B is not exact at B");
        }
        case IntramuralCase::inter_iso_4: {
            Position b = a.left();
            if (!zero(a.down()) || !zero(b.down())) return "objects below A and B must be zero";
            return need(col_exact_at(c, b), "column through B is not exact at B");
        }
        case IntramuralCase::iso_plus_1:
            if (ctx.object(a.up(), CornerKind::donor)->dim()) return "donor above A is nonzero";
            return need(ctx.object(a.right(), CornerKind::receptor)->dim() == 0, "receptor right of A is nonzero");
        case IntramuralCase::iso_plus_2:
            if (ctx.object(a.left(), CornerKind::donor)->dim()) return "donor left of A is nonzero";
            return need(ctx.object(a.down(), CornerKind::receptor)->dim() == 0, "receptor below A is nonzero");
    }
    return "unknown case";
}

template <class F>
struct IntramuralIsoResult {
    IsoWitness<F> first;
    IsoWitness<F> second;
    bool holds() const { return first.iso && second.iso; }
};

// The two maps named by the case, without checking its hypotheses.
template <class F>
IntramuralIsoResult<F> designated_intramural_maps(CornerContext<F>& ctx, Position a, IntramuralCase k) {
    auto cl = intramural_claim(k);
    return {path_witness(ctx, {a, cl.from1}, {PathStep::intra(a, cl.from1, cl.to1)}),
            path_witness(ctx, {a, cl.from2}, {PathStep::intra(a, cl.from2, cl.to2)})};
}

template <class F>
IntramuralIsoResult<F> check_intramural_iso(CornerContext<F>& ctx, Position a, IntramuralCase k) {
    auto why = intramural_hypothesis_failure(ctx, a, k);
    if (!why.empty()) throw PreconditionUnmet(why);
    return designated_intramural_maps(ctx, a, k);
}

template <class F>
IntramuralIsoResult<F> check_intramural_iso(const DoubleComplex<F>& c, Position a, IntramuralCase k) {
    CornerContext<F> ctx(c);
    return check_intramural_iso(ctx, a, k);
}

// ---------------------------------------------------------------------------
// Sharp 3x3: rows 1..3 and columns 1..3, zeros around.

template <class F>
struct SharpReport {
    SequenceReport<F> first_row;
    std::vector<PathResult<F>> chains;
};

template <class F>
SubquotientPtr<F> whole(const F& f, std::size_t n) {
    return share(Subquotient<F>(Subspace<F>::full(f, n), Subspace<F>::zero(f, n)));
}

// A row of whole objects along row i, columns r0..r1, with the stored maps.
template <class F>
SequenceReport<F> object_row(const DoubleComplex<F>& c, const std::string& name, int i, int r0, int r1) {
    SequenceReport<F> rep;
    rep.name = name;
    const F& f = c.field();
    for (int r = r0; r <= r1; ++r) rep.add_term("A" + Position{i, r}.to_string(), whole(f, c.dim({i, r})));
    for (int r = r0; r < r1; ++r) rep.maps.push_back({rep.terms[r - r0].value, rep.terms[r - r0 + 1].value, c.dh({i, r})});
    rep.evaluate();
    return rep;
}

template <class F>
SharpReport<F> sharp_3x3(const DoubleComplex<F>& c, bool augmented) {
    if (!validate(c).valid()) throw PreconditionUnmet("input is not a double complex");
    for (Position p : c.support())
        if (p.i < 1 || p.i > 3 || p.r < 1 || p.r > 3) throw PreconditionUnmet("object outside rows 1..3, columns 1..3");
    for (int r = 1; r <= 3; ++r)
        for (int i = 1; i <= 2; ++i)
            if (!col_exact_at(c, {i, r}))
                throw PreconditionUnmet("column " + std::to_string(r) + " is not exact at row " + std::to_string(i));
    for (int i = 2; i <= 3; ++i)
        for (int r = 1; r <= 2; ++r)
            if (!row_exact_at(c, {i, r}))
                throw PreconditionUnmet("row " + std::to_string(i) + " is not exact at column " + std::to_string(r));
    if (augmented) {
        if (!row_exact_at(c, {2, 3})) throw PreconditionUnmet("row 2 is not exact at column 3");
        if (!col_exact_at(c, {3, 1})) throw PreconditionUnmet("column 1 is not exact at row 3");
    }
    CornerContext<F> ctx(c);
    using K = CornerKind;
    using S = PathStep;
    SharpReport<F> rep;
    rep.chains.push_back(compose_path(ctx, {{1, 1}, K::horizontal},
                                      {S::intra({1, 1}, K::horizontal, K::donor), S::inverse_intra({1, 1}, K::vertical, K::donor)}));
    rep.chains.push_back(compose_path(ctx, {{1, 2}, K::horizontal},
                                      {S::intra({1, 2}, K::horizontal, K::donor), S::ext({1, 2}, Direction::vertical),
                                       S::inverse_ext({2, 1}, Direction::horizontal),
                                       S::inverse_intra({2, 1}, K::vertical, K::donor)}));
    if (augmented)
        rep.chains.push_back(compose_path(
            ctx, {{1, 3}, K::horizontal},
            {S::intra({1, 3}, K::horizontal, K::donor), S::ext({1, 3}, Direction::vertical),
             S::inverse_ext({2, 2}, Direction::horizontal), S::ext({2, 2}, Direction::vertical),
             S::inverse_ext({3, 1}, Direction::horizontal), S::inverse_intra({3, 1}, K::vertical, K::donor)}));
    for (auto& ch : rep.chains) {
        if (!is_iso(ch.map) || ch.map.target->dim() != 0)
            throw InternalCheckFailed("iso chain from " + ch.start.label() + " does not reach a zero object");
    }
    rep.first_row = object_row(c, "first row", 1, 0, augmented ? 4 : 3);
    if (!rep.first_row.exact()) throw InternalCheckFailed("first row is not exact although every chain vanished");
    return rep;
}

// ---------------------------------------------------------------------------
// Snake: input rows 1 (X) and 2 (Y) over columns 1..3.

template <class F>
struct SnakeReport {
    DoubleComplex<F> extended;
    SequenceReport<F> sequence;  // K1 K2 K3 C1 C2 C3
    PathResult<F> connecting_chain;
    PathResult<F> k2_chain;
    PathResult<F> c2_chain;
    Matrix<F> connecting;  // K3 -> C1 on whole objects
    Matrix<F> oracle;      // by lifting
    bool oracle_agrees = false;
};

// Classical connecting map: lift through X2 -> X3, push down, pull back
// along Y1 -> Y2, project to the cokernel.
template <class F>
Matrix<F> lifting_connecting_map(const DoubleComplex<F>& two) {
    const F& f = two.field();
    auto v1 = two.dv({1, 1}), v3 = two.dv({1, 3}), v2 = two.dv({1, 2});
    auto x23 = two.dh({1, 2}), y12 = two.dh({2, 1});
    auto ker3 = kernel(v3);
    auto cok1 = Subquotient<F>(Subspace<F>::full(f, two.dim({2, 1})), image(v1));
    Matrix<F> out(f, cok1.dim(), ker3.dim());
    for (std::size_t a = 0; a < ker3.dim(); ++a) {
        auto k = ker3.basis().row(a).transpose();
        // solve x23 x = k
        auto sol = rref(hstack(x23, k));
        std::size_t n = x23.cols();
        Matrix<F> x(f, n, 1);
        for (std::size_t t = 0; t < sol.rank; ++t) {
            if (sol.pivots[t] == n) throw PreconditionUnmet("X2 -> X3 is not onto");
            x(sol.pivots[t], 0) = sol.matrix(t, n);
        }
        auto y2 = v2 * x;
        auto s2 = rref(hstack(y12, y2));
        std::size_t m = y12.cols();
        Matrix<F> y(f, m, 1);
        for (std::size_t t = 0; t < s2.rank; ++t) {
            if (s2.pivots[t] == m) throw InternalCheckFailed("pushed lift is not in the image of Y1");
            y(s2.pivots[t], 0) = s2.matrix(t, m);
        }
        auto cy = cok1.coordinates(y.transpose());
        for (std::size_t j = 0; j < cok1.dim(); ++j) out(j, a) = cy(0, j);
    }
    return out;
}

template <class F>
SnakeReport<F> snake(const DoubleComplex<F>& two) {
    if (!validate(two).valid()) throw PreconditionUnmet("input is not a double complex");
    for (Position p : two.support())
        if (p.i < 1 || p.i > 2 || p.r < 1 || p.r > 3) throw PreconditionUnmet("object outside rows 1..2, columns 1..3");
    const F& f = two.field();
    if (!row_exact_at(two, {1, 2})) throw PreconditionUnmet("top row is not exact at X2");
    if (!row_exact_at(two, {1, 3})) throw PreconditionUnmet("top row is not exact at X3");
    if (!row_exact_at(two, {2, 1})) throw PreconditionUnmet("bottom row is not exact at Y1");
    if (!row_exact_at(two, {2, 2})) throw PreconditionUnmet("bottom row is not exact at Y2");
    DoubleComplex<F> base = two;
    base.set_window({1, 2, 1, 3});
    auto ext = complete_with_kercoker(complete_with_kercoker(base, Side::top), Side::bottom);
    // X0 = Ker(X1 -> X2) and Y4 = Cok(Y2 -> Y3) make the rows exact at X1 and Y3.
    auto k0 = kernel(two.dh({1, 1}));
    ext.set_dim({1, 0}, k0.dim());
    ext.set_dh({1, 0}, k0.basis().transpose());
    Subquotient<F> c4(Subspace<F>::full(f, two.dim({2, 3})), image(two.dh({2, 2})));
    ext.set_dim({2, 4}, c4.dim());
    ext.set_dh({2, 3}, c4.coordinates(Matrix<F>::identity(f, c4.ambient())).transpose());
    ext.set_window({0, 3, 0, 4});
    if (!validate(ext).valid()) throw InternalCheckFailed("extended snake diagram is not a double complex");

    CornerContext<F> ctx(ext);
    using K = CornerKind;
    using S = PathStep;
    const auto V = Direction::vertical, H = Direction::horizontal;
    SnakeReport<F> rep{ext, {}, {}, {}, {}, Matrix<F>(), Matrix<F>(), false};
    rep.connecting_chain =
        compose_path(ctx, {{0, 3}, K::horizontal},
                     {S::intra({0, 3}, K::horizontal, K::donor), S::ext({0, 3}, V), S::inverse_ext({1, 2}, H),
                      S::ext({1, 2}, V), S::inverse_ext({2, 1}, H), S::ext({2, 1}, V),
                      S::intra({3, 1}, K::receptor, K::horizontal)});
    rep.k2_chain = compose_path(ctx, {{0, 2}, K::horizontal},
                                {S::intra({0, 2}, K::horizontal, K::donor), S::ext({0, 2}, V), S::inverse_ext({1, 1}, H),
                                 S::ext({1, 1}, V), S::inverse_ext({2, 0}, H)});
    rep.c2_chain = compose_path(ctx, {{3, 2}, K::horizontal},
                                {S::inverse_intra({3, 2}, K::receptor, K::horizontal), S::inverse_ext({2, 2}, V),
                                 S::ext({2, 2}, H), S::inverse_ext({1, 3}, V), S::ext({1, 3}, H)});
    for (auto* ch : {&rep.connecting_chain, &rep.k2_chain, &rep.c2_chain})
        if (!is_iso(ch->map)) throw InternalCheckFailed("snake chain from " + ch->start.label() + " is not an isomorphism");

    auto k3 = whole(f, ext.dim({0, 3}));
    auto c1 = whole(f, ext.dim({3, 1}));
    auto proj = induced_map(Matrix<F>::identity(f, ext.dim({0, 3})), k3, ctx.object({0, 3}, K::horizontal));
    auto incl = induced_map(Matrix<F>::identity(f, ext.dim({3, 1})), ctx.object({3, 1}, K::horizontal), c1);
    auto conn = compose(compose(proj, rep.connecting_chain.map), incl);
    rep.connecting = conn.matrix;
    rep.oracle = lifting_connecting_map(two);
    rep.oracle_agrees = rep.oracle == rep.connecting;

    auto& seq = rep.sequence;
    seq.name = "snake";
    std::vector<SubquotientPtr<F>> ks, cs;
    for (int r = 1; r <= 3; ++r) {
        ks.push_back(r == 3 ? k3 : whole(f, ext.dim({0, r})));
        cs.push_back(r == 1 ? c1 : whole(f, ext.dim({3, r})));
    }
    for (int r = 1; r <= 3; ++r) seq.add_term("K" + std::to_string(r), ks[r - 1]);
    for (int r = 1; r <= 3; ++r) seq.add_term("C" + std::to_string(r), cs[r - 1]);
    seq.maps.push_back({ks[0], ks[1], ext.dh({0, 1})});
    seq.maps.push_back({ks[1], ks[2], ext.dh({0, 2})});
    seq.maps.push_back({k3, c1, conn.matrix});
    seq.maps.push_back({cs[0], cs[1], ext.dh({3, 1})});
    seq.maps.push_back({cs[1], cs[2], ext.dh({3, 2})});
    for (auto& t : rep.connecting_chain.trace) seq.trace.push_back(t);
    seq.evaluate();
    return rep;
}

// ---------------------------------------------------------------------------
// Two borders and shifted isomorphisms

struct BorderVariant {
    enum Kind { corner, two_rows, row_column } kind = corner;
    int m = 0, n = 0;  // two_rows: rows m < n; row_column: row m, column n
};

// Corner: zero row above row 0 and zero column left of column 0, all other
// rows and columns exact: A(0,r)— ≅ A(r,0)|. Two rows m < n the only
// non-exact rows: A(m,r)— ≅ A(n,r-n+m+1)—. Row m and column n the only
// non-exact lines: A(m,r)— ≅ A(r-n+m,n)|.
template <class F>
std::vector<IsoWitness<F>> two_borders(const DoubleComplex<F>& c, BorderVariant v) {
    if (!validate(c).valid()) throw PreconditionUnmet("input is not a double complex");
    auto prof = exactness_profile(c);
    LineSet lines;
    using K = CornerKind;
    std::vector<IsoWitness<F>> out;
    CornerContext<F> ctx(c);
    const Window w = c.window();
    if (v.kind == BorderVariant::corner) {
        for (Position p : c.support())
            if (p.i < 0 || p.r < 0) throw PreconditionUnmet("support must lie in rows and columns >= 0");
        for (const auto& [p, fl] : prof.flags) {
            if (!fl.row && p.i != 0) throw PreconditionUnmet("row " + std::to_string(p.i) + " is not exact");
            if (!fl.col && p.r != 0) throw PreconditionUnmet("column " + std::to_string(p.r) + " is not exact");
        }
        lines.rows = {0};
        lines.cols = {0};
        for (int r = 1; r <= std::max(w.r1, w.i1) + 1; ++r) {
            std::vector<PathStep> steps{PathStep::intra({0, r}, K::horizontal, K::donor)};
            auto plan = plan_walk({{0, r}, K::donor}, Walk::down_left, lines, true);
            for (auto& s : plan.steps) steps.push_back(s);
            out.push_back(path_witness(ctx, {{0, r}, K::horizontal}, steps));
        }
        return out;
    }
    int i = v.m, j = v.n;
    for (const auto& [p, fl] : prof.flags) {
        bool row_ok = v.kind == BorderVariant::two_rows ? (p.i == i || p.i == j) : p.i == i;
        bool col_ok = v.kind == BorderVariant::row_column && p.r == j;
        if (!fl.row && !row_ok) throw PreconditionUnmet("row " + std::to_string(p.i) + " is not exact");
        if (!fl.col && !col_ok) throw PreconditionUnmet("column " + std::to_string(p.r) + " is not exact");
    }
    if (v.kind == BorderVariant::two_rows) {
        if (!(i < j)) throw PreconditionUnmet("rows must satisfy m < n");
        lines.rows = {i, j};
        for (int r = w.r0 - 1; r <= w.r1 + 1; ++r) {
            std::vector<PathStep> steps{PathStep::intra({i, r}, K::horizontal, K::donor)};
            auto plan = plan_walk({{i, r}, K::donor}, Walk::down_left, lines, true);
            for (auto& s : plan.steps) steps.push_back(s);
            out.push_back(path_witness(ctx, {{i, r}, K::horizontal}, steps));
        }
        return out;
    }
    lines.rows = {i};
    lines.cols = {j};
    int lo = std::min(w.r0, w.i0) - 1 - std::abs(i) - std::abs(j), hi = std::max(w.r1, w.i1) + 1 + std::abs(i) + std::abs(j);
    for (int r = lo; r <= hi; ++r) {
        std::vector<PathStep> steps;
        if (r == j) {
            steps = {PathStep::intra({i, r}, K::horizontal, K::donor), PathStep::inverse_intra({i, r}, K::vertical, K::donor)};
        } else if (r > j) {
            steps = {PathStep::intra({i, r}, K::horizontal, K::donor)};
            for (auto& s : plan_walk({{i, r}, K::donor}, Walk::down_left, lines, true).steps) steps.push_back(s);
        } else {
            steps = {PathStep::inverse_intra({i, r}, K::receptor, K::horizontal)};
            for (auto& s : plan_walk({{i, r}, K::receptor}, Walk::up_right, lines, true).steps) steps.push_back(s);
        }
        out.push_back(path_witness(ctx, {{i, r}, K::horizontal}, steps));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Nine-term sequences around B = pos

template <class F>
struct NineTermReport {
    SequenceReport<F> first;   // D□ A— A□ □B B— B□ □C C— □G
    SequenceReport<F> second;  // D□ E| E□ □B B| B□ □F F| □G
    std::vector<std::pair<std::string, bool>> wedges;
};

template <class F>
NineTermReport<F> nine_term(CornerContext<F>& ctx, Position b, bool check = true) {
    using K = CornerKind;
    if (check && !ctx.natural(b, K::receptor, K::donor).matrix.is_zero())
        throw PreconditionUnmet("intramural map receptor -> donor at " + b.to_string() + " is nonzero");
    Position a = b.left(), cc = b.right(), e = b.up(), d = a.up(), fpos = b.down(), g = cc.down();
    NineTermReport<F> rep;
    rep.first = build_sequence(ctx, "nine-term 1 at " + b.to_string(),
                               {{d, K::donor}, {a, K::horizontal}, {a, K::donor}, {b, K::receptor}, {b, K::horizontal},
                                {b, K::donor}, {cc, K::receptor}, {cc, K::horizontal}, {g, K::receptor}});
    rep.second = build_sequence(ctx, "nine-term 2 at " + b.to_string(),
                                {{d, K::donor}, {e, K::vertical}, {e, K::donor}, {b, K::receptor}, {b, K::vertical},
                                 {b, K::donor}, {fpos, K::receptor}, {fpos, K::vertical}, {g, K::receptor}});
    const auto& c = ctx.complex();
    auto wedge = [&](const std::string& name, CornerRef s, CornerRef t, const Matrix<F>& amb) {
        auto direct = induced_map(amb, ctx.object(s), ctx.object(t));
        auto comp = compose_path(ctx, s, natural_steps(s, t)).map;
        rep.wedges.push_back({name, direct.matrix == comp.matrix});
    };
    wedge("E□ -> B—", {e, K::donor}, {b, K::horizontal}, c.dv(e));
    wedge("B| -> □C", {b, K::vertical}, {cc, K::receptor}, c.dh(b));
    wedge("A□ -> B|", {a, K::donor}, {b, K::vertical}, c.dh(a));
    wedge("B— -> □F", {b, K::horizontal}, {fpos, K::receptor}, c.dv(b));
    return rep;
}

template <class F>
NineTermReport<F> nine_term(const DoubleComplex<F>& c, Position b) {
    CornerContext<F> ctx(c);
    return nine_term(ctx, b);
}

// ---------------------------------------------------------------------------
// Long sequences

struct LongSequenceSpec {
    enum Kind { one_row, linked_all, ijk, ijk_mixed, nine_term, splice_3_1, splice_2_2 } kind = one_row;
    int i = 0, j = 0, k = 0;  // one_row: i; ijk: rows i<j<k; ijk_mixed: rows i<j, column k;
                              // nine_term: B = (i,j); splice_3_1: rows i,i+1,i+2 and column k;
                              // splice_2_2: rows i,i+1 and columns k,k+1
};

template <class F>
struct LongSequenceResult {
    std::vector<SequenceReport<F>> sequences;
    std::vector<IsoWitness<F>> links;
    bool exact() const {
        for (const auto& s : sequences)
            if (!s.exact()) return false;
        for (const auto& l : links)
            if (!l.iso) return false;
        return true;
    }
};

// Objects along a right/down lattice path: □X, X^in, X□ where the path runs
// straight, and □X, X^in at a turn. orientation[t] is 'r' for terms on a row
// stretch, 'c' on a column stretch and 'x' for the receptor at a turn.
struct PathTerms {
    std::vector<CornerRef> refs;
    std::string orientation;
};

inline PathTerms lattice_terms(const std::vector<Position>& path) {
    PathTerms out;
    using K = CornerKind;
    auto dir = [](Position a, Position b) { return b == a.right() ? Direction::horizontal : Direction::vertical; };
    for (std::size_t t = 0; t < path.size(); ++t) {
        Position x = path[t];
        Direction din = t > 0 ? dir(path[t - 1], x) : dir(x, path[t + 1]);
        Direction dout = t + 1 < path.size() ? dir(x, path[t + 1]) : din;
        K hk = din == Direction::horizontal ? K::horizontal : K::vertical;
        char o = din == Direction::horizontal ? 'r' : 'c';
        if (din == dout) {
            out.refs.insert(out.refs.end(), {{x, K::receptor}, {x, hk}, {x, K::donor}});
            out.orientation += std::string(3, o);
        } else {
            out.refs.insert(out.refs.end(), {{x, K::receptor}, {x, hk}});
            out.orientation += std::string("x") + o;
        }
    }
    return out;
}

inline std::vector<Position> row_path(int i, int r0, int r1) {
    std::vector<Position> p;
    for (int r = r0; r <= r1; ++r) p.push_back({i, r});
    return p;
}

// Substitutes every donor and receptor of a lattice-path sequence by a homology
// object on another non-exact line; receptors at turns take the other homology.
template <class F>
void substitute_homologies(CornerContext<F>& ctx, SequenceReport<F>& rep, const PathTerms& pt, const LineSet& lines) {
    using K = CornerKind;
    for (std::size_t t = 0; t < pt.refs.size(); ++t) {
        CornerRef ref = pt.refs[t];
        char o = pt.orientation[t];
        std::vector<PathStep> steps;
        if (o == 'x') {
            K other = pt.orientation[t + 1] == 'r' ? K::vertical : K::horizontal;
            steps = {PathStep::intra(ref.pos, K::receptor, other)};
        } else if (ref.kind == K::donor || ref.kind == K::receptor) {
            Walk w = (o == 'r') == (ref.kind == K::donor) ? Walk::down_left : Walk::up_right;
            steps = plan_walk(ref, w, lines, true).steps;
        } else {
            continue;
        }
        substitute(rep, t, compose_path(ctx, ref, steps));
    }
    rep.evaluate();
}

template <class F>
void require_lines(const ExactnessProfile& prof, const LineSet& allowed) {
    for (const auto& [p, fl] : prof.flags) {
        if (!fl.row && !allowed.row(p.i)) throw PreconditionUnmet("row " + std::to_string(p.i) + " is not exact at " + p.to_string());
        if (!fl.col && !allowed.col(p.r)) throw PreconditionUnmet("column " + std::to_string(p.r) + " is not exact at " + p.to_string());
    }
}

template <class F>
SequenceReport<F> one_row_sequence(CornerContext<F>& ctx, int h) {
    const Window w = ctx.complex().window();
    for (int r = w.r0 - 1; r <= w.r1 + 1; ++r)
        if (!ctx.natural({h, r}, CornerKind::receptor, CornerKind::donor).matrix.is_zero())
            throw PreconditionUnmet("receptor -> donor map at " + Position{h, r}.to_string() + " is nonzero");
    auto pt = lattice_terms(row_path(h, w.r0 - 2, w.r1 + 2));
    return build_sequence(ctx, "row " + std::to_string(h), pt.refs);
}

// Collapse in an exact row: every horizontal homology vanishes and the
// extramural maps along the row are isomorphisms.
template <class F>
std::vector<IsoWitness<F>> collapse_isos(CornerContext<F>& ctx, int h) {
    const Window w = ctx.complex().window();
    std::vector<IsoWitness<F>> out;
    for (int r = w.r0 - 1; r <= w.r1 + 1; ++r) {
        if (ctx.object({h, r}, CornerKind::horizontal)->dim() != 0)
            throw PreconditionUnmet("row " + std::to_string(h) + " has nonzero homology at column " + std::to_string(r));
        out.push_back(path_witness(ctx, {{h, r}, CornerKind::donor}, {PathStep::ext({h, r}, Direction::horizontal)}));
    }
    return out;
}

template <class F>
LongSequenceResult<F> splice_3_1(CornerContext<F>& ctx, int r1, int k);
template <class F>
LongSequenceResult<F> splice_2_2(CornerContext<F>& ctx, int r1, int k);

template <class F>
LongSequenceResult<F> long_sequences(const DoubleComplex<F>& c, const LongSequenceSpec& spec) {
    if (!validate(c).valid()) throw PreconditionUnmet("input is not a double complex");
    CornerContext<F> ctx(c);
    auto prof = exactness_profile(c);
    const Window w = c.window();
    LongSequenceResult<F> out;
    using K = CornerKind;
    switch (spec.kind) {
        case LongSequenceSpec::one_row:
            out.sequences.push_back(one_row_sequence(ctx, spec.i));
            return out;
        case LongSequenceSpec::linked_all: {
            if (!prof.cols_exact()) throw PreconditionUnmet("not all columns are exact");
            for (int h = w.i0 - 1; h <= w.i1 + 1; ++h) out.sequences.push_back(one_row_sequence(ctx, h));
            for (int h = w.i0 - 1; h <= w.i1; ++h)
                for (int r = w.r0 - 2; r <= w.r1 + 2; ++r)
                    out.links.push_back(path_witness(ctx, {{h, r}, K::donor}, {PathStep::ext({h, r}, Direction::vertical)}));
            return out;
        }
        case LongSequenceSpec::ijk: {
            if (!(spec.i < spec.j && spec.j < spec.k)) throw PreconditionUnmet("rows must satisfy i < j < k");
            LineSet lines{{spec.i, spec.j, spec.k}, {}};
            require_lines<F>(prof, lines);
            auto pt = lattice_terms(row_path(spec.j, w.r0 - 2, w.r1 + 2));
            auto rep = build_sequence(ctx, "ijk", pt.refs);
            substitute_homologies(ctx, rep, pt, lines);
            out.sequences.push_back(std::move(rep));
            return out;
        }
        case LongSequenceSpec::ijk_mixed: {
            if (!(spec.i < spec.j)) throw PreconditionUnmet("rows must satisfy i < j");
            LineSet lines{{spec.i, spec.j}, {spec.k}};
            require_lines<F>(prof, lines);
            std::vector<Position> path = row_path(spec.i, w.r0 - 2, spec.k);
            for (int h = spec.i + 1; h <= spec.j; ++h) path.push_back({h, spec.k});
            for (int r = spec.k + 1; r <= w.r1 + 2; ++r) path.push_back({spec.j, r});
            auto pt = lattice_terms(path);
            auto rep = build_sequence(ctx, "ijk-mixed", pt.refs);
            substitute_homologies(ctx, rep, pt, lines);
            out.sequences.push_back(std::move(rep));
            return out;
        }
        case LongSequenceSpec::nine_term: {
            auto r = nine_term(ctx, Position{spec.i, spec.j});
            out.sequences.push_back(r.first);
            out.sequences.push_back(r.second);
            return out;
        }
        case LongSequenceSpec::splice_3_1: {
            require_lines<F>(prof, LineSet{{spec.i, spec.i + 1, spec.i + 2}, {spec.k}});
            return splice_3_1(ctx, spec.i, spec.k);
        }
        case LongSequenceSpec::splice_2_2: {
            require_lines<F>(prof, LineSet{{spec.i, spec.i + 1}, {spec.k, spec.k + 1}});
            return splice_2_2(ctx, spec.i, spec.k);
        }
    }
    throw Error("unknown long-sequence selector");
}

// Three consecutive non-exact rows r1, r1+1, r1+2 and one non-exact column k.
// Column labels around k: A B C D E at columns k-2..k+2 of row r1, F G H J K
// in row r1+1, L M N P Q in row r1+2, X above C and Y below N.
template <class F>
LongSequenceResult<F> splice_3_1(CornerContext<F>& ctx, int r1, int k) {
    using K = CornerKind;
    using S = PathStep;
    const auto V = Direction::vertical, Hd = Direction::horizontal;
    const Window w = ctx.complex().window();
    int r2 = r1 + 1, r3 = r1 + 2;
    int lo = std::min(w.r0, k - 2) - 2, hi = std::max(w.r1, k + 2) + 2;
    auto at = [&](int row, int col) { return Position{row, col}; };
    Position C = at(r1, k), H = at(r2, k), N = at(r3, k), J = at(r2, k + 1), G = at(r2, k - 1), P = at(r3, k + 1);
    LongSequenceResult<F> out;

    // S_a: row r1 from the left to C, down to H, ending at □J.
    std::vector<CornerRef> sa;
    {
        std::vector<Position> path = row_path(r1, lo, k);
        path.push_back(H);
        sa = lattice_terms(path).refs;
        sa.pop_back();  // H□ is replaced by □J
        sa.push_back({J, K::receptor});
    }
    out.sequences.push_back(build_sequence(ctx, "splice a", sa));

    // S_b: C□, then row r2 from H— rightwards.
    std::vector<CornerRef> sb{{C, K::donor}, {H, K::horizontal}, {H, K::donor}};
    {
        auto pt = lattice_terms(row_path(r2, k + 1, hi));
        sb.insert(sb.end(), pt.refs.begin(), pt.refs.end());
    }
    out.sequences.push_back(build_sequence(ctx, "splice b", sb));

    // S_c: row r2 from the left up to H—, ending at □N.
    std::vector<CornerRef> sc;
    {
        auto pt = lattice_terms(row_path(r2, lo, k));
        sc.assign(pt.refs.begin(), pt.refs.end() - 1);  // drop H□
        sc.push_back({N, K::receptor});
    }
    out.sequences.push_back(build_sequence(ctx, "splice c", sc));

    // S_d: G□, H|, H□, down column k to N, turn, then row r3 rightwards.
    std::vector<CornerRef> sd{{G, K::donor}, {H, K::vertical}, {H, K::donor}};
    {
        std::vector<Position> path{N};
        for (int r = k + 1; r <= hi; ++r) path.push_back({r3, r});
        auto pt = lattice_terms(path);
        // at N the path arrives vertically: □N, N|, then the row
        sd.push_back({N, K::receptor});
        sd.push_back({N, K::vertical});
        sd.insert(sd.end(), pt.refs.begin() + 3, pt.refs.end());
    }
    out.sequences.push_back(build_sequence(ctx, "splice d", sd));

    // Constituent salamanders at H.
    out.sequences.push_back(ctx.salamander(H, Hd));
    out.sequences.push_back(ctx.salamander(H, V));
    out.sequences.push_back(ctx.salamander(C, V));
    out.sequences.push_back(ctx.salamander(G, Hd));

    Position X = at(r1 - 1, k), Y = at(r3 + 1, k), B = at(r1, k - 1), D = at(r1, k + 1), E = at(r1, k + 2);
    Position Af = at(r1, k - 2), Fp = at(r2, k - 2), Kp = at(r2, k + 2), L = at(r3, k - 2), M = at(r3, k - 1),
             Q = at(r3, k + 2);
    auto add = [&](CornerRef s, std::vector<PathStep> st) { out.links.push_back(path_witness(ctx, s, st)); };
    add({B, K::receptor}, {S::inverse_ext(B.up(), V), S::ext(B.up(), Hd), S::intra(X, K::receptor, K::vertical)});
    add({C, K::receptor}, {S::intra(C, K::receptor, K::vertical)});
    add({C, K::horizontal}, {S::intra(C, K::horizontal, K::donor)});
    add({D, K::horizontal}, {S::intra(D, K::horizontal, K::donor), S::ext(D, V)});
    add({J, K::donor}, {S::ext(J, V)});
    add({Kp, K::donor}, {S::ext(Kp, V)});
    add({E, K::horizontal}, {S::intra(E, K::horizontal, K::donor), S::ext(E, V)});
    add({Fp, K::donor}, {S::ext(Fp, V), S::intra(L, K::receptor, K::horizontal)});
    add({Af, K::donor}, {S::ext(Af, V)});
    add({P, K::donor}, {S::ext(P, V), S::inverse_ext(Y, Hd), S::inverse_intra(Y, K::vertical, K::donor)});
    add({N, K::vertical}, {S::intra(N, K::vertical, K::donor)});
    add({N, K::receptor}, {S::intra(N, K::receptor, K::horizontal)});
    add({G, K::donor}, {S::ext(G, V), S::intra(M, K::receptor, K::horizontal)});
    add({B, K::donor}, {S::ext(B, V)});
    return out;
}

// Two consecutive non-exact rows r1, r1+1 and columns k, k+1; C = (r1,k) and
// L = (r1+1,k+1) are the splice points.
template <class F>
LongSequenceResult<F> splice_2_2(CornerContext<F>& ctx, int r1, int k) {
    using K = CornerKind;
    using S = PathStep;
    const auto V = Direction::vertical, Hd = Direction::horizontal;
    const Window w = ctx.complex().window();
    int r2 = r1 + 1;
    int top = std::min(w.i0, r1 - 2) - 2, bottom = std::max(w.i1, r2 + 2) + 2;
    int lo = std::min(w.r0, k - 2) - 2, hi = std::max(w.r1, k + 3) + 2;
    Position Q{r1 - 1, k}, C{r1, k}, D{r1, k + 1}, L{r2, k + 1}, M{r2, k + 2}, B{r1, k - 1}, Kp{r2, k},
        X{r2 + 1, k + 1}, V1{r1 - 1, k + 1}, E{r1, k + 2}, J{r2, k - 1};
    LongSequenceResult<F> out;
    auto column_terms = [&](int col, int from, int to) {
        std::vector<CornerRef> v;
        for (int h = from; h <= to; ++h)
            v.insert(v.end(), {{{h, col}, K::receptor}, {{h, col}, K::vertical}, {{h, col}, K::donor}});
        return v;
    };
    auto row_terms = [&](int row, int from, int to) { return lattice_terms(row_path(row, from, to)).refs; };

    // The first and third strands are exact up to □D (□K) and again from D— (K|)
    // on; across D| -> D— (K— -> K|) they need not be, so each is kept as two pieces.
    std::vector<CornerRef> t1 = column_terms(k, top, r1 - 1);
    t1.insert(t1.end(), {{C, K::receptor}, {C, K::vertical}, {D, K::receptor}});
    out.sequences.push_back(build_sequence(ctx, "2+2 first, head", t1));
    std::vector<CornerRef> t1b{{D, K::horizontal}, {L, K::horizontal}, {L, K::donor}};
    for (auto& r : row_terms(r2, k + 2, hi)) t1b.push_back(r);
    out.sequences.push_back(build_sequence(ctx, "2+2 first, tail", t1b));

    out.sequences.push_back(build_sequence(ctx, "2+2 second",
                                           {{Q, K::donor}, {C, K::horizontal}, {C, K::donor}, {D, K::receptor},
                                            {D, K::horizontal}, {L, K::receptor}, {L, K::vertical}, {M, K::receptor}}));

    std::vector<CornerRef> t3 = row_terms(r1, lo, k - 1);
    t3.insert(t3.end(), {{C, K::receptor}, {C, K::horizontal}, {Kp, K::receptor}});
    out.sequences.push_back(build_sequence(ctx, "2+2 third, head", t3));
    std::vector<CornerRef> t3b{{Kp, K::vertical}, {L, K::vertical}, {L, K::donor}};
    for (auto& r : column_terms(k + 1, r2 + 1, bottom)) t3b.push_back(r);
    out.sequences.push_back(build_sequence(ctx, "2+2 third, tail", t3b));

    out.sequences.push_back(build_sequence(ctx, "2+2 fourth",
                                           {{B, K::donor}, {C, K::vertical}, {C, K::donor}, {Kp, K::receptor},
                                            {Kp, K::vertical}, {L, K::receptor}, {L, K::horizontal}, {X, K::receptor}}));

    auto add = [&](CornerRef s, std::vector<PathStep> st) { out.links.push_back(path_witness(ctx, s, st)); };
    add({Q, K::donor}, {S::ext(Q, Hd), S::intra(V1, K::receptor, K::vertical)});
    add({D, K::receptor}, {S::intra(D, K::receptor, K::vertical)});
    add({Kp, K::receptor}, {S::intra(Kp, K::receptor, K::horizontal)});
    add({X, K::receptor}, {S::inverse_ext(X.left(), Hd), S::inverse_intra(X.left(), K::vertical, K::donor)});
    add({M, K::receptor}, {S::inverse_ext(E, V), S::inverse_intra(E, K::horizontal, K::donor)});
    add({B, K::donor}, {S::ext(B, V), S::intra(J, K::receptor, K::horizontal)});
    return out;
}

}  // namespace salamander
