#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "theorems.hpp"

namespace salamander {

// A diagram shaped like two rows with short exact columns on either side of a
// middle column. Rows 0..3 of `body`: row 0 on columns 0..left-1, rows 1 and 2
// on columns 0..left+right, row 3 on columns left+1..left+right; the middle
// column `left` has only rows 1 and 2. The curved arrows go from (0,left-1)
// to (1,left) and from (2,left) to (3,left+1).
template <class F>
struct TwistDiagram {
    int left = 0, right = 0;
    DoubleComplex<F> body;
    Matrix<F> curve_in, curve_out;
    std::vector<std::pair<std::string, int>> signs;
    std::map<Position, std::string> labels;
};

namespace detail {

template <class F>
struct SumComponent {
    std::string name;
    std::size_t arrow;
    std::size_t tgt_block, src_block;
    Matrix<F> m;
};

template <class F>
struct SumArrow {
    Position at;
    bool vertical = false;  // stored in body.dv when true
    bool curve_in = false, curve_out = false;
    std::vector<std::size_t> tgt_dims, src_dims;
};

}  // namespace detail

// The direct-sum diagram around the arrow F -> G, with twelve labelled
// objects A(-2,0) B(-1,-1) C(-1,0) D(0,-2) E(0,-1) F G(0,1) H(0,2) J(0,3)
// K(1,1) L(1,2) M(2,1) relative to F.
template <class F>
TwistDiagram<F> twist_build(const DoubleComplex<F>& input, Position focus, Direction dir = Direction::horizontal) {
    if (!validate(input).valid()) throw PreconditionUnmet("input is not a double complex");
    const DoubleComplex<F> c = dir == Direction::horizontal ? input : transpose(input);
    Position fpos = dir == Direction::horizontal ? focus : Position{focus.r, focus.i};
    const F& f = c.field();
    auto P = [&](int di, int dr) { return Position{fpos.i + di, fpos.r + dr}; };
    Position A = P(-2, 0), B = P(-1, -1), C = P(-1, 0), D = P(0, -2), E = P(0, -1), Fp = fpos, G = P(0, 1), H = P(0, 2),
             J = P(0, 3), Kp = P(1, 1), L = P(1, 2), M = P(2, 1);
    auto dim = [&](Position p) { return c.dim(p); };

    using detail::SumArrow;
    using detail::SumComponent;
    std::vector<SumArrow<F>> arrows;
    std::vector<SumComponent<F>> comps;
    auto arrow = [&](Position at, bool vertical, std::vector<Position> src, std::vector<Position> tgt) {
        SumArrow<F> a{at, vertical};
        for (auto p : src) a.src_dims.push_back(dim(p));
        for (auto p : tgt) a.tgt_dims.push_back(dim(p));
        arrows.push_back(a);
        return arrows.size() - 1;
    };
    auto comp = [&](std::size_t a, const std::string& name, std::size_t tb, std::size_t sb, Matrix<F> m) {
        comps.push_back({name, a, tb, sb, std::move(m)});
    };
    // body rows: 0 top (D, E), 1 (A⊕B⊕D, C⊕E, F, K, L⊕M), 2 (A⊕B, C, G, H⊕K, J⊕L⊕M), 3 bottom (H, J)
    std::size_t top = arrow({0, 0}, false, {D}, {E});
    comp(top, "D->E", 0, 0, c.dh(D));
    std::size_t r10 = arrow({1, 0}, false, {A, B, D}, {C, E});
    comp(r10, "A->C", 0, 0, c.dv(A));
    comp(r10, "B->C", 0, 1, c.dh(B));
    comp(r10, "B->E", 1, 1, c.dv(B));
    comp(r10, "D->E'", 1, 2, c.dh(D));
    std::size_t r11 = arrow({1, 1}, false, {C, E}, {Fp});
    comp(r11, "C->F", 0, 0, c.dv(C));
    comp(r11, "E->F", 0, 1, c.dh(E));
    std::size_t r12 = arrow({1, 2}, false, {Fp}, {Kp});
    comp(r12, "F->K", 0, 0, c.dv(G) * c.dh(Fp));
    std::size_t r13 = arrow({1, 3}, false, {Kp}, {L, M});
    comp(r13, "K->L", 0, 0, c.dh(Kp));
    comp(r13, "K->M", 1, 0, c.dv(Kp));
    std::size_t r20 = arrow({2, 0}, false, {A, B}, {C});
    comp(r20, "A->C'", 0, 0, c.dv(A));
    comp(r20, "B->C'", 0, 1, c.dh(B));
    std::size_t r21 = arrow({2, 1}, false, {C}, {G});
    comp(r21, "C->G", 0, 0, c.dh(Fp) * c.dv(C));
    std::size_t r22 = arrow({2, 2}, false, {G}, {H, Kp});
    comp(r22, "G->H", 0, 0, c.dh(G));
    comp(r22, "G->K", 1, 0, c.dv(G));
    std::size_t r23 = arrow({2, 3}, false, {H, Kp}, {J, L, M});
    comp(r23, "H->J", 0, 0, c.dh(H));
    comp(r23, "H->L", 1, 0, c.dv(H));
    comp(r23, "K->L'", 1, 1, c.dh(Kp));
    comp(r23, "K->M'", 2, 1, c.dv(Kp));
    std::size_t bot = arrow({3, 3}, false, {H}, {J});
    comp(bot, "H->J'", 0, 0, c.dh(H));
    std::size_t cin = arrow({0, 1}, false, {E}, {Fp});
    arrows[cin].curve_in = true;
    comp(cin, "E->F'", 0, 0, c.dh(E));
    std::size_t mid = arrow({1, 2}, true, {Fp}, {G});
    comp(mid, "F->G", 0, 0, c.dh(Fp));
    std::size_t cout_ = arrow({2, 2}, false, {G}, {H});
    arrows[cout_].curve_out = true;
    comp(cout_, "G->H'", 0, 0, c.dh(G));

    TwistDiagram<F> t{2, 2, DoubleComplex<F>(f), Matrix<F>(), Matrix<F>(), {}, {}};
    auto& b = t.body;
    auto sum = [&](std::vector<Position> ps) {
        std::size_t s = 0;
        for (auto p : ps) s += dim(p);
        return s;
    };
    const std::vector<std::pair<Position, std::vector<Position>>> objects{
        {{0, 0}, {D}},          {{0, 1}, {E}},    {{1, 0}, {A, B, D}}, {{1, 1}, {C, E}},      {{1, 2}, {Fp}},
        {{1, 3}, {Kp}},         {{1, 4}, {L, M}}, {{2, 0}, {A, B}},    {{2, 1}, {C}},         {{2, 2}, {G}},
        {{2, 3}, {H, Kp}},      {{2, 4}, {J, L, M}}, {{3, 3}, {H}},    {{3, 4}, {J}}};
    const char* names[] = {"D", "E", "A⊕B⊕D", "C⊕E", "F", "K", "L⊕M", "A⊕B", "C", "G", "H⊕K", "J⊕L⊕M", "H", "J"};
    for (std::size_t k = 0; k < objects.size(); ++k) {
        b.set_dim(objects[k].first, sum(objects[k].second));
        t.labels[objects[k].first] = names[k];
    }
    b.set_window({0, 3, 0, 4});
    // columns: inclusions and projections
    auto incl = [&](std::size_t n, std::size_t off, std::size_t k) {
        Matrix<F> m(f, n, k);
        for (std::size_t j = 0; j < k; ++j) m(off + j, j) = f.one();
        return m;
    };
    auto proj = [&](std::size_t n, std::size_t off, std::size_t k) { return incl(n, off, k).transpose(); };
    b.set_dv({0, 0}, incl(b.dim({1, 0}), dim(A) + dim(B), dim(D)));
    b.set_dv({1, 0}, proj(b.dim({1, 0}), 0, dim(A) + dim(B)));
    b.set_dv({0, 1}, incl(b.dim({1, 1}), dim(C), dim(E)));
    b.set_dv({1, 1}, proj(b.dim({1, 1}), 0, dim(C)));
    b.set_dv({1, 3}, incl(b.dim({2, 3}), dim(H), dim(Kp)));
    b.set_dv({2, 3}, proj(b.dim({2, 3}), 0, dim(H)));
    b.set_dv({1, 4}, incl(b.dim({2, 4}), dim(J), dim(L) + dim(M)));
    b.set_dv({2, 4}, proj(b.dim({2, 4}), 0, dim(J)));

    std::vector<int> sign(comps.size(), 1);
    auto assemble = [&](std::size_t a) {
        const auto& ar = arrows[a];
        std::size_t rows = 0, cols = 0;
        std::vector<std::size_t> to, so;
        for (auto d : ar.tgt_dims) to.push_back(rows), rows += d;
        for (auto d : ar.src_dims) so.push_back(cols), cols += d;
        Matrix<F> m(f, rows, cols);
        for (std::size_t k = 0; k < comps.size(); ++k)
            if (comps[k].arrow == a)
                m.set_block(to[comps[k].tgt_block], so[comps[k].src_block],
                            sign[k] > 0 ? comps[k].m : -comps[k].m);
        return m;
    };
    auto install = [&] {
        for (std::size_t a = 0; a < arrows.size(); ++a) {
            auto m = assemble(a);
            if (arrows[a].curve_in)
                t.curve_in = m;
            else if (arrows[a].curve_out)
                t.curve_out = m;
            else if (arrows[a].vertical)
                b.set_dv(arrows[a].at, m);
            else
                b.set_dh(arrows[a].at, m);
        }
    };
    // Each constraint lists the arrows it reads; it is tested once all their
    // components have signs.
    struct Constraint {
        std::vector<std::size_t> arrows;
        std::function<bool()> holds;
    };
    std::vector<Constraint> cons;
    auto zero2 = [&](std::size_t a1, std::size_t a2) {
        cons.push_back({{a1, a2}, [&, a1, a2] { return (assemble(a2) * assemble(a1)).is_zero(); }});
    };
    zero2(r10, r11), zero2(r11, r12), zero2(r12, r13);
    zero2(r20, r21), zero2(r21, r22), zero2(r22, r23);
    zero2(top, cin), zero2(cin, mid), zero2(mid, cout_), zero2(cout_, bot);
    auto dvb = [&](Position p) { return b.dv(p); };
    // squares with fixed column maps
    cons.push_back({{top, r10}, [&] { return dvb({0, 1}) * assemble(top) == assemble(r10) * dvb({0, 0}); }});
    cons.push_back({{r10, r20}, [&] { return dvb({1, 1}) * assemble(r10) == assemble(r20) * dvb({1, 0}); }});
    cons.push_back({{r11, r21, mid}, [&] { return assemble(mid) * assemble(r11) == assemble(r21) * dvb({1, 1}); }});
    cons.push_back({{r12, r22, mid}, [&] { return dvb({1, 3}) * assemble(r12) == assemble(r22) * assemble(mid); }});
    cons.push_back({{r13, r23}, [&] { return dvb({1, 4}) * assemble(r13) == assemble(r23) * dvb({1, 3}); }});
    cons.push_back({{r23, bot}, [&] { return assemble(bot) * dvb({2, 3}) == dvb({2, 4}) * assemble(r23); }});
    cons.push_back({{cin, r11}, [&] { return assemble(cin) == assemble(r11) * dvb({0, 1}); }});
    cons.push_back({{cout_, r22}, [&] { return assemble(cout_) == dvb({2, 3}) * assemble(r22); }});

    std::vector<std::size_t> last_comp(arrows.size(), 0);
    for (std::size_t k = 0; k < comps.size(); ++k) last_comp[comps[k].arrow] = k;
    std::vector<std::vector<std::size_t>> due(comps.size());
    for (std::size_t q = 0; q < cons.size(); ++q) {
        std::size_t k = 0;
        for (auto a : cons[q].arrows) k = std::max(k, last_comp[a]);
        due[k].push_back(q);
    }
    std::function<bool(std::size_t)> search = [&](std::size_t k) -> bool {
        if (k == comps.size()) return true;
        for (int s : {1, -1}) {
            sign[k] = s;
            bool ok = true;
            for (auto q : due[k])
                if (!cons[q].holds()) {
                    ok = false;
                    break;
                }
            if (ok && search(k + 1)) return true;
        }
        sign[k] = 1;
        return false;
    };
    if (!search(0)) throw InternalCheckFailed("no sign assignment makes the twisted diagram commute");
    install();
    for (std::size_t k = 0; k < comps.size(); ++k) t.signs.push_back({comps[k].name, sign[k]});
    return t;
}

template <class F>
struct TwistReport {
    DoubleComplex<F> squared;
    SequenceReport<F> sequence;
    // Terms [first, last] come from columns 1..left+right-1; the end columns
    // carry kernels and cokernels of the cut-off diagram.
    std::size_t interior_first = 0, interior_last = 0;
};

template <class F>
void check_twist_shape(const TwistDiagram<F>& t) {
    const auto& b = t.body;
    int L = t.left, R = t.right;
    auto inj = [&](const Matrix<F>& m) { return kernel(m).dim() == 0; };
    auto onto = [&](const Matrix<F>& m) { return image(m).dim() == m.rows(); };
    for (int r = 0; r <= L + R; ++r) {
        if (r == L) continue;
        int i0 = r < L ? 0 : 1;
        auto a = b.dv({i0, r}), c = b.dv({i0 + 1, r});
        if (!inj(a) || !onto(c) || !(kernel(c) == image(a)) || !(c * a).is_zero())
            throw PreconditionUnmet("column " + std::to_string(r) + " is not short exact");
    }
    auto complex_row = [&](std::vector<Matrix<F>> ms, const std::string& name) {
        for (std::size_t k = 0; k + 1 < ms.size(); ++k)
            if (!(ms[k + 1] * ms[k]).is_zero()) throw PreconditionUnmet(name + " is not a complex");
    };
    for (int i : {1, 2}) {
        std::vector<Matrix<F>> ms;
        for (int r = -1; r <= L + R; ++r) ms.push_back(b.dh({i, r}));
        complex_row(ms, "row " + std::to_string(i));
    }
    std::vector<Matrix<F>> detour;
    for (int r = -1; r < L - 1; ++r) detour.push_back(b.dh({0, r}));
    detour.push_back(t.curve_in);
    detour.push_back(b.dv({1, L}));
    detour.push_back(t.curve_out);
    for (int r = L + 1; r <= L + R; ++r) detour.push_back(b.dh({3, r}));
    complex_row(detour, "detour row");
}

// Squares off the curved arrows with Ker and Cok of the middle arrow and reads
// the long exact sequence of horizontal homologies along rows 1 and 2.
template <class F>
TwistReport<F> twist_sequence(const TwistDiagram<F>& t) {
    check_twist_shape(t);
    const F& f = t.body.field();
    int L = t.left, R = t.right;
    DoubleComplex<F> s = t.body;
    auto mid = t.body.dv({1, L});
    auto ker = kernel(mid);
    s.set_dim({0, L}, ker.dim());
    Matrix<F> into(f, ker.dim(), t.curve_in.cols());
    for (std::size_t j = 0; j < ker.dim(); ++j)
        for (std::size_t c = 0; c < t.curve_in.cols(); ++c) into(j, c) = t.curve_in(ker.pivots()[j], c);
    s.set_dh({0, L - 1}, into);
    s.set_dv({0, L}, ker.basis().transpose());
    Subquotient<F> cok(Subspace<F>::full(f, mid.rows()), image(mid));
    s.set_dim({3, L}, cok.dim());
    s.set_dv({2, L}, cok.coordinates(Matrix<F>::identity(f, mid.rows())).transpose());
    s.set_dh({3, L}, t.curve_out * cok.coord_basis().transpose());
    s.set_window({0, 3, 0, L + R});
    if (!validate(s).valid()) throw PreconditionUnmet("the twisted diagram does not commute");
    if (!exactness_profile(s).cols_exact()) throw InternalCheckFailed("squared-off columns are not exact");

    CornerContext<F> ctx(s);
    using K = CornerKind;
    PathTerms pt;
    for (int r = -2; r < L; ++r)
        for (K k : {K::receptor, K::horizontal, K::donor}) pt.refs.push_back({{1, r}, k});
    pt.refs.push_back({{1, L}, K::receptor});
    pt.refs.push_back({{1, L}, K::horizontal});
    pt.refs.push_back({{2, L}, K::horizontal});
    pt.refs.push_back({{2, L}, K::donor});
    for (int r = L + 1; r <= L + R + 2; ++r)
        for (K k : {K::receptor, K::horizontal, K::donor}) pt.refs.push_back({{2, r}, k});
    pt.orientation = std::string(pt.refs.size(), 'r');
    TwistReport<F> out{s, build_sequence(ctx, "twist", pt.refs), 9, static_cast<std::size_t>(3 * L + 9 + 3 * (R - 1))};
    substitute_homologies(ctx, out.sequence, pt, LineSet{{0, 1, 2, 3}, {}});
    return out;
}

}  // namespace salamander
