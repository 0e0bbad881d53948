#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "grid.hpp"

namespace salamander {

enum class CornerKind { horizontal, vertical, donor, receptor };

inline const char* to_string(CornerKind k) {
    switch (k) {
        case CornerKind::horizontal: return "horizontal";
        case CornerKind::vertical: return "vertical";
        case CornerKind::donor: return "donor";
        case CornerKind::receptor: return "receptor";
    }
    return "?";
}

struct CornerRef {
    Position pos;
    CornerKind kind;

    auto operator<=>(const CornerRef&) const = default;

    std::string label() const {
        std::string a = "A" + pos.to_string();
        switch (kind) {
            case CornerKind::horizontal: return a + "—";
            case CornerKind::vertical: return a + "|";
            case CornerKind::donor: return a + "□";
            case CornerKind::receptor: return "□" + a;
        }
        return a;
    }
};

template <class F>
struct CornerObject {
    Position position;
    CornerKind kind;
    SubquotientPtr<F> value;
};

struct TraceStep {
    std::string kind;  // intramural, extramural, inverse-intramural, inverse-extramural, induced, ...
    Position at;
    std::string detail;

    std::string to_string() const { return kind + " at " + at.to_string() + (detail.empty() ? "" : ": " + detail); }
};

template <class F>
struct SequenceTerm {
    std::string label;
    std::optional<CornerRef> ref;
    SubquotientPtr<F> value;
};

// An ordered chain of maps; verdicts[k] is exactness at terms[k+1].
template <class F>
struct SequenceReport {
    std::string name;
    std::vector<SequenceTerm<F>> terms;
    std::vector<SubquotientMap<F>> maps;
    std::vector<bool> verdicts;
    std::vector<TraceStep> trace;

    void add_term(const std::string& label, const SubquotientPtr<F>& v, std::optional<CornerRef> ref = std::nullopt) {
        terms.push_back({label, ref, v});
    }
    void add_term(const CornerRef& ref, const SubquotientPtr<F>& v) { terms.push_back({ref.label(), ref, v}); }

    // Recomputes the interior exactness verdicts.
    void evaluate() {
        for (std::size_t k = 0; k < maps.size(); ++k) {
            if (!same_subquotient(maps[k].source, terms[k].value) ||
                !same_subquotient(maps[k].target, terms[k + 1].value))
                throw InternalCheckFailed("map " + std::to_string(k) + " of " + name + " does not join its terms");
        }
        verdicts.clear();
        for (std::size_t k = 1; k < maps.size(); ++k) verdicts.push_back(exact_at(maps[k - 1], maps[k]));
    }
    bool exact() const {
        for (bool v : verdicts)
            if (!v) return false;
        return true;
    }
    std::vector<std::size_t> dims() const {
        std::vector<std::size_t> out;
        for (const auto& t : terms) out.push_back(t.value->dim());
        return out;
    }
};

// Corner objects and maps of one complex, with memoized subquotients.
template <class F>
class CornerContext {
public:
    explicit CornerContext(const DoubleComplex<F>& c) : c_(c) {}

    const DoubleComplex<F>& complex() const { return c_; }
    const F& field() const { return c_.field(); }

    // Local arrows around A = pos: d, e horizontal in/out; c, f vertical in/out;
    // p diagonal in, q diagonal out.
    Matrix<F> d_in(Position a) const { return c_.dh(a.left()); }
    Matrix<F> e_out(Position a) const { return c_.dh(a); }
    Matrix<F> c_in(Position a) const { return c_.dv(a.up()); }
    Matrix<F> f_out(Position a) const { return c_.dv(a); }
    Matrix<F> p_in(Position a) const { return c_.dv(a.up()) * c_.dh(a.up().left()); }
    Matrix<F> q_out(Position a) const { return c_.dv(a.right()) * c_.dh(a); }

    SubquotientPtr<F> object(Position a, CornerKind k) {
        auto key = std::make_pair(a, k);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        auto v = share(build(a, k));
        cache_.emplace(key, v);
        return v;
    }
    SubquotientPtr<F> object(const CornerRef& ref) { return object(ref.pos, ref.kind); }

    SubquotientMap<F> intramural(Position a, CornerKind from, CornerKind to) {
        using K = CornerKind;
        bool ok = (from == K::receptor && (to == K::horizontal || to == K::vertical)) ||
                  ((from == K::horizontal || from == K::vertical) && to == K::donor);
        if (!ok)
            throw InvalidPair(std::string("no intramural map ") + to_string(from) + " -> " + to_string(to));
        return induced_map(Matrix<F>::identity(field(), c_.dim(a)), object(a, from), object(a, to));
    }

    // Any composite of intramural maps at one position, including the
    // identity and receptor -> donor.
    SubquotientMap<F> natural(Position a, CornerKind from, CornerKind to) {
        if (from == to) return identity_map(object(a, from));
        if (from == CornerKind::receptor && to == CornerKind::donor)
            return compose(intramural(a, CornerKind::receptor, CornerKind::horizontal),
                           intramural(a, CornerKind::horizontal, CornerKind::donor));
        return intramural(a, from, to);
    }

    SubquotientMap<F> extramural(Position a, Direction dir) {
        return induced_map(c_.d(a, dir), object(a, CornerKind::donor), object(step(a, dir), CornerKind::receptor));
    }

    // Horizontal arrows induce A| -> B|, vertical arrows A— -> B—.
    SubquotientMap<F> induced_homology_map(Position a, Direction dir) {
        CornerKind k = dir == Direction::horizontal ? CornerKind::vertical : CornerKind::horizontal;
        return induced_map(c_.d(a, dir), object(a, k), object(step(a, dir), k));
    }

    // The same map as the composite intramural, extramural, intramural.
    SubquotientMap<F> factored_homology_map(Position a, Direction dir) {
        CornerKind k = dir == Direction::horizontal ? CornerKind::vertical : CornerKind::horizontal;
        return compose(compose(intramural(a, k, CornerKind::donor), extramural(a, dir)),
                       intramural(step(a, dir), CornerKind::receptor, k));
    }

    SequenceReport<F> salamander(Position a, Direction dir) {
        SequenceReport<F> rep;
        using K = CornerKind;
        Position b = step(a, dir);
        Direction other = dir == Direction::horizontal ? Direction::vertical : Direction::horizontal;
        K hk = dir == Direction::horizontal ? K::horizontal : K::vertical;
        Position cpos = dir == Direction::horizontal ? a.up() : a.left();
        rep.name = "salamander " + a.to_string() + " " + to_string(dir);

        rep.add_term(CornerRef{cpos, K::donor}, object(cpos, K::donor));
        rep.add_term(CornerRef{a, hk}, object(a, hk));
        rep.add_term(CornerRef{a, K::donor}, object(a, K::donor));
        rep.add_term(CornerRef{b, K::receptor}, object(b, K::receptor));
        rep.add_term(CornerRef{b, hk}, object(b, hk));
        Position dpos = step(b, other);
        rep.add_term(CornerRef{dpos, K::receptor}, object(dpos, K::receptor));

        rep.maps.push_back(compose(extramural(cpos, other), intramural(a, K::receptor, hk)));
        rep.trace.push_back({"extramural", cpos, CornerRef{cpos, K::donor}.label() + " -> " + CornerRef{a, K::receptor}.label()});
        rep.trace.push_back({"intramural", a, CornerRef{a, K::receptor}.label() + " -> " + CornerRef{a, hk}.label()});
        rep.maps.push_back(intramural(a, hk, K::donor));
        rep.trace.push_back({"intramural", a, CornerRef{a, hk}.label() + " -> " + CornerRef{a, K::donor}.label()});
        rep.maps.push_back(extramural(a, dir));
        rep.trace.push_back({"extramural", a, CornerRef{a, K::donor}.label() + " -> " + CornerRef{b, K::receptor}.label()});
        rep.maps.push_back(intramural(b, K::receptor, hk));
        rep.trace.push_back({"intramural", b, CornerRef{b, K::receptor}.label() + " -> " + CornerRef{b, hk}.label()});
        rep.maps.push_back(compose(intramural(b, hk, K::donor), extramural(b, other)));
        rep.trace.push_back({"intramural", b, CornerRef{b, hk}.label() + " -> " + CornerRef{b, K::donor}.label()});
        rep.trace.push_back({"extramural", b, CornerRef{b, K::donor}.label() + " -> " + CornerRef{dpos, K::receptor}.label()});
        rep.evaluate();
        return rep;
    }

    // The sequence of the other orientation along the same arrow; its
    // middle three maps compose to the induced homology map.
    SequenceReport<F> mismatched_salamander(Position a, Direction dir) {
        SequenceReport<F> rep;
        using K = CornerKind;
        Position b = step(a, dir);
        K hk = dir == Direction::horizontal ? K::vertical : K::horizontal;
        rep.name = "mismatched salamander " + a.to_string() + " " + to_string(dir);
        rep.add_term(CornerRef{a, hk}, object(a, hk));
        rep.add_term(CornerRef{a, K::donor}, object(a, K::donor));
        rep.add_term(CornerRef{b, K::receptor}, object(b, K::receptor));
        rep.add_term(CornerRef{b, hk}, object(b, hk));
        rep.maps.push_back(intramural(a, hk, K::donor));
        rep.maps.push_back(extramural(a, dir));
        rep.maps.push_back(intramural(b, K::receptor, hk));
        rep.evaluate();
        return rep;
    }

    // Kernel ratio of the square with top-left corner a.
    Subquotient<F> kernel_ratio(Position a) const {
        auto fd = c_.dv(a.right()) * c_.dh(a);
        return Subquotient<F>(kernel(fd), subspace_sum(kernel(c_.dh(a)), kernel(c_.dv(a))));
    }
    // Image ratio of the square with bottom-right corner s.
    Subquotient<F> image_ratio(Position s) const {
        Position p = s.up().left();
        auto fd = c_.dv(p.right()) * c_.dh(p);
        return Subquotient<F>(subspace_intersect(image(c_.dv(s.up())), image(c_.dh(s.left()))), image(fd));
    }

private:
    Subquotient<F> build(Position a, CornerKind k) const {
        switch (k) {
            case CornerKind::horizontal: return Subquotient<F>(kernel(e_out(a)), image(d_in(a)));
            case CornerKind::vertical: return Subquotient<F>(kernel(f_out(a)), image(c_in(a)));
            case CornerKind::receptor:
                return Subquotient<F>(subspace_intersect(kernel(e_out(a)), kernel(f_out(a))), image(p_in(a)));
            case CornerKind::donor:
                return Subquotient<F>(kernel(q_out(a)), subspace_sum(image(c_in(a)), image(d_in(a))));
        }
        throw InternalCheckFailed("unknown corner kind");
    }

    const DoubleComplex<F>& c_;
    std::map<std::pair<Position, CornerKind>, SubquotientPtr<F>> cache_;
};

template <class F>
CornerObject<F> corner(const DoubleComplex<F>& c, Position pos, CornerKind kind) {
    CornerContext<F> ctx(c);
    return {pos, kind, ctx.object(pos, kind)};
}

template <class F>
SubquotientMap<F> intramural(const DoubleComplex<F>& c, Position pos, CornerKind from, CornerKind to) {
    CornerContext<F> ctx(c);
    return ctx.intramural(pos, from, to);
}

template <class F>
SubquotientMap<F> extramural(const DoubleComplex<F>& c, Position pos, Direction dir) {
    CornerContext<F> ctx(c);
    return ctx.extramural(pos, dir);
}

template <class F>
SubquotientMap<F> induced_homology_map(const DoubleComplex<F>& c, Position pos, Direction dir) {
    CornerContext<F> ctx(c);
    auto m = ctx.induced_homology_map(pos, dir);
    if (!(ctx.factored_homology_map(pos, dir).matrix == m.matrix))
        throw InternalCheckFailed("induced homology map differs from its factorization at " + pos.to_string());
    return m;
}

template <class F>
SequenceReport<F> salamander(const DoubleComplex<F>& c, Position pos, Direction dir) {
    CornerContext<F> ctx(c);
    return ctx.salamander(pos, dir);
}

template <class F>
Subquotient<F> kernel_ratio(const DoubleComplex<F>& c, Position pos) {
    return CornerContext<F>(c).kernel_ratio(pos);
}

template <class F>
Subquotient<F> image_ratio(const DoubleComplex<F>& c, Position pos) {
    return CornerContext<F>(c).image_ratio(pos);
}

// Every arrow of the complex whose endpoints meet the padded window.
template <class F>
std::vector<std::pair<Position, Direction>> arrows(const DoubleComplex<F>& c) {
    std::vector<std::pair<Position, Direction>> out;
    for (Position p : c.window().widened(1).positions())
        for (Direction d : {Direction::horizontal, Direction::vertical}) out.push_back({p, d});
    return out;
}

}  // namespace salamander
