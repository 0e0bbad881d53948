#include <catch_amalgamated.hpp>

#include <salamander/construct.hpp>

#include "support.hpp"

using namespace salamander;
using testsupport::oracle_rank;

namespace {

const PrimeField gf7(7);
const PrimeField gf101(101);

DoubleComplex<PrimeField> random_complex(std::uint64_t seed) {
    GeneratorSpec spec;
    spec.seed = seed;
    spec.window = {0, 3, 0, 3};
    spec.max_dim = 3;
    GeneratorMode modes[] = {GeneratorMode::tensor, GeneratorMode::chain_map_fill, GeneratorMode::ex_extensions,
                             GeneratorMode::nonexact_rows};
    spec.mode = modes[seed % 4];
    spec.lines = {{true, 1}, {false, 2}, {true, 3}};
    return generate(gf101, spec);
}

// Dimensions of the four objects from ranks alone.
std::size_t oracle_dim(const DoubleComplex<PrimeField>& c, Position a, CornerKind k) {
    std::size_t n = c.dim(a);
    auto d = c.dh(a.left()), e = c.dh(a), cc = c.dv(a.up()), f = c.dv(a);
    auto p = cc * c.dh(a.up().left()), q = c.dv(a.right()) * e;
    switch (k) {
        case CornerKind::horizontal: return n - oracle_rank(e) - oracle_rank(d);
        case CornerKind::vertical: return n - oracle_rank(f) - oracle_rank(cc);
        case CornerKind::receptor: return n - oracle_rank(vstack(e, f)) - oracle_rank(p);
        case CornerKind::donor: return n - oracle_rank(q) - oracle_rank(hstack(cc, d));
    }
    return 0;
}

const CornerKind kinds[] = {CornerKind::horizontal, CornerKind::vertical, CornerKind::donor, CornerKind::receptor};

// One identity vertical arrow B -> B, everything else zero.
DoubleComplex<PrimeField> identity_arrow(std::size_t d) {
    DoubleComplex<PrimeField> c(gf7);
    c.set_dim({0, 0}, d);
    c.set_dim({1, 0}, d);
    c.set_dv({0, 0}, Matrix<PrimeField>::identity(gf7, d));
    return c;
}

}  // namespace

TEST_CASE("zero complex corners vanish") {
    DoubleComplex<PrimeField> z(gf7);
    z.set_window({0, 2, 0, 2});
    CornerContext<PrimeField> ctx(z);
    for (Position p : z.window().widened(1).positions()) {
        for (auto k : kinds) CHECK(ctx.object(p, k)->dim() == 0);
        CHECK(ctx.extramural(p, Direction::horizontal).matrix.rows() == 0);
        CHECK(ctx.salamander(p, Direction::vertical).exact());
    }
}

TEST_CASE("identity vertical arrow") {
    auto c = identity_arrow(2);
    CHECK(corner(c, {0, 0}, CornerKind::receptor).value->dim() == 0);
    CHECK(corner(c, {0, 0}, CornerKind::horizontal).value->dim() == 2);
    auto m = intramural(c, {0, 0}, CornerKind::receptor, CornerKind::horizontal);
    CHECK(m.source->dim() == 0);
    CHECK(m.target->dim() == 2);
    CHECK_FALSE(is_iso(m));
}

TEST_CASE("elementary block corners vanish") {
    auto e = elementary(gf7, {0, 0}, 2);
    CornerContext<PrimeField> ctx(e);
    for (Position p : e.window().widened(1).positions()) {
        for (auto k : kinds) CHECK(ctx.object(p, k)->dim() == 0);
        for (Direction d : {Direction::horizontal, Direction::vertical}) {
            auto x = ctx.extramural(p, d);
            CHECK(x.matrix.rows() == 0);
            CHECK(x.matrix.cols() == 0);
        }
    }
}

TEST_CASE("invalid intramural pairs") {
    auto e = elementary(gf7, {0, 0}, 1);
    CornerContext<PrimeField> ctx(e);
    CHECK_THROWS_AS(ctx.intramural({0, 0}, CornerKind::donor, CornerKind::receptor), InvalidPair);
    CHECK_THROWS_AS(ctx.intramural({0, 0}, CornerKind::horizontal, CornerKind::vertical), InvalidPair);
    CHECK_THROWS_AS(ctx.intramural({0, 0}, CornerKind::receptor, CornerKind::donor), InvalidPair);
    CHECK_NOTHROW(ctx.natural({0, 0}, CornerKind::receptor, CornerKind::donor));
}

TEST_CASE("property: corner dimensions match rank counts and nesting holds") {
    for (std::uint64_t s = 0; s < 60; ++s) {
        auto c = random_complex(s);
        REQUIRE(validate(c).valid());
        CornerContext<PrimeField> ctx(c);
        for (Position p : c.window().widened(1).positions())
            for (auto k : kinds) {
                auto o = ctx.object(p, k);
                CHECK(o->dim() == oracle_dim(c, p, k));
                CHECK(contains(o->top(), o->bottom()));
            }
    }
}

TEST_CASE("property: intramural square commutes") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        auto c = random_complex(1000 + s);
        CornerContext<PrimeField> ctx(c);
        for (Position p : c.window().positions()) {
            auto a = compose(ctx.intramural(p, CornerKind::receptor, CornerKind::horizontal),
                             ctx.intramural(p, CornerKind::horizontal, CornerKind::donor));
            auto b = compose(ctx.intramural(p, CornerKind::receptor, CornerKind::vertical),
                             ctx.intramural(p, CornerKind::vertical, CornerKind::donor));
            CHECK(a.matrix == b.matrix);
        }
    }
}

TEST_CASE("property: homology maps factor through donor and receptor") {
    for (std::uint64_t s = 0; s < 200; ++s) {
        auto c = random_complex(2000 + s);
        CornerContext<PrimeField> ctx(c);
        for (auto [p, d] : arrows(c)) {
            auto direct = ctx.induced_homology_map(p, d);
            CHECK(direct.matrix == ctx.factored_homology_map(p, d).matrix);
        }
    }
}

TEST_CASE("homology map across an identity arrow between zero columns") {
    DoubleComplex<PrimeField> c(gf7);
    c.set_dim({0, 0}, 2);
    c.set_dim({0, 1}, 2);
    c.set_dh({0, 0}, Matrix<PrimeField>::identity(gf7, 2));
    auto m = induced_homology_map(c, {0, 0}, Direction::horizontal);
    CHECK(is_iso(m));
    CHECK(m.matrix.rows() == 2);
}

TEST_CASE("property: salamander sequences are exact") {
    for (std::uint64_t s = 0; s < 150; ++s) {
        auto c = random_complex(3000 + s);
        CornerContext<PrimeField> ctx(c);
        for (auto [p, d] : arrows(c)) {
            auto rep = ctx.salamander(p, d);
            CHECK(rep.terms.size() == 6);
            CHECK(rep.verdicts.size() == 4);
            CHECK(rep.exact());
        }
    }
}

TEST_CASE("mismatched salamander composes to the homology map") {
    // Horizontal identity A -> B with nothing else: A| -> B| is an isomorphism, not zero.
    DoubleComplex<PrimeField> c(gf7);
    c.set_dim({0, 0}, 1);
    c.set_dim({0, 1}, 1);
    c.set_dh({0, 0}, Matrix<PrimeField>::identity(gf7, 1));
    CornerContext<PrimeField> ctx(c);
    auto rep = ctx.mismatched_salamander({0, 0}, Direction::horizontal);
    auto comp = compose(compose(rep.maps[0], rep.maps[1]), rep.maps[2]);
    auto direct = ctx.induced_homology_map({0, 0}, Direction::horizontal);
    CHECK(comp.matrix == direct.matrix);
    CHECK_FALSE(comp.matrix.is_zero());
    CHECK_FALSE(rep.exact());
}

TEST_CASE("kernel and image ratios") {
    DoubleComplex<PrimeField> z(gf7);
    z.set_window({0, 1, 0, 1});
    CHECK(kernel_ratio(z, {0, 0}).dim() == 0);
    CHECK(image_ratio(z, {1, 1}).dim() == 0);

    auto e = elementary(gf7, {0, 0}, 2);
    CHECK(kernel_ratio(e, {0, 0}).dim() == 0);
    CHECK(image_ratio(e, {1, 1}).dim() == 0);

    // Exact at P in both directions: the kernel ratio equals the donor.
    for (std::uint64_t s = 0; s < 60; ++s) {
        auto c = random_complex(4000 + s);
        CornerContext<PrimeField> ctx(c);
        for (Position p : c.window().positions()) {
            if (row_exact_at(c, p) && col_exact_at(c, p)) {
                auto kr = ctx.kernel_ratio(p);
                auto don = ctx.object(p, CornerKind::donor);
                CHECK(kr.top() == don->top());
                CHECK(kr.bottom() == don->bottom());
                auto ir = ctx.image_ratio(p);
                auto rec = ctx.object(p, CornerKind::receptor);
                CHECK(ir.top() == rec->top());
                CHECK(ir.bottom() == rec->bottom());
            }
        }
    }
}
