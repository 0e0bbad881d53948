#include <catch_amalgamated.hpp>

#include <salamander/nfold.hpp>

#include "support.hpp"

using namespace salamander;
using testsupport::oracle_rank;

namespace {

const PrimeField gf101(101);

TripleComplex<PrimeField> random_triple(std::uint64_t seed) {
    Rng rng(seed);
    auto p = random_chain(gf101, 0, 2, 2, rng, {0, 1, 2});
    auto q = random_chain(gf101, 0, 2, 2, rng, {0, 1, 2});
    auto r = random_chain(gf101, 0, 1, 2, rng, {0, 1});
    return conjugate(tensor3(p, q, r), rng);
}

DoubleComplex<PrimeField> random_double(std::uint64_t seed) {
    GeneratorSpec s;
    s.seed = seed;
    s.window = {0, 3, 0, 3};
    s.max_dim = 3;
    GeneratorMode modes[] = {GeneratorMode::chain_map_fill, GeneratorMode::tensor, GeneratorMode::nonexact_rows,
                             GeneratorMode::ex_extensions};
    s.mode = modes[seed % 4];
    s.lines = {{true, 1}, {false, 2}};
    return generate(gf101, s);
}

// Homology dimension of a chain complex at one degree, by oracle ranks.
std::size_t chain_homology(const ChainComplex<PrimeField>& c, int deg) {
    return c.dim(deg) - oracle_rank(c.d(deg)) - oracle_rank(c.d(deg - 1));
}

}  // namespace

TEST_CASE("down-set counts and orbits") {
    auto two = enumerate_downsets(2);
    CHECK(two.sets.size() == 4);
    CHECK(two.orbit_sizes() == std::vector<std::size_t>{1, 1, 2});
    auto three = enumerate_downsets(3);
    CHECK(three.sets.size() == 18);
    CHECK(three.orbits.size() == 8);
    CHECK(three.orbit_sizes() == std::vector<std::size_t>{1, 1, 1, 3, 3, 3, 3, 3});
    for (const auto& s : three.sets) {
        CHECK_FALSE(s.members.empty());
        CHECK_FALSE(s.contains(0));
    }
    CHECK_THROWS_AS(enumerate_downsets(4), PreconditionUnmet);
}

TEST_CASE("n = 2 down-sets are the four corner objects") {
    const std::vector<std::pair<DownSet, CornerKind>> dict{
        {DownSet{2, {3}}, CornerKind::donor},
        {up_closure(2, {2}), CornerKind::horizontal},  // bit 1 = column direction
        {up_closure(2, {1}), CornerKind::vertical},
        {DownSet{2, {1, 2, 3}}, CornerKind::receptor}};
    std::size_t compared = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto c = random_double(seed);
        auto t = from_double(c);
        REQUIRE(is_valid(t));
        CornerContext<PrimeField> ctx(c);
        for (Position p : c.window().widened(1).positions()) {
            Position3 q{p.i, p.r, 0};
            for (const auto& [s, k] : dict) {
                CHECK(downset_homology(t, q, s) == *ctx.object(p, k));
                ++compared;
            }
            for (const auto& [s, k] : dict)
                for (const auto& [s2, k2] : dict) {
                    if (s == s2 || !s.includes(s2)) continue;
                    CHECK(downset_intramural(t, q, s, s2).matrix == ctx.natural(p, k, k2).matrix);
                }
        }
    }
    CHECK(compared > 4000);
}

TEST_CASE("axial down-sets give directional homology") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        Rng rng(seed);
        auto p = random_chain(gf101, 0, 2, 2, rng, {0, 1, 2});
        auto q = random_chain(gf101, 0, 2, 2, rng, {0, 1, 2});
        auto r = random_chain(gf101, 0, 1, 2, rng, {0, 1});
        auto t = tensor3(p, q, r);
        for (const auto& x : t.box(1)) {
            for (int k = 0; k < 3; ++k) {
                auto h = downset_homology(t, x, up_closure(3, {1u << k}));
                Subquotient<PrimeField> direct(kernel(t.d(x, k)), image(t.d(shifted(x, 1u << k, -1), k)));
                CHECK(h == direct);
            }
            // Künneth along the first axis
            std::size_t expect = chain_homology(p, x[0]) * q.dim(x[1]) * r.dim(x[2]);
            CHECK(downset_homology(t, x, up_closure(3, {1})).dim() == expect);
        }
    }
}

TEST_CASE("intramural maps compose along the lattice") {
    auto cat = enumerate_downsets(3);
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto t = random_triple(seed);
        REQUIRE(is_valid(t));
        for (const Position3& x : {Position3{1, 1, 0}, Position3{1, 1, 1}, Position3{2, 1, 1}}) {
            for (const auto& a : cat.sets) {
                CHECK(downset_intramural(t, x, a, a).matrix ==
                      Matrix<PrimeField>::identity(gf101, downset_homology(t, x, a).dim()));
                for (const auto& b : cat.sets) {
                    if (!a.includes(b)) {
                        CHECK_THROWS_AS(downset_intramural(t, x, a, b), PreconditionUnmet);
                        continue;
                    }
                    for (const auto& c : cat.sets) {
                        if (!b.includes(c)) continue;
                        auto direct = downset_intramural(t, x, a, c);
                        auto path = compose(downset_intramural(t, x, a, b), downset_intramural(t, x, b, c));
                        CHECK(path.matrix == direct.matrix);
                    }
                }
            }
        }
    }
}

TEST_CASE("denominator lies inside numerator") {
    auto cat = enumerate_downsets(3);
    std::size_t checked = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto t = random_triple(seed);
        for (const auto& x : t.box(1))
            for (const auto& s : cat.sets) {
                auto parts = downset_parts(t, x, s);
                CHECK(contains(parts.numerator, parts.denominator));
                ++checked;
            }
    }
    CHECK(checked > 5000);
}

TEST_CASE("elementary cubes and their extensions are killed by all 18") {
    CubicalComplex<PrimeField> zero(gf101, 3);
    zero.set_dim({0, 0, 0}, 0);
    CHECK(triple_vanishing_probe(zero).vanishes());

    auto e = elementary_cube(gf101, 3, {0, 0, 0}, 2);
    REQUIRE(is_valid(e));
    auto pe = triple_vanishing_probe(e);
    CHECK(pe.vanishes());
    CHECK(pe.evaluated == 18 * 4 * 4 * 4);

    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Rng rng(seed);
        auto t = cube_extensions(gf101, 3, 2, 1 + seed % 4, 2, rng);
        REQUIRE(is_valid(t));
        auto probe = triple_vanishing_probe(t);
        INFO("seed " << seed);
        CHECK(probe.vanishes());
    }
}

TEST_CASE("the probe rejects inexact input") {
    auto t = random_triple(3);
    bool inexact = false;
    for (const auto& x : t.box(1))
        for (int k = 0; k < 3; ++k)
            if (!axis_exact(t, x, k)) inexact = true;
    REQUIRE(inexact);
    CHECK_THROWS_AS(triple_vanishing_probe(t), NotTriplyExact);
}
