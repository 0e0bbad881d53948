#include <catch_amalgamated.hpp>

#include <salamander/construct.hpp>

using namespace salamander;

namespace {

const PrimeField gf7(7);
const PrimeField gf101(101);

Matrix<PrimeField> one(const PrimeField& f, long long v) { return Matrix<PrimeField>::from_ints(f, {{v}}); }

DoubleComplex<PrimeField> random_complex(std::uint64_t seed, int mode) {
    GeneratorSpec spec;
    spec.seed = seed;
    spec.window = {0, 3, 0, 3};
    spec.max_dim = 3;
    spec.mode = mode == 0 ? GeneratorMode::tensor : mode == 1 ? GeneratorMode::chain_map_fill : GeneratorMode::ex_extensions;
    return generate(gf101, spec);
}

}  // namespace

TEST_CASE("validate examples") {
    DoubleComplex<PrimeField> z(gf7);
    CHECK(validate(z).valid());
    CHECK(validate(elementary(gf7, {0, 0}, 2)).valid());

    // 2x2 square of one-dimensional objects with entries 1, 1, 1, -1.
    DoubleComplex<PrimeField> c(gf7);
    for (Position p : {Position{0, 0}, Position{0, 1}, Position{1, 0}, Position{1, 1}}) c.set_dim(p, 1);
    c.set_dh({0, 0}, one(gf7, 1));
    c.set_dv({0, 1}, one(gf7, 1));
    c.set_dv({0, 0}, one(gf7, 1));
    c.set_dh({1, 0}, one(gf7, -1));
    auto rep = validate(c);
    REQUIRE(rep.issues.size() == 1);
    CHECK(rep.issues[0].kind == ValidationIssue::square);
    CHECK(rep.issues[0].pos == Position{0, 0});
    CHECK(validate(c, SquareMode::anticommuting).valid());
}

TEST_CASE("validate reports squares of differentials") {
    DoubleComplex<PrimeField> c(gf7);
    for (int r = 0; r < 3; ++r) c.set_dim({0, r}, 1);
    c.set_dh({0, 0}, one(gf7, 1));
    c.set_dh({0, 1}, one(gf7, 2));
    auto rep = validate(c);
    REQUIRE(rep.issues.size() == 1);
    CHECK(rep.issues[0].kind == ValidationIssue::horizontal_square);
}

TEST_CASE("shape mismatch rejected") {
    DoubleComplex<PrimeField> c(gf7);
    c.set_dim({0, 0}, 1);
    c.set_dim({1, 0}, 1);
    CHECK_THROWS_AS(c.set_dv({0, 0}, Matrix<PrimeField>::from_ints(gf7, {{1, 0}})), Error);
}

TEST_CASE("anticommute toggle") {
    DoubleComplex<PrimeField> z(gf7);
    CHECK(anticommute_toggle(z) == z);
    auto e = elementary(gf7, {0, 0}, 1);
    auto t = anticommute_toggle(e);
    CHECK(t.dh({1, 0}) == one(gf7, -1));
    CHECK(t.dh({0, 0}) == one(gf7, 1));
    CHECK(validate(t, SquareMode::anticommuting).valid());
    CHECK_FALSE(validate(t).valid());
    CHECK(anticommute_toggle(t) == e);
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto c = random_complex(s, static_cast<int>(s % 3));
        CHECK(anticommute_toggle(anticommute_toggle(c)) == c);
        CHECK(validate(anticommute_toggle(c), SquareMode::anticommuting).valid());
    }
}

TEST_CASE("transpose and reverse are involutions") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        auto c = random_complex(s, static_cast<int>(s % 3));
        REQUIRE(validate(c).valid());
        CHECK(transpose(transpose(c)) == c);
        CHECK(reverse(reverse(c)) == c);
        CHECK(validate(transpose(c)).valid());
        CHECK(validate(reverse(c)).valid());
        auto pc = exactness_profile(c), pt = exactness_profile(transpose(c));
        for (Position p : c.window().positions()) {
            CHECK(pc.row_exact(p) == pt.col_exact({p.r, p.i}));
            CHECK(pc.col_exact(p) == pt.row_exact({p.r, p.i}));
        }
    }
}

TEST_CASE("reverse swaps donors and receptors") {
    for (std::uint64_t s = 0; s < 40; ++s) {
        auto c = random_complex(100 + s, static_cast<int>(s % 3));
        auto d = reverse(c);
        CornerContext<PrimeField> cc(c), cd(d);
        for (Position p : c.window().widened(1).positions()) {
            Position q{-p.i, -p.r};
            CHECK(cd.object(q, CornerKind::donor)->dim() == cc.object(p, CornerKind::receptor)->dim());
            CHECK(cd.object(q, CornerKind::receptor)->dim() == cc.object(p, CornerKind::donor)->dim());
            CHECK(cd.object(q, CornerKind::horizontal)->dim() == cc.object(p, CornerKind::horizontal)->dim());
        }
    }
}

TEST_CASE("commuting squares hold on generated complexes") {
    for (std::uint64_t s = 0; s < 60; ++s) {
        auto c = random_complex(200 + s, static_cast<int>(s % 3));
        for (Position p : c.window().widened(1).positions())
            CHECK(c.dh(p.down()) * c.dv(p) == c.dv(p.right()) * c.dh(p));
    }
}

TEST_CASE("pad and kernel/cokernel completion") {
    DoubleComplex<PrimeField> z(gf7);
    z.set_window({0, 1, 0, 1});
    auto pz = pad(z);
    CHECK(pz.window() == Window{-1, 2, -1, 2});
    CHECK(pz.support().empty());

    // Two-row input whose verticals are given; completing kernels on top.
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        auto two = snake_instance(gf101, 3, rng);
        auto k = complete_with_kercoker(two, Side::top);
        REQUIRE(validate(k).valid());
        for (int r = 1; r <= 3; ++r) {
            CHECK(k.dim({0, r}) == kernel(two.dv({1, r})).dim());
            // the inclusion lands in the kernel and is injective
            CHECK((two.dv({1, r}) * k.dv({0, r})).is_zero());
            CHECK(rank(k.dv({0, r})) == k.dim({0, r}));
        }
        auto kc = complete_with_kercoker(k, Side::bottom);
        REQUIRE(validate(kc).valid());
        for (int r = 1; r <= 3; ++r) {
            CHECK(kc.dim({3, r}) == two.dim({2, r}) - rank(two.dv({1, r})));
            CHECK(col_exact_at(kc, {1, r}));
            CHECK(col_exact_at(kc, {2, r}));
        }
    }

    // A surjective column gets a zero cokernel.
    DoubleComplex<PrimeField> s(gf7);
    s.set_dim({0, 0}, 2);
    s.set_dim({1, 0}, 1);
    s.set_dv({0, 0}, Matrix<PrimeField>::from_ints(gf7, {{1, 3}}));
    auto sc = complete_with_kercoker(s, Side::bottom);
    CHECK(sc.dim({2, 0}) == 0);
    auto sr = complete_with_kercoker(transpose(s), Side::right);
    CHECK(sr.dim({0, 2}) == 0);
    auto sl = complete_with_kercoker(transpose(s), Side::left);
    CHECK(sl.dim({0, -1}) == 1);
    CHECK(validate(sl).valid());
}

TEST_CASE("exactness profile examples") {
    DoubleComplex<PrimeField> z(gf7);
    z.set_window({0, 2, 0, 2});
    CHECK(exactness_profile(z).all_exact());

    auto e = pad(elementary(gf7, {0, 0}, 1));
    CHECK(exactness_profile(e).all_exact());

    // Staircase whose lowest copy sits at (3,0): only that row fails among rows.
    auto st = staircase(gf7, {3, 0}, "urururu", 1);
    st.set_window({-1, 4, -1, 4});
    REQUIRE(validate(st).valid());
    auto prof = exactness_profile(st);
    CHECK(prof.nonexact_rows() == std::vector<int>{-1, 3});
    auto st2 = staircase(gf7, {3, 0}, "urururur", 1);
    st2.set_window({-1, 4, -1, 4});
    auto prof2 = exactness_profile(st2);
    CHECK(prof2.nonexact_rows() == std::vector<int>{3});
    CHECK(prof2.nonexact_cols() == std::vector<int>{4});
    CHECK(is_weakly_bounded(st2).holds);
}

TEST_CASE("tensor generator exactness pattern") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        GeneratorSpec spec;
        spec.seed = s;
        spec.mode = GeneratorMode::tensor;
        spec.cols_exact = true;
        spec.rows_exact = s % 2 == 0;
        auto c = generate(gf101, spec);
        REQUIRE(validate(c).valid());
        auto prof = exactness_profile(c);
        CHECK(prof.cols_exact());
        if (spec.rows_exact) CHECK(prof.rows_exact());
        CHECK(generate(gf101, spec) == c);
    }
}
