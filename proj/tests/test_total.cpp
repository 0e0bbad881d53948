#include <catch_amalgamated.hpp>

#include <salamander/construct.hpp>
#include <salamander/total.hpp>

#include "support.hpp"

using namespace salamander;
using testsupport::oracle_rank;

namespace {

const PrimeField gf101(101);

DoubleComplex<PrimeField> any_complex(std::uint64_t seed) {
    GeneratorSpec spec;
    spec.seed = seed;
    spec.window = {0, 3, 0, 3};
    spec.max_dim = 3;
    GeneratorMode modes[] = {GeneratorMode::tensor, GeneratorMode::chain_map_fill, GeneratorMode::ex_extensions,
                             GeneratorMode::nonexact_rows};
    spec.mode = modes[seed % 4];
    spec.rows_exact = seed % 3 == 0;
    spec.cols_exact = seed % 5 == 0;
    spec.lines = {{true, 1}, {false, 2}};
    return generate(gf101, spec);
}

DoubleComplex<PrimeField> exact_columns(std::uint64_t seed) {
    GeneratorSpec spec;
    spec.seed = seed;
    spec.window = {0, 3, 0, 3};
    spec.max_dim = 3;
    spec.mode = GeneratorMode::tensor;
    spec.cols_exact = true;
    spec.rows_exact = seed % 2 == 0;
    return generate(gf101, spec);
}

}  // namespace

TEST_CASE("total complex of small examples") {
    DoubleComplex<PrimeField> zero(gf101);
    auto tz = total_complex(zero);
    CHECK(tz.dim(0) == 0);
    CHECK(tz.d(0).is_zero());

    auto e = elementary(gf101, {0, 0}, 2);
    auto te = total_complex(e);
    CHECK(te.dim(0) == 2);
    CHECK(te.dim(1) == 4);
    CHECK(te.dim(2) == 2);
    for (int n = -1; n <= 3; ++n) CHECK(total_homology(e, n).value->dim() == 0);

    DoubleComplex<PrimeField> one(gf101);
    one.set_dim({2, 1}, 3);
    auto to = total_complex(one);
    CHECK(to.dim(3) == 3);
    CHECK(to.d(3).is_zero());
    CHECK(total_homology(one, 3).value->dim() == 3);
}

TEST_CASE("total differential block structure and sign") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto c = any_complex(seed);
        auto t = total_complex(c);
        for (int n = t.nmin - 1; n <= t.nmax; ++n) {
            CHECK((t.d(n + 1) * t.d(n)).is_zero());
            // (δ1+δ2)(δ1-δ2) = 0 = (δ1-δ2)(δ1+δ2)
            auto p = t.d1(n + 1) + t.d2(n + 1), m = t.d1(n) - t.d2(n);
            auto p0 = t.d1(n) + t.d2(n), m1 = t.d1(n + 1) - t.d2(n + 1);
            CHECK((p * m).is_zero());
            CHECK((m1 * p0).is_zero());
            auto it = t.degrees.find(n);
            if (it == t.degrees.end()) continue;
            for (auto& [i, d] : it->second) {
                Position pos{i, n - i};
                std::size_t src = t.offset(n, i);
                if (auto tgt = t.offset(n + 1, i + 1); tgt != t.npos)
                    CHECK(t.d(n).block(tgt, src, c.dim(pos.down()), d) ==
                          (n % 2 == 0 ? c.dv(pos) : -c.dv(pos)));
                if (auto tgt = t.offset(n + 1, i); tgt != t.npos)
                    CHECK(t.d(n).block(tgt, src, c.dim(pos.right()), d) == c.dh(pos));
            }
        }
    }
}

TEST_CASE("total donors and receptors are blockwise sums") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        auto c = any_complex(seed);
        TotalContext<PrimeField> ctx(c);
        const auto& t = ctx.total();
        for (int n = t.nmin - 2; n <= t.nmax + 2; ++n) {
            CHECK(ctx.block_identity(n, TotalKind::donor));
            CHECK(ctx.block_identity(n, TotalKind::receptor));
        }
    }
}

TEST_CASE("total homology dimension from ranks") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto c = any_complex(seed);
        auto t = total_complex(c);
        for (int n = t.nmin - 1; n <= t.nmax + 1; ++n)
            CHECK(total_homology(c, n).value->dim() == t.dim(n) - oracle_rank(t.d(n)) - oracle_rank(t.d(n - 1)));
    }
}

TEST_CASE("bar deltas agree up to sign") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        auto c = any_complex(seed);
        TotalContext<PrimeField> ctx(c);
        const auto& t = ctx.total();
        for (int n = t.nmin - 2; n <= t.nmax + 1; ++n) CHECK_NOTHROW(bar_deltas(ctx, n));
    }
    DoubleComplex<PrimeField> zero(gf101);
    auto b = bar_deltas(zero, 0);
    CHECK(b.d.source->dim() == 0);
}

TEST_CASE("total salamander is exact and matches the skew complex") {
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
        auto c = any_complex(seed);
        TotalContext<PrimeField> ctx(c);
        const auto& t = ctx.total();
        for (int n = t.nmin - 2; n <= t.nmax + 1; ++n) {
            auto r = total_salamander(ctx, n);
            CHECK(r.direct.terms.size() == 6);
            CHECK(r.direct.exact());
            CHECK(r.skew.exact());
            CHECK(r.dims_match);
            CHECK(skew_dims_match(ctx, n));
        }
    }
}

TEST_CASE("exact columns: long sequence, invertible δ̄1, vanishing homology") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        auto c = exact_columns(seed);
        REQUIRE(exactness_profile(c).cols_exact());
        TotalContext<PrimeField> ctx(c);
        auto seq = total_long(ctx);
        CHECK(seq.exact());
        const auto& t = ctx.total();
        for (int n = t.nmin - 2; n <= t.nmax + 2; ++n) {
            CHECK(is_iso(ctx.bar(n, 1)));
            CHECK(ctx.object(n, TotalKind::diag)->dim() == 0);
            auto col = staircase_colimit(ctx, n);
            CHECK(col.agree);
            CHECK(col.colimit->dim() == 0);
        }
    }
}

TEST_CASE("doubly exact complexes have zero total homology") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        GeneratorSpec spec;
        spec.seed = seed;
        spec.window = {0, 3, 0, 3};
        spec.mode = seed % 2 ? GeneratorMode::ex_extensions : GeneratorMode::tensor;
        spec.rows_exact = spec.cols_exact = true;
        auto c = generate(gf101, spec);
        REQUIRE(exactness_profile(c).all_exact());
        auto t = total_complex(c);
        for (int n = t.nmin - 1; n <= t.nmax + 1; ++n) CHECK(total_homology(c, n).value->dim() == 0);
    }
}

TEST_CASE("total long needs exact columns") {
    DoubleComplex<PrimeField> c(gf101);
    c.set_dim({0, 0}, 1);
    CHECK_THROWS_AS(total_long(c), PreconditionUnmet);
    CHECK_THROWS_AS(staircase_colimit(c, 0), PreconditionUnmet);
}
