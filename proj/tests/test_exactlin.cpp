#include <catch_amalgamated.hpp>

#include <salamander/subquotient.hpp>

#include "support.hpp"

using namespace salamander;
using testsupport::oracle_rank;
using testsupport::random_matrix;

namespace {

const PrimeField gf7(7);
const PrimeField gf5(5);
const PrimeField gf101(101);

Matrix<PrimeField> M(const PrimeField& f, std::vector<std::vector<long long>> rows, std::size_t cols = 0) {
    return Matrix<PrimeField>::from_ints(f, rows, cols);
}

}  // namespace

TEST_CASE("prime field arithmetic and construction") {
    CHECK(gf7.inv(3) == 5);
    CHECK(gf7.mul(3, 5) == 1);
    CHECK(gf7.parse("-1") == 6);
    CHECK(gf7.parse("1/3") == 5);
    CHECK_THROWS_AS(PrimeField(9), Error);
    CHECK_THROWS_AS(PrimeField(1), Error);
    CHECK_THROWS_AS(PrimeField(1ULL << 31), Error);
    CHECK(PrimeField(2147483629ULL).modulus() == 2147483629U);
    CHECK_THROWS_AS(gf7.inv(0), NotInvertible);
    for (std::uint32_t a = 1; a < 101; ++a) CHECK(gf101.mul(a, gf101.inv(a)) == 1);
}

TEST_CASE("rational field normalizes") {
    RationalField q;
    auto x = q.parse("6/-4");
    CHECK(q.to_string(x) == "-3/2");
    CHECK(q.to_string(q.parse("4/2")) == "2");
    CHECK_THROWS_AS(q.parse("1/0"), Error);
}

TEST_CASE("rref examples") {
    auto id = Matrix<PrimeField>::identity(gf7, 2);
    auto r = rref(id);
    CHECK(r.matrix == id);
    CHECK(r.rank == 2);
    CHECK(r.pivots == std::vector<std::size_t>{0, 1});

    auto z = Matrix<PrimeField>(gf7, 3, 2);
    auto rz = rref(z);
    CHECK(rz.matrix == z);
    CHECK(rz.rank == 0);
    CHECK(rz.pivots.empty());

    auto rr = rref(M(gf7, {{2, 4}, {1, 2}}));
    CHECK(rr.matrix == M(gf7, {{1, 2}, {0, 0}}));
    CHECK(rr.rank == 1);
    CHECK(rr.pivots == std::vector<std::size_t>{0});
}

TEST_CASE("kernel and image examples") {
    auto k = kernel(Matrix<PrimeField>(gf7, 2, 3));
    CHECK(k == Subspace<PrimeField>::full(gf7, 3));
    CHECK(image(Matrix<PrimeField>::identity(gf7, 4)) == Subspace<PrimeField>::full(gf7, 4));
    auto k2 = kernel(M(gf7, {{1, 0}, {0, 0}}));
    CHECK(k2 == Subspace<PrimeField>::span(M(gf7, {{0, 1}})));
    CHECK(k2.dim() == 1);
}

TEST_CASE("degenerate shapes") {
    Matrix<PrimeField> a(gf7, 0, 3), b(gf7, 3, 0);
    CHECK(kernel(a).dim() == 3);
    CHECK(image(a).dim() == 0);
    CHECK(image(a).ambient() == 0);
    CHECK(kernel(b).dim() == 0);
    CHECK(image(b).ambient() == 3);
    CHECK((b * a).shape() == "3x3");
    CHECK((a * b).shape() == "0x0");
    auto s = share(make_subquotient(Subspace<PrimeField>::zero(gf7, 0), Subspace<PrimeField>::zero(gf7, 0)));
    CHECK(s->dim() == 0);
    CHECK(is_iso(identity_map(s)));
}

TEST_CASE("sum, intersection, containment") {
    auto e1 = Subspace<PrimeField>::span(M(gf5, {{1, 0}}));
    auto e2 = Subspace<PrimeField>::span(M(gf5, {{0, 1}}));
    auto z = Subspace<PrimeField>::zero(gf5, 2);
    auto full = Subspace<PrimeField>::full(gf5, 2);
    CHECK(subspace_sum(e1, z) == e1);
    CHECK(subspace_intersect(e1, full) == e1);
    CHECK(subspace_intersect(e1, e2) == z);
    auto u = Subspace<PrimeField>::span(M(gf5, {{1, 1}}));
    auto v = Subspace<PrimeField>::span(M(gf5, {{1, 4}}));
    CHECK(subspace_sum(u, v) == full);
    CHECK(contains(full, u));
    CHECK_FALSE(contains(u, v));
    CHECK_THROWS_AS(subspace_sum(u, Subspace<PrimeField>::zero(gf5, 3)), AmbientMismatch);
    CHECK_THROWS_AS(subspace_intersect(u, Subspace<PrimeField>::zero(gf5, 3)), AmbientMismatch);
}

TEST_CASE("make_subquotient examples") {
    auto full = Subspace<PrimeField>::full(gf7, 2);
    auto z = Subspace<PrimeField>::zero(gf7, 2);
    CHECK(make_subquotient(full, full).dim() == 0);
    auto s = make_subquotient(full, z);
    CHECK(s.dim() == 2);
    CHECK(s.coord_basis() == Matrix<PrimeField>::identity(gf7, 2));
    auto d = Subspace<PrimeField>::span(M(gf7, {{1, 1}}));
    CHECK(make_subquotient(full, d).dim() == 1);
    CHECK_THROWS_AS(make_subquotient(d, full), NotNested);
}

TEST_CASE("induced_map examples") {
    auto full = Subspace<PrimeField>::full(gf7, 2);
    auto z = Subspace<PrimeField>::zero(gf7, 2);
    auto s = share(make_subquotient(full, z));
    auto t = share(make_subquotient(full, full));
    auto id = Matrix<PrimeField>::identity(gf7, 2);
    CHECK(induced_map(id, s, s).matrix == id);
    CHECK(induced_map(Matrix<PrimeField>(gf7, 2, 2), s, s).matrix.is_zero());
    auto m = induced_map(id, s, t);
    CHECK(m.matrix.rows() == 0);
    CHECK(m.matrix.cols() == 2);

    // Not well defined: the line (1,0) is not sent into the line (0,1).
    auto l1 = share(make_subquotient(Subspace<PrimeField>::span(M(gf7, {{1, 0}})), z));
    auto l2 = share(make_subquotient(Subspace<PrimeField>::span(M(gf7, {{0, 1}})), z));
    CHECK_THROWS_AS(induced_map(id, l1, l2), NotWellDefined);
    // Bottom containment failing.
    auto q = share(make_subquotient(full, Subspace<PrimeField>::span(M(gf7, {{1, 0}}))));
    auto q2 = share(make_subquotient(full, Subspace<PrimeField>::span(M(gf7, {{0, 1}}))));
    CHECK_THROWS_AS(induced_map(id, q, q2), NotWellDefined);
}

TEST_CASE("compose, invert, exactness") {
    auto s = share(make_subquotient(Subspace<PrimeField>::full(gf7, 1), Subspace<PrimeField>::zero(gf7, 1)));
    SubquotientMap<PrimeField> f{s, s, M(gf7, {{3}})};
    CHECK(invert(f).matrix == M(gf7, {{5}}));
    CHECK(invert(identity_map(s)).matrix == identity_map(s).matrix);
    CHECK(compose(f, zero_map(s, s)).matrix.is_zero());
    auto t = share(make_subquotient(Subspace<PrimeField>::full(gf7, 2), Subspace<PrimeField>::zero(gf7, 2)));
    CHECK_THROWS_AS(compose(f, identity_map(t)), SourceTargetMismatch);
    CHECK_THROWS_AS(invert(zero_map(s, s)), NotInvertible);
    CHECK_THROWS_AS(invert(zero_map(s, t)), NotInvertible);
}

TEST_CASE("property: rref canonical and subspace values independent of spanning set") {
    std::mt19937_64 g(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + g() % 5, k = g() % 5;
        auto a = random_matrix(gf101, k, n, g, 0.5);
        auto r1 = rref(a);
        auto r2 = rref(r1.matrix);
        CHECK(r1.matrix == r2.matrix);
        CHECK(r1.rank == oracle_rank(a));
        // Random invertible recombination of rows spans the same space.
        auto mix = random_matrix(gf101, k, k, g);
        while (rank(mix) < k) mix = random_matrix(gf101, k, k, g);
        CHECK(Subspace<PrimeField>::span(mix * a) == Subspace<PrimeField>::span(a));
        CHECK(kernel(a).dim() == n - oracle_rank(a));
        CHECK(image(a).dim() == oracle_rank(a));
        // Kernel vectors are annihilated.
        CHECK((a * kernel(a).basis().transpose()).is_zero());
    }
}

TEST_CASE("property: intersection and sum dimension formula") {
    std::mt19937_64 g(12);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + g() % 6;
        auto u = Subspace<PrimeField>::span(random_matrix(gf101, g() % (n + 1), n, g, 0.6));
        auto v = Subspace<PrimeField>::span(random_matrix(gf101, g() % (n + 1), n, g, 0.6));
        auto s = subspace_sum(u, v);
        auto i = subspace_intersect(u, v);
        CHECK(s.dim() + i.dim() == u.dim() + v.dim());
        CHECK(contains(u, i));
        CHECK(contains(v, i));
        CHECK(contains(s, u));
        CHECK(contains(s, v));
    }
}

TEST_CASE("property: exactness test soundness") {
    std::mt19937_64 g(13);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t a = g() % 4, b = 1 + g() % 4, c = g() % 4;
        auto sa = share(make_subquotient(Subspace<PrimeField>::full(gf101, a), Subspace<PrimeField>::zero(gf101, a)));
        auto sb = share(make_subquotient(Subspace<PrimeField>::full(gf101, b), Subspace<PrimeField>::zero(gf101, b)));
        auto sc = share(make_subquotient(Subspace<PrimeField>::full(gf101, c), Subspace<PrimeField>::zero(gf101, c)));
        auto g1 = random_matrix(gf101, c, b, g, 0.7);
        // Sometimes force g1 * f1 = 0 by sampling f1 from the kernel of g1.
        Matrix<PrimeField> f1 = random_matrix(gf101, b, a, g, 0.7);
        if (g() % 2) {
            auto k = kernel(g1).basis();
            f1 = k.transpose() * random_matrix(gf101, k.rows(), a, g);
        }
        SubquotientMap<PrimeField> f{sa, sb, f1}, h{sb, sc, g1};
        auto im = map_image(f), ke = map_kernel(h);
        bool expected = contains(ke, im) && im.dim() == ke.dim();
        CHECK(exact_at(f, h) == expected);
    }
}

TEST_CASE("property: induced maps respect composition") {
    std::mt19937_64 g(14);
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t n1 = 1 + g() % 4, n2 = 1 + g() % 4, n3 = 1 + g() % 4;
        auto m1 = random_matrix(gf101, n2, n1, g, 0.7);
        auto m2 = random_matrix(gf101, n3, n2, g, 0.7);
        // Choose subquotients compatible with the maps: X1 arbitrary, Y1 ⊆ X1,
        // X2 = m1 X1 + extra, Y2 = m1 Y1 + extra' ⊆ X2, and so on.
        auto x1 = Subspace<PrimeField>::span(random_matrix(gf101, 1 + g() % n1, n1, g));
        auto y1 = Subspace<PrimeField>::span(random_matrix(gf101, g() % 2, x1.dim(), g) * x1.basis());
        auto push = [&](const Subspace<PrimeField>& s, const Matrix<PrimeField>& m) {
            return Subspace<PrimeField>::span(s.basis() * m.transpose());
        };
        auto y2 = push(y1, m1);
        auto x2 = subspace_sum(push(x1, m1), y2);
        auto y3 = push(y2, m2);
        auto x3 = subspace_sum(push(x2, m2), Subspace<PrimeField>::span(random_matrix(gf101, g() % 2, n3, g)));
        auto s1 = share(make_subquotient(x1, y1));
        auto s2 = share(make_subquotient(x2, y2));
        auto s3 = share(make_subquotient(x3, subspace_intersect(x3, subspace_sum(y3, Subspace<PrimeField>::zero(gf101, n3)))));
        auto direct = induced_map(m2 * m1, s1, s3);
        auto comp = compose(induced_map(m1, s1, s2), induced_map(m2, s2, s3));
        CHECK(direct.matrix == comp.matrix);
    }
}

TEST_CASE("property: quotient coordinates are zero exactly on the bottom") {
    std::mt19937_64 g(15);
    for (int trial = 0; trial < 150; ++trial) {
        std::size_t n = 1 + g() % 5;
        auto x = Subspace<PrimeField>::span(random_matrix(gf101, 1 + g() % n, n, g));
        auto y = Subspace<PrimeField>::span(random_matrix(gf101, g() % (x.dim() + 1), x.dim(), g) * x.basis());
        auto s = make_subquotient(x, y);
        CHECK(s.dim() == x.dim() - y.dim());
        CHECK(s.coordinates(y.basis()).is_zero());
        CHECK(s.coordinates(s.coord_basis()) == Matrix<PrimeField>::identity(gf101, s.dim()));
        CHECK(Subspace<PrimeField>::span(vstack(y.basis(), s.coord_basis())) == x);
        // Coordinates are linear and ignore the bottom.
        auto v = random_matrix(gf101, 1, x.dim(), g) * x.basis();
        auto w = random_matrix(gf101, 1, y.dim(), g) * y.basis();
        if (y.dim() == 0) w = Matrix<PrimeField>(gf101, 1, n);
        CHECK(s.coordinates(v + w) == s.coordinates(v));
    }
}

namespace {

// Integer fixtures shared with the rational backend.
std::vector<std::vector<std::vector<long long>>> integer_fixtures() {
    std::vector<std::vector<std::vector<long long>>> out;
    std::mt19937_64 g(99);
    for (int k = 0; k < 20; ++k) {
        std::size_t r = 1 + g() % 5, c = 1 + g() % 5;
        std::vector<std::vector<long long>> m(r, std::vector<long long>(c));
        for (auto& row : m)
            for (auto& x : row) x = static_cast<long long>(g() % 5) - 2;
        if (k % 3 == 0 && r > 1) m[r - 1] = m[0];
        out.push_back(m);
    }
    return out;
}

}  // namespace

TEST_CASE("property: rational and prime backends agree on integer fixtures") {
    RationalField q;
    for (const auto& fx : integer_fixtures()) {
        auto mp = Matrix<PrimeField>::from_ints(gf101, fx);
        auto mq = Matrix<RationalField>::from_ints(q, fx);
        CHECK(rref(mp).rank == rref(mq).rank);
        CHECK(rref(mp).pivots == rref(mq).pivots);
        CHECK(kernel(mp).dim() == kernel(mq).dim());
        CHECK(image(mp).dim() == image(mq).dim());
    }
}
