#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <salamander/matrix.hpp>

namespace testsupport {

using salamander::Matrix;
using salamander::PrimeField;

inline Matrix<PrimeField> random_matrix(const PrimeField& f, std::size_t r, std::size_t c, std::mt19937_64& g,
                                        double density = 1.0) {
    Matrix<PrimeField> m(f, r, c);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (u(g) < density) m(i, j) = static_cast<std::uint32_t>(g() % f.modulus());
    return m;
}

// Rank by plain elimination on a copy of the entries, independent of the library's rref.
inline std::size_t oracle_rank(const Matrix<PrimeField>& m) {
    std::int64_t p = m.field().modulus();
    std::vector<std::vector<std::int64_t>> a(m.rows(), std::vector<std::int64_t>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
    auto powm = [p](std::int64_t b, std::int64_t e) {
        std::int64_t r = 1;
        b %= p;
        while (e) {
            if (e & 1) r = r * b % p;
            b = b * b % p;
            e >>= 1;
        }
        return r;
    };
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
        std::size_t piv = rank;
        while (piv < m.rows() && a[piv][col] == 0) ++piv;
        if (piv == m.rows()) continue;
        std::swap(a[piv], a[rank]);
        std::int64_t inv = powm(a[rank][col], p - 2);
        for (std::size_t i = rank + 1; i < m.rows(); ++i) {
            std::int64_t t = a[i][col] * inv % p;
            for (std::size_t j = col; j < m.cols(); ++j) a[i][j] = ((a[i][j] - t * a[rank][j]) % p + p) % p;
        }
        ++rank;
    }
    return rank;
}

}  // namespace testsupport
