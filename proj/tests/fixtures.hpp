#pragma once

#include <string>

#include <salamander/construct.hpp>
#include <salamander/io.hpp>

namespace fixtures {

using namespace salamander;

// Clears denominators of each differential; kernels and images are unchanged.
inline ChainComplex<RationalField> integral(ChainComplex<RationalField> c) {
    for (auto& d : c.diffs) {
        boost::multiprecision::cpp_int l = 1;
        for (std::size_t i = 0; i < d.rows(); ++i)
            for (std::size_t j = 0; j < d.cols(); ++j) {
                auto den = boost::multiprecision::denominator(d(i, j));
                l = l / boost::multiprecision::gcd(l, den) * den;
            }
        d = d.scaled(RationalField::value_type(l));
    }
    return c;
}

// A complex with integer entries in the text format over Q, from one of three
// families: tensor products of integral chain complexes, staircases, and
// elementary blocks.
inline std::string integer_fixture(std::uint64_t seed) {
    RationalField q;
    Rng rng(seed);
    DoubleComplex<RationalField> c(q);
    switch (seed % 3) {
        case 0:
        case 1: {
            std::vector<int> all{0, 1, 2, 3};
            auto p = integral(random_chain(q, 0, 3, 2, rng, seed % 2 ? all : std::vector<int>{}));
            auto r = integral(random_chain(q, 0, 3, 2, rng, all));
            c = tensor(p, r);
            break;
        }
        default:
            c = direct_sum(staircase(q, Position{3, 0}, "urur", 1 + seed % 2), elementary(q, Position{0, 2}, 2));
    }
    return print_complex(c);
}

inline std::string over_gf(const std::string& text, std::uint32_t p) {
    auto nl = text.find('\n');
    return "field gf " + std::to_string(p) + text.substr(nl);
}

}  // namespace fixtures
