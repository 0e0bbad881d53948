#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "errors.hpp"

namespace salamander {

enum class FieldKind { prime, rationals };

struct FieldSpec {
    FieldKind kind = FieldKind::prime;
    std::uint32_t modulus = 101;

    bool operator==(const FieldSpec&) const = default;
};

namespace detail {

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

}  // namespace detail

// Deterministic Miller-Rabin; bases 2, 7, 61 suffice below 2^32.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t s : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
        if (n == s) return true;
        if (n % s == 0) return false;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : {2ULL, 7ULL, 61ULL}) {
        if (a % n == 0) continue;
        std::uint64_t x = detail::powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int k = 1; k < r; ++k) {
            x = x * x % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

class PrimeField {
public:
    using value_type = std::uint32_t;

    explicit PrimeField(std::uint64_t p = 101) : p_(static_cast<std::uint32_t>(p)) {
        if (p < 2 || p >= (1ULL << 31) || !is_prime(p))
            throw Error("modulus " + std::to_string(p) + " is not a prime below 2^31");
    }

    std::uint32_t modulus() const { return p_; }
    FieldSpec spec() const { return {FieldKind::prime, p_}; }

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    bool is_zero(value_type a) const { return a == 0; }
    bool is_one(value_type a) const { return a == 1; }

    value_type add(value_type a, value_type b) const {
        std::uint64_t s = std::uint64_t(a) + b;
        return static_cast<value_type>(s >= p_ ? s - p_ : s);
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
    value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
    value_type mul(value_type a, value_type b) const {
        return static_cast<value_type>(std::uint64_t(a) * b % p_);
    }
    value_type inv(value_type a) const {
        if (a == 0) throw NotInvertible("division by zero in GF(" + std::to_string(p_) + ")");
        std::int64_t t = 0, nt = 1, r = p_, nr = a;
        while (nr != 0) {
            std::int64_t q = r / nr;
            std::int64_t tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = r - q * nr;
            r = nr;
            nr = tmp;
        }
        if (t < 0) t += p_;
        return static_cast<value_type>(t);
    }

    value_type from_int(std::int64_t n) const {
        std::int64_t m = n % static_cast<std::int64_t>(p_);
        if (m < 0) m += p_;
        return static_cast<value_type>(m);
    }

    std::string to_string(value_type a) const { return std::to_string(a); }

    // Accepts "n", "-n" and "a/b".
    value_type parse(std::string_view s) const {
        auto slash = s.find('/');
        if (slash != std::string_view::npos)
            return mul(parse_int(s.substr(0, slash)), inv(parse_int(s.substr(slash + 1))));
        return parse_int(s);
    }

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

private:
    value_type parse_int(std::string_view s) const {
        if (s.empty()) throw Error("empty scalar");
        bool negative = s.front() == '-';
        if (negative || s.front() == '+') s.remove_prefix(1);
        if (s.empty()) throw Error("empty scalar");
        std::uint64_t v = 0;
        for (char ch : s) {
            if (ch < '0' || ch > '9') throw Error("bad digit in scalar");
            v = (v * 10 + static_cast<std::uint64_t>(ch - '0')) % p_;
        }
        auto r = static_cast<value_type>(v);
        return negative ? neg(r) : r;
    }

    std::uint32_t p_;
};

class RationalField {
public:
    using value_type = boost::multiprecision::cpp_rational;

    FieldSpec spec() const { return {FieldKind::rationals, 0}; }

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    bool is_zero(const value_type& a) const { return a == 0; }
    bool is_one(const value_type& a) const { return a == 1; }

    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type inv(const value_type& a) const {
        if (a == 0) throw NotInvertible("division by zero in Q");
        return value_type(1) / a;
    }

    value_type from_int(std::int64_t n) const { return value_type(n); }

    std::string to_string(const value_type& a) const {
        using boost::multiprecision::denominator;
        using boost::multiprecision::numerator;
        if (denominator(a) == 1) return numerator(a).str();
        return numerator(a).str() + "/" + denominator(a).str();
    }

    value_type parse(std::string_view s) const {
        auto slash = s.find('/');
        if (slash == std::string_view::npos) return value_type(parse_int(s));
        auto den = parse_int(s.substr(slash + 1));
        if (den == 0) throw Error("zero denominator");
        return value_type(parse_int(s.substr(0, slash))) / value_type(den);
    }

    bool operator==(const RationalField&) const { return true; }

private:
    static boost::multiprecision::cpp_int parse_int(std::string_view s) {
        if (s.empty()) throw Error("empty scalar");
        bool negative = s.front() == '-';
        if (negative || s.front() == '+') s.remove_prefix(1);
        if (s.empty()) throw Error("empty scalar");
        boost::multiprecision::cpp_int v = 0;
        for (char ch : s) {
            if (ch < '0' || ch > '9') throw Error("bad digit in scalar");
            v = v * 10 + (ch - '0');
        }
        return negative ? boost::multiprecision::cpp_int(-v) : v;
    }
};

}  // namespace salamander
