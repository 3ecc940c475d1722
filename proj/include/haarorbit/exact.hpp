#pragma once

#include <boost/multiprecision/gmp.hpp>

namespace haarorbit {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(const Integer& n) { return n.convert_to<double>(); }

inline Integer factorial(int n) {
    Integer f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

/// n!! = n(n-2)(n-4)...; (-1)!! = 0!! = 1.
inline Integer double_factorial(int n) {
    Integer f = 1;
    for (int k = n; k >= 2; k -= 2) f *= k;
    return f;
}

inline Integer binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    Integer b = 1;
    for (int i = 0; i < k; ++i) {
        b *= (n - i);
        b /= (i + 1);
    }
    return b;
}

inline Integer integer_pow(Integer base, int e) {
    Integer r = 1;
    while (e > 0) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

} // namespace haarorbit
