#pragma once

// Brute-force oracles shared by the test suites. Everything here recomputes
// quantities from first principles, without the class-function reductions the
// library uses, so the two paths stay independent.

#include <Eigen/Core>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "haarorbit/exact.hpp"
#include "haarorbit/weingarten.hpp"

namespace oracle {

using haarorbit::Integer;
using haarorbit::Rational;

inline std::vector<std::vector<int>> all_permutations(int p) {
    std::vector<int> img(p);
    std::iota(img.begin(), img.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(img);
    } while (std::next_permutation(img.begin(), img.end()));
    return out;
}

inline std::vector<int> cycle_lengths(const std::vector<int>& img) {
    const int p = static_cast<int>(img.size());
    std::vector<bool> seen(p, false);
    std::vector<int> parts;
    for (int i = 0; i < p; ++i) {
        if (seen[i]) continue;
        int len = 0, j = i;
        do {
            seen[j] = true;
            j = img[j];
            ++len;
        } while (j != i);
        parts.push_back(len);
    }
    std::sort(parts.begin(), parts.end(), std::greater<int>());
    return parts;
}

inline bool is_derangement(const std::vector<int>& img) {
    for (std::size_t i = 0; i < img.size(); ++i)
        if (img[i] == static_cast<int>(i)) return false;
    return true;
}

/// Census of S_p: sorted cycle-length lists -> number of permutations.
inline std::map<std::vector<int>, long> class_census(int p) {
    std::map<std::vector<int>, long> census;
    for (const auto& img : all_permutations(p)) ++census[cycle_lengths(img)];
    return census;
}

/// Trace product of a raw permutation applied to a spectrum, walking the
/// cycles directly.
inline double trace_product(const std::vector<int>& img, const Eigen::VectorXd& values) {
    const int p = static_cast<int>(img.size());
    std::vector<bool> seen(p, false);
    double product = 1.0;
    for (int i = 0; i < p; ++i) {
        if (seen[i]) continue;
        int len = 0, j = i;
        do {
            seen[j] = true;
            j = img[j];
            ++len;
        } while (j != i);
        double trace = 0.0;
        for (Eigen::Index k = 0; k < values.size(); ++k) trace += std::pow(values[k], len);
        product *= trace;
    }
    return product;
}

/// Central moment by full double enumeration over S_p x S_p:
/// sum_{sigma,tau} Wg[type(sigma tau^{-1})] * centered_rho[sigma] * centered_h[tau].
inline double brute_force_central_moment(const Eigen::VectorXd& centered_rho,
                                         const Eigen::VectorXd& centered_h, int p, int d) {
    const auto& table = haarorbit::weingarten_table(p, d);
    const auto perms = all_permutations(p);
    double total = 0.0;
    std::vector<int> composed(p);
    for (const auto& sigma : perms) {
        const double rho_part = trace_product(sigma, centered_rho);
        for (const auto& tau : perms) {
            for (int i = 0; i < p; ++i) composed[tau[i]] = sigma[i];  // sigma o tau^{-1}
            haarorbit::CycleType type{cycle_lengths(composed)};
            total += haarorbit::to_double(table.value(type)) * rho_part *
                     trace_product(tau, centered_h);
        }
    }
    return total;
}

/// p! * [x^p] of exp(-cx) (1-x)^{-c} for integer c, exactly.
inline Integer derangement_egf_coefficient(int p, int c) {
    Integer total = 0;
    Integer sign = 1;
    for (int k = 0; k <= p; ++k) {
        const int m = p - k;  // power taken from (1-x)^{-c}
        Integer term = sign * haarorbit::integer_pow(c, k) *
                       (haarorbit::factorial(p) / haarorbit::factorial(k)) *
                       haarorbit::binomial(c + m - 1, m);
        total += term;
        sign = -sign;
    }
    return total;
}

inline Eigen::VectorXd random_simplex(int d, std::mt19937_64& rng) {
    std::exponential_distribution<double> exp1(1.0);
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = exp1(rng);
    v /= v.sum();
    return v;
}

inline Eigen::VectorXd random_levels(int d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = uni(rng);
    return v;
}

} // namespace oracle
