#pragma once

#include <memory>
#include <vector>

#include "haarorbit/exact.hpp"
#include "haarorbit/perm.hpp"

namespace haarorbit {

/// Exact Weingarten functions of U(d) for moment order p, one rational per
/// conjugacy class of S_p.
class WeingartenTable {
public:
    WeingartenTable(int p, int d, std::vector<Rational> values, std::shared_ptr<const ClassIndex> index);

    int p() const { return p_; }
    int d() const { return d_; }
    const ClassIndex& index() const { return *index_; }
    const std::vector<CycleType>& classes() const { return index_->classes(); }

    const Rational& value(const CycleType& type) const;
    const Rational& value_at(int class_index) const { return values_[class_index]; }
    double value_as_double(int class_index) const { return doubles_[class_index]; }

    /// Class-size weighted sum over all classes; equals (d-1)!/(p+d-1)!.
    Rational weighted_sum() const;

private:
    int p_, d_;
    std::shared_ptr<const ClassIndex> index_;
    std::vector<Rational> values_;
    std::vector<double> doubles_;
};

/// Default exact-mode cap on p; the hard cap sits at kMaxDegree behind
/// `allow_extended` (construction cost grows with p! and the moment stack
/// caps there as well).
inline constexpr int kWeingartenDefaultPMax = 10;

/// Builds (or fetches from the process-wide cache) the exact table for (p, d).
/// Requires d >= p so the Gram system is invertible.
const WeingartenTable& weingarten_table(int p, int d, bool allow_extended = false);

/// Rebuilds a table from scratch, optionally using the alternate class
/// representatives; exists so tests can confirm the solve is representative-independent.
WeingartenTable build_weingarten_table(int p, int d, bool alternate_representatives = false);

/// Table 1-style closed forms, p <= 4, evaluated exactly at dimension d.
Rational weingarten_closed_form(const CycleType& type, int d);

/// Leading-order value (-1)^{|sigma|} * mobius / d^{p+|sigma|}.
double weingarten_asymptotic(const CycleType& type, int d);

/// Largest p admitted by the Collins-Matsumoto two-sided bound at dimension d:
/// floor((d/sqrt(6))^{4/7}), computed exactly as max{p : 36 p^7 <= d^4}.
int collins_matsumoto_p_cap(int d);

struct WeingartenInterval {
    double lower = 0, upper = 0;            // C/d^{p+|s|} form
    double weak_lower = 0, weak_upper = 0;  // C/((d^2-1)^{p/2} d^{|s|}) form
};

/// Two-sided bounds on |C_[sigma]|; requires p <= collins_matsumoto_p_cap(d).
WeingartenInterval collins_matsumoto_interval(const CycleType& type, int d);

/// Closed form (d-1)!/(p+d-1)! for the class-size weighted Weingarten sum.
Rational weingarten_class_sum(int p, int d);

} // namespace haarorbit
