#include "haarorbit/bounds.hpp"

#include <cmath>
#include <limits>

#include "haarorbit/errors.hpp"
#include "haarorbit/moments.hpp"
#include "haarorbit/weingarten.hpp"

namespace haarorbit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kSqrtPi = std::sqrt(M_PI);

int isqrt_floor(int n) {
    int r = static_cast<int>(std::sqrt(static_cast<double>(n)));
    while (static_cast<long long>(r + 1) * (r + 1) <= n) ++r;
    while (static_cast<long long>(r) * r > n) --r;
    return r;
}

/// max{p >= 0 : scale * p^7 <= d^4}, exact.
int seventh_power_cap(int d, int scale) {
    const Integer d4 = integer_pow(d, 4);
    int p = 0;
    while (scale * integer_pow(p + 1, 7) <= d4) ++p;
    return p;
}

double matsumoto_prefactor(int d, int p) {
    const double frac = 6.0 * std::pow(p, 3.5) / (static_cast<double>(d) * d);
    // Within the admissible regime frac <= 1; equality makes the bound vacuous.
    if (frac >= 1.0) return kInf;
    return 1.0 / (1.0 - frac);
}

/// eta-independent part of the derangement-correction factor:
/// (ceil(p!/e)/(p-1)!! - 1) (1 - 6p^{7/2}/d^2)^{-1} Cat_p (1 + p^2/d).
double discarded_cycles_factor(int d, int p) {
    const double excess =
        to_double(Rational(ceil_factorial_over_e(p), double_factorial(p - 1))) - 1.0;
    return excess * matsumoto_prefactor(d, p) * to_double(catalan(p)) *
           (1.0 + static_cast<double>(p) * p / d);
}

/// -x - log(1-x) - x^2/2 (= x^3/3 + x^4/4 + ...), stable for small x.
double log_remainder_cubic(double x) {
    if (x < 1e-3) {
        double acc = 0;
        double xn = x * x * x;
        for (int k = 3; k <= 8; ++k) {
            acc += xn / k;
            xn *= x;
        }
        return acc;
    }
    return -x - std::log1p(-x) - 0.5 * x * x;
}

double inverse_factorial(int n) {
    if (n > 170) return 0.0;  // below double underflow
    return 1.0 / to_double(factorial(n));
}

} // namespace

BoundContext make_bound_context(const StateSpectrum& rho, const HamiltonianSpectrum& h,
                                bool pure) {
    BoundContext ctx;
    ctx.d = h.dimension();
    ctx.sigma2 = variance(rho, h);
    const CenteredSpectrum centered = center_hamiltonian(h);
    // A constant Hamiltonian collapses the distribution to a point; every
    // moment error is zero and eta never enters.
    ctx.eta = power_trace(centered.deviations, 2) > 0 ? eta(centered) : 0.0;
    ctx.delta_e_max = max_energy_deviation(rho, h);
    ctx.pure = pure;
    return ctx;
}

int bound_validity_p_max(int d) {
    if (d < 1) throw ConditionError("dimension must be positive");
    return std::min(isqrt_floor(d), seventh_power_cap(d, 36));
}

int mgf_moment_cutoff(int d) {
    if (d < 1) throw ConditionError("dimension must be positive");
    return std::min(isqrt_floor(d), seventh_power_cap(d, 144));
}

double scaling_factor(int p, double sigma2) {
    if (p < 1) throw ConditionError("moment order must be positive");
    return to_double(double_factorial(p - 1)) * std::pow(sigma2, p / 2.0);
}

double moment_error_factor_pure(int d, int p, double eta_value) {
    if (p < 1) throw ConditionError("moment order must be positive");
    const double excess =
        to_double(Rational(ceil_factorial_over_e(p), double_factorial(p - 1)));
    if (p % 2 == 0)
        return static_cast<double>(p) * (p - 2) / (2.0 * d) + eta_value * (excess - 1.0);
    return std::sqrt(eta_value) * excess;
}

double moment_error_factor_general(int d, int p, double eta_value) {
    if (p < 1) throw ConditionError("moment order must be positive");
    if (p > bound_validity_p_max(d))
        throw ConditionError("general bound needs p <= min{floor(sqrt d), floor((d/sqrt 6)^{4/7})}");
    const double cycles = discarded_cycles_factor(d, p);
    if (p % 2 != 0) return std::sqrt(eta_value) * cycles;
    const double dd = d;
    const double pre = matsumoto_prefactor(d, p);
    return pre * (6.0 * std::pow(p, 3.5) / (dd * dd) + p * p * to_double(catalan(p)) / dd) +
           eta_value * cycles;
}

GeneralFactorParts moment_error_factor_parts(int d, int p, double eta_value) {
    if (p > bound_validity_p_max(d))
        throw ConditionError("general bound needs p <= min{floor(sqrt d), floor((d/sqrt 6)^{4/7})}");
    const double dd = d;
    const double pre = matsumoto_prefactor(d, p);
    GeneralFactorParts parts;
    parts.identity_deviation = pre * 6.0 * std::pow(p, 3.5) / (dd * dd);
    parts.discarded_states = pre * p * p * to_double(catalan(p)) / dd;
    parts.discarded_cycles = eta_value * discarded_cycles_factor(d, p);
    return parts;
}

double moment_bound_rhs(int p, const BoundContext& ctx) {
    const double factor = ctx.pure ? moment_error_factor_pure(ctx.d, p, ctx.eta)
                                   : moment_error_factor_general(ctx.d, p, ctx.eta);
    return scaling_factor(p, ctx.sigma2) * factor;
}

double mgf_t_window(const BoundContext& ctx) {
    const double cutoff = mgf_moment_cutoff(ctx.d);
    double window = kInf;
    if (ctx.sigma2 > 0) window = std::min(window, std::sqrt(cutoff / ctx.sigma2));
    if (ctx.delta_e_max > 0) window = std::min(window, cutoff / ctx.delta_e_max);
    if (ctx.eta > 0 && ctx.sigma2 > 0)
        window = std::min(window, 1.0 / (4.0 * std::sqrt(ctx.eta * ctx.sigma2)));
    return window;
}

MgfBoundTerms mgf_bound_terms(double t, const BoundContext& ctx) {
    const double at = std::abs(t);
    if (at > mgf_t_window(ctx) * (1.0 + 1e-12))
        throw ConditionError("t lies outside the admissible window");
    const double s2 = ctx.sigma2;
    const double u = t * t * s2;
    const double x = 4.0 * at * std::sqrt(ctx.eta * s2);
    if (x >= 1.0) throw ConditionError("t reaches the derangement-correction pole");

    MgfBoundTerms out;
    out.gaussian_truncation = std::expm1(2.0 * u) - 2.0 * u;
    out.subleading_identity = 32.0 * u / (kSqrtPi * ctx.d) * std::expm1(16.0 * u);

    // exp(-cx)/(1-x)^c - exp(c x^2/2) with c = 1/eta; the exponent difference
    // c(x^3/3 + x^4/4 + ...) is accumulated stably, and c x^2/2 = 8 t^2 s2.
    if (ctx.eta > 0) {
        const double tail_exponent = log_remainder_cubic(x) / ctx.eta;
        out.derangement_correction =
            std::exp(8.0 * u) * std::expm1(tail_exponent) / (2.0 * kSqrtPi);
    }

    const int cutoff = mgf_moment_cutoff(ctx.d);
    if (cutoff >= 1) {
        const double moment_den = 1.0 - u / cutoff;
        out.tail_moments =
            moment_den > 0 ? inverse_factorial((cutoff + 1) / 2) * u / moment_den : kInf;
        const double q = at * ctx.delta_e_max;
        const double range_den = 1.0 - q / cutoff;
        out.tail_range = range_den > 0 ? inverse_factorial(cutoff) * q / range_den : kInf;
    }

    out.total = out.gaussian_truncation + out.subleading_identity + out.derangement_correction +
                out.tail_moments + out.tail_range;
    if (out.total < 0) out.total = 0;  // distance bounds are vacuous below zero
    return out;
}

double mgf_bound(double t, const BoundContext& ctx) { return mgf_bound_terms(t, ctx).total; }

double mgf_bound_leading_order(double t, const BoundContext& ctx) {
    return 32.0 / 3.0 * std::sqrt(ctx.eta / M_PI) *
           std::pow(std::abs(t) * std::sqrt(ctx.sigma2), 3);
}

double normalized_class_sum(int d, int p) {
    if (d < 1 || p < 1) throw ConditionError("normalized_class_sum needs d, p >= 1");
    // Exact rational part; the odd-p case carries a residual sqrt(d(d+1)).
    Rational ratio(1);
    for (int k = 0; k < p; ++k) ratio /= (d + k);
    const Integer dd1 = Integer(d) * (d + 1);
    ratio *= integer_pow(dd1, p / 2);
    double value = to_double(ratio);
    if (p % 2 != 0) value *= std::sqrt(to_double(dd1));
    return value;
}

} // namespace haarorbit
