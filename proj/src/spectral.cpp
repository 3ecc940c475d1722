#include "haarorbit/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "haarorbit/errors.hpp"

namespace haarorbit {

namespace {

void check_finite(const Eigen::VectorXd& values, const char* what) {
    if (values.size() < 1) throw ConditionError(std::string(what) + " spectrum is empty");
    if (!values.allFinite()) throw ConditionError(std::string(what) + " spectrum has non-finite entries");
}

double compensated_total(const Eigen::VectorXd& values) {
    detail::CompensatedSum sum;
    for (Eigen::Index i = 0; i < values.size(); ++i) sum.add(values[i]);
    return sum.result();
}

} // namespace

HamiltonianSpectrum::HamiltonianSpectrum(Eigen::VectorXd values) : eigenvalues(std::move(values)) {
    check_finite(eigenvalues, "hamiltonian");
    if (dimension() < 2) throw ConditionError("hamiltonian spectrum needs d >= 2");
}

double HamiltonianSpectrum::trace() const { return compensated_total(eigenvalues); }

StateSpectrum::StateSpectrum(Eigen::VectorXd values, double tolerance) : populations(std::move(values)) {
    check_finite(populations, "state");
    if (populations.minCoeff() < -tolerance)
        throw ConditionError("state populations must be nonnegative");
    double total = compensated_total(populations);
    if (std::abs(total - 1.0) > tolerance)
        throw ConditionError("state populations sum to " + std::to_string(total) +
                             ", outside tolerance " + std::to_string(tolerance));
}

StateSpectrum StateSpectrum::maximally_mixed(int d) {
    return StateSpectrum(Eigen::VectorXd::Constant(d, 1.0 / d));
}

StateSpectrum StateSpectrum::pure(int d) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
    v[0] = 1.0;
    return StateSpectrum(std::move(v));
}

double StateSpectrum::trace() const { return compensated_total(populations); }

namespace {

CenteredSpectrum center(const Eigen::VectorXd& values) {
    const double n = static_cast<double>(values.size());
    Eigen::VectorXd out = values.array() - compensated_total(values) / n;
    // One more pass drives the residual to the last ulp.
    out.array() -= compensated_total(out) / n;
    return CenteredSpectrum{std::move(out)};
}

} // namespace

CenteredSpectrum center_hamiltonian(const HamiltonianSpectrum& h) { return center(h.eigenvalues); }

CenteredSpectrum center_state(const StateSpectrum& rho) {
    const double d = rho.dimension();
    return CenteredSpectrum{rho.populations.array() - 1.0 / d};
}

double schatten_norm(const Eigen::Ref<const Eigen::VectorXd>& values, double q) {
    if (!(q > 0)) throw ConditionError("Schatten order must be positive");
    detail::CompensatedSum sum;
    for (Eigen::Index i = 0; i < values.size(); ++i) sum.add(std::pow(std::abs(values[i]), q));
    return std::pow(sum.result(), 1.0 / q);
}

double power_trace(const Eigen::Ref<const Eigen::VectorXd>& values, int n) {
    if (n < 1) throw ConditionError("power must be positive");
    detail::CompensatedSum sum;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        double term = values[i];
        for (int k = 1; k < n; ++k) term *= values[i];
        sum.add(term);
    }
    return sum.result();
}

double eta(const CenteredSpectrum& theta) {
    double two = power_trace(theta.deviations, 2);
    if (two <= 0.0) throw ConditionError("eta is undefined for the zero spectrum");
    double abs_three = 0;
    {
        detail::CompensatedSum sum;
        for (Eigen::Index i = 0; i < theta.deviations.size(); ++i) {
            double a = std::abs(theta.deviations[i]);
            sum.add(a * a * a);
        }
        abs_three = sum.result();
    }
    return (abs_three * abs_three) / (two * two * two);
}

double cycle_trace_product(const Eigen::Ref<const Eigen::VectorXd>& values, const CycleType& type) {
    double product = 1.0;
    for (int part : type.parts()) product *= power_trace(values, part);
    return product;
}

EnergyRange energy_range(const StateSpectrum& rho, const HamiltonianSpectrum& h) {
    if (rho.dimension() != h.dimension())
        throw ConditionError("state and hamiltonian dimensions differ");
    std::vector<double> pops(rho.populations.data(), rho.populations.data() + rho.dimension());
    std::vector<double> energies(h.eigenvalues.data(), h.eigenvalues.data() + h.dimension());
    std::sort(energies.begin(), energies.end());
    std::sort(pops.begin(), pops.end());

    detail::CompensatedSum emax, emin;
    const std::size_t d = pops.size();
    for (std::size_t j = 0; j < d; ++j) {
        emax.add(pops[j] * energies[j]);
        emin.add(pops[d - 1 - j] * energies[j]);
    }
    return EnergyRange{emin.result(), emax.result()};
}

double max_energy_deviation(const StateSpectrum& rho, const HamiltonianSpectrum& h) {
    const double mu = h.trace() / h.dimension();
    EnergyRange range = energy_range(rho, h);
    return std::max(std::abs(range.min - mu), std::abs(range.max - mu));
}

ErgotropyRange ergotropy_range(const StateSpectrum& rho, const HamiltonianSpectrum& h,
                               double initial_energy) {
    EnergyRange range = energy_range(rho, h);
    const double slack = 1e-12 * std::max(1.0, h.eigenvalues.cwiseAbs().maxCoeff());
    if (initial_energy < range.min - slack || initial_energy > range.max + slack)
        throw ConditionError("initial energy lies outside the orbit range");
    return ErgotropyRange{initial_energy - range.max, initial_energy - range.min};
}

double derangement_trace_bound(const CenteredSpectrum& theta, const CycleType& type) {
    if (!type.is_derangement())
        throw ConditionError("bound applies to fixed-point-free classes only");
    // Cycles of length two contribute the 2-norm factor exactly; each longer
    // cycle of length a is bounded through the 3-norm and adds a/6 to the
    // exponent. For classes made of 2- and 3-cycles this equals the
    // transposition distance minus p/2.
    int long_cycle_weight = 0;
    for (int part : type.parts())
        if (part >= 3) long_cycle_weight += part;
    const double exponent = long_cycle_weight / 6.0;
    return std::pow(eta(theta), exponent) * std::pow(schatten_norm(theta.deviations, 2), type.p());
}

} // namespace haarorbit
