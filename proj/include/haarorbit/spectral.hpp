#pragma once

#include <Eigen/Core>

#include <cmath>

#include "haarorbit/perm.hpp"

namespace haarorbit {

/// Eigenvalues of the Hamiltonian, in energy units; order is irrelevant to
/// every quantity computed here.
struct HamiltonianSpectrum {
    Eigen::VectorXd eigenvalues;

    explicit HamiltonianSpectrum(Eigen::VectorXd values);
    int dimension() const { return static_cast<int>(eigenvalues.size()); }
    double trace() const;
};

/// Eigenvalues of the density operator. Populations must be nonnegative and
/// sum to one within `tolerance`; pass a larger tolerance deliberately to work
/// with as-printed literature data (the constructor never renormalizes).
struct StateSpectrum {
    Eigen::VectorXd populations;

    explicit StateSpectrum(Eigen::VectorXd values, double tolerance = 1e-9);
    static StateSpectrum maximally_mixed(int d);
    static StateSpectrum pure(int d);
    int dimension() const { return static_cast<int>(populations.size()); }
    double trace() const;
};

/// Spectrum of a traceless operator (deviations from the uniform shift).
struct CenteredSpectrum {
    Eigen::VectorXd deviations;
    int dimension() const { return static_cast<int>(deviations.size()); }
};

CenteredSpectrum center_hamiltonian(const HamiltonianSpectrum& h);
CenteredSpectrum center_state(const StateSpectrum& rho);

/// (sum_i |x_i|^q)^{1/q}; non-increasing in q.
double schatten_norm(const Eigen::Ref<const Eigen::VectorXd>& values, double q);

/// sum_i x_i^n with compensated accumulation.
double power_trace(const Eigen::Ref<const Eigen::VectorXd>& values, int n);

/// (sum|x|^3)^2 / (sum x^2)^3, in [1/d^6, 1] for nonzero input. Small values
/// are what make the Gaussian approximation of the orbit distribution work.
double eta(const CenteredSpectrum& theta);

/// Product over the cycle lengths a of sum_i x_i^a; the trace functional a
/// permutation class applies to a spectrum.
double cycle_trace_product(const Eigen::Ref<const Eigen::VectorXd>& values, const CycleType& type);

struct EnergyRange {
    double min = 0;
    double max = 0;
};

/// Orbit-extremal mean energies: min pairs populations (descending) against
/// energies (ascending), max pairs both ascending.
EnergyRange energy_range(const StateSpectrum& rho, const HamiltonianSpectrum& h);

/// Largest deviation of the two range endpoints from mu = Tr[H]/d.
double max_energy_deviation(const StateSpectrum& rho, const HamiltonianSpectrum& h);

struct ErgotropyRange {
    double anti_ergotropy = 0;  // <= 0
    double ergotropy = 0;       // >= 0
};

/// Extractable-work window for a state of mean energy `initial_energy` on the
/// orbit; errors if the energy lies outside the orbit range.
ErgotropyRange ergotropy_range(const StateSpectrum& rho, const HamiltonianSpectrum& h,
                               double initial_energy);

/// eta^{(sum of cycle lengths >= 3)/6} ||theta||_2^p, an upper bound on
/// |cycle_trace_product| for any fixed-point-free class. Exact equality for
/// perfect matchings.
double derangement_trace_bound(const CenteredSpectrum& theta, const CycleType& type);

namespace detail {

/// Neumaier-compensated sum of a transformed range.
class CompensatedSum {
public:
    void add(double value) {
        double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value))
            comp_ += (sum_ - t) + value;
        else
            comp_ += (value - t) + sum_;
        sum_ = t;
    }
    double result() const { return sum_ + comp_; }

private:
    double sum_ = 0, comp_ = 0;
};

} // namespace detail

} // namespace haarorbit
