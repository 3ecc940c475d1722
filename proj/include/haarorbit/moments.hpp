#pragma once

#include <optional>
#include <vector>

#include "haarorbit/spectral.hpp"

namespace haarorbit {

/// Default cap on the moment order; kMaxDegree is reachable behind
/// `allow_extended` at a steep enumeration cost.
inline constexpr int kDefaultMomentCap = 10;

/// mu = Tr[H]/d, the Haar-average energy for a unit-trace state.
double mean_energy(const StateSpectrum& rho, const HamiltonianSpectrum& h);

/// (Tr[H^2] - (Tr H)^2/d)(Tr[rho^2] - 1/d)/(d^2 - 1), evaluated literally on
/// the given spectra.
double variance(const StateSpectrum& rho, const HamiltonianSpectrum& h);

/// Exact p-th raw Haar moment <E^p> via the class-reduced Weingarten double
/// sum; valid for any trace of rho. Requires d >= p.
double raw_moment(const StateSpectrum& rho, const HamiltonianSpectrum& h, int p,
                  bool allow_extended = false);

/// Exact p-th central moment about Tr[H]/d via the derangement-reduced double
/// sum (both summations restricted to fixed-point-free classes).
double central_moment(const StateSpectrum& rho, const HamiltonianSpectrum& h, int p,
                      bool allow_extended = false);

/// Same moment through the other published route: uncentered state factors
/// against the centered Hamiltonian, with the state summation unrestricted.
/// Exists as a cross-check of the selection rules.
double central_moment_state_form(const StateSpectrum& rho, const HamiltonianSpectrum& h, int p,
                                 bool allow_extended = false);

/// (p-1)!! sigma2^{p/2} for even p, 0 for odd p.
double gaussian_central_moment(int p, double sigma2);

/// Central moment for a pure input state via the factorized form:
/// (class-weighted Weingarten sum) x (derangement sum over centered-H traces).
double pure_central_moment(const HamiltonianSpectrum& h, int p, bool allow_extended = false);

struct MomentRow {
    int p = 0;
    double exact = 0;
    double gaussian = 0;
    std::optional<double> bound_rhs;  // absent when the bound's p-regime fails
    bool bound_holds = true;          // meaningful only when bound_rhs is set
};

struct MomentReport {
    int d = 0;
    int p_max = 0;
    double mu = 0;
    double sigma2 = 0;
    bool pure = false;
    std::vector<MomentRow> rows;
};

MomentReport moment_report(const StateSpectrum& rho, const HamiltonianSpectrum& h, int p_max,
                           bool pure_formula = false, bool allow_extended = false);

} // namespace haarorbit
