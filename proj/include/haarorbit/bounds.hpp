#pragma once

#include "haarorbit/spectral.hpp"

namespace haarorbit {

/// Everything the analytic error bounds need to know about an instance.
struct BoundContext {
    int d = 0;
    double sigma2 = 0;       // exact variance of the orbit energy
    double eta = 0;          // concentration functional of the centered Hamiltonian
    double delta_e_max = 0;  // largest |range endpoint - mu|
    bool pure = false;
};

BoundContext make_bound_context(const StateSpectrum& rho, const HamiltonianSpectrum& h,
                                bool pure = false);

/// Largest moment order covered by the general-state bound:
/// min{floor(sqrt d), floor((d/sqrt 6)^{4/7})}, both branches exact in integers.
int bound_validity_p_max(int d);

/// Moment-order cutoff of the generating-function bound:
/// min{floor(sqrt d), floor((d/(2 sqrt 3))^{4/7})}.
int mgf_moment_cutoff(int d);

/// G_p = (p-1)!! sigma2^{p/2}, the Gaussian scale of the p-th moment error.
double scaling_factor(int p, double sigma2);

/// Relative moment-error factor for pure input states; valid for every (d, p).
double moment_error_factor_pure(int d, int p, double eta);

/// Relative moment-error factor for arbitrary states; requires
/// p <= bound_validity_p_max(d).
double moment_error_factor_general(int d, int p, double eta);

/// The three summands of the general even-p factor, exposed for cross-checks.
struct GeneralFactorParts {
    double identity_deviation = 0;   // (1-6p^{7/2}/d^2)^{-1} 6p^{7/2}/d^2
    double discarded_states = 0;     // (1-6p^{7/2}/d^2)^{-1} p^2 Cat_p / d
    double discarded_cycles = 0;     // eta-weighted derangement-correction factor
};
GeneralFactorParts moment_error_factor_parts(int d, int p, double eta);

/// G_p times the pure or general factor, per ctx.pure.
double moment_bound_rhs(int p, const BoundContext& ctx);

/// Admissible |t| for the generating-function bound: the published window
/// min{sqrt(N*/sigma2), N*/dEmax} intersected with the pole of the
/// derangement-correction term (4|t| sqrt(eta sigma2) < 1).
double mgf_t_window(const BoundContext& ctx);

struct MgfBoundTerms {
    double gaussian_truncation = 0;      // e^{2 t^2 s2} - 2 t^2 s2 - 1
    double subleading_identity = 0;      // (32 t^2 s2 / (sqrt(pi) d)) (e^{16 t^2 s2} - 1)
    double derangement_correction = 0;   // generating-function term; the only cubic-order piece
    double tail_moments = 0;             // 1/ceil(N*/2)! geometric tail in t^2 s2
    double tail_range = 0;               // 1/N*! geometric tail in |t| dEmax
    double total = 0;
};

/// Five-term bound on |G(t) - e^{t^2 sigma2 / 2}| for |t| within the window.
MgfBoundTerms mgf_bound_terms(double t, const BoundContext& ctx);
double mgf_bound(double t, const BoundContext& ctx);

/// Small-t cubic coefficient of the derangement-correction term:
/// (32/3) sqrt(eta/pi) |t sqrt(sigma2)|^3.
double mgf_bound_leading_order(double t, const BoundContext& ctx);

/// D(d,p) = (d-1)! (d(d+1))^{p/2} / (p+d-1)!; in (0,1] for p >= 2.
double normalized_class_sum(int d, int p);

} // namespace haarorbit
