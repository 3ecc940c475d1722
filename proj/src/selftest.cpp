#include "haarorbit/selftest.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>
#include <vector>

#include "haarorbit/bounds.hpp"
#include "haarorbit/moments.hpp"
#include "haarorbit/montecarlo.hpp"
#include "haarorbit/weingarten.hpp"

namespace haarorbit {

namespace {

Eigen::VectorXd random_simplex(int d, std::mt19937_64& rng) {
    std::exponential_distribution<double> exp1(1.0);
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = exp1(rng);
    v /= v.sum();
    return v;
}

Eigen::VectorXd random_levels(int d, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = uni(rng);
    return v;
}

struct Suite {
    const char* name;
    std::function<bool()> check;
};

} // namespace

int run_selftest(std::ostream& out, std::uint64_t seed) {
    std::vector<Suite> suites;

    suites.push_back({"weingarten-closed-forms", [] {
        for (int p = 1; p <= 4; ++p)
            for (int d : {4, 7}) {
                const auto& table = weingarten_table(p, d);
                for (const auto& type : table.classes())
                    if (table.value(type) != weingarten_closed_form(type, d)) return false;
            }
        return true;
    }});

    suites.push_back({"weingarten-orthogonality", [] {
        for (int p = 1; p <= 5; ++p)
            for (int d : {5, 7}) {
                const auto& table = weingarten_table(p, d);
                for (const auto& sigma_type : table.classes()) {
                    const Permutation sigma = detail::representative(sigma_type);
                    Rational acc = 0;
                    detail::for_each_permutation(p, [&](const int* tau) {
                        std::vector<int> inv(p), composed(p);
                        for (int i = 0; i < p; ++i) inv[tau[i]] = i;
                        for (int i = 0; i < p; ++i) composed[i] = sigma.images[inv[i]];
                        Permutation c{composed};
                        acc += table.value(c.cycle_type()) *
                               integer_pow(d, detail::cycle_count_of(tau, p));
                    });
                    const Rational expected = sigma_type.transposition_distance() == 0 ? 1 : 0;
                    if (acc != expected) return false;
                }
            }
        return true;
    }});

    suites.push_back({"weingarten-class-sum", [] {
        for (int p = 1; p <= 6; ++p)
            for (int d : {6, 9})
                if (weingarten_table(p, d).weighted_sum() != weingarten_class_sum(p, d))
                    return false;
        return true;
    }});

    suites.push_back({"weingarten-sign-rule", [] {
        for (int p = 1; p <= 6; ++p) {
            const auto& table = weingarten_table(p, 8);
            for (const auto& type : table.classes()) {
                const int sign = type.transposition_distance() % 2 == 0 ? 1 : -1;
                if (sign * table.value(type) <= 0) return false;
            }
        }
        return true;
    }});

    suites.push_back({"derangement-counts", [] {
        for (int p = 2; p <= 6; ++p) {
            Integer brute = 0;
            detail::for_each_permutation(p, [&](const int* img) {
                for (int i = 0; i < p; ++i)
                    if (img[i] == i) return;
                ++brute;
            });
            if (brute != derangement_count(p)) return false;
            Integer class_total = 0;
            for (const auto& [type, size] : derangement_classes(p)) class_total += size;
            if (class_total != brute) return false;
        }
        return true;
    }});

    suites.push_back({"stirling-identity", [] {
        for (int p = 1; p <= 8; ++p)
            for (int d = 1; d <= 8; ++d) {
                Integer lhs = 0;
                for (int k = 0; k <= p; ++k)
                    lhs += integer_pow(d, p - k) * stirling_first_unsigned(p, p - k);
                if (lhs != factorial(p + d - 1) / factorial(d - 1)) return false;
            }
        return true;
    }});

    suites.push_back({"moment-forms-agree", [&] {
        std::mt19937_64 rng(seed);
        for (int trial = 0; trial < 4; ++trial) {
            const int d = 6;
            StateSpectrum rho{random_simplex(d, rng)};
            HamiltonianSpectrum h{random_levels(d, rng)};
            for (int p = 2; p <= 4; ++p) {
                const double a = central_moment(rho, h, p);
                const double b = central_moment_state_form(rho, h, p);
                const double scale = std::max({std::abs(a), std::abs(b), 1e-30});
                if (std::abs(a - b) / scale > 1e-10) return false;
            }
        }
        return true;
    }});

    suites.push_back({"derangement-trace-bound", [&] {
        std::mt19937_64 rng(seed + 1);
        for (int trial = 0; trial < 50; ++trial) {
            const int d = 3 + static_cast<int>(rng() % 14);
            HamiltonianSpectrum h{random_levels(d, rng)};
            const CenteredSpectrum theta = center_hamiltonian(h);
            for (int p = 2; p <= 6; ++p)
                for (const auto& entry : derangement_classes(p)) {
                    const CycleType& type = entry.first;
                    const double lhs = std::abs(cycle_trace_product(theta.deviations, type));
                    if (lhs > derangement_trace_bound(theta, type) * (1 + 1e-12)) return false;
                }
        }
        return true;
    }});

    suites.push_back({"moment-bound-sweep", [&] {
        std::mt19937_64 rng(seed + 2);
        for (int d : {16, 25})
            for (int trial = 0; trial < 10; ++trial) {
                StateSpectrum rho{random_simplex(d, rng)};
                HamiltonianSpectrum h{random_levels(d, rng)};
                const BoundContext ctx = make_bound_context(rho, h);
                for (int p = 1; p <= bound_validity_p_max(d); ++p) {
                    const double diff = std::abs(central_moment(rho, h, p) -
                                                 gaussian_central_moment(p, ctx.sigma2));
                    if (diff > moment_bound_rhs(p, ctx) + 1e-10 * scaling_factor(p, ctx.sigma2))
                        return false;
                }
            }
        return true;
    }});

    suites.push_back({"pure-bound-sweep", [&] {
        std::mt19937_64 rng(seed + 3);
        for (int d : {9, 16})
            for (int trial = 0; trial < 10; ++trial) {
                HamiltonianSpectrum h{random_levels(d, rng)};
                const StateSpectrum rho = StateSpectrum::pure(d);
                const BoundContext ctx = make_bound_context(rho, h, true);
                for (int p = 1; p <= 6; ++p) {
                    const double diff = std::abs(pure_central_moment(h, p) -
                                                 gaussian_central_moment(p, ctx.sigma2));
                    if (diff > moment_bound_rhs(p, ctx) + 1e-10 * scaling_factor(p, ctx.sigma2))
                        return false;
                }
            }
        return true;
    }});

    suites.push_back({"montecarlo-convergence", [&] {
        std::mt19937_64 rng(seed + 4);
        const int d = 5, n = 20000;
        StateSpectrum rho{random_simplex(d, rng)};
        HamiltonianSpectrum h{random_levels(d, rng)};
        const SampleRun run = sample_energy(rho, h, n, seed + 5, 2);
        const EnergyRange range = energy_range(rho, h);
        const double slack = 1e-9 * std::max(1.0, h.eigenvalues.cwiseAbs().maxCoeff());
        for (double e : run.energies)
            if (e < range.min - slack || e > range.max + slack) return false;

        double mean = 0;
        for (double e : run.energies) mean += e;
        mean /= n;
        const auto moments = empirical_moments(run, 2);
        const double var = moments[1].value;
        const double mean_se = std::sqrt(var / n);
        if (std::abs(mean - raw_moment(rho, h, 1)) > 4 * mean_se) return false;
        return std::abs(var - run.meta.exact_sigma2) <= 4 * moments[1].std_error;
    }});

    suites.push_back({"mgf-bound-shape", [] {
        const HamiltonianSpectrum h = fig1_hamiltonian();
        const StateSpectrum rho = fig1_state();
        const BoundContext ctx = make_bound_context(rho, h);
        if (mgf_bound(0.0, ctx) != 0.0) return false;
        const double window = mgf_t_window(ctx);
        double prev = 0;
        for (int k = 1; k <= 16; ++k) {
            const double t = 0.95 * window * k / 16;
            const double b = mgf_bound(t, ctx);
            if (b + 1e-15 < prev) return false;
            if (std::abs(mgf_bound(-t, ctx) - b) > 1e-12 * std::max(1.0, b)) return false;
            prev = b;
        }
        return true;
    }});

    int failures = 0;
    for (const auto& suite : suites) {
        bool ok = false;
        try {
            ok = suite.check();
        } catch (const std::exception& e) {
            out << "[FAIL] " << suite.name << " (exception: " << e.what() << ")\n";
            ++failures;
            continue;
        }
        out << (ok ? "[PASS] " : "[FAIL] ") << suite.name << "\n";
        if (!ok) ++failures;
    }
    return failures;
}

} // namespace haarorbit
