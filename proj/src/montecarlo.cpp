#include "haarorbit/montecarlo.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <thread>

#include "haarorbit/errors.hpp"
#include "haarorbit/moments.hpp"

namespace haarorbit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct EnergyKernel {
    Eigen::VectorXd energies;     // eps
    Eigen::VectorXd populations;  // lambda
    double scale_tol;
    double min_energy, max_energy;

    double draw(int d, std::mt19937_64& rng) const {
        Eigen::MatrixXcd u = haar_unitary(d, rng);
        // E = eps^T |U|^2 lambda, no dense conjugation products needed.
        double value = (energies.transpose() * u.cwiseAbs2() * populations).value();
        if (value < min_energy - scale_tol || value > max_energy + scale_tol)
            throw ConditionError("sampled energy escaped the orbit range");
        return value;
    }
};

} // namespace

std::mt19937_64 worker_rng(std::uint64_t master_seed, int worker_index) {
    return std::mt19937_64(
        splitmix64(master_seed ^ splitmix64(static_cast<std::uint64_t>(worker_index) + 1)));
}

Eigen::MatrixXcd haar_unitary(int d, std::mt19937_64& rng) {
    if (d < 1) throw ConditionError("dimension must be positive");
    std::normal_distribution<double> normal;
    Eigen::MatrixXcd ginibre(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            ginibre(i, j) = std::complex<double>(re, im);
        }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
    Eigen::MatrixXcd unitary = qr.householderQ();
    const auto diag = qr.matrixQR().diagonal();
    for (int j = 0; j < d; ++j) {
        const double mag = std::abs(diag(j));
        unitary.col(j) *= mag > 0 ? diag(j) / mag : std::complex<double>(1, 0);
    }
    return unitary;
}

SampleRun sample_energy(const StateSpectrum& rho, const HamiltonianSpectrum& h, int n,
                        std::uint64_t seed, int workers) {
    if (rho.dimension() != h.dimension())
        throw ConditionError("state and hamiltonian dimensions differ");
    if (n < 1) throw ConditionError("sample count must be positive");
    if (workers < 1) throw ConditionError("worker count must be positive");
    workers = std::min(workers, n);

    const auto start = std::chrono::steady_clock::now();
    const int d = h.dimension();

    EnergyKernel kernel;
    kernel.energies = h.eigenvalues;
    kernel.populations = rho.populations;
    kernel.scale_tol = 1e-9 * std::max(1.0, h.eigenvalues.cwiseAbs().maxCoeff());
    const EnergyRange range = energy_range(rho, h);
    kernel.min_energy = range.min;
    kernel.max_energy = range.max;

    SampleRun run;
    run.seed = seed;
    run.d = d;
    run.n_samples = n;
    run.workers = workers;
    run.energies.resize(n);

    // Contiguous slices per worker, concatenated by worker index.
    auto slice_begin = [&](int w) { return static_cast<long>(w) * n / workers; };
    auto do_slice = [&](int w) {
        std::mt19937_64 rng = worker_rng(seed, w);
        const long begin = slice_begin(w), end = slice_begin(w + 1);
        for (long i = begin; i < end; ++i) run.energies[i] = kernel.draw(d, rng);
    };
    if (workers == 1) {
        do_slice(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(do_slice, w);
        for (auto& t : pool) t.join();
    }

    run.meta.mu = h.trace() / d;
    // Exact variance of the process as sampled; agrees with the variance
    // formula whenever the state has unit trace.
    if (d >= 2) {
        const double m1 = raw_moment(rho, h, 1);
        const double m2 = raw_moment(rho, h, 2);
        run.meta.exact_sigma2 = m2 - m1 * m1;
    }
    const CenteredSpectrum centered = center_hamiltonian(h);
    run.meta.eta = power_trace(centered.deviations, 2) > 0 ? eta(centered) : 0.0;
    run.meta.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

namespace detail {

std::vector<std::vector<double>> power_block_sums(std::span<const double> values, int p_max,
                                                  int blocks) {
    const long n = static_cast<long>(values.size());
    blocks = std::max(1, std::min<int>(blocks, n));
    std::vector<std::vector<double>> sums(blocks, std::vector<double>(p_max, 0.0));
    for (int b = 0; b < blocks; ++b) {
        const long begin = static_cast<long>(b) * n / blocks;
        const long end = static_cast<long>(b + 1) * n / blocks;
        for (long i = begin; i < end; ++i) {
            double term = 1.0;
            for (int k = 0; k < p_max; ++k) {
                term *= values[i];
                sums[b][k] += term;
            }
        }
    }
    return sums;
}

} // namespace detail

namespace {

/// Central moments from aggregated raw power sums.
std::vector<double> central_from_power_sums(const std::vector<double>& power_sums, long n,
                                            int p_max) {
    std::vector<double> raw(p_max + 1, 1.0);
    for (int k = 1; k <= p_max; ++k) raw[k] = power_sums[k - 1] / n;
    const double mean = raw[1];
    std::vector<double> central(p_max + 1, 0.0);
    central[0] = 1.0;
    for (int p = 1; p <= p_max; ++p) {
        double acc = 0, sign = 1, power = 1, comb = 1;
        for (int k = 0; k <= p; ++k) {
            acc += sign * comb * raw[p - k] * power;
            sign = -sign;
            power *= mean;
            comb = comb * (p - k) / (k + 1);
        }
        central[p] = acc;
    }
    return central;
}

constexpr int kBootstrapBlocks = 1000;

} // namespace

std::vector<EmpiricalMoment> empirical_moments(const SampleRun& run, int p_max,
                                               int bootstrap_resamples) {
    if (p_max < 1) throw ConditionError("moment order must be positive");
    const long n = run.energies.size();
    const auto block_sums = detail::power_block_sums(run.energies, p_max, kBootstrapBlocks);

    std::vector<double> totals(p_max, 0.0);
    for (const auto& block : block_sums)
        for (int k = 0; k < p_max; ++k) totals[k] += block[k];
    const auto central = central_from_power_sums(totals, n, p_max);

    std::vector<EmpiricalMoment> out;
    for (int p = 1; p <= p_max; ++p) {
        EmpiricalMoment m;
        m.p = p;
        m.value = central[p];
        m.std_error = detail::block_bootstrap_se(
            block_sums, n, bootstrap_resamples, run.seed ^ 0xb00f5 ^ p,
            [p, p_max](const std::vector<double>& acc, long total) {
                return central_from_power_sums(acc, total, p_max)[p];
            });
        out.push_back(m);
    }
    return out;
}

std::vector<CfPoint> empirical_cf(const SampleRun& run, std::span<const double> t_grid) {
    const long n = run.energies.size();
    double mean = 0;
    for (double e : run.energies) mean += e;
    mean /= n;

    std::vector<CfPoint> out;
    for (double t : t_grid) {
        detail::CompensatedSum re_sum, im_sum, re_sq, im_sq;
        for (double e : run.energies) {
            const double phase = t * (e - mean);
            const double c = std::cos(phase), s = std::sin(phase);
            re_sum.add(c);
            im_sum.add(s);
            re_sq.add(c * c);
            im_sq.add(s * s);
        }
        CfPoint pt;
        pt.t = t;
        pt.re = re_sum.result() / n;
        pt.im = im_sum.result() / n;
        const double var_re = std::max(0.0, re_sq.result() / n - pt.re * pt.re);
        const double var_im = std::max(0.0, im_sq.result() / n - pt.im * pt.im);
        pt.se = std::sqrt((var_re + var_im) / n);
        out.push_back(pt);
    }
    return out;
}

double empirical_mgf(const SampleRun& run, double t) {
    detail::CompensatedSum sum;
    for (double e : run.energies) sum.add(std::exp(t * (e - run.meta.mu)));
    return sum.result() / run.energies.size();
}

double empirical_mgf_se(const SampleRun& run, double t, int bootstrap_resamples) {
    const long n = static_cast<long>(run.energies.size());
    const int blocks = static_cast<int>(std::max<long>(1, std::min<long>(kBootstrapBlocks, n)));
    std::vector<std::vector<double>> block_sums(blocks, std::vector<double>(1, 0.0));
    for (int b = 0; b < blocks; ++b) {
        const long begin = static_cast<long>(b) * n / blocks;
        const long end = static_cast<long>(b + 1) * n / blocks;
        for (long i = begin; i < end; ++i)
            block_sums[b][0] += std::exp(t * (run.energies[i] - run.meta.mu));
    }
    return detail::block_bootstrap_se(
        block_sums, n, bootstrap_resamples, run.seed ^ 0x36f00d,
        [](const std::vector<double>& acc, long total) { return acc[0] / total; });
}

Histogram histogram(const SampleRun& run, int bins) {
    const long n = run.energies.size();
    if (n < 1) throw ConditionError("histogram needs samples");
    std::vector<double> sorted(run.energies);
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front(), hi = sorted.back();

    if (bins <= 0) {
        // Freedman-Diaconis width from the interquartile range.
        const double q1 = sorted[static_cast<std::size_t>(0.25 * (n - 1))];
        const double q3 = sorted[static_cast<std::size_t>(0.75 * (n - 1))];
        const double width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(n));
        if (width > 0 && hi > lo)
            bins = std::min<long>(1000000, static_cast<long>(std::ceil((hi - lo) / width)));
        else
            bins = 1;
    }

    Histogram out;
    const double span = hi > lo ? hi - lo : 1.0;
    const double pad = hi > lo ? 0.0 : 0.5;  // degenerate data gets one unit-ish bin
    out.bin_edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b)
        out.bin_edges[b] = lo - pad + span * (hi > lo ? static_cast<double>(b) / bins
                                                      : static_cast<double>(b));
    out.counts.assign(bins, 0);
    for (double e : run.energies) {
        int b = hi > lo ? static_cast<int>((e - lo) / span * bins) : 0;
        if (b >= bins) b = bins - 1;
        ++out.counts[b];
    }
    out.density.resize(bins);
    for (int b = 0; b < bins; ++b) {
        const double width = out.bin_edges[b + 1] - out.bin_edges[b];
        out.density[b] = static_cast<double>(out.counts[b]) / (static_cast<double>(n) * width);
    }
    return out;
}

std::vector<double> gaussian_overlay(double mu, double sigma2, std::span<const double> grid) {
    std::vector<double> out;
    out.reserve(grid.size());
    const double norm = 1.0 / std::sqrt(2.0 * M_PI * sigma2);
    for (double x : grid) {
        const double z = x - mu;
        out.push_back(norm * std::exp(-z * z / (2.0 * sigma2)));
    }
    return out;
}

HamiltonianSpectrum fig1_hamiltonian() {
    Eigen::VectorXd h(7);
    h << -1.6, -1.2, -0.6, 0.0, 0.4, 1.3, 1.7;
    return HamiltonianSpectrum(std::move(h));
}

StateSpectrum fig1_state() {
    Eigen::VectorXd rho(7);
    rho << 0.395, 0.224, 0.151, 0.115, 0.079, 0.0020, 0.013;
    // The populations are kept exactly as printed; they sum to 0.979, so the
    // loose tolerance is deliberate and the discrepancy is surfaced in the
    // fig1 metadata instead of being renormalized away.
    return StateSpectrum(std::move(rho), 0.05);
}

Fig1Bundle reproduce_fig1(std::uint64_t seed, int n, int workers) {
    const HamiltonianSpectrum h = fig1_hamiltonian();
    const StateSpectrum rho = fig1_state();

    Fig1Bundle bundle;
    bundle.run = sample_energy(rho, h, n, seed, workers);
    bundle.hist = histogram(bundle.run);
    const int bins = static_cast<int>(bundle.hist.counts.size());
    bundle.bin_centers.resize(bins);
    for (int b = 0; b < bins; ++b)
        bundle.bin_centers[b] = 0.5 * (bundle.hist.bin_edges[b] + bundle.hist.bin_edges[b + 1]);
    bundle.overlay = gaussian_overlay(bundle.run.meta.mu, variance(rho, h), bundle.bin_centers);

    bundle.meta.sigma2_formula = variance(rho, h);
    bundle.meta.sigma2_process = bundle.run.meta.exact_sigma2;
    bundle.meta.reference_sigma2 = 0.02024;
    bundle.meta.eta = bundle.run.meta.eta;
    bundle.meta.reference_eta = 0.2317;
    bundle.meta.state_trace = rho.trace();
    const auto moments = empirical_moments(bundle.run, 2);
    bundle.meta.empirical_variance = moments[1].value;
    bundle.meta.empirical_variance_se = moments[1].std_error;
    return bundle;
}

} // namespace haarorbit
