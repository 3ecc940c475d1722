#include "haarorbit/moments.hpp"

#include <array>
#include <cmath>

#include "haarorbit/bounds.hpp"
#include "haarorbit/weingarten.hpp"

namespace haarorbit {

namespace {

void check_moment_regime(int p, int d, bool allow_extended) {
    detail::check_degree(p);
    const int cap = allow_extended ? kMaxDegree : kDefaultMomentCap;
    if (p > cap)
        throw ResourceError("moment order p=" + std::to_string(p) + " exceeds cap " +
                            std::to_string(cap));
    if (d < p)
        throw ConditionError("exact moments need d >= p (got d=" + std::to_string(d) +
                             ", p=" + std::to_string(p) + ")");
}

void check_dimensions(const StateSpectrum& rho, const HamiltonianSpectrum& h) {
    if (rho.dimension() != h.dimension())
        throw ConditionError("state and hamiltonian dimensions differ");
}

// Per-class trace products for a spectrum.
std::vector<double> class_trace_products(const ClassIndex& index, const Eigen::VectorXd& values) {
    const int p = index.p();
    std::vector<double> powers(p + 1, 0.0);
    for (int n = 1; n <= p; ++n) powers[n] = power_trace(values, n);
    std::vector<double> out(index.size(), 1.0);
    for (int i = 0; i < index.size(); ++i)
        for (int part : index.classes()[i].parts()) out[i] *= powers[part];
    return out;
}

// Shared kernel of the reduced double sums.
//
// Computes sum over outer classes [tau] (all classes or derangement classes of
// the H factor) of
//    class_size(tau) * h_factor[tau] * sum_{sigma} C[type(sigma tau_rep^{-1})] * rho_factor[sigma],
// where sigma runs over S_p or its derangements. The inner sum is a class
// function of tau, so one representative per outer class suffices; sigma is
// enumerated raw, with the product class located on the fly.
struct ReducedSum {
    int p;
    const WeingartenTable& table;
    const ClassIndex& index;

    std::vector<int> outer;                   // class indices of the outer sum
    std::vector<std::vector<int>> inv_reps;   // tau_rep^{-1} per outer class
    std::vector<double> h_factor;             // trace product per outer class
    std::vector<double> rho_factor;           // trace product per sigma class

    ReducedSum(int p_in, const WeingartenTable& table_in) : p(p_in), table(table_in), index(table_in.index()) {}

    void set_outer_classes(bool derangements_only, const std::vector<double>& h_products) {
        for (int i = 0; i < index.size(); ++i) {
            if (derangements_only && !index.classes()[i].is_derangement()) continue;
            outer.push_back(i);
            inv_reps.push_back(detail::representative(index.classes()[i]).inverse().images);
            h_factor.push_back(h_products[i]);
        }
    }

    template <bool kDerangementsOnly>
    double run() const {
        const std::size_t k = outer.size();
        std::vector<detail::CompensatedSum> inner(k);
        std::array<int, kMaxDegree> composed{};
        std::array<int, kMaxDegree> parts{};
        auto visit = [&](const int* sigma) {
            const double rho_theta = rho_factor[index.index_of_permutation(sigma)];
            if (rho_theta == 0.0) return;
            for (std::size_t t = 0; t < k; ++t) {
                const int* inv = inv_reps[t].data();
                for (int i = 0; i < p; ++i) composed[i] = sigma[inv[i]];
                int count = detail::cycle_type_of(composed.data(), p, parts.data());
                int cls = index.index_of_parts(parts.data(), count);
                inner[t].add(table.value_as_double(cls) * rho_theta);
            }
        };
        if constexpr (kDerangementsOnly)
            detail::for_each_derangement(p, visit);
        else
            detail::for_each_permutation(p, visit);

        detail::CompensatedSum total;
        for (std::size_t t = 0; t < k; ++t)
            total.add(to_double(class_size(index.classes()[outer[t]])) * h_factor[t] *
                      inner[t].result());
        return total.result();
    }
};

} // namespace

double mean_energy(const StateSpectrum& rho, const HamiltonianSpectrum& h) {
    check_dimensions(rho, h);
    return h.trace() / h.dimension();
}

double variance(const StateSpectrum& rho, const HamiltonianSpectrum& h) {
    check_dimensions(rho, h);
    const double d = h.dimension();
    const double trh = h.trace();
    const double h_part = power_trace(h.eigenvalues, 2) - trh * trh / d;
    const double rho_part = power_trace(rho.populations, 2) - 1.0 / d;
    return h_part * rho_part / (d * d - 1.0);
}

double raw_moment(const StateSpectrum& rho, const HamiltonianSpectrum& h, int p,
                  bool allow_extended) {
    check_dimensions(rho, h);
    check_moment_regime(p, h.dimension(), allow_extended);
    const WeingartenTable& table = weingarten_table(p, h.dimension(), allow_extended);
    ReducedSum sum(p, table);
    sum.rho_factor = class_trace_products(table.index(), rho.populations);
    sum.set_outer_classes(false, class_trace_products(table.index(), h.eigenvalues));
    return sum.run<false>();
}

double central_moment(const StateSpectrum& rho, const HamiltonianSpectrum& h, int p,
                      bool allow_extended) {
    check_dimensions(rho, h);
    check_moment_regime(p, h.dimension(), allow_extended);
    if (p == 1) return 0.0;
    const WeingartenTable& table = weingarten_table(p, h.dimension(), allow_extended);
    ReducedSum sum(p, table);
    sum.rho_factor = class_trace_products(table.index(), center_state(rho).deviations);
    sum.set_outer_classes(true, class_trace_products(table.index(), center_hamiltonian(h).deviations));
    return sum.run<true>();
}

double central_moment_state_form(const StateSpectrum& rho, const HamiltonianSpectrum& h, int p,
                                 bool allow_extended) {
    check_dimensions(rho, h);
    check_moment_regime(p, h.dimension(), allow_extended);
    if (p == 1) return 0.0;
    const WeingartenTable& table = weingarten_table(p, h.dimension(), allow_extended);
    ReducedSum sum(p, table);
    sum.rho_factor = class_trace_products(table.index(), rho.populations);
    sum.set_outer_classes(true, class_trace_products(table.index(), center_hamiltonian(h).deviations));
    return sum.run<false>();
}

double gaussian_central_moment(int p, double sigma2) {
    if (p < 1) throw ConditionError("moment order must be positive");
    if (p % 2 != 0) return 0.0;
    return to_double(double_factorial(p - 1)) * std::pow(sigma2, p / 2.0);
}

double pure_central_moment(const HamiltonianSpectrum& h, int p, bool allow_extended) {
    check_moment_regime(p, h.dimension(), allow_extended);
    if (p == 1) return 0.0;
    const CenteredSpectrum centered = center_hamiltonian(h);
    detail::CompensatedSum h_sum;
    for (const auto& [type, size] : derangement_classes(p))
        h_sum.add(to_double(size) * cycle_trace_product(centered.deviations, type));
    return to_double(weingarten_class_sum(p, h.dimension())) * h_sum.result();
}

MomentReport moment_report(const StateSpectrum& rho, const HamiltonianSpectrum& h, int p_max,
                           bool pure_formula, bool allow_extended) {
    check_dimensions(rho, h);
    check_moment_regime(p_max, h.dimension(), allow_extended);

    MomentReport report;
    report.d = h.dimension();
    report.p_max = p_max;
    report.mu = mean_energy(rho, h);
    report.sigma2 = variance(rho, h);
    report.pure = pure_formula;

    const BoundContext ctx = make_bound_context(rho, h, pure_formula);
    const int general_cap = bound_validity_p_max(report.d);

    for (int p = 1; p <= p_max; ++p) {
        MomentRow row;
        row.p = p;
        row.exact = pure_formula ? pure_central_moment(h, p, allow_extended)
                                 : central_moment(rho, h, p, allow_extended);
        row.gaussian = gaussian_central_moment(p, report.sigma2);
        if (pure_formula || p <= general_cap) {
            row.bound_rhs = moment_bound_rhs(p, ctx);
            row.bound_holds = std::abs(row.exact - row.gaussian) <=
                              *row.bound_rhs + 1e-10 * scaling_factor(p, report.sigma2);
        }
        report.rows.push_back(row);
    }
    return report;
}

} // namespace haarorbit
