#include <CLI11.hpp>
#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "haarorbit/bounds.hpp"
#include "haarorbit/moments.hpp"
#include "haarorbit/montecarlo.hpp"
#include "haarorbit/selftest.hpp"
#include "haarorbit/spectra_io.hpp"
#include "haarorbit/weingarten.hpp"

namespace {

using namespace haarorbit;
using nlohmann::json;

constexpr int kExitParse = 2;
constexpr int kExitCondition = 3;
constexpr int kExitResource = 4;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw ParseError("cannot write " + path);
    return file;
}

/// Big integers are emitted as JSON numbers when they fit in 64 bits,
/// as decimal strings otherwise.
json integer_to_json(const Integer& n) {
    if (n >= std::numeric_limits<std::int64_t>::min() &&
        n <= std::numeric_limits<std::int64_t>::max())
        return n.convert_to<std::int64_t>();
    return n.str();
}

json rational_to_json(const CycleType& type, const Rational& value) {
    return json{{"class", type.to_string()},
                {"numerator", integer_to_json(numerator(value))},
                {"denominator", integer_to_json(denominator(value))},
                {"float", to_double(value)}};
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
    if (seed) return *seed;
    std::random_device entropy;
    std::uint64_t drawn = (static_cast<std::uint64_t>(entropy()) << 32) ^ entropy();
    std::fprintf(stderr, "seed drawn from system entropy: %" PRIu64 "\n", drawn);
    return drawn;
}

int default_workers() {
    if (const char* env = std::getenv("HAARORBIT_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed >= 1) return parsed;
    }
    return 1;
}

struct CommonOpts {
    std::string spectra_path;
    std::string out_path;
    double state_tolerance = 1e-9;
};

void add_spectra_options(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--spectra", opts.spectra_path,
                    "JSON file {\"hamiltonian\": [...], \"state\": [...]}")
        ->required();
    cmd->add_option("--state-tolerance", opts.state_tolerance,
                    "allowed |sum(state) - 1| (default 1e-9)");
}

void cmd_weingarten(int p, int d, const std::string& class_label, bool extended,
                    const std::string& out_path) {
    const WeingartenTable& table = weingarten_table(p, d, extended);
    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    if (!class_label.empty()) {
        const CycleType type = CycleType::parse(class_label);
        if (type.p() != p) throw ConditionError("--class must be a partition of --p");
        out << rational_to_json(type, table.value(type)).dump() << '\n';
        return;
    }
    json all = json::array();
    for (const auto& type : table.classes()) all.push_back(rational_to_json(type, table.value(type)));
    out << all.dump() << '\n';
}

void cmd_moments(const CommonOpts& opts, int p_max, bool pure, bool extended,
                 const std::string& format) {
    const SpectraFile spectra = load_spectra(opts.spectra_path, opts.state_tolerance);
    const MomentReport report =
        moment_report(spectra.state, spectra.hamiltonian, p_max, pure, extended);
    std::ofstream file;
    std::ostream& out = open_output(file, opts.out_path);
    if (format == "json") {
        json rows = json::array();
        for (const auto& row : report.rows) {
            json r{{"p", row.p}, {"exact", row.exact}, {"gaussian", row.gaussian},
                   {"abs_diff", std::abs(row.exact - row.gaussian)}};
            if (row.bound_rhs) {
                r["bound_rhs"] = *row.bound_rhs;
                r["bound_holds"] = row.bound_holds;
            }
            rows.push_back(r);
        }
        out << json{{"d", report.d}, {"mu", report.mu}, {"sigma2", report.sigma2},
                    {"rows", rows}}.dump() << '\n';
        return;
    }
    out << "p,exact,gaussian,abs_diff,bound_rhs,bound_holds\n";
    for (const auto& row : report.rows) {
        out << row.p << ',' << fmt(row.exact) << ',' << fmt(row.gaussian) << ','
            << fmt(std::abs(row.exact - row.gaussian)) << ',';
        if (row.bound_rhs)
            out << fmt(*row.bound_rhs) << ',' << (row.bound_holds ? "true" : "false");
        else
            out << ',';
        out << '\n';
    }
}

void cmd_moments_from_run(const std::string& run_path, int p_max, const std::string& out_path) {
    const SampleRun run = load_run(run_path);
    const auto moments = empirical_moments(run, p_max);
    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    out << "p,empirical,std_error\n";
    for (const auto& m : moments)
        out << m.p << ',' << fmt(m.value) << ',' << fmt(m.std_error) << '\n';
}

void cmd_bounds(const CommonOpts& opts, int p_max) {
    const SpectraFile spectra = load_spectra(opts.spectra_path, opts.state_tolerance);
    const BoundContext ctx = make_bound_context(spectra.state, spectra.hamiltonian);
    const int cap = bound_validity_p_max(ctx.d);
    std::ofstream file;
    std::ostream& out = open_output(file, opts.out_path);
    out << "p,scaling_g,error_factor,bound_rhs,within_validity\n";
    for (int p = 1; p <= p_max; ++p) {
        const bool valid = p <= cap;
        out << p << ',' << fmt(scaling_factor(p, ctx.sigma2)) << ',';
        if (valid) {
            const double factor = moment_error_factor_general(ctx.d, p, ctx.eta);
            out << fmt(factor) << ',' << fmt(scaling_factor(p, ctx.sigma2) * factor) << ",true\n";
        } else {
            out << ",,false\n";
        }
    }
}

void cmd_mgf_bound(const CommonOpts& opts, int t_points, int samples,
                   std::optional<std::uint64_t> seed, int workers) {
    const SpectraFile spectra = load_spectra(opts.spectra_path, opts.state_tolerance);
    const BoundContext ctx = make_bound_context(spectra.state, spectra.hamiltonian);
    const double window = mgf_t_window(ctx);
    if (!std::isfinite(window) || window <= 0)
        throw ConditionError("the t-window is degenerate for these spectra");

    std::optional<SampleRun> run;
    if (samples > 0)
        run = sample_energy(spectra.state, spectra.hamiltonian, samples, resolve_seed(seed),
                            workers);

    std::ofstream file;
    std::ostream& out = open_output(file, opts.out_path);
    out << "t,bound,gaussian_mgf,empirical_mgf\n";
    for (int k = 1; k <= t_points; ++k) {
        const double t = 0.95 * window * k / t_points;
        out << fmt(t) << ',' << fmt(mgf_bound(t, ctx)) << ','
            << fmt(std::exp(0.5 * t * t * ctx.sigma2)) << ',';
        if (run) out << fmt(empirical_mgf(*run, t));
        out << '\n';
    }
}

void cmd_sample(const CommonOpts& opts, int n, std::optional<std::uint64_t> seed, int workers) {
    const SpectraFile spectra = load_spectra(opts.spectra_path, opts.state_tolerance);
    const SampleRun run =
        sample_energy(spectra.state, spectra.hamiltonian, n, resolve_seed(seed), workers);
    if (opts.out_path.empty()) throw ParseError("sample requires --out");
    save_run(run, opts.out_path);
}

void cmd_fig1(std::optional<std::uint64_t> seed, int n, int workers, const std::string& out_path) {
    const Fig1Bundle bundle = reproduce_fig1(resolve_seed(seed), n, workers);
    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    out << "bin_center,density,gaussian_density\n";
    for (std::size_t b = 0; b < bundle.bin_centers.size(); ++b)
        out << fmt(bundle.bin_centers[b]) << ',' << fmt(bundle.hist.density[b]) << ','
            << fmt(bundle.overlay[b]) << '\n';
    std::fprintf(stderr,
                 "fig1 meta: sigma2_formula=%.6g (reference %.6g), sigma2_process=%.6g, "
                 "eta=%.4f (reference %.4f), state_trace=%.3f, empirical_var=%.6g (se %.2g)\n",
                 bundle.meta.sigma2_formula, bundle.meta.reference_sigma2,
                 bundle.meta.sigma2_process, bundle.meta.eta, bundle.meta.reference_eta,
                 bundle.meta.state_trace, bundle.meta.empirical_variance,
                 bundle.meta.empirical_variance_se);
}

json error_json(const char* code, int exit, const std::string& message) {
    return json{{"error", {{"code", code}, {"exit", exit}, {"message", message}}}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and Monte Carlo distribution of the mean energy over the Haar orbit"};
    app.require_subcommand(0, 1);

    bool show_version = false;
    app.add_flag("--version", show_version, "print version and pinned constants");

    // weingarten
    auto* wg = app.add_subcommand("weingarten", "exact Weingarten coefficients as JSON");
    int wg_p = 1, wg_d = 2;
    bool wg_extended = false;
    std::string wg_class, wg_out;
    wg->add_option("--p", wg_p, "moment order")->required();
    wg->add_option("--d", wg_d, "dimension")->required();
    wg->add_option("--class", wg_class, "single class label, e.g. 3,1");
    wg->add_flag("--extended-pmax", wg_extended, "unlock p in (10, 12] (expensive)");
    wg->add_option("--out", wg_out, "output path (default stdout)");

    // moments
    auto* mo = app.add_subcommand("moments", "exact vs gaussian central moments (CSV)");
    CommonOpts mo_opts;
    int mo_pmax = 4;
    bool mo_pure = false, mo_extended = false;
    std::string mo_from_run, mo_format = "csv";
    mo->add_option("--spectra", mo_opts.spectra_path, "spectra JSON file");
    mo->add_option("--state-tolerance", mo_opts.state_tolerance, "allowed |sum(state)-1|");
    mo->add_option("--pmax", mo_pmax, "largest moment order");
    mo->add_flag("--pure", mo_pure, "use the factorized pure-state formula");
    mo->add_flag("--extended-pmax", mo_extended, "unlock p in (10, 12] (expensive)");
    mo->add_option("--from-run", mo_from_run, "compute empirical moments from a run file");
    mo->add_option("--format", mo_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    mo->add_option("--out", mo_opts.out_path, "output path (default stdout)");

    // bounds
    auto* bo = app.add_subcommand("bounds", "moment-error bound table (CSV)");
    CommonOpts bo_opts;
    int bo_pmax = 4;
    add_spectra_options(bo, bo_opts);
    bo->add_option("--pmax", bo_pmax, "largest moment order");
    bo->add_option("--out", bo_opts.out_path, "output path (default stdout)");

    // mgf-bound
    auto* mg = app.add_subcommand("mgf-bound", "moment-generating-function bound on a t grid");
    CommonOpts mg_opts;
    int mg_tpoints = 20, mg_samples = 0, mg_workers = default_workers();
    std::optional<std::uint64_t> mg_seed;
    add_spectra_options(mg, mg_opts);
    mg->add_option("--tpoints", mg_tpoints, "grid points inside the window");
    mg->add_option("--samples", mg_samples, "optional Monte Carlo samples for the empirical column");
    mg->add_option("--seed", mg_seed, "RNG seed (drawn from entropy when omitted)");
    mg->add_option("--workers", mg_workers, "sampling worker streams");
    mg->add_option("--out", mg_opts.out_path, "output path (default stdout)");

    // sample
    auto* sa = app.add_subcommand("sample", "draw orbit energies to a run JSON file");
    CommonOpts sa_opts;
    int sa_n = 10000, sa_workers = default_workers();
    std::optional<std::uint64_t> sa_seed;
    add_spectra_options(sa, sa_opts);
    sa->add_option("--n", sa_n, "number of samples")->required();
    sa->add_option("--seed", sa_seed, "RNG seed (drawn from entropy when omitted)");
    sa->add_option("--workers", sa_workers, "worker streams");
    sa->add_option("--out", sa_opts.out_path, "run file path")->required();

    // fig1
    auto* f1 = app.add_subcommand("fig1", "reproduce the seven-level example histogram (CSV)");
    std::optional<std::uint64_t> f1_seed;
    int f1_n = 100000, f1_workers = default_workers();
    std::string f1_out;
    f1->add_option("--seed", f1_seed, "RNG seed (drawn from entropy when omitted)");
    f1->add_option("--n", f1_n, "number of samples");
    f1->add_option("--workers", f1_workers, "worker streams");
    f1->add_option("--out", f1_out, "output path (default stdout)");

    // selftest
    auto* st = app.add_subcommand("selftest", "run the invariant suites at reduced scale");
    std::uint64_t st_seed = 20240901;
    st->add_option("--seed", st_seed, "seed for the randomized suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << error_json("parse", kExitParse, e.what()).dump() << '\n';
        return kExitParse;
    }

    try {
        if (show_version) {
            json constants{{"sqrt6", std::sqrt(6.0)},
                           {"two_sqrt3", 2.0 * std::sqrt(3.0)},
                           {"prefactor_dimension_threshold", 1296},
                           {"moment_cap_default", kDefaultMomentCap},
                           {"moment_cap_hard", kMaxDegree}};
            std::cout << json{{"name", "haarorbit"},
                              {"version", HAARORBIT_VERSION},
                              {"constants", constants}}.dump() << '\n';
            return 0;
        }
        if (wg->parsed()) {
            cmd_weingarten(wg_p, wg_d, wg_class, wg_extended, wg_out);
        } else if (mo->parsed()) {
            if (!mo_from_run.empty()) {
                cmd_moments_from_run(mo_from_run, mo_pmax, mo_opts.out_path);
            } else {
                if (mo_opts.spectra_path.empty())
                    throw ParseError("moments requires --spectra or --from-run");
                cmd_moments(mo_opts, mo_pmax, mo_pure, mo_extended, mo_format);
            }
        } else if (bo->parsed()) {
            cmd_bounds(bo_opts, bo_pmax);
        } else if (mg->parsed()) {
            cmd_mgf_bound(mg_opts, mg_tpoints, mg_samples, mg_seed, mg_workers);
        } else if (sa->parsed()) {
            cmd_sample(sa_opts, sa_n, sa_seed, sa_workers);
        } else if (f1->parsed()) {
            cmd_fig1(f1_seed, f1_n, f1_workers, f1_out);
        } else if (st->parsed()) {
            const int failures = run_selftest(std::cout, st_seed);
            if (failures > 0) {
                std::cerr << error_json("selftest", 1, std::to_string(failures) + " suite(s) failed").dump()
                          << '\n';
                return 1;
            }
        } else {
            std::cout << app.help();
        }
    } catch (const ParseError& e) {
        std::cerr << error_json("parse", kExitParse, e.what()).dump() << '\n';
        return kExitParse;
    } catch (const ConditionError& e) {
        std::cerr << error_json("condition", kExitCondition, e.what()).dump() << '\n';
        return kExitCondition;
    } catch (const ResourceError& e) {
        std::cerr << error_json("resource", kExitResource, e.what()).dump() << '\n';
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << error_json("internal", 1, e.what()).dump() << '\n';
        return 1;
    }
    return 0;
}
