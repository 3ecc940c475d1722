#include "haarorbit/spectra_io.hpp"

#include <fstream>

#include <json.hpp>

namespace haarorbit {

namespace {

using nlohmann::json;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
}

Eigen::VectorXd read_vector(const json& doc, const char* key, const std::string& path) {
    if (!doc.contains(key) || !doc[key].is_array())
        throw ParseError(path + ": missing \"" + key + "\" array");
    const auto& arr = doc[key];
    Eigen::VectorXd out(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number()) throw ParseError(path + ": non-numeric entry in \"" + key + "\"");
        out[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    return out;
}

json to_json_array(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

} // namespace

SpectraFile load_spectra(const std::string& path, double state_tolerance) {
    const json doc = read_json(path);
    Eigen::VectorXd h = read_vector(doc, "hamiltonian", path);
    Eigen::VectorXd rho = read_vector(doc, "state", path);
    if (h.size() != rho.size())
        throw ParseError(path + ": hamiltonian and state lengths differ");
    try {
        return SpectraFile{HamiltonianSpectrum(std::move(h)),
                           StateSpectrum(std::move(rho), state_tolerance)};
    } catch (const ConditionError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void save_spectra(const SpectraFile& spectra, const std::string& path) {
    json doc;
    doc["hamiltonian"] = to_json_array(spectra.hamiltonian.eigenvalues);
    doc["state"] = to_json_array(spectra.state.populations);
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << doc.dump(2) << '\n';
}

void save_run(const SampleRun& run, const std::string& path) {
    json doc;
    doc["format"] = "haarorbit-run/1";
    doc["seed"] = run.seed;
    doc["d"] = run.d;
    doc["n_samples"] = run.n_samples;
    doc["workers"] = run.workers;
    doc["energies"] = run.energies;
    doc["meta"] = {{"mu", run.meta.mu},
                   {"exact_sigma2", run.meta.exact_sigma2},
                   {"eta", run.meta.eta},
                   {"wall_time_s", run.meta.wall_time_s}};
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << doc.dump() << '\n';
}

SampleRun load_run(const std::string& path) {
    const json doc = read_json(path);
    if (doc.value("format", "") != "haarorbit-run/1")
        throw ParseError(path + ": not a haarorbit run file");
    SampleRun run;
    try {
        run.seed = doc.at("seed").get<std::uint64_t>();
        run.d = doc.at("d").get<int>();
        run.n_samples = doc.at("n_samples").get<int>();
        run.workers = doc.at("workers").get<int>();
        run.energies = doc.at("energies").get<std::vector<double>>();
        const auto& meta = doc.at("meta");
        run.meta.mu = meta.at("mu").get<double>();
        run.meta.exact_sigma2 = meta.at("exact_sigma2").get<double>();
        run.meta.eta = meta.at("eta").get<double>();
        run.meta.wall_time_s = meta.at("wall_time_s").get<double>();
    } catch (const json::exception& e) {
        throw ParseError(path + ": malformed run file: " + e.what());
    }
    if (static_cast<int>(run.energies.size()) != run.n_samples)
        throw ParseError(path + ": energy count does not match n_samples");
    return run;
}

} // namespace haarorbit
