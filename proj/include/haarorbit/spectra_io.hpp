#pragma once

#include <string>

#include "haarorbit/montecarlo.hpp"
#include "haarorbit/spectral.hpp"

namespace haarorbit {

struct SpectraFile {
    HamiltonianSpectrum hamiltonian;
    StateSpectrum state;
};

/// Reads {"hamiltonian": [..d reals..], "state": [..d reals..]}.
/// Validation failures (schema or state invariants) raise ParseError.
SpectraFile load_spectra(const std::string& path, double state_tolerance = 1e-9);
void save_spectra(const SpectraFile& spectra, const std::string& path);

void save_run(const SampleRun& run, const std::string& path);
SampleRun load_run(const std::string& path);

} // namespace haarorbit
