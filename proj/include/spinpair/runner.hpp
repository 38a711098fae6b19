#ifndef SPINPAIR_RUNNER_HPP
#define SPINPAIR_RUNNER_HPP

#include <string>
#include <utility>
#include <vector>

#include "spinpair/config.hpp"

namespace spinpair {

// t + selected observable columns, one row per sample time, 17 significant
// digits, locale-independent; byte-identical for identical configs. When
// cfg.validate is set a trailing `# max_oracle_deviation=...` comment is
// appended.
std::string run_evolve(const RunConfig& cfg);

struct NamedFile {
    std::string name;
    std::string content;
};

struct SweepResult {
    std::vector<NamedFile> csvs;   // one per axis value, axis order
    NamedFile plot_script;         // gnuplot-dialect overlay of all curves
};

SweepResult run_sweep(const SweepConfig& sweep);

struct ValidationReport {
    double max_deviation = 0.0;
    double worst_trace_error = 0.0;
    double worst_hermiticity_error = 0.0;
    double worst_min_eigenvalue = 0.0;
    bool passed = false;
    std::string text;  // printable report
};

// Analytic propagator vs brute-force integrator on the configured run, plus
// a seeded random-state physicality sweep. The positivity floor is only
// gated at K = 0, where the map is exactly completely positive; for K > 0
// the second-order map's intrinsic negativity is reported but not gated.
ValidationReport run_validate(const RunConfig& cfg, double tolerance, unsigned long seed);

// Built-in figure recipes; figure 4 compares the flat-correlation reference
// against the Lorentzian bath at gamma = 2 gamma0, time in units of 1/K,
// with gamma0/K configurable (the ratio is not pinned by the source curves).
SweepResult run_figure(int which, int samples = 201, double gamma0_over_k = 1.0);

}  // namespace spinpair

#endif
