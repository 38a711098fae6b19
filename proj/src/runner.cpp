#include "spinpair/runner.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "spinpair/entanglement.hpp"
#include "spinpair/oracle.hpp"
#include "spinpair/propagator.hpp"

namespace spinpair {

namespace {

std::string fmt17(double v) {
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string fmt_short(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::vector<double> sample_times(const RunConfig& cfg) {
    std::vector<double> t(static_cast<std::size_t>(cfg.samples));
    for (int i = 0; i < cfg.samples; ++i)
        t[static_cast<std::size_t>(i)] =
            cfg.t_end * static_cast<double>(i) / static_cast<double>(cfg.samples - 1);
    return t;
}

PropagatorBundle make_bundle(const RunConfig& cfg, double horizon) {
    if (cfg.g_scale == 1.0) return {cfg.system, cfg.bath, horizon};
    // fault-injection path: corrupt G on the analytic side only
    return {cfg.system, scale_g(make_profile(cfg.bath, horizon), cfg.g_scale), horizon};
}

double oracle_dt(const RunConfig& cfg, const CorrelationProfile& profile) {
    double bmax = 0.0;
    for (int i = 0; i <= 32; ++i)
        bmax = std::max(bmax, std::abs(profile.B(cfg.t_end * i / 32.0)));
    const double k2 = cfg.system.coupling_K * cfg.system.coupling_K;
    const double rate = 2.0 * bmax + k2 * cfg.t_end;
    double dt = cfg.t_end / 500.0;
    if (rate > 0.0) dt = std::min(dt, 0.008 / rate);
    return dt;
}

void header_columns(const RunConfig& cfg, std::string& header) {
    header = "t";
    for (const Observable obs : cfg.outputs) {
        switch (obs) {
            case Observable::kConcurrence:
                header += ",concurrence";
                break;
            case Observable::kPopulations:
                header += ",P11,P10,P01,P00";
                break;
            case Observable::kPurity:
                header += ",purity";
                break;
            case Observable::kRho:
                for (int i = 1; i <= 4; ++i)
                    for (int j = 1; j <= 4; ++j) {
                        header += ",rho" + std::to_string(i) + std::to_string(j) + "_re";
                        header += ",rho" + std::to_string(i) + std::to_string(j) + "_im";
                    }
                break;
        }
    }
}

void append_row(const RunConfig& cfg, double t_scaled, const DensityMatrix4& rho,
                std::string& out) {
    out += fmt17(t_scaled);
    for (const Observable obs : cfg.outputs) {
        switch (obs) {
            case Observable::kConcurrence:
                out += "," + fmt17(concurrence(rho));
                break;
            case Observable::kPopulations:
                for (int i = 1; i <= 4; ++i) out += "," + fmt17(population(rho, i));
                break;
            case Observable::kPurity:
                out += "," + fmt17(purity(rho));
                break;
            case Observable::kRho:
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j) {
                        out += "," + fmt17(rho.m(i, j).real());
                        out += "," + fmt17(rho.m(i, j).imag());
                    }
                break;
        }
    }
    out += "\n";
}

}  // namespace

std::string run_evolve(const RunConfig& cfg) {
    const DensityMatrix4 rho0 = cfg.initial_density();
    const std::vector<double> times = sample_times(cfg);
    PropagatorBundle bundle = make_bundle(cfg, cfg.t_end);
    const std::vector<DensityMatrix4> states = evolve_grid(bundle, rho0, times);

    std::string unit_label;
    const double unit_rate = cfg.time_unit_rate(&unit_label);

    std::string header;
    header_columns(cfg, header);
    std::string out = "# time column: " + unit_label + "\n" + header + "\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        append_row(cfg, times[i] * unit_rate, states[i], out);

    if (cfg.validate) {
        const CorrelationProfile honest = make_profile(cfg.bath, cfg.t_end);
        IntegrationOptions opt;
        opt.dt = oracle_dt(cfg, honest);
        const Trajectory oracle = integrate_me(rho0, cfg.system, honest, times, opt);
        Trajectory analytic{times, states};
        out += "# max_oracle_deviation=" + fmt17(max_deviation(analytic, oracle)) + "\n";
    }
    return out;
}

namespace {

std::string plot_script_text(const std::string& stem, const std::string& xlabel,
                             const std::string& ylabel, int ycol,
                             const std::vector<std::pair<std::string, std::string>>& curves) {
    std::string gp;
    gp += "# gnuplot script generated by spinpair\n";
    gp += "set datafile separator ','\n";
    gp += "set key top right\n";
    gp += "set xlabel '" + xlabel + "'\n";
    gp += "set ylabel '" + ylabel + "'\n";
    gp += "set output '" + stem + ".png'\n";
    gp += "set terminal pngcairo size 900,600\n";
    gp += "plot \\\n";
    for (std::size_t i = 0; i < curves.size(); ++i) {
        gp += "  '" + curves[i].first + "' using 1:" + std::to_string(ycol) +
              " with lines title '" + curves[i].second + "'";
        gp += (i + 1 < curves.size()) ? ", \\\n" : "\n";
    }
    return gp;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& sweep) {
    const std::size_t n = sweep.values.size();
    std::vector<std::string> csvs(n);
    std::vector<std::string> errors(n);

#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            csvs[idx] = run_evolve(sweep.member(sweep.values[idx]));
        } catch (const std::exception& e) {
            errors[idx] = e.what();
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!errors[i].empty())
            throw NumericalError("sweep member " + sweep.axis + "=" +
                                 fmt_short(sweep.values[i]) + " failed: " + errors[i]);

    SweepResult result;
    std::vector<std::pair<std::string, std::string>> curves;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string tag = sweep.axis + "=" + fmt_short(sweep.values[i]);
        const std::string name = sweep.stem + "_" + tag + ".csv";
        result.csvs.push_back({name, csvs[i]});
        curves.emplace_back(name, tag);
    }

    std::string unit_label;
    sweep.base.time_unit_rate(&unit_label);
    const bool conc = !sweep.base.outputs.empty() &&
                      sweep.base.outputs.front() == Observable::kConcurrence;
    result.plot_script = {sweep.stem + ".gp",
                          plot_script_text(sweep.stem, unit_label,
                                           conc ? "concurrence" : "observable", 2, curves)};
    return result;
}

ValidationReport run_validate(const RunConfig& cfg, double tolerance, unsigned long seed) {
    ValidationReport rep;
    std::ostringstream text;

    const DensityMatrix4 rho0 = cfg.initial_density();
    const std::vector<double> times = sample_times(cfg);
    PropagatorBundle bundle = make_bundle(cfg, cfg.t_end);
    const std::vector<DensityMatrix4> states = evolve_grid(bundle, rho0, times);

    const CorrelationProfile honest = make_profile(cfg.bath, cfg.t_end);
    IntegrationOptions opt;
    opt.dt = oracle_dt(cfg, honest);
    const Trajectory oracle = integrate_me(rho0, cfg.system, honest, times, opt);
    rep.max_deviation = max_deviation(Trajectory{times, states}, oracle);

    double worst_trace = 0.0, worst_herm = 0.0, worst_eig = 1.0;
    for (const auto& s : states) {
        const auto r = check_physical(s, 1.0);
        worst_trace = std::max(worst_trace, r.trace_error);
        worst_herm = std::max(worst_herm, r.hermiticity_error);
        worst_eig = std::min(worst_eig, r.min_eigenvalue);
    }

    // seeded random-state physicality sweep
    std::mt19937_64 rng(seed);
    std::vector<DensityMatrix4> random_states;
    for (int i = 0; i < 32; ++i) random_states.push_back(random_physical_state(rng));
    std::vector<double> probe_times;
    const std::size_t stride = std::max<std::size_t>(1, times.size() / 16);
    for (std::size_t i = 0; i < times.size(); i += stride) probe_times.push_back(times[i]);
    double rand_trace = 0.0, rand_herm = 0.0, rand_eig = 1.0;
    const auto batch = evolve_batch(bundle, random_states, probe_times);
    for (const auto& s : batch) {
        const auto r = check_physical(s, 1.0);
        rand_trace = std::max(rand_trace, r.trace_error);
        rand_herm = std::max(rand_herm, r.hermiticity_error);
        rand_eig = std::min(rand_eig, r.min_eigenvalue);
    }

    rep.worst_trace_error = std::max(worst_trace, rand_trace);
    rep.worst_hermiticity_error = std::max(worst_herm, rand_herm);
    rep.worst_min_eigenvalue = std::min(worst_eig, rand_eig);

    const bool k_zero = cfg.system.coupling_K == 0.0;
    const bool dev_ok = rep.max_deviation <= tolerance;
    const bool trace_ok = rep.worst_trace_error <= 1e-10;
    const bool herm_ok = rep.worst_hermiticity_error <= 1e-10;
    const bool eig_ok = worst_eig >= -1e-8 && (!k_zero || rand_eig >= -1e-8);
    rep.passed = dev_ok && trace_ok && herm_ok && eig_ok;

    text << "validation report\n";
    text << "  samples                : " << times.size() << " times up to t_end="
         << fmt_short(cfg.t_end) << "\n";
    text << "  oracle step            : dt=" << fmt_short(opt.dt) << "\n";
    text << "  max |analytic - oracle|: " << fmt17(rep.max_deviation)
         << (dev_ok ? "  (<= " : "  (EXCEEDS ") << fmt_short(tolerance) << ")\n";
    text << "  worst trace error      : " << fmt17(rep.worst_trace_error) << "\n";
    text << "  worst hermiticity error: " << fmt17(rep.worst_hermiticity_error) << "\n";
    text << "  configured-state min eigenvalue: " << fmt17(worst_eig) << "\n";
    text << "  random-suite min eigenvalue    : " << fmt17(rand_eig);
    if (k_zero)
        text << "  (gated: K=0 map is completely positive)\n";
    else
        text << "  (reported only: second-order map is not CP for K>0)\n";
    text << (rep.passed ? "PASS" : "FAIL") << "\n";
    rep.text = text.str();
    return rep;
}

SweepResult run_figure(int which, int samples, double gamma0_over_k) {
    if (samples < 2) throw ConfigError("figure: need at least 2 samples");
    if (which == 1 || which == 3) {
        SweepConfig sweep;
        sweep.base.system = {1.0, 1.0};
        sweep.base.bath = LorentzianBath{1.0, 1.0};
        sweep.base.initial =
            which == 1 ? InitialState::kBellPsiMinus : InitialState::kKet10;
        sweep.base.t_end = 10.0;
        sweep.base.samples = samples;
        sweep.base.outputs = {Observable::kConcurrence};
        sweep.axis = "bath.gamma_ratio";
        sweep.values = {0.1, 1.0, 10.0};
        sweep.stem = which == 1 ? "fig1" : "fig3";
        return run_sweep(sweep);
    }
    if (which == 2) {
        SweepConfig sweep;
        sweep.base.system = {2.0, 1.0};  // omega0 = epsilon/2 = 1
        sweep.base.bath = OhmicLorentzDrudeBath{1.0, 1.0};
        sweep.base.initial = InitialState::kBellPsiMinus;
        sweep.base.t_end = 10.0;
        sweep.base.samples = samples;
        sweep.base.outputs = {Observable::kConcurrence};
        sweep.axis = "bath.omega_ratio";
        sweep.values = {0.1, 1.0, 10.0};
        sweep.stem = "fig2";
        return run_sweep(sweep);
    }
    if (which == 4) {
        if (!(gamma0_over_k > 0.0)) throw ConfigError("figure 4: gamma0/K must be > 0");
        RunConfig base;
        base.system = {1.0, 1.0};  // time axis in units of 1/K
        base.initial = InitialState::kKet10;
        base.t_end = 10.0;
        base.samples = samples;
        base.outputs = {Observable::kPopulations};
        base.time_unit = TimeUnit::kCouplingK;
        const double gamma0 = gamma0_over_k * base.system.coupling_K;

        RunConfig markov = base;
        markov.bath = MarkovianFlatBath{gamma0};
        RunConfig lorentz = base;
        lorentz.bath = LorentzianBath{2.0 * gamma0, gamma0};

        SweepResult result;
        result.csvs.push_back({"fig4_markovian.csv", run_evolve(markov)});
        result.csvs.push_back({"fig4_non_markovian.csv", run_evolve(lorentz)});
        result.plot_script = {
            "fig4.gp",
            plot_script_text("fig4", "K*t", "P01", 4,
                             {{"fig4_markovian.csv", "markovian (flat)"},
                              {"fig4_non_markovian.csv", "non-markovian (gamma=2 gamma0)"}})};
        return result;
    }
    throw ConfigError("figure: expected 1, 2, 3 or 4");
}

}  // namespace spinpair
