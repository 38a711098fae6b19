#include "spinpair/baths.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "spinpair/hermite.hpp"
#include "spinpair/quadrature.hpp"

namespace spinpair {

namespace {

void require_time(double t) {
    if (t < 0.0) throw std::invalid_argument("correlation functions: t must be >= 0");
}

// (1 - e^{iut})/u with the u -> 0 limit -it; Taylor branch when |u| t is tiny.
complexd detuning_kernel(double u, double t) {
    const double ut = u * t;
    if (std::abs(ut) < 1e-4) {
        const double t2 = t * t;
        return complexd(0.5 * u * t2 - u * u * u * t2 * t2 / 24.0,
                        -t + u * u * t * t2 / 6.0);
    }
    const complexd e = std::exp(complexd(0.0, ut));
    return (1.0 - e) / u;
}

// Catmull-Rom style cubic through tabulated samples; arbitrary spacing.
class TableInterpolant {
public:
    TableInterpolant(const std::vector<double>& x, const std::vector<double>& y)
        : x_(x), y_(y), slope_(x.size()) {
        const std::size_t n = x.size();
        if (n == 1) {
            slope_[0] = 0.0;
            return;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0)
                slope_[i] = (y_[1] - y_[0]) / (x_[1] - x_[0]);
            else if (i == n - 1)
                slope_[i] = (y_[n - 1] - y_[n - 2]) / (x_[n - 1] - x_[n - 2]);
            else
                slope_[i] = (y_[i + 1] - y_[i - 1]) / (x_[i + 1] - x_[i - 1]);
        }
    }

    double operator()(double x) const {
        if (x <= x_.front()) return y_.front();
        if (x >= x_.back()) return y_.back();
        const auto it = std::upper_bound(x_.begin(), x_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
        const double h = x_[i + 1] - x_[i];
        const double s = (x - x_[i]) / h;
        const double s2 = s * s;
        const double s3 = s2 * s;
        return (2 * s3 - 3 * s2 + 1) * y_[i] + (s3 - 2 * s2 + s) * h * slope_[i] +
               (-2 * s3 + 3 * s2) * y_[i + 1] + (s3 - s2) * h * slope_[i + 1];
    }

private:
    std::vector<double> x_, y_;
    std::vector<double> slope_;
};

struct TrimmedSupport {
    double lo, hi;
};

// Drop tails where J has fallen below 1e-12 of its maximum.
TrimmedSupport trim_support(const std::vector<double>& omega, const std::vector<double>& j) {
    const double jmax = *std::max_element(j.begin(), j.end());
    const double cut = 1e-12 * jmax;
    std::size_t lo = 0, hi = j.size() - 1;
    while (lo < hi && j[lo] < cut) ++lo;
    while (hi > lo && j[hi] < cut) --hi;
    return {omega[lo], omega[hi]};
}

complexd tabulated_B(const TableInterpolant& jw, double lo, double hi, double epsilon,
                     double t) {
    if (t == 0.0) return {0.0, 0.0};
    quad::Options opt;
    opt.abs_tol = 1e-10;
    opt.rel_tol = 1e-9;
    // enough initial panels to resolve the e^{i(eps-omega)t} oscillation
    const double span = hi - lo;
    opt.initial_segments =
        std::max(8, static_cast<int>(std::min(2e5, span * t / 3.0 + 8.0)));
    return quad::integrate(
        [&](double w) {
            return complexd(0.0, 1.0) * jw(w) * detuning_kernel(epsilon - w, t);
        },
        lo, hi, opt);
}

// B'(t) = integral of J(omega) e^{i(eps-omega)t}; used for Hermite slopes
// when sampling a tabulated model on a grid.
complexd tabulated_dB(const TableInterpolant& jw, double lo, double hi, double epsilon,
                      double t) {
    quad::Options opt;
    opt.abs_tol = 1e-10;
    opt.rel_tol = 1e-9;
    const double span = hi - lo;
    opt.initial_segments =
        std::max(8, static_cast<int>(std::min(2e5, span * t / 3.0 + 8.0)));
    return quad::integrate(
        [&](double w) {
            return jw(w) * std::exp(complexd(0.0, (epsilon - w) * t));
        },
        lo, hi, opt);
}

}  // namespace

void validate(const BathModel& model) {
    std::visit(
        [](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, LorentzianBath>) {
                if (!(m.gamma > 0.0) || !(m.gamma0 > 0.0))
                    throw std::invalid_argument("LorentzianBath: rates must be > 0");
            } else if constexpr (std::is_same_v<M, OhmicLorentzDrudeBath>) {
                if (!(m.omega_c > 0.0) || !(m.omega0 > 0.0))
                    throw std::invalid_argument(
                        "OhmicLorentzDrudeBath: frequencies must be > 0");
            } else if constexpr (std::is_same_v<M, MarkovianFlatBath>) {
                if (!(m.gamma0 > 0.0))
                    throw std::invalid_argument("MarkovianFlatBath: gamma0 must be > 0");
            } else {
                if (m.omega.size() != m.j.size() || m.omega.empty())
                    throw std::invalid_argument("TabulatedBath: empty or ragged table");
                if (!(m.epsilon > 0.0))
                    throw std::invalid_argument("TabulatedBath: epsilon must be > 0");
                for (std::size_t i = 0; i < m.omega.size(); ++i) {
                    if (i > 0 && !(m.omega[i] > m.omega[i - 1]))
                        throw std::invalid_argument(
                            "TabulatedBath: omega samples must be strictly increasing");
                    if (m.j[i] < 0.0)
                        throw std::invalid_argument("TabulatedBath: J must be >= 0");
                }
            }
        },
        model);
}

complexd correlation_B(const BathModel& model, double t) {
    require_time(t);
    return std::visit(
        [t](const auto& m) -> complexd {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, LorentzianBath>) {
                return {0.5 * m.gamma0 * (1.0 - std::exp(-m.gamma * t)), 0.0};
            } else if constexpr (std::is_same_v<M, OhmicLorentzDrudeBath>) {
                const complexd z(m.omega_c, -m.omega0);
                return complexd(0.0, -2.0 * m.omega_c * m.omega_c) / z *
                       (1.0 - std::exp(-z * t));
            } else if constexpr (std::is_same_v<M, MarkovianFlatBath>) {
                return {0.5 * m.gamma0, 0.0};
            } else {
                return correlation_B_numeric(m, t);
            }
        },
        model);
}

complexd correlation_Phi(const BathModel& model, double t) {
    require_time(t);
    return std::visit(
        [t, &model](const auto& m) -> complexd {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, LorentzianBath>) {
                return {0.5 * m.gamma0 * (t + std::expm1(-m.gamma * t) / m.gamma), 0.0};
            } else if constexpr (std::is_same_v<M, OhmicLorentzDrudeBath>) {
                const complexd z(m.omega_c, -m.omega0);
                return complexd(0.0, -2.0 * m.omega_c * m.omega_c) / z *
                       (t + (std::exp(-z * t) - 1.0) / z);
            } else if constexpr (std::is_same_v<M, MarkovianFlatBath>) {
                return {0.5 * m.gamma0 * t, 0.0};
            } else {
                // cumulative quadrature of the (itself numeric) B
                if (t == 0.0) return {0.0, 0.0};
                quad::Options opt;
                opt.abs_tol = 1e-10;
                opt.rel_tol = 1e-8;
                opt.initial_segments = std::max(4, static_cast<int>(t * m.epsilon));
                return quad::integrate(
                    [&model](double tau) { return correlation_B(model, tau); }, 0.0, t,
                    opt);
            }
        },
        model);
}

double decoherence_G(const BathModel& model, double t) {
    require_time(t);
    return std::visit(
        [t, &model](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, LorentzianBath>) {
                return m.gamma0 * t + (m.gamma0 / m.gamma) * std::expm1(-m.gamma * t);
            } else if constexpr (std::is_same_v<M, OhmicLorentzDrudeBath>) {
                const double wc = m.omega_c, w0 = m.omega0;
                const double d = wc * wc + w0 * w0;
                const double damp = std::exp(-wc * t);
                return 4.0 * wc * wc * w0 / d * t +
                       4.0 * wc * wc * (wc * wc - w0 * w0) / (d * d) * damp *
                           std::sin(w0 * t) +
                       8.0 * wc * wc * wc * w0 / (d * d) * (damp * std::cos(w0 * t) - 1.0);
            } else if constexpr (std::is_same_v<M, MarkovianFlatBath>) {
                return m.gamma0 * t;
            } else {
                return 2.0 * correlation_Phi(model, t).real();
            }
        },
        model);
}

complexd correlation_B_numeric(const std::vector<double>& omega,
                               const std::vector<double>& j, double epsilon, double t) {
    require_time(t);
    if (omega.empty() || omega.size() != j.size())
        throw std::invalid_argument("correlation_B_numeric: empty or ragged table");
    if (*std::max_element(j.begin(), j.end()) <= 0.0) return {0.0, 0.0};
    TableInterpolant jw(omega, j);
    const auto [lo, hi] = trim_support(omega, j);
    if (!(hi > lo)) {
        // single usable sample: treat as a point mass of negligible width
        return {0.0, 0.0};
    }
    const complexd b = tabulated_B(jw, lo, hi, epsilon, t);
    if (!std::isfinite(b.real()) || !std::isfinite(b.imag()))
        throw NumericalError("correlation_B_numeric: non-finite result");
    return b;
}

complexd correlation_B_numeric(const TabulatedBath& bath, double t) {
    return correlation_B_numeric(bath.omega, bath.j, bath.epsilon, t);
}

TabulatedBath read_spectrum(std::istream& in, double epsilon) {
    TabulatedBath bath;
    bath.epsilon = epsilon;
    bool absolute = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            std::string comment = line.substr(hash + 1);
            if (comment.find("units: absolute") != std::string::npos) absolute = true;
            line.erase(hash);
        }
        std::istringstream ls(line);
        double w, jv;
        if (!(ls >> w)) continue;  // blank
        if (!(ls >> jv))
            throw std::invalid_argument("spectrum line " + std::to_string(lineno) +
                                        ": expected two numeric columns");
        bath.omega.push_back(w);
        bath.j.push_back(jv);
    }
    if (!absolute) {
        for (auto& w : bath.omega) w *= epsilon;
        for (auto& jv : bath.j) jv *= epsilon;
    }
    validate(BathModel{bath});
    return bath;
}

TabulatedBath read_spectrum_file(const std::string& path, double epsilon) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spectrum file: " + path);
    return read_spectrum(in, epsilon);
}

namespace {

CorrelationProfile analytic_profile(const BathModel& model) {
    CorrelationProfile p;
    p.B = [model](double t) { return correlation_B(model, t); };
    p.Phi = [model](double t) { return correlation_Phi(model, t); };
    p.G = [model](double t) { return decoherence_G(model, t); };
    return p;
}

CorrelationProfile gridded_profile(const TabulatedBath& bath, double horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("make_profile: tabulated model needs a finite horizon");
    const auto [lo, hi] = trim_support(bath.omega, bath.j);
    const double detuning =
        std::max(std::abs(bath.epsilon - lo), std::abs(bath.epsilon - hi));
    // keep h * (fastest oscillation rate) small so the cubic stays accurate
    double h = 0.04 / std::max(detuning, 1e-8);
    h = std::min(h, horizon / 16.0);
    const auto n = static_cast<std::size_t>(std::ceil(horizon / h)) + 1;
    if (n > 4000000)
        throw NumericalError("make_profile: tabulated grid too fine for this horizon");
    h = horizon / static_cast<double>(n - 1);

    TableInterpolant jw(bath.omega, bath.j);
    std::vector<complexd> b(n), db(n);
    const double eps = bath.epsilon;
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        const double t = h * static_cast<double>(i);
        const auto idx = static_cast<std::size_t>(i);
        b[idx] = (i == 0) ? complexd{0.0, 0.0} : tabulated_B(jw, lo, hi, eps, t);
        db[idx] = tabulated_dB(jw, lo, hi, eps, t);
    }
    auto series = std::make_shared<HermiteSeries<complexd>>(0.0, h, std::move(b),
                                                            std::move(db));
    CorrelationProfile p;
    p.horizon = series->t_max();
    p.B = [series](double t) { return (*series)(t); };
    p.Phi = [series](double t) { return series->integral_prefix(t); };
    p.G = [series](double t) { return 2.0 * series->integral_prefix(t).real(); };
    return p;
}

}  // namespace

CorrelationProfile make_profile(const BathModel& model, double horizon) {
    validate(model);
    if (const auto* tab = std::get_if<TabulatedBath>(&model))
        return gridded_profile(*tab, horizon);
    return analytic_profile(model);
}

CorrelationProfile zero_bath_profile() {
    CorrelationProfile p;
    p.B = [](double) { return complexd{0.0, 0.0}; };
    p.Phi = [](double) { return complexd{0.0, 0.0}; };
    p.G = [](double) { return 0.0; };
    return p;
}

CorrelationProfile scale_g(const CorrelationProfile& p, double factor) {
    if (factor == 1.0) return p;
    CorrelationProfile q = p;
    auto g = p.G;
    q.G = [g, factor](double t) { return factor * g(t); };
    return q;
}

}  // namespace spinpair
