#include "spinpair/propagator.hpp"

#include <algorithm>
#include <cmath>

namespace spinpair {

namespace {

// Hermite basis on a single [0,1]-normalized segment.
template <class T>
T hermite_segment(double s, double h, const T& v0, const T& d0, const T& v1, const T& d1) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * v0 + ((s3 - 2 * s2 + s) * h) * d0 +
           (-2 * s3 + 3 * s2) * v1 + ((s3 - s2) * h) * d1;
}

}  // namespace

template <class T>
T AuxIntegrals::eval(const std::vector<T>& v, const std::vector<T>& d, double t) const {
    if (t_.empty()) throw std::logic_error("AuxIntegrals: not built");
    if (t < t_.front() - 1e-12 || t > t_.back() * (1.0 + 1e-12) + 1e-300)
        throw std::out_of_range("AuxIntegrals: t outside precomputed grid");
    const auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t i = (it == t_.begin()) ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    if (i >= t_.size() - 1) i = t_.size() - 2;
    const double h = t_[i + 1] - t_[i];
    const double s = std::clamp((t - t_[i]) / h, 0.0, 1.0);
    return hermite_segment(s, h, v[i], d[i], v[i + 1], d[i + 1]);
}

double AuxIntegrals::I1(double t) const { return eval(i1_, di1_, t); }
complexd AuxIntegrals::I2(double t) const { return eval(i2_, di2_, t); }
complexd AuxIntegrals::I3(double t) const { return eval(i3_, di3_, t); }

AuxIntegrals aux_integrals(const SystemParams& params, const CorrelationProfile& profile,
                           std::span<const double> t_grid) {
    validate(params);
    if (t_grid.size() < 2 || t_grid[0] != 0.0)
        throw std::invalid_argument("aux_integrals: grid must start at 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (!(t_grid[i] > t_grid[i - 1]))
            throw std::invalid_argument("aux_integrals: grid must be strictly increasing");

    const double k2 = params.coupling_K * params.coupling_K;
    // growing-exponent derivatives of the three integrals
    auto rates = [&](double tau, double& f1, complexd& f2, complexd& f3) {
        const complexd b = profile.B(tau);
        const double g = 2.0 * b.real();
        f1 = 4.0 * k2 * tau + g;
        f2 = complexd(k2 * tau + g, 0.0) + b;
        f3 = complexd(k2 * tau, 0.0) + b;
    };

    AuxIntegrals out;
    const std::size_t n = t_grid.size();
    out.t_.assign(t_grid.begin(), t_grid.end());
    out.i1_.resize(n);
    out.di1_.resize(n);
    out.i2_.resize(n);
    out.di2_.resize(n);
    out.i3_.resize(n);
    out.di3_.resize(n);

    double v1 = 0.0;
    complexd v2{0.0, 0.0}, v3{0.0, 0.0};
    double f1;
    complexd f2, f3;
    rates(0.0, f1, f2, f3);
    out.i1_[0] = 0.0;
    out.i2_[0] = out.i3_[0] = complexd{0.0, 0.0};
    out.di1_[0] = 1.0;
    out.di2_[0] = out.di3_[0] = complexd{1.0, 0.0};

    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double a = t_grid[i];
        const double b = t_grid[i + 1];
        const double span = b - a;
        double lmax = 0.0;
        for (const double tau : {a, 0.5 * (a + b), b}) {
            double r1;
            complexd r2, r3;
            rates(tau, r1, r2, r3);
            lmax = std::max({lmax, std::abs(r1), std::abs(r2), std::abs(r3)});
        }
        const auto nsub = static_cast<std::size_t>(
            std::max(1.0, std::ceil(span * lmax / 0.1)));
        const double h = span / static_cast<double>(nsub);
        if (h < 1e-13 * std::max(1.0, b))
            throw NumericalError("aux_integrals: step size underflow");

        for (std::size_t s = 0; s < nsub; ++s) {
            const double tau = a + h * static_cast<double>(s);
            double f1a, f1m, f1b;
            complexd f2a, f2m, f2b, f3a, f3m, f3b;
            rates(tau, f1a, f2a, f3a);
            rates(tau + 0.5 * h, f1m, f2m, f3m);
            rates(tau + h, f1b, f2b, f3b);
            // classical RK4 on dI/dt = 1 - f'(t) I
            {
                const double k1 = 1.0 - f1a * v1;
                const double q2 = 1.0 - f1m * (v1 + 0.5 * h * k1);
                const double q3 = 1.0 - f1m * (v1 + 0.5 * h * q2);
                const double q4 = 1.0 - f1b * (v1 + h * q3);
                v1 += h / 6.0 * (k1 + 2.0 * q2 + 2.0 * q3 + q4);
            }
            {
                const complexd k1 = 1.0 - f2a * v2;
                const complexd q2 = 1.0 - f2m * (v2 + 0.5 * h * k1);
                const complexd q3 = 1.0 - f2m * (v2 + 0.5 * h * q2);
                const complexd q4 = 1.0 - f2b * (v2 + h * q3);
                v2 += h / 6.0 * (k1 + 2.0 * q2 + 2.0 * q3 + q4);
            }
            {
                const complexd k1 = 1.0 - f3a * v3;
                const complexd q2 = 1.0 - f3m * (v3 + 0.5 * h * k1);
                const complexd q3 = 1.0 - f3m * (v3 + 0.5 * h * q2);
                const complexd q4 = 1.0 - f3b * (v3 + h * q3);
                v3 += h / 6.0 * (k1 + 2.0 * q2 + 2.0 * q3 + q4);
            }
        }
        if (!std::isfinite(v1) || !std::isfinite(v2.real()) || !std::isfinite(v3.real()))
            throw NumericalError("aux_integrals: non-finite integral value");
        rates(b, f1, f2, f3);
        out.i1_[i + 1] = v1;
        out.di1_[i + 1] = 1.0 - f1 * v1;
        out.i2_[i + 1] = v2;
        out.di2_[i + 1] = 1.0 - f2 * v2;
        out.i3_[i + 1] = v3;
        out.di3_[i + 1] = 1.0 - f3 * v3;
    }
    return out;
}

Eigen::Matrix4d u4(const SystemParams& params, const CorrelationProfile& profile,
                   double t) {
    const double gval = profile.G(t);
    if (!std::isfinite(gval)) throw NumericalError("u4: non-finite G(t)");
    const double g = std::exp(-gval);
    const double k2 = params.coupling_K * params.coupling_K;
    const double q = std::exp(-2.0 * k2 * t * t);
    Eigen::Matrix4d u = Eigen::Matrix4d::Zero();
    u(0, 0) = g * g;
    u(1, 0) = g * (1.0 - g);
    u(2, 0) = g * (1.0 - g);
    u(3, 0) = (1.0 - g) * (1.0 - g);
    u(1, 1) = 0.5 * g * (1.0 + q);
    u(2, 1) = 0.5 * g * (1.0 - q);
    u(3, 1) = 1.0 - g;
    u(1, 2) = 0.5 * g * (1.0 - q);
    u(2, 2) = 0.5 * g * (1.0 + q);
    u(3, 2) = 1.0 - g;
    u(3, 3) = 1.0;
    return u;
}

Eigen::Matrix2d u2_1(const SystemParams& params, const CorrelationProfile& profile,
                     double t) {
    const double g = std::exp(-profile.G(t));
    if (!std::isfinite(g)) throw NumericalError("u2_1: non-finite G(t)");
    const double k2 = params.coupling_K * params.coupling_K;
    const double q = std::exp(-2.0 * k2 * t * t);
    Eigen::Matrix2d u;
    u << 0.5 * g * (1.0 + q), 0.5 * g * (1.0 - q), 0.5 * g * (1.0 - q),
        0.5 * g * (1.0 + q);
    return u;
}

Eigen::Matrix2cd u2_2(const SystemParams& params, const CorrelationProfile& profile,
                      double t) {
    const complexd phi = profile.Phi(t);
    const double gval = profile.G(t);
    if (!std::isfinite(phi.real()) || !std::isfinite(phi.imag()) || !std::isfinite(gval))
        throw NumericalError("u2_2: non-finite Phi(t)");
    const double k2 = params.coupling_K * params.coupling_K;
    const complexd pre = std::exp(-phi - complexd(0.5 * k2 * t * t, 0.0));
    const double g = std::exp(-gval);
    Eigen::Matrix2cd u;
    u << pre * g, complexd{0.0, 0.0}, pre * (1.0 - g), pre;
    return u;
}

namespace {

double pick_grid_step(const SystemParams& params, const BathModel* model,
                      double horizon) {
    double h = horizon / 64.0;
    if (params.coupling_K > 0.0) h = std::min(h, 0.1 / params.coupling_K);
    if (model == nullptr) {
        h = std::min(h, horizon / 2000.0);
        return h;
    }
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, LorentzianBath>) {
                h = std::min({h, 0.01 / m.gamma0, 0.1 / m.gamma});
            } else if constexpr (std::is_same_v<M, OhmicLorentzDrudeBath>) {
                h = std::min({h, 0.01 / m.omega0, 0.1 / m.omega_c});
            } else if constexpr (std::is_same_v<M, MarkovianFlatBath>) {
                h = std::min(h, 0.01 / m.gamma0);
            } else {
                h = std::min(h, 0.01 / m.epsilon);
            }
        },
        *model);
    return h;
}

std::vector<double> uniform_grid(double horizon, double h) {
    const auto n = static_cast<std::size_t>(std::ceil(horizon / h)) + 1;
    if (n > 20000000) throw NumericalError("propagator grid too fine for this horizon");
    std::vector<double> grid(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        grid[i] = horizon * static_cast<double>(i) / static_cast<double>(n);
    return grid;
}

}  // namespace

PropagatorBundle::PropagatorBundle(SystemParams params, BathModel bath, double horizon)
    : params_(params), has_model_(true), model_(std::move(bath)) {
    validate(params_);
    validate(model_);
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("PropagatorBundle: horizon must be positive and finite");
    rebuild(horizon);
}

PropagatorBundle::PropagatorBundle(SystemParams params, CorrelationProfile profile,
                                   double horizon)
    : params_(params), profile_(std::move(profile)) {
    validate(params_);
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("PropagatorBundle: horizon must be positive and finite");
    if (profile_.horizon < horizon)
        throw std::invalid_argument("PropagatorBundle: profile horizon too short");
    rebuild(horizon);
}

void PropagatorBundle::rebuild(double horizon) {
    if (has_model_) profile_ = make_profile(model_, horizon);
    const double h = pick_grid_step(params_, has_model_ ? &model_ : nullptr, horizon);
    aux_ = aux_integrals(params_, profile_, uniform_grid(horizon, h));
    horizon_ = horizon;
}

void PropagatorBundle::ensure_horizon(double t) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::invalid_argument("PropagatorBundle: bad time");
    if (t <= horizon_) return;
    if (!has_model_ && profile_.horizon < t)
        throw std::out_of_range("PropagatorBundle: profile does not reach requested time");
    rebuild(std::max(t, horizon_ * 1.25));
}

DensityMatrix4 PropagatorBundle::evolve(const DensityMatrix4& rho0, double t) const {
    if (!check_physical(rho0, 1.0).within(1e-8))
        throw std::invalid_argument("evolve: initial state is not physical");
    return evolve_unchecked(rho0, t);
}

DensityMatrix4 PropagatorBundle::evolve_extending(const DensityMatrix4& rho0, double t) {
    ensure_horizon(t);
    return evolve(rho0, t);
}

DensityMatrix4 PropagatorBundle::evolve_unchecked(const DensityMatrix4& rho0,
                                                  double t) const {
    if (t < 0.0) throw std::invalid_argument("evolve: t must be >= 0");
    if (t > horizon_ * (1.0 + 1e-12))
        throw std::out_of_range("evolve: t beyond precomputed horizon");

    const double gval = profile_.G(t);
    const complexd phi = profile_.Phi(t);
    const double k = params_.coupling_K;
    const double k2 = k * k;
    const double g = std::exp(-gval);
    const double q = std::exp(-2.0 * k2 * t * t);
    const complexd ep = std::exp(-complexd(0.5 * k2 * t * t, 0.0) - phi);
    const complexd ed = ep * g;
    const double a1 = aux_.I1(t);
    const complexd a2 = aux_.I2(t);
    const complexd a3 = aux_.I3(t);
    const complexd ik(0.0, k);

    const Matrix4c& r = rho0.m;
    const double im23 = r(1, 2).imag();

    DensityMatrix4 out;
    Matrix4c& o = out.m;
    o(0, 0) = g * g * r(0, 0).real();
    o(1, 1) = g * (1.0 - g) * r(0, 0).real() + 0.5 * g * (1.0 + q) * r(1, 1).real() +
              0.5 * g * (1.0 - q) * r(2, 2).real() - 2.0 * k * im23 * a1;
    o(2, 2) = g * (1.0 - g) * r(0, 0).real() + 0.5 * g * (1.0 - q) * r(1, 1).real() +
              0.5 * g * (1.0 + q) * r(2, 2).real() + 2.0 * k * im23 * a1;
    o(3, 3) = 1.0 - o(0, 0) - o(1, 1) - o(2, 2);

    o(0, 1) = ed * r(0, 1) + ik * r(0, 2) * a2;
    o(0, 2) = ed * r(0, 2) + ik * r(0, 1) * a2;
    o(0, 3) = std::exp(-2.0 * phi) * r(0, 3);
    o(1, 2) = g * complexd(r(1, 2).real(), q * im23) + ik * (r(1, 1) - r(2, 2)) * a1;
    o(1, 3) = ep * ((1.0 - g) * r(0, 2) + r(1, 3)) + ik * (r(0, 1) - r(2, 3)) * a3 -
              ik * r(0, 1) * a2;
    o(2, 3) = ep * ((1.0 - g) * r(0, 1) + r(2, 3)) + ik * (r(0, 2) - r(1, 3)) * a3 -
              ik * r(0, 2) * a2;

    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < i; ++j) o(i, j) = std::conj(o(j, i));
    return out;
}

DensityMatrix4 evolve(const DensityMatrix4& rho0, const SystemParams& params,
                      const BathModel& bath, double t) {
    PropagatorBundle bundle(params, bath, std::max(t, 1e-6));
    return bundle.evolve(rho0, t);
}

namespace {
DensityMatrix4 bell_mixture(double g) {
    DensityMatrix4 rho = bell_psi_minus();
    rho.m *= g;
    rho.m(3, 3) += 1.0 - g;
    return rho;
}
}  // namespace

DensityMatrix4 evolve_bell(const BathModel& bath, const SystemParams& params, double t) {
    validate(params);
    return bell_mixture(std::exp(-decoherence_G(bath, t)));
}

DensityMatrix4 evolve_bell(const CorrelationProfile& profile, double t) {
    return bell_mixture(std::exp(-profile.G(t)));
}

namespace {
void ensure_covers(PropagatorBundle& bundle, std::span<const double> times) {
    double tmax = 0.0;
    for (const double t : times) {
        if (t < 0.0) throw std::invalid_argument("evolve kernels: t must be >= 0");
        tmax = std::max(tmax, t);
    }
    bundle.ensure_horizon(tmax);
}
}  // namespace

std::vector<DensityMatrix4> evolve_grid(PropagatorBundle& bundle,
                                        const DensityMatrix4& rho0,
                                        std::span<const double> times) {
    if (!check_physical(rho0, 1.0).within(1e-8))
        throw std::invalid_argument("evolve_grid: initial state is not physical");
    ensure_covers(bundle, times);
    std::vector<DensityMatrix4> out(times.size());
    const PropagatorBundle& b = bundle;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(times.size()); ++i)
        out[static_cast<std::size_t>(i)] =
            b.evolve_unchecked(rho0, times[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<DensityMatrix4> evolve_grid_serial(PropagatorBundle& bundle,
                                               const DensityMatrix4& rho0,
                                               std::span<const double> times) {
    if (!check_physical(rho0, 1.0).within(1e-8))
        throw std::invalid_argument("evolve_grid: initial state is not physical");
    ensure_covers(bundle, times);
    std::vector<DensityMatrix4> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        out[i] = bundle.evolve_unchecked(rho0, times[i]);
    return out;
}

std::vector<DensityMatrix4> evolve_batch(PropagatorBundle& bundle,
                                         std::span<const DensityMatrix4> states,
                                         std::span<const double> times) {
    for (const auto& s : states)
        if (!check_physical(s, 1.0).within(1e-8))
            throw std::invalid_argument("evolve_batch: initial state is not physical");
    ensure_covers(bundle, times);
    std::vector<DensityMatrix4> out(states.size() * times.size());
    const PropagatorBundle& b = bundle;
    const long long total = static_cast<long long>(out.size());
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < total; ++i) {
        const auto s = static_cast<std::size_t>(i) / times.size();
        const auto k = static_cast<std::size_t>(i) % times.size();
        out[static_cast<std::size_t>(i)] = b.evolve_unchecked(states[s], times[k]);
    }
    return out;
}

std::vector<DensityMatrix4> evolve_batch_serial(PropagatorBundle& bundle,
                                                std::span<const DensityMatrix4> states,
                                                std::span<const double> times) {
    for (const auto& s : states)
        if (!check_physical(s, 1.0).within(1e-8))
            throw std::invalid_argument("evolve_batch: initial state is not physical");
    ensure_covers(bundle, times);
    std::vector<DensityMatrix4> out(states.size() * times.size());
    for (std::size_t s = 0; s < states.size(); ++s)
        for (std::size_t k = 0; k < times.size(); ++k)
            out[s * times.size() + k] = bundle.evolve_unchecked(states[s], times[k]);
    return out;
}

}  // namespace spinpair
