#include "spinpair/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace spinpair {

namespace {
// slot -> (row, col) of the fixed vectorization order
constexpr int kSlots[16][2] = {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {1, 2}, {2, 1},
                               {0, 1}, {2, 3}, {1, 0}, {3, 2}, {0, 2}, {1, 3},
                               {2, 0}, {3, 1}, {0, 3}, {3, 0}};
}  // namespace

VectorizedState vectorize(const DensityMatrix4& rho) {
    VectorizedState v;
    for (int s = 0; s < 16; ++s) v.r[static_cast<std::size_t>(s)] = rho.m(kSlots[s][0], kSlots[s][1]);
    return v;
}

DensityMatrix4 unvectorize(const VectorizedState& v) {
    DensityMatrix4 rho;
    for (int s = 0; s < 16; ++s) rho.m(kSlots[s][0], kSlots[s][1]) = v.r[static_cast<std::size_t>(s)];
    return rho;
}

Matrix4c me_rhs(const SystemParams& params, const CorrelationProfile& profile, double t,
                const Matrix4c& rho, const Matrix4c& rho0) {
    const complexd b = profile.B(t);
    if (!std::isfinite(b.real()) || !std::isfinite(b.imag()))
        throw NumericalError("me_rhs: non-finite B(t)");
    static const Matrix4c sm1 = sigma_minus(1);
    static const Matrix4c sp1 = sigma_plus(1);
    static const Matrix4c sm2 = sigma_minus(2);
    static const Matrix4c sp2 = sigma_plus(2);
    const Matrix4c h = exchange_hamiltonian(params.coupling_K);

    const complexd i_unit(0.0, 1.0);
    Matrix4c d = -i_unit * (h * rho0 - rho0 * h);
    const Matrix4c c1 = h * rho - rho * h;
    d -= t * (h * c1 - c1 * h);
    const complexd bc = std::conj(b);
    for (const auto& [sm, sp] : {std::pair{&sm1, &sp1}, std::pair{&sm2, &sp2}}) {
        const Matrix4c smr = (*sm) * rho;
        const Matrix4c rsp = rho * (*sp);
        d += b * (smr * (*sp) - (*sp) * smr);
        d += bc * ((*sm) * rsp - rsp * (*sm));
    }
    return d;
}

namespace {
Matrix4c rhs_no_inhom(const SystemParams& params, const CorrelationProfile& profile,
                      double t, const Matrix4c& rho) {
    static const Matrix4c zero = Matrix4c::Zero();
    return me_rhs(params, profile, t, rho, zero);
}
}  // namespace

Trajectory integrate_me(const DensityMatrix4& rho0, const SystemParams& params,
                        const CorrelationProfile& profile,
                        std::span<const double> snapshot_times,
                        const IntegrationOptions& opt) {
    validate(params);
    if (!check_physical(rho0, 1.0).within(1e-8))
        throw std::invalid_argument("integrate_me: initial state is not physical");
    if (snapshot_times.empty())
        throw std::invalid_argument("integrate_me: no snapshot times");
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
        if (snapshot_times[i] < 0.0 ||
            (i > 0 && snapshot_times[i] < snapshot_times[i - 1]))
            throw std::invalid_argument("integrate_me: snapshot times must be sorted, >= 0");
    }
    const double t_end = snapshot_times.back();

    // step-size precondition vs the stiffest rate on the horizon
    double bmax = 0.0;
    for (int i = 0; i <= 32; ++i)
        bmax = std::max(bmax, std::abs(profile.B(t_end * i / 32.0)));
    const double k2 = params.coupling_K * params.coupling_K;
    if ((2.0 * bmax + k2 * t_end) * opt.dt > 0.05 + 1e-12)
        throw NumericalError("integrate_me: dt too large for this horizon");

    const Matrix4c rho_init = rho0.m;
    const Matrix4c inhom_anchor =
        opt.include_inhomogeneous ? rho_init : Matrix4c::Zero().eval();

    Trajectory traj;
    traj.times.assign(snapshot_times.begin(), snapshot_times.end());
    traj.states.reserve(snapshot_times.size());

    Matrix4c rho = rho_init;
    double t = 0.0;
    auto rk4_to = [&](double target) {
        if (target <= t) return;
        const auto n = static_cast<std::size_t>(std::ceil((target - t) / opt.dt));
        const double h = (target - t) / static_cast<double>(n);
        for (std::size_t s = 0; s < n; ++s) {
            const Matrix4c k1 = me_rhs(params, profile, t, rho, inhom_anchor);
            const Matrix4c k2m =
                me_rhs(params, profile, t + 0.5 * h, rho + 0.5 * h * k1, inhom_anchor);
            const Matrix4c k3 =
                me_rhs(params, profile, t + 0.5 * h, rho + 0.5 * h * k2m, inhom_anchor);
            const Matrix4c k4 = me_rhs(params, profile, t + h, rho + h * k3, inhom_anchor);
            rho += (h / 6.0) * (k1 + 2.0 * k2m + 2.0 * k3 + k4);
            rho = 0.5 * (rho + rho.adjoint()).eval();
            t += h;
        }
        t = target;
    };

    for (const double ts : snapshot_times) {
        rk4_to(ts);
        DensityMatrix4 snap;
        snap.m = rho;
        // The generator is trace-free and Hermiticity-preserving, so drift
        // in either signals integration trouble. Positivity is not guarded:
        // the second-order map itself is mildly non-positive for coherent
        // inputs at K > 0, and the oracle must reproduce that faithfully.
        const auto rep = check_physical(snap, 1.0);
        if (rep.trace_error > opt.physicality_guard ||
            rep.hermiticity_error > opt.physicality_guard)
            throw NumericalError("integrate_me: physicality drift at t = " +
                                 std::to_string(ts) + " (trace err " +
                                 std::to_string(rep.trace_error) + ")");
        traj.states.push_back(snap);
    }
    return traj;
}

Trajectory integrate_me(const DensityMatrix4& rho0, const SystemParams& params,
                        const BathModel& bath, std::span<const double> snapshot_times,
                        const IntegrationOptions& opt) {
    const double t_end = snapshot_times.empty() ? 0.0 : snapshot_times.back();
    return integrate_me(rho0, params, make_profile(bath, std::max(t_end, 1e-6)),
                        snapshot_times, opt);
}

double max_deviation(const Trajectory& a, const Trajectory& b) {
    if (a.times.size() != b.times.size())
        throw std::invalid_argument("max_deviation: trajectory grids differ");
    for (std::size_t i = 0; i < a.times.size(); ++i)
        if (a.times[i] != b.times[i])
            throw std::invalid_argument("max_deviation: trajectory grids differ");
    double dev = 0.0;
    for (std::size_t i = 0; i < a.states.size(); ++i)
        dev = std::max(dev, (a.states[i].m - b.states[i].m).cwiseAbs().maxCoeff());
    return dev;
}

}  // namespace spinpair
