#ifndef SPINPAIR_ORACLE_HPP
#define SPINPAIR_ORACLE_HPP

#include <array>
#include <span>
#include <vector>

#include "spinpair/baths.hpp"
#include "spinpair/core.hpp"

// Brute-force integrator of the second-order master equation
//   d rho/dt = -i [H_ex, rho(0)] - t [H_ex, [H_ex, rho]]
//              + sum_j { B(t) [s-_j rho, s+_j] + conj(B)(t) [s-_j, rho s+_j] }
// used to validate the analytic propagator and to serve arbitrary baths.
// Intentionally shares nothing with the propagator beyond B(t) itself.
namespace spinpair {

// Density matrix flattened to the fixed 16-slot coherence ordering
// (11,22,33,44, 23,32, 12,34, 21,43, 13,24, 31,42, 14,41).
struct VectorizedState {
    std::array<complexd, 16> r{};
};

VectorizedState vectorize(const DensityMatrix4& rho);
DensityMatrix4 unvectorize(const VectorizedState& v);

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix4> states;
};

// Right-hand side at time t; rho0 enters through the constant inhomogeneous
// commutator. Trace-free for any input.
Matrix4c me_rhs(const SystemParams& params, const CorrelationProfile& profile, double t,
                const Matrix4c& rho, const Matrix4c& rho0);

struct IntegrationOptions {
    double dt = 1e-3;
    // Abort threshold for trace/Hermiticity/positivity drift at snapshots.
    double physicality_guard = 1e-4;
    // Testing hook: drop the -i[H_ex, rho(0)] term.
    bool include_inhomogeneous = true;
};

// Fixed-step classical 4th-order integration with re-Hermitization each
// step; records a snapshot at every requested time (snapshot times sorted,
// starting at >= 0). Throws NumericalError when the step-size precondition
// (decay rate + K^2 t_end) * dt <= 0.05 is violated or physicality drifts
// beyond the guard.
Trajectory integrate_me(const DensityMatrix4& rho0, const SystemParams& params,
                        const CorrelationProfile& profile,
                        std::span<const double> snapshot_times,
                        const IntegrationOptions& opt = {});

Trajectory integrate_me(const DensityMatrix4& rho0, const SystemParams& params,
                        const BathModel& bath, std::span<const double> snapshot_times,
                        const IntegrationOptions& opt = {});

// Max over times and elements of |a - b|; grids must match exactly.
double max_deviation(const Trajectory& a, const Trajectory& b);

}  // namespace spinpair

#endif
