#ifndef SPINPAIR_PROPAGATOR_HPP
#define SPINPAIR_PROPAGATOR_HPP

#include <span>
#include <vector>

#include "spinpair/baths.hpp"
#include "spinpair/core.hpp"

namespace spinpair {

// The three exponent-weighted time integrals entering the coherence and
// population solutions, kept strictly in product form
//   I1(t) = e^{-2K^2 t^2 - G(t)}         int_0^t e^{2K^2 tau^2 + G(tau)} dtau
//   I2(t) = e^{-K^2 t^2/2 - G - Phi}     int_0^t e^{K^2 tau^2/2 + G + Phi} dtau
//   I3(t) = e^{-K^2 t^2/2 - Phi}         int_0^t e^{K^2 tau^2/2 + Phi} dtau
// via the companion ODE dI/dt = 1 - f'(t) I, I(0) = 0, where f is the growing
// exponent. The bare integrands overflow doubles already for K t ~ 19; the
// products stay bounded for all t.
class AuxIntegrals {
public:
    AuxIntegrals() = default;

    double I1(double t) const;
    complexd I2(double t) const;
    complexd I3(double t) const;
    double t_max() const { return t_.empty() ? 0.0 : t_.back(); }

private:
    friend AuxIntegrals aux_integrals(const SystemParams&, const CorrelationProfile&,
                                      std::span<const double>);

    template <class T>
    T eval(const std::vector<T>& v, const std::vector<T>& d, double t) const;

    std::vector<double> t_;
    std::vector<double> i1_, di1_;
    std::vector<complexd> i2_, di2_, i3_, di3_;
};

// Integrates the companion ODEs on the given grid (strictly increasing,
// starting at 0) with a classical 4th-order stepper, subdividing each
// interval so that max |f'| * h <= 0.1.
AuxIntegrals aux_integrals(const SystemParams& params, const CorrelationProfile& profile,
                           std::span<const double> t_grid);

// Population propagator: column-stochastic, entries in [0, 1].
Eigen::Matrix4d u4(const SystemParams& params, const CorrelationProfile& profile,
                   double t);

// Single-excitation coherence block acting on (rho_23, rho_32).
Eigen::Matrix2d u2_1(const SystemParams& params, const CorrelationProfile& profile,
                     double t);

// Lower-triangular block acting on (rho_12, rho_34) and on (rho_13, rho_24);
// equals the identity at t = 0.
Eigen::Matrix2cd u2_2(const SystemParams& params, const CorrelationProfile& profile,
                      double t);

// Precomputed correlation profile plus product-form integrals for one
// (system, bath) configuration. Construction is single-threaded; once the
// horizon covers the requested times, evaluation is const and reentrant.
class PropagatorBundle {
public:
    PropagatorBundle(SystemParams params, BathModel bath, double horizon);
    // For synthetic profiles (e.g. both baths switched off).
    PropagatorBundle(SystemParams params, CorrelationProfile profile, double horizon);

    const SystemParams& params() const { return params_; }
    const CorrelationProfile& profile() const { return profile_; }
    double horizon() const { return horizon_; }

    // Rebuilds the grids when t exceeds the current horizon.
    void ensure_horizon(double t);

    // Analytic solution rho(t) for physical rho0 (tolerance 1e-8) and
    // 0 <= t <= horizon(); throws std::out_of_range beyond the grid.
    DensityMatrix4 evolve(const DensityMatrix4& rho0, double t) const;

    // Auto-extending variant.
    DensityMatrix4 evolve_extending(const DensityMatrix4& rho0, double t);

    DensityMatrix4 evolve_unchecked(const DensityMatrix4& rho0, double t) const;

private:
    void rebuild(double horizon);

    SystemParams params_;
    bool has_model_ = false;
    BathModel model_;
    CorrelationProfile profile_;
    AuxIntegrals aux_;
    double horizon_ = 0.0;
};

// One-shot convenience: builds a bundle reaching t and evaluates.
DensityMatrix4 evolve(const DensityMatrix4& rho0, const SystemParams& params,
                      const BathModel& bath, double t);

// Closed form for the |Psi-> initial state:
//   rho(t) = e^{-G(t)} |Psi-><Psi-| + (1 - e^{-G(t)}) |00><00|.
DensityMatrix4 evolve_bell(const BathModel& bath, const SystemParams& params, double t);
DensityMatrix4 evolve_bell(const CorrelationProfile& profile, double t);

// Batch kernels: one state over many sample times, or a batch of states
// over a shared time grid (result index s * times.size() + k). The plain
// versions parallelize the map with OpenMP; the _serial twins are the
// reference implementations and must agree exactly.
std::vector<DensityMatrix4> evolve_grid(PropagatorBundle& bundle,
                                        const DensityMatrix4& rho0,
                                        std::span<const double> times);
std::vector<DensityMatrix4> evolve_grid_serial(PropagatorBundle& bundle,
                                               const DensityMatrix4& rho0,
                                               std::span<const double> times);
std::vector<DensityMatrix4> evolve_batch(PropagatorBundle& bundle,
                                         std::span<const DensityMatrix4> states,
                                         std::span<const double> times);
std::vector<DensityMatrix4> evolve_batch_serial(PropagatorBundle& bundle,
                                                std::span<const DensityMatrix4> states,
                                                std::span<const double> times);

}  // namespace spinpair

#endif
