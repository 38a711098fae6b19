#ifndef SPINPAIR_ENTANGLEMENT_HPP
#define SPINPAIR_ENTANGLEMENT_HPP

#include <array>

#include "spinpair/baths.hpp"
#include "spinpair/core.hpp"

namespace spinpair {

struct ObservableSample {
    double t = 0.0;
    double concurrence = 0.0;
    std::array<double, 4> populations{};  // P11, P10, P01, P00
    double purity = 1.0;
};

// Wootters concurrence C = max(0, l1 - l2 - l3 - l4), with l_i the
// decreasing square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
// Eigenvalues come from the general solver; if that looks unreliable the
// Hermitian form sqrt(rho) rhotilde sqrt(rho) (same spectrum) is used.
double concurrence(const DensityMatrix4& rho);

// e^{-G(t)}: the Bell-state closed form.
double concurrence_bell(const CorrelationProfile& profile, double t);
double concurrence_bell(const BathModel& bath, double t);

// Diagonal element by basis index 1..4 (1 -> |11>, 2 -> |10>, 3 -> |01>,
// 4 -> |00>); P01 of the figure recipes is index 3.
double population(const DensityMatrix4& rho, int index);

// tr(rho^2), in [1/4, 1] for physical states.
double purity(const DensityMatrix4& rho);

ObservableSample observe(const DensityMatrix4& rho, double t);

}  // namespace spinpair

#endif
