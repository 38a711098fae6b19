#ifndef SPINPAIR_BATHS_HPP
#define SPINPAIR_BATHS_HPP

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "spinpair/core.hpp"

namespace spinpair {

// Spectral density families. The two closed-form models implement the
// resonant correlation functions
//   Lorentzian:  B(t) = (gamma0/2) (1 - e^{-gamma t})
//   Ohmic/Drude: B(t) = -i 2 wc^2/(wc - i w0) (1 - e^{-(wc - i w0) t})
// MarkovianFlat is the gamma -> infinity limit of the Lorentzian, B = gamma0/2,
// used as the memoryless reference curve.
struct LorentzianBath {
    double gamma = 1.0;   // reservoir decay rate
    double gamma0 = 1.0;  // system decay rate
};

struct OhmicLorentzDrudeBath {
    double omega_c = 1.0;  // cut-off frequency
    double omega0 = 1.0;   // resonance frequency, epsilon/2
};

struct MarkovianFlatBath {
    double gamma0 = 1.0;
};

struct TabulatedBath {
    std::vector<double> omega;  // strictly increasing
    std::vector<double> j;      // J(omega) >= 0
    double epsilon = 1.0;       // system frequency entering the detuning epsilon - omega
};

using BathModel =
    std::variant<LorentzianBath, OhmicLorentzDrudeBath, MarkovianFlatBath, TabulatedBath>;

// Throws std::invalid_argument on non-positive rates, unsorted or negative
// tabulated data.
void validate(const BathModel& model);

// Bath correlation function B(t), its running integral Phi(t), and the
// decoherence exponent G(t) = Phi + conj(Phi) = 2 Re Phi. Closed forms for
// the analytic models, quadrature for tabulated spectra. t must be >= 0.
complexd correlation_B(const BathModel& model, double t);
complexd correlation_Phi(const BathModel& model, double t);
double decoherence_G(const BathModel& model, double t);

// i * integral of J(omega) (1 - e^{i(eps-omega)t}) / (eps-omega) over the
// tabulated support, with the removable singularity at omega = eps handled
// by Taylor expansion. The table is interpolated with a Catmull-Rom cubic.
complexd correlation_B_numeric(const std::vector<double>& omega,
                               const std::vector<double>& j, double epsilon,
                               double t);
complexd correlation_B_numeric(const TabulatedBath& bath, double t);

// Two-column text: omega J, '#' comments, whitespace-delimited. Values are
// in units of epsilon unless a "# units: absolute" header appears.
TabulatedBath read_spectrum(std::istream& in, double epsilon);
TabulatedBath read_spectrum_file(const std::string& path, double epsilon);

// B, Phi, G as callables. Closed-form models evaluate exactly at any t; a
// tabulated model is sampled on a grid up to `horizon` and interpolated
// (horizon() reports the usable range, +inf for closed forms).
struct CorrelationProfile {
    std::function<complexd(double)> B;
    std::function<complexd(double)> Phi;
    std::function<double(double)> G;
    double horizon = std::numeric_limits<double>::infinity();
};

CorrelationProfile make_profile(const BathModel& model,
                                double horizon = std::numeric_limits<double>::infinity());

// B = Phi = G = 0: both baths disconnected. Handy for closed-system checks.
CorrelationProfile zero_bath_profile();

// Profile with G scaled by `factor` (B, Phi untouched). Fault-injection
// hook for validation tests; factor 1 returns the input unchanged.
CorrelationProfile scale_g(const CorrelationProfile& p, double factor);

}  // namespace spinpair

#endif
