#include "spinpair/entanglement.hpp"

#include <algorithm>
#include <cmath>

namespace spinpair {

namespace {

// (sigma_y x sigma_y) in the |11>,|10>,|01>,|00> ordering: anti-diagonal
// with entries -1, +1, +1, -1.
Matrix4c spin_flip_matrix() {
    Matrix4c f = Matrix4c::Zero();
    f(0, 3) = -1.0;
    f(1, 2) = 1.0;
    f(2, 1) = 1.0;
    f(3, 0) = -1.0;
    return f;
}

std::array<double, 4> sorted_sqrt_eigenvalues_desc(const Eigen::Vector4d& ev) {
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) {
        double v = ev(i);
        if (v < 0.0 && v >= -1e-10) v = 0.0;  // clamp rank-deficiency noise
        lam[static_cast<std::size_t>(i)] = v > 0.0 ? std::sqrt(v) : 0.0;
    }
    std::sort(lam.begin(), lam.end(), std::greater<>());
    return lam;
}

// Same spectrum as rho*rhotilde but manifestly Hermitian PSD; robust on
// degenerate near-zero inputs.
std::array<double, 4> eigenvalues_symmetrized(const Matrix4c& rho, const Matrix4c& rhotilde) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es_rho(0.5 * (rho + rho.adjoint()));
    if (es_rho.info() != Eigen::Success)
        throw NumericalError("concurrence: eigensolver failed on rho");
    Eigen::Vector4d d = es_rho.eigenvalues().cwiseMax(0.0);
    const Matrix4c sqrt_rho = es_rho.eigenvectors() *
                              d.cwiseSqrt().asDiagonal() *
                              es_rho.eigenvectors().adjoint();
    const Matrix4c herm = sqrt_rho * rhotilde * sqrt_rho;
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (herm + herm.adjoint()));
    if (es.info() != Eigen::Success)
        throw NumericalError("concurrence: eigensolver failed on symmetrized product");
    return sorted_sqrt_eigenvalues_desc(es.eigenvalues());
}

}  // namespace

double concurrence(const DensityMatrix4& rho) {
    if (!check_physical(rho, 1.0).within(1e-6))
        throw std::invalid_argument("concurrence: state is not physical");
    static const Matrix4c flip = spin_flip_matrix();
    const Matrix4c rhotilde = flip * rho.m.conjugate() * flip;
    const Matrix4c prod = rho.m * rhotilde;

    std::array<double, 4> lam{};
    Eigen::ComplexEigenSolver<Matrix4c> es(prod, /*computeEigenvectors=*/false);
    bool ok = es.info() == Eigen::Success;
    if (ok) {
        Eigen::Vector4d real_parts;
        for (int i = 0; i < 4; ++i) {
            const complexd ev = es.eigenvalues()(i);
            // spectrum is real non-negative in exact arithmetic
            if (std::abs(ev.imag()) > 1e-10 || ev.real() < -1e-10) {
                ok = false;
                break;
            }
            real_parts(i) = ev.real();
        }
        if (ok) lam = sorted_sqrt_eigenvalues_desc(real_parts);
    }
    if (!ok) lam = eigenvalues_symmetrized(rho.m, rhotilde);

    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double concurrence_bell(const CorrelationProfile& profile, double t) {
    if (t < 0.0) throw std::invalid_argument("concurrence_bell: t must be >= 0");
    return std::exp(-profile.G(t));
}

double concurrence_bell(const BathModel& bath, double t) {
    return std::exp(-decoherence_G(bath, t));
}

double population(const DensityMatrix4& rho, int index) {
    if (index < 1 || index > 4)
        throw std::invalid_argument("population: basis index must be in 1..4");
    return rho.m(index - 1, index - 1).real();
}

double purity(const DensityMatrix4& rho) { return (rho.m * rho.m).trace().real(); }

ObservableSample observe(const DensityMatrix4& rho, double t) {
    ObservableSample s;
    s.t = t;
    s.concurrence = concurrence(rho);
    for (int i = 0; i < 4; ++i)
        s.populations[static_cast<std::size_t>(i)] = rho.m(i, i).real();
    s.purity = purity(rho);
    return s;
}

}  // namespace spinpair
