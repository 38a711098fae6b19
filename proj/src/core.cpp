#include "spinpair/core.hpp"

#include <cmath>

namespace spinpair {

void validate(const SystemParams& p) {
    if (!(p.epsilon > 0.0))
        throw std::invalid_argument("SystemParams: epsilon must be > 0");
    if (!(p.coupling_K >= 0.0))
        throw std::invalid_argument("SystemParams: coupling_K must be >= 0");
}

DensityMatrix4 density_from_pure(const StateVector4& psi) {
    const double norm = psi.a.norm();
    if (std::abs(norm - 1.0) > 1e-9)
        throw std::invalid_argument("density_from_pure: state vector is not normalized");
    DensityMatrix4 rho;
    rho.m = psi.a * psi.a.adjoint();
    return rho;
}

DensityMatrix4 bell_psi_minus() {
    StateVector4 psi;
    const double s = 1.0 / std::sqrt(2.0);
    psi.a << 0.0, s, -s, 0.0;
    return density_from_pure(psi);
}

PhysicalityReport check_physical(const DensityMatrix4& rho, double tol) {
    if (!(tol > 0.0))
        throw std::invalid_argument("check_physical: tol must be > 0");
    PhysicalityReport rep;
    rep.trace_error = std::abs(rho.m.trace() - complexd(1.0, 0.0));
    rep.hermiticity_error = (rho.m - rho.m.adjoint()).cwiseAbs().maxCoeff();
    const Matrix4c herm = 0.5 * (rho.m + rho.m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(herm, Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    return rep;
}

namespace {
StateVector4 basis_ket(int idx) {
    StateVector4 psi;
    psi.a(idx) = 1.0;
    return psi;
}
}  // namespace

StateVector4 ket_11() { return basis_ket(0); }
StateVector4 ket_10() { return basis_ket(1); }
StateVector4 ket_01() { return basis_ket(2); }
StateVector4 ket_00() { return basis_ket(3); }

DensityMatrix4 random_physical_state(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix4c a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = complexd(gauss(rng), gauss(rng));
    Matrix4c g = a * a.adjoint();
    DensityMatrix4 rho;
    rho.m = g / g.trace().real();
    return rho;
}

Matrix4c exchange_hamiltonian(double coupling_K) {
    Matrix4c h = Matrix4c::Zero();
    h(1, 2) = coupling_K;
    h(2, 1) = coupling_K;
    return h;
}

Matrix4c sigma_minus(int qubit) {
    Matrix4c s = Matrix4c::Zero();
    if (qubit == 1) {
        s(2, 0) = 1.0;  // |11> -> |01>
        s(3, 1) = 1.0;  // |10> -> |00>
    } else if (qubit == 2) {
        s(1, 0) = 1.0;  // |11> -> |10>
        s(3, 2) = 1.0;  // |01> -> |00>
    } else {
        throw std::invalid_argument("sigma_minus: qubit must be 1 or 2");
    }
    return s;
}

Matrix4c sigma_plus(int qubit) { return sigma_minus(qubit).adjoint().eval(); }

}  // namespace spinpair
