#ifndef SPINPAIR_CORE_HPP
#define SPINPAIR_CORE_HPP

#include <complex>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

// Two exchange-coupled qubits, each damped by its own zero-temperature
// bosonic bath. Basis order used everywhere in this library:
//   index 0 -> |11>,  1 -> |10>,  2 -> |01>,  3 -> |00>
// (qubit 1 is the left label, qubit 2 the right one). |00> is the sink the
// populations relax into, and (|10>,|01>) is the single-excitation pair the
// exchange coupling mixes.
namespace spinpair {

using complexd = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

// Thrown when a computation produces non-finite or out-of-tolerance results.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SystemParams {
    double epsilon = 1.0;     // level splitting of each qubit (angular frequency, hbar = 1)
    double coupling_K = 0.0;  // exchange coupling strength, >= 0
};

// Throws std::invalid_argument unless epsilon > 0 and coupling_K >= 0.
void validate(const SystemParams& p);

struct StateVector4 {
    Vector4c a = Vector4c::Zero();
};

struct DensityMatrix4 {
    Matrix4c m = Matrix4c::Zero();
};

// Diagnostics only: never rejects, so slightly unphysical intermediate
// states can still be inspected.
struct PhysicalityReport {
    double trace_error = 0.0;        // |tr(rho) - 1|
    double hermiticity_error = 0.0;  // max_ij |rho_ij - conj(rho_ji)|
    double min_eigenvalue = 0.0;     // smallest eigenvalue of the Hermitian part

    bool within(double tol) const {
        return trace_error <= tol && hermiticity_error <= tol &&
               min_eigenvalue >= -tol;
    }
};

// |psi><psi|. Throws std::invalid_argument if psi deviates from unit norm
// by more than 1e-9.
DensityMatrix4 density_from_pure(const StateVector4& psi);

// (|10> - |01>)/sqrt(2) as a density matrix.
DensityMatrix4 bell_psi_minus();

// tol must be > 0; it is only a precondition check, the report always
// carries the exactly computed diagnostics.
PhysicalityReport check_physical(const DensityMatrix4& rho, double tol);

StateVector4 ket_11();
StateVector4 ket_10();
StateVector4 ket_01();
StateVector4 ket_00();

// Full-rank state drawn from the Ginibre ensemble, rho = A A^dag / tr.
DensityMatrix4 random_physical_state(std::mt19937_64& rng);

// K (sigma+_1 sigma-_2 + sigma-_1 sigma+_2): couples |10> and |01> only.
Matrix4c exchange_hamiltonian(double coupling_K);

// Lowering operator of qubit 1 or 2 embedded in the two-qubit space.
Matrix4c sigma_minus(int qubit);
Matrix4c sigma_plus(int qubit);

}  // namespace spinpair

#endif
