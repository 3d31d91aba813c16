// quantum.hpp -- density matrices, CPTP channels, a channel zoo, and the
// single-qubit Lindblad step.
//
// Channels are kept either as a Kraus list or as a d^2 x d^2 superoperator in
// the column-stacking vectorization convention vec(A rho B) = (B^T (x) A) vec(rho);
// every channel can produce its superoperator on demand, which is the
// canonical form used for composition and behavioral comparison (Kraus
// decompositions are not unique).

#ifndef QSAS_QUANTUM_HPP
#define QSAS_QUANTUM_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qsas/linalg.hpp"

namespace qsas {

//============================================================================
// Vectorization helpers (column-stacking)
//============================================================================

std::vector<cplx> vec(const ComplexMatrix& M);
ComplexMatrix unvec(const std::vector<cplx>& v, int d);

//============================================================================
// States
//============================================================================

struct DensityMatrix {
  int d = 0;
  ComplexMatrix m;

  // Validates Hermiticity (1e-10), unit trace (1e-10) and positivity
  // (minimum eigenvalue >= -1e-10); throws on violation.
  static DensityMatrix validated(const ComplexMatrix& m);

  // |k><k| in the computational basis.
  static DensityMatrix basis_state(int d, int k);
  static DensityMatrix maximally_mixed(int d);
};

// Ginibre-ensemble random density matrix G G^dagger / tr(G G^dagger);
// deterministic for a fixed seed.
DensityMatrix random_density(int d, std::uint64_t seed);

//============================================================================
// Channels
//============================================================================

enum class ChannelForm { kraus, superop };

struct Channel {
  int d = 0;
  ChannelForm form = ChannelForm::kraus;
  std::vector<ComplexMatrix> kraus; // when form == kraus
  ComplexMatrix superop;            // when form == superop

  static Channel from_kraus(std::vector<ComplexMatrix> ops);
  static Channel from_superop(const ComplexMatrix& s);

  // The channel as a linear map applied to an arbitrary operator.
  ComplexMatrix apply_linear(const ComplexMatrix& A) const;

  // d^2 x d^2 superoperator of this channel (computed for Kraus form).
  ComplexMatrix to_superop() const;
};

// Apply a channel to a state; the result is validated as a density matrix.
DensityMatrix apply(const Channel& ch, const DensityMatrix& rho);

struct CptpReport {
  double trace_defect = 0.0; // max-abs deviation of sum K^dagger K from I
  double min_choi_eig = 0.0; // smallest eigenvalue of the Choi matrix
  bool pass = false;         // trace_defect < 1e-9 and min_choi_eig > -1e-9
};

// Choi matrix C[(i,k),(j,l)] = T(|i><j|)[k,l]; Hermitian for
// Hermiticity-preserving maps (the Hermitian part is used for the
// eigenvalue check).
ComplexMatrix choi_matrix(const Channel& ch);

CptpReport validate_cptp(const Channel& ch);

// compose(outer, inner): rho -> outer(inner(rho)).
Channel compose(const Channel& outer, const Channel& inner);

//============================================================================
// Channel zoo (single qubit unless noted)
//============================================================================

// Pauli matrices and the Hadamard gate.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix hadamard_gate();

// Amplitude damping with decay toward the ground state |0><0|:
//   rho -> [[r00 + l r11, sqrt(1-l) r01], [sqrt(1-l) r10, (1-l) r11]].
Channel amplitude_damping(double lambda);

// Dephasing: off-diagonals scaled by lambda, diagonals untouched.
Channel dephasing(double lambda);

// Input-parameterized depolarizing map A -> z A + (1-z) tr(A) I/d.
Channel depolarizing_input(double z, int d = 2);

// Reset-rate map A -> (1-eps) A + eps tr(A) sigma.
Channel reset_rate(double eps, const DensityMatrix& sigma);

// Unitary conjugation rho -> U rho U^dagger (U unitary within 1e-10).
Channel unitary(const ComplexMatrix& U);

enum class Axis { x, y, z };

// Bloch rotation about a coordinate axis: conjugation by
// cos(angle/2) I + i sin(angle/2) sigma_axis.  With this convention
// rotation(y, t) acts on Bloch vectors as
//   [[cos t, 0, -sin t], [0, 1, 0], [sin t, 0, cos t]].
Channel rotation(Axis axis, double angle);
ComplexMatrix rotation_gate(Axis axis, double angle);

// Hadamard conjugation.
Channel hadamard();

//============================================================================
// Parameterized channels
//============================================================================

struct InputDomain {
  // Per-coordinate closed interval bounds of D_n.
  std::vector<double> lo;
  std::vector<double> hi;

  int n() const { return static_cast<int>(lo.size()); }
  static InputDomain interval(double a, double b) { return InputDomain{{a}, {b}}; }
};

struct ParamChannel {
  int d = 0;
  InputDomain domain;
  // Deterministic builder so concurrent grid evaluation is race-free.
  std::function<Channel(const RealVector&)> builder;

  Channel at(const RealVector& z) const { return builder(z); }
  Channel at(double z) const { return builder(RealVector{z}); }
};

//============================================================================
// Lindblad step
//============================================================================

// One reservoir step of the damped, input-driven qubit: the state is held
// under H(z) = z sigma_x / 2 with jump operator L = |1><0| at rate gamma for
// a time dtau, i.e. rho_t = exp(G(z) dtau) rho_{t-1} with
//   G(z) rho = i [H(z), rho] + gamma (L rho L^dagger - 1/2 {L^dagger L, rho}).
// The commutator sign pairs with L = |1><0| so that the steady state has
//   tr(sigma_y rho*) = -2 z gamma / (2 z^2 + gamma^2),
//   tr(sigma_z rho*) = -gamma^2 / (2 z^2 + gamma^2).
struct LindbladModel {
  double gamma = 1.0;
  double dtau = 1.0;
  // Hamiltonian as a function of the scalar input; defaults to z sigma_x / 2.
  std::function<ComplexMatrix(double)> hamiltonian;

  static LindbladModel make(double gamma, double dtau);
  // Variant with H(z) = z^2 sigma_x / 2 (quadratic input encoding).
  static LindbladModel make_quadratic(double gamma, double dtau);
};

// Superoperator matrix of the generator G(z).
ComplexMatrix lindblad_generator(const LindbladModel& model, double z);

// The channel exp(G(z) dtau).
Channel lindblad_step_channel(const LindbladModel& model, double z);

} // namespace qsas

#endif // QSAS_QUANTUM_HPP
