// quantum.cpp -- states, channels, zoo constructors, Lindblad step.

#include "qsas/quantum.hpp"

#include <cmath>

#include "qsas/rng.hpp"

namespace qsas {

//============================================================================
// Vectorization (column-stacking: vec(M)[i + j*d] = M[i][j])
//============================================================================

std::vector<cplx> vec(const ComplexMatrix& M) {
  if (!M.is_square()) throw ShapeError("vec requires a square matrix");
  const int d = M.rows;
  std::vector<cplx> v(static_cast<size_t>(d) * d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) v[static_cast<size_t>(j) * d + i] = M.at(i, j);
  return v;
}

ComplexMatrix unvec(const std::vector<cplx>& v, int d) {
  if (static_cast<int>(v.size()) != d * d)
    throw ShapeError("unvec: vector length is not d^2");
  ComplexMatrix M(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) M.at(i, j) = v[static_cast<size_t>(j) * d + i];
  return M;
}

//============================================================================
// States
//============================================================================

DensityMatrix DensityMatrix::validated(const ComplexMatrix& m) {
  if (!m.is_square()) throw ShapeError("density matrix must be square");
  if (m.hermitian_defect() > 1e-10)
    throw SymmetryError("density matrix must be Hermitian within 1e-10");
  if (std::abs(m.trace() - cplx(1.0)) > 1e-10)
    throw DomainError("density matrix must have unit trace within 1e-10");
  EigenResult eig = hermitian_eigen(m);
  if (eig.values[0] < -1e-10)
    throw DomainError("density matrix must be positive semidefinite (min eig " +
                      std::to_string(eig.values[0]) + ")");
  return DensityMatrix{m.rows, m};
}

DensityMatrix DensityMatrix::basis_state(int d, int k) {
  if (k < 0 || k >= d) throw DomainError("basis_state: index out of range");
  ComplexMatrix m(d, d);
  m.at(k, k) = 1.0;
  return DensityMatrix{d, m};
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  ComplexMatrix m(d, d);
  for (int i = 0; i < d; ++i) m.at(i, i) = 1.0 / d;
  return DensityMatrix{d, m};
}

DensityMatrix random_density(int d, std::uint64_t seed) {
  if (d < 2) throw DomainError("random_density requires d >= 2");
  Rng rng(seed);
  ComplexMatrix G(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) G.at(i, j) = cplx(rng.normal(), rng.normal());
  ComplexMatrix W = G * G.adjoint();
  const double tr = W.trace().real();
  ComplexMatrix m = cplx(1.0 / tr) * W;
  // Symmetrize exactly so downstream Hermiticity checks see zero defect.
  for (int i = 0; i < d; ++i) {
    m.at(i, i) = m.at(i, i).real();
    for (int j = i + 1; j < d; ++j) {
      const cplx avg = 0.5 * (m.at(i, j) + std::conj(m.at(j, i)));
      m.at(i, j) = avg;
      m.at(j, i) = std::conj(avg);
    }
  }
  return DensityMatrix{d, m};
}

//============================================================================
// Channels
//============================================================================

Channel Channel::from_kraus(std::vector<ComplexMatrix> ops) {
  if (ops.empty()) throw ShapeError("Channel::from_kraus: empty operator list");
  const int d = ops[0].rows;
  for (const ComplexMatrix& K : ops)
    if (K.rows != d || K.cols != d)
      throw ShapeError("Channel::from_kraus: operators must share one square shape");
  Channel ch;
  ch.d = d;
  ch.form = ChannelForm::kraus;
  ch.kraus = std::move(ops);
  return ch;
}

Channel Channel::from_superop(const ComplexMatrix& s) {
  if (!s.is_square()) throw ShapeError("Channel::from_superop: superoperator must be square");
  const int d2 = s.rows;
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d2))));
  if (d * d != d2) throw ShapeError("Channel::from_superop: side is not a perfect square");
  Channel ch;
  ch.d = d;
  ch.form = ChannelForm::superop;
  ch.superop = s;
  return ch;
}

ComplexMatrix Channel::apply_linear(const ComplexMatrix& A) const {
  if (A.rows != d || A.cols != d)
    throw ShapeError("Channel::apply_linear: operator dimension mismatch");
  if (form == ChannelForm::kraus) {
    ComplexMatrix out(d, d);
    for (const ComplexMatrix& K : kraus) out = out + K * A * K.adjoint();
    return out;
  }
  return unvec(superop * vec(A), d);
}

ComplexMatrix Channel::to_superop() const {
  if (form == ChannelForm::superop) return superop;
  // vec(K rho K^dagger) = (conj(K) (x) K) vec(rho) in column stacking.
  ComplexMatrix S(d * d, d * d);
  for (const ComplexMatrix& K : kraus) S = S + kron(K.conj(), K);
  return S;
}

DensityMatrix apply(const Channel& ch, const DensityMatrix& rho) {
  if (ch.d != rho.d) throw ShapeError("apply: channel and state dimensions differ");
  return DensityMatrix::validated(ch.apply_linear(rho.m));
}

ComplexMatrix choi_matrix(const Channel& ch) {
  const int d = ch.d;
  ComplexMatrix C(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      ComplexMatrix Eij(d, d);
      Eij.at(i, j) = 1.0;
      const ComplexMatrix TEij = ch.apply_linear(Eij);
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l)
          C.at(i * d + k, j * d + l) = TEij.at(k, l);
    }
  return C;
}

CptpReport validate_cptp(const Channel& ch) {
  CptpReport rep;
  const int d = ch.d;

  if (ch.form == ChannelForm::kraus) {
    ComplexMatrix sum(d, d);
    for (const ComplexMatrix& K : ch.kraus) sum = sum + K.adjoint() * K;
    rep.trace_defect = (sum - ComplexMatrix::identity(d)).max_abs();
  } else {
    // Trace preservation in superoperator form: S^dagger vec(I) = vec(I).
    const std::vector<cplx> vI = vec(ComplexMatrix::identity(d));
    const std::vector<cplx> w = ch.superop.adjoint() * vI;
    double defect = 0.0;
    for (size_t k = 0; k < w.size(); ++k)
      defect = std::max(defect, std::abs(w[k] - vI[k]));
    rep.trace_defect = defect;
  }

  // Complete positivity: the Choi matrix must be PSD.  Use its Hermitian
  // part; a large anti-Hermitian remainder would itself flag a map that is
  // not Hermiticity-preserving, and shows up as a negative eigenvalue here.
  ComplexMatrix C = choi_matrix(ch);
  ComplexMatrix H(C.rows, C.cols);
  for (int i = 0; i < C.rows; ++i)
    for (int j = 0; j < C.cols; ++j)
      H.at(i, j) = 0.5 * (C.at(i, j) + std::conj(C.at(j, i)));
  EigenResult eig = hermitian_eigen(H);
  rep.min_choi_eig = eig.values[0];

  rep.pass = rep.trace_defect < 1e-9 && rep.min_choi_eig > -1e-9;
  return rep;
}

Channel compose(const Channel& outer, const Channel& inner) {
  if (outer.d != inner.d) throw ShapeError("compose: channel dimensions differ");
  if (outer.form == ChannelForm::kraus && inner.form == ChannelForm::kraus &&
      outer.kraus.size() * inner.kraus.size() <= 16) {
    std::vector<ComplexMatrix> ops;
    ops.reserve(outer.kraus.size() * inner.kraus.size());
    for (const ComplexMatrix& A : outer.kraus)
      for (const ComplexMatrix& B : inner.kraus) ops.push_back(A * B);
    return Channel::from_kraus(std::move(ops));
  }
  return Channel::from_superop(outer.to_superop() * inner.to_superop());
}

//============================================================================
// Zoo
//============================================================================

ComplexMatrix pauli_x() { return ComplexMatrix(2, 2, {0, 1, 1, 0}); }
ComplexMatrix pauli_y() {
  return ComplexMatrix(2, 2, {0, cplx(0, -1), cplx(0, 1), 0});
}
ComplexMatrix pauli_z() { return ComplexMatrix(2, 2, {1, 0, 0, -1}); }
ComplexMatrix hadamard_gate() {
  const double s = 1.0 / std::sqrt(2.0);
  return ComplexMatrix(2, 2, {s, s, s, -s});
}

Channel amplitude_damping(double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw DomainError("amplitude_damping: lambda must lie in [0,1]");
  // Decay toward the ground state |0><0|: population leaks from level 1 to
  // level 0 at rate lambda, so lambda = 1 sends every state to |0><0|.
  ComplexMatrix K0(2, 2, {1, 0, 0, std::sqrt(1.0 - lambda)});
  ComplexMatrix K1(2, 2, {0, std::sqrt(lambda), 0, 0});
  return Channel::from_kraus({K0, K1});
}

Channel dephasing(double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw DomainError("dephasing: lambda must lie in [0,1]");
  const double c0 = std::sqrt((1.0 + lambda) / 2.0);
  const double c1 = std::sqrt((1.0 - lambda) / 2.0);
  ComplexMatrix K0(2, 2, {c0, 0, 0, c0});
  ComplexMatrix K1(2, 2, {c1, 0, 0, -c1});
  return Channel::from_kraus({K0, K1});
}

Channel depolarizing_input(double z, int d) {
  if (z < 0.0 || z > 1.0)
    throw DomainError("depolarizing_input: z must lie in [0,1]");
  // A -> z A + (1-z) tr(A) I/d, as a superoperator.
  const ComplexMatrix I = ComplexMatrix::identity(d);
  ComplexMatrix S = cplx(z) * ComplexMatrix::identity(d * d);
  const std::vector<cplx> vI = vec(I);
  for (int r = 0; r < d * d; ++r)
    for (int c = 0; c < d * d; ++c)
      S.at(r, c) += ((1.0 - z) / d) * vI[static_cast<size_t>(r)] *
                    std::conj(vI[static_cast<size_t>(c)]);
  return Channel::from_superop(S);
}

Channel reset_rate(double eps, const DensityMatrix& sigma) {
  if (eps < 0.0 || eps >= 1.0)
    throw DomainError("reset_rate: eps must lie in [0,1)");
  const int d = sigma.d;
  // A -> (1-eps) A + eps tr(A) sigma; tr(A) = vec(I)^dagger vec(A).
  ComplexMatrix S = cplx(1.0 - eps) * ComplexMatrix::identity(d * d);
  const std::vector<cplx> vI = vec(ComplexMatrix::identity(d));
  const std::vector<cplx> vs = vec(sigma.m);
  for (int r = 0; r < d * d; ++r)
    for (int c = 0; c < d * d; ++c)
      S.at(r, c) += eps * vs[static_cast<size_t>(r)] * std::conj(vI[static_cast<size_t>(c)]);
  return Channel::from_superop(S);
}

Channel unitary(const ComplexMatrix& U) {
  if (!U.is_square()) throw ShapeError("unitary: matrix must be square");
  const ComplexMatrix defect = U.adjoint() * U - ComplexMatrix::identity(U.rows);
  if (defect.max_abs() > 1e-10)
    throw DomainError("unitary: matrix is not unitary within 1e-10");
  return Channel::from_kraus({U});
}

ComplexMatrix rotation_gate(Axis axis, double angle) {
  ComplexMatrix sigma =
      axis == Axis::x ? pauli_x() : (axis == Axis::y ? pauli_y() : pauli_z());
  // cos(t/2) I + i sin(t/2) sigma
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  return c * ComplexMatrix::identity(2) + cplx(0.0, s) * sigma;
}

Channel rotation(Axis axis, double angle) {
  return Channel::from_kraus({rotation_gate(axis, angle)});
}

Channel hadamard() { return unitary(hadamard_gate()); }

//============================================================================
// Lindblad step
//============================================================================

LindbladModel LindbladModel::make(double gamma, double dtau) {
  if (gamma <= 0.0) throw DomainError("LindbladModel: gamma must be positive");
  if (dtau <= 0.0) throw DomainError("LindbladModel: dtau must be positive");
  LindbladModel m;
  m.gamma = gamma;
  m.dtau = dtau;
  m.hamiltonian = [](double z) { return cplx(z / 2.0) * pauli_x(); };
  return m;
}

LindbladModel LindbladModel::make_quadratic(double gamma, double dtau) {
  LindbladModel m = make(gamma, dtau);
  m.hamiltonian = [](double z) { return cplx(z * z / 2.0) * pauli_x(); };
  return m;
}

ComplexMatrix lindblad_generator(const LindbladModel& model, double z) {
  const ComplexMatrix H = model.hamiltonian(z);
  const ComplexMatrix L(2, 2, {0, 0, 1, 0}); // |1><0|
  const ComplexMatrix I = ComplexMatrix::identity(2);
  const ComplexMatrix LdL = L.adjoint() * L;

  // G rho = i [H, rho] + gamma (L rho L^dagger - 1/2 {L^dagger L, rho}),
  // assembled in column-stacking convention vec(A rho B) = (B^T (x) A) vec(rho).
  const cplx i1(0.0, 1.0);
  ComplexMatrix G = i1 * (kron(I, H) - kron(H.transpose(), I));
  G = G + cplx(model.gamma) * kron(L.conj(), L);
  G = G - cplx(0.5 * model.gamma) * (kron(I, LdL) + kron(LdL.transpose(), I));
  return G;
}

Channel lindblad_step_channel(const LindbladModel& model, double z) {
  return Channel::from_superop(matrix_exp(lindblad_generator(model, z), model.dtau));
}

} // namespace qsas
