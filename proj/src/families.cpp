// families.cpp -- construction of the named channel families.

#include "qsas/families.hpp"

#include <cmath>

#include "qsas/error.hpp"

namespace qsas {

// 3x3 Bloch rotation matrix of exp(i theta sigma_y / 2)-conjugation.
static RealMatrix bloch_rot_y(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return RealMatrix(3, 3, {c, 0.0, -s, 0.0, 1.0, 0.0, s, 0.0, c});
}

ModelBundle make_reset_rotation(double eps, double g, const InputDomain& domain,
                                const DensityMatrix* sigma) {
  if (eps < 0.0 || eps > 1.0)
    throw DomainError("make_reset_rotation: eps must lie in [0, 1]");
  if (domain.n() != 1)
    throw DomainError("make_reset_rotation: scalar input domain required");

  const DensityMatrix sig = sigma != nullptr ? *sigma : DensityMatrix::basis_state(2, 0);
  if (sig.d != 2) throw ShapeError("make_reset_rotation: sigma must be a qubit state");

  ModelBundle mb;
  mb.name = "reset-rotation";
  mb.channel.d = 2;
  mb.channel.domain = domain;
  mb.channel.builder = [eps, g, sig](const RealVector& z) {
    return compose(reset_rate(eps, sig), rotation(Axis::y, g * z[0]));
  };

  const GellMannBasis basis = GellMannBasis::make(2);
  const RealVector q_fixed = eps * to_bloch(sig, basis);
  mb.sas.n = 1;
  mb.sas.N = 3;
  mb.sas.domain = domain;
  mb.sas.provenance = SasProvenance::closed_form;
  mb.sas.p = [eps, g](const RealVector& z) {
    return (1.0 - eps) * bloch_rot_y(g * z[0]);
  };
  mb.sas.q = [q_fixed](const RealVector&) { return q_fixed; };

  ContractedEncoding split;
  split.E = reset_rate(eps, sig);
  split.J.d = 2;
  split.J.domain = domain;
  split.J.builder = [g](const RealVector& z) { return rotation(Axis::y, g * z[0]); };
  split.gate = [g](const RealVector& z) { return rotation_gate(Axis::y, g * z[0]); };
  split.has_gate = true;
  mb.split = std::move(split);
  return mb;
}

ModelBundle make_reset_depolarizing(double eps, const InputDomain& domain) {
  if (eps <= 0.0 || eps > 1.0)
    throw DomainError("make_reset_depolarizing: eps must lie in (0, 1]");
  if (domain.n() != 1 || domain.lo[0] < 0.0 || domain.hi[0] > 1.0)
    throw DomainError("make_reset_depolarizing: domain must lie inside [0, 1]");

  ModelBundle mb;
  mb.name = "reset-depolarizing";
  mb.channel.d = 2;
  mb.channel.domain = domain;
  mb.channel.builder = [eps](const RealVector& z) {
    return compose(reset_rate(eps, DensityMatrix::basis_state(2, 0)),
                   depolarizing_input(z[0]));
  };

  mb.sas.n = 1;
  mb.sas.N = 3;
  mb.sas.domain = mb.channel.domain;
  mb.sas.provenance = SasProvenance::closed_form;
  mb.sas.p = [eps](const RealVector& z) { return ((1.0 - eps) * z[0]) * RealMatrix::identity(3); };
  const RealVector q_fixed{0.0, 0.0, eps / std::sqrt(2.0)};
  mb.sas.q = [q_fixed](const RealVector&) { return q_fixed; };

  ContractedEncoding split;
  split.E = reset_rate(eps, DensityMatrix::basis_state(2, 0));
  split.J.d = 2;
  split.J.domain = mb.channel.domain;
  split.J.builder = [](const RealVector& z) { return depolarizing_input(z[0]); };
  split.has_gate = false;
  mb.split = std::move(split);
  return mb;
}

ModelBundle make_lindblad(double gamma, double dtau, bool quadratic,
                          const InputDomain& domain) {
  if (!(gamma > 0.0)) throw DomainError("make_lindblad: gamma must be positive");
  if (!(dtau > 0.0)) throw DomainError("make_lindblad: dtau must be positive");
  if (domain.n() != 1) throw DomainError("make_lindblad: scalar input domain required");

  ModelBundle mb;
  mb.name = "lindblad";
  mb.channel.d = 2;
  mb.channel.domain = domain;
  const LindbladModel model =
      quadratic ? LindbladModel::make_quadratic(gamma, dtau) : LindbladModel::make(gamma, dtau);
  mb.channel.builder = [model](const RealVector& z) {
    return lindblad_step_channel(model, z[0]);
  };
  mb.sas = extract_sas(mb.channel, GellMannBasis::make(2));
  return mb;
}

ModelBundle make_hadamard_damping(double theta, const InputDomain& domain) {
  if (domain.n() != 1)
    throw DomainError("make_hadamard_damping: scalar input domain required");
  ModelBundle mb;
  mb.name = "hadamard-damping";

  const double lambda = std::sin(theta) * std::sin(theta);
  // E(rho) = e^{-i theta sigma_y/2} E_AD(H rho H) e^{+i theta sigma_y/2}.
  const Channel E = compose(rotation(Axis::y, -theta),
                            compose(amplitude_damping(lambda), hadamard()));
  // U(z) = exp(-i z sigma_z / 2) H.
  auto gate = [](const RealVector& z) {
    return rotation_gate(Axis::z, -z[0]) * hadamard_gate();
  };

  mb.channel.d = 2;
  mb.channel.domain = domain;
  mb.channel.builder = [E, gate](const RealVector& z) {
    return compose(E, unitary(gate(z)));
  };
  mb.sas = extract_sas(mb.channel, GellMannBasis::make(2));

  ContractedEncoding split;
  split.E = E;
  split.J.d = 2;
  split.J.domain = mb.channel.domain;
  split.J.builder = [gate](const RealVector& z) { return unitary(gate(z)); };
  split.gate = gate;
  split.has_gate = true;
  mb.split = std::move(split);
  return mb;
}

ModelBundle make_dephasing_reset(double eps, double lambda,
                                 const InputDomain& domain) {
  if (eps <= 0.0 || eps >= 1.0)
    throw DomainError("make_dephasing_reset: eps must lie in (0, 1)");
  if (lambda < 0.0 || lambda > 1.0)
    throw DomainError("make_dephasing_reset: lambda must lie in [0, 1]");
  if (domain.n() != 1)
    throw DomainError("make_dephasing_reset: scalar input domain required");

  ModelBundle mb;
  mb.name = "dephasing-reset";

  // sigma = (I + sigma_x)/2: the +1 eigenstate of sigma_x.
  ComplexMatrix sig_m(2, 2, {0.5, 0.5, 0.5, 0.5});
  const DensityMatrix sigma = DensityMatrix::validated(sig_m);
  const Channel E = reset_rate(eps, sigma);

  ParamChannel J;
  J.d = 2;
  J.domain = domain;
  J.builder = [lambda](const RealVector& v) {
    return compose(dephasing(lambda), rotation(Axis::x, -v[0]));
  };

  mb.channel.d = 2;
  mb.channel.domain = J.domain;
  mb.channel.builder = [E, J](const RealVector& v) { return compose(E, J.at(v)); };
  mb.sas = extract_sas(mb.channel, GellMannBasis::make(2));

  ContractedEncoding split;
  split.E = E;
  split.J = J;
  split.has_gate = false;
  mb.split = std::move(split);
  return mb;
}

ModelBundle make_rotation_only(double g, const InputDomain& domain) {
  if (domain.n() != 1)
    throw DomainError("make_rotation_only: scalar input domain required");
  ModelBundle mb;
  mb.name = "rotation-only";
  mb.channel.d = 2;
  mb.channel.domain = domain;
  mb.channel.builder = [g](const RealVector& z) { return rotation(Axis::y, g * z[0]); };

  mb.sas.n = 1;
  mb.sas.N = 3;
  mb.sas.domain = domain;
  mb.sas.provenance = SasProvenance::closed_form;
  mb.sas.p = [g](const RealVector& z) { return bloch_rot_y(g * z[0]); };
  mb.sas.q = [](const RealVector&) { return RealVector(3); };
  return mb;
}

ModelBundle make_constant_reset(double eps, const InputDomain& domain) {
  if (eps <= 0.0 || eps > 1.0)
    throw DomainError("make_constant_reset: eps must lie in (0, 1]");
  ModelBundle mb;
  mb.name = "constant-reset";
  mb.channel.d = 2;
  mb.channel.domain = domain;
  mb.channel.builder = [eps](const RealVector&) {
    return reset_rate(eps, DensityMatrix::basis_state(2, 0));
  };
  mb.sas = extract_sas(mb.channel, GellMannBasis::make(2));
  return mb;
}

bool is_known_family(const std::string& name) {
  return name == "reset-rotation" || name == "reset-depolarizing" ||
         name == "lindblad" || name == "hadamard-damping" ||
         name == "dephasing-reset" || name == "rotation-only" ||
         name == "constant-reset";
}

} // namespace qsas
