// families.hpp -- named parameterized-channel families used across the
// diagnostics, the experiments, and the command line.
//
// Each bundle carries the channel family itself, a ready-to-use SAS model
// (closed form where one is known, extracted otherwise), and -- when the
// family factors as outer-channel-after-encoding -- the split needed by the
// constant-filter diagnostics.

#ifndef QSAS_FAMILIES_HPP
#define QSAS_FAMILIES_HPP

#include <cmath>
#include <optional>
#include <string>

#include "qsas/injectivity.hpp"
#include "qsas/quantum.hpp"
#include "qsas/sas.hpp"

namespace qsas {

struct ModelBundle {
  std::string name;
  ParamChannel channel;
  SasModel sas;
  std::optional<ContractedEncoding> split;
};

// reset_rate(eps, sigma) after conjugation by exp(i g z sigma_y / 2):
//   p(z) = (1-eps) * R_y(g z),  q = eps * bloch(sigma),
// with R_y the 3x3 rotation acting as
//   [[cos, 0, -sin], [0, 1, 0], [sin, 0, cos]].
// Closed-form SAS.  sigma defaults to |0><0|.
ModelBundle make_reset_rotation(double eps, double g, const InputDomain& domain,
                                const DensityMatrix* sigma = nullptr);

// reset_rate(eps, |0><0|) after the input-mixing map rho -> z rho +
// (1-z) I/2:  p(z) = (1-eps) z I,  q = (0, 0, eps/sqrt(2)).  Closed-form
// SAS; the fixed-point map is injective.  The domain must stay inside
// [0, 1] so the mixing map remains a channel.
ModelBundle make_reset_depolarizing(double eps,
                                    const InputDomain& domain = InputDomain::interval(0.0, 1.0));

// One unit-time step of the driven dissipative qubit (drive z sigma_x / 2,
// or z^2 sigma_x / 2 when quadratic, decay rate gamma).  Extracted SAS;
// no encoding split.
ModelBundle make_lindblad(double gamma, double dtau, bool quadratic = false,
                          const InputDomain& domain = InputDomain::interval(-2.0, 2.0));

// Constant-filter example with a unitary encoding: T(., z) = E o U(z).U(z)^+
// with U(z) = exp(-i z sigma_z / 2) H and
//   E(rho) = e^{-i theta sigma_y/2} E_AD(H rho H) e^{+i theta sigma_y/2},
// where E_AD is amplitude damping at rate lambda = sin^2 theta.  The filter
// is constant although E's own fixed point is not preserved by the
// encoding.
ModelBundle make_hadamard_damping(double theta,
                                  const InputDomain& domain = InputDomain::interval(0.0, 2.0 * M_PI));

// Constant-filter example with a non-unitary encoding: T(., v) =
// reset_rate(eps, sigma) o [dephasing(lambda) o R_x(-v)-conjugation] with
// sigma = (I + sigma_x)/2.
ModelBundle make_dephasing_reset(double eps, double lambda,
                                 const InputDomain& domain = InputDomain::interval(0.0, 2.0 * M_PI));

// Pure rotation family exp(i g z sigma_y / 2)-conjugation: p(z) = R_y(g z),
// q = 0, contraction margin exactly 0 (every echo-state check must fail).
ModelBundle make_rotation_only(double g, const InputDomain& domain);

// Input-independent family: the same reset channel at every z (Dp = Dq = 0).
ModelBundle make_constant_reset(double eps, const InputDomain& domain);

// True for the family names accepted in config files: reset-rotation,
// reset-depolarizing, lindblad, hadamard-damping, dephasing-reset,
// rotation-only, constant-reset.
bool is_known_family(const std::string& name);

} // namespace qsas

#endif // QSAS_FAMILIES_HPP
