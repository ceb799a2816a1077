#pragma once

/**
 * @file energy.hpp
 *
 * @brief Finite-strain kinematics and damage-dependent strain energies.
 *
 * The elastic energy measured from the unloaded configuration of a damage
 * state is the Landau-Lifshitz cubic form with Lame constants softened
 * linearly in g1 and third-order constants sharing the shape of a
 * NonlinearityLaw, optionally augmented by six transversely isotropic
 * third-order terms driven by g2 along a unit direction a.
 */

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "nlus/catalog.hpp"
#include "nlus/errors.hpp"
#include "nlus/tensor.hpp"

namespace nlus {

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kUnitTolerance = 1e-12;

struct DamageState {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  Vec3 a{1.0, 0.0, 0.0};

  void validate() const {
    if (!(gamma1 >= 0.0 && gamma1 <= 1.0)) throw DomainError("DamageState: gamma1 outside [0, 1]");
    if (!(gamma2 >= 0.0 && gamma2 <= 1.0)) throw DomainError("DamageState: gamma2 outside [0, 1]");
  }
};

struct IsotropicLandauParams {
  double lambda0 = 0.0;
  double mu0 = 0.0;
  double A0 = 0.0;
  double B0 = 0.0;
  double C0 = 0.0;
  double a = 0.0;  ///< Lame softening: lambda(g) = lambda0 (1 - a g)

  /// Physical admissibility. Energy routines accept any finite set so that
  /// individual terms can be isolated.
  void validate() const {
    if (!(mu0 > 0.0)) throw DomainError("IsotropicLandauParams: mu0 must be > 0");
    if (!(lambda0 + 2.0 * mu0 / 3.0 > 0.0)) throw DomainError("IsotropicLandauParams: bulk modulus must be > 0");
    if (!(a >= 0.0 && a <= 1.0)) throw DomainError("IsotropicLandauParams: a outside [0, 1]");
  }
};

/// Damage dependence of one anisotropic constant, D_i(g2) = D_i0 * shape(g2).
/// Every shape vanishes at g2 = 0.
struct AnisotropyShape {
  enum class Kind { Tanh, Linear, Power };
  Kind kind = Kind::Tanh;
  double n = 1.0;  ///< exponent for Kind::Power

  double operator()(double g2) const {
    switch (kind) {
      case Kind::Tanh: return std::tanh(g2) / std::tanh(1.0);
      case Kind::Linear: return g2;
      case Kind::Power: return std::pow(g2, n);
    }
    return 0.0;
  }
};

struct TransverseIsotropyParams {
  std::array<double, 6> D0{};
  std::array<AnisotropyShape, 6> shape{};
  Vec3 direction{1.0, 0.0, 0.0};

  double D(std::size_t i, double g2) const { return D0[i] * shape[i](g2); }
};

/// W = W_el(E, g) + W_nel(g1)
struct PseudoElasticModel {
  IsotropicLandauParams iso;
  NonlinearityLaw law = NonlinearityLaw::constant(1.0);
  std::optional<TransverseIsotropyParams> aniso;
  std::optional<DissipationLaw> dissipation;
};

namespace detail {

inline void require_symmetric(const Tensor2& E) {
  if (!all_finite(E)) throw DomainError("strain has non-finite components");
  if (asymmetry(E) > kSymmetryTolerance) throw DomainError("strain tensor is not symmetric");
}

inline void require_unit(const Vec3& a) {
  if (std::fabs(norm(a) - 1.0) > kUnitTolerance) throw DomainError("anisotropy direction is not a unit vector");
}

struct Moduli {
  double lambda, mu, A, B, C;
};

inline Moduli moduli(const IsotropicLandauParams& p, const NonlinearityLaw& law, double g) {
  const double soft = 1.0 - p.a * g;
  const double shape = law.normalized(g);
  return {p.lambda0 * soft, p.mu0 * soft, p.A0 * shape, p.B0 * shape, p.C0 * shape};
}

}  // namespace detail

/// E = (H + H^T + H^T H) / 2
inline Tensor2 lagrangian_strain(const Tensor2& H) {
  Tensor2 E = 0.5 * (H + transpose(H) + matmul(transpose(H), H));
  // the product term is symmetric only up to rounding; pin it exactly
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j) E(j, i) = E(i, j);
  return E;
}

inline double landau_energy(const Tensor2& E, const DamageState& gamma, const IsotropicLandauParams& p,
                            const NonlinearityLaw& law) {
  detail::require_symmetric(E);
  gamma.validate();
  const auto k = detail::moduli(p, law, gamma.gamma1);
  const Tensor2 E2 = matmul(E, E);
  const double t1 = trace(E);
  const double t2 = trace(E2);
  const double t3 = trace(matmul(E2, E));
  return 0.5 * k.lambda * t1 * t1 + k.mu * t2 + k.C * t1 * t1 * t1 / 3.0 + k.B * t1 * t2 + k.A * t3 / 3.0;
}

/// Landau energy in g1 plus the six third-order terms in (a.Ea), (a.E^2a).
inline double transverse_energy(const Tensor2& E, const DamageState& gamma, const IsotropicLandauParams& p,
                                const TransverseIsotropyParams& t, const NonlinearityLaw& law) {
  detail::require_unit(t.direction);
  const double iso = landau_energy(E, gamma, p, law);
  const Vec3& a = t.direction;
  const Vec3 Ea = apply(E, a);
  const double alpha = dot(a, Ea);
  const double beta = dot(Ea, Ea);  // a.E^2 a for symmetric E
  const double t1 = trace(E);
  const double t2 = trace(matmul(E, E));
  const double g2 = gamma.gamma2;
  const double aniso = t.D(0, g2) * alpha * alpha * alpha + t.D(1, g2) * alpha * alpha * t1 +
                       t.D(2, g2) * alpha * t2 + t.D(3, g2) * alpha * t1 * t1 + t.D(4, g2) * alpha * beta +
                       t.D(5, g2) * beta * t1;
  return iso + aniso;
}

/// dW/dE of the Landau energy (symmetric).
inline Tensor2 landau_stress(const Tensor2& E, const DamageState& gamma, const IsotropicLandauParams& p,
                             const NonlinearityLaw& law) {
  detail::require_symmetric(E);
  gamma.validate();
  const auto k = detail::moduli(p, law, gamma.gamma1);
  const Tensor2 I = Tensor2::identity();
  const Tensor2 E2 = matmul(E, E);
  const double t1 = trace(E);
  const double t2 = trace(E2);
  return (k.lambda * t1 + k.C * t1 * t1 + k.B * t2) * I + (2.0 * k.mu + 2.0 * k.B * t1) * E + k.A * E2;
}

/// dW/dE of the transversely isotropic energy (symmetric).
inline Tensor2 transverse_stress(const Tensor2& E, const DamageState& gamma, const IsotropicLandauParams& p,
                                 const TransverseIsotropyParams& t, const NonlinearityLaw& law) {
  detail::require_unit(t.direction);
  Tensor2 T = landau_stress(E, gamma, p, law);
  const Vec3& a = t.direction;
  const Vec3 Ea = apply(E, a);
  const double alpha = dot(a, Ea);
  const double beta = dot(Ea, Ea);
  const double t1 = trace(E);
  const double t2 = trace(matmul(E, E));
  const double g2 = gamma.gamma2;
  const double D1 = t.D(0, g2), D2 = t.D(1, g2), D3 = t.D(2, g2);
  const double D4 = t.D(3, g2), D5 = t.D(4, g2), D6 = t.D(5, g2);

  const Tensor2 I = Tensor2::identity();
  const Tensor2 aa = outer(a, a);
  const Tensor2 dbeta = outer(a, Ea) + outer(Ea, a);

  const double c_aa = 3.0 * D1 * alpha * alpha + 2.0 * D2 * alpha * t1 + D3 * t2 + D4 * t1 * t1 + D5 * beta;
  const double c_I = D2 * alpha * alpha + 2.0 * D4 * alpha * t1 + D6 * beta;
  const double c_E = 2.0 * D3 * alpha;
  const double c_beta = D5 * alpha + D6 * t1;

  T += c_aa * aa + c_I * I + c_E * E + c_beta * dbeta;
  return T;
}

/// Pseudo-elastic energy W_el + W_nel of a model.
inline double pseudo_elastic_energy(const Tensor2& E, const DamageState& gamma, const PseudoElasticModel& model) {
  const double el = model.aniso ? transverse_energy(E, gamma, model.iso, *model.aniso, model.law)
                                : landau_energy(E, gamma, model.iso, model.law);
  return el + (model.dissipation ? model.dissipation->value(gamma.gamma1) : 0.0);
}

/// Second Piola-Kirchhoff stress T_RR = dW/dE. W_nel carries no strain
/// dependence and drops out.
inline Tensor2 second_pk_stress(const Tensor2& E, const DamageState& gamma, const PseudoElasticModel& model) {
  return model.aniso ? transverse_stress(E, gamma, model.iso, *model.aniso, model.law)
                     : landau_stress(E, gamma, model.iso, model.law);
}

/// S = F T_RR
inline Tensor2 first_pk_stress(const Tensor2& F, const Tensor2& T_RR) {
  const double det = determinant(F);
  if (!std::isfinite(det) || std::fabs(det) <= 1e-14 * std::pow(frobenius_norm(F), 3))
    throw DomainError("deformation gradient is singular");
  return matmul(F, T_RR);
}

/// 1D elastic-perfectly-plastic pseudo-elastic energy:
/// elastic part from the unloaded configuration plus the plastic work |sigma_y||eps_p|.
inline double perfect_plastic_energy(double strain, double eps_p, double sigma_y, double E_mod) {
  if (!(sigma_y > 0.0)) throw DomainError("perfect_plastic_energy: sigma_y must be > 0");
  return 0.5 * E_mod * strain * strain + std::fabs(sigma_y) * std::fabs(eps_p);
}

}  // namespace nlus
