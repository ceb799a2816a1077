#pragma once

/**
 * @file creep.hpp
 *
 * @brief Creep-like degradation of a 1D bar under constant stress.
 *
 * With elastic strain e = eps - eps_p, modulus E(g) = E0 (1 - a g) and
 * third-order constant A(g), equilibrium at every damage state reads
 *
 *     E(g) e + A(g) e^2 = sigma
 *     sigma deps_p/dg = W_nel'(g) + 1/2 E'(g) e^2 + 1/3 A'(g) e^3
 *
 * the second line being stationarity in g after the first is used to
 * replace the force term. The elastic strain depends on g only, so the
 * plastic strain follows by integrating the right-hand side from eps_p(0) = 0.
 */

#include <cmath>
#include <string>
#include <vector>

#include "nlus/catalog.hpp"
#include "nlus/errors.hpp"

namespace nlus {

struct CreepModel {
  double E0 = 70e9;
  double a = 0.5;
  double sigma = 140e6;
  NonlinearityLaw nonlinearity = NonlinearityLaw::exp_bump(-3.5e11, 2.0);
  DissipationLaw dissipation = DissipationLaw::creep_affine_power(2e6, 2e6, 16.0);

  void validate() const {
    if (!(E0 > 0.0)) throw DomainError("CreepModel: E0 must be > 0");
    if (!(a > 0.0 && a <= 1.0)) throw DomainError("CreepModel: a must lie in (0, 1]");
    if (!(sigma > 0.0)) throw DomainError("CreepModel: sigma must be > 0");
    if (dissipation.family() != DissipationFamily::CreepAffinePower)
      throw DomainError("CreepModel: dissipation must be CreepAffinePower");
    if (!(dissipation.m() >= 2.0)) throw DomainError("CreepModel: m must be >= 2");
  }

  double modulus(double g) const { return E0 * (1.0 - a * g); }
  double modulus_slope() const { return -a * E0; }
};

/// Case 2 pairing K = W0 = sigma^2 * 1e-10 with sigma in Pa.
inline double stress_scaled_dissipation(double sigma) { return sigma * sigma * 1e-10; }

inline constexpr double kStressResidualTolerance = 1e-9;

/// |E e + A e^2 - sigma|
inline double stress_residual(const CreepModel& m, double g, double e) {
  return std::fabs(m.modulus(g) * e + m.nonlinearity.value(g) * e * e - m.sigma);
}

/// Elastic strain on the branch continuous with sigma / E as A -> 0.
inline double elastic_strain(const CreepModel& m, double g) {
  const double E = m.modulus(g);
  const double A = m.nonlinearity.value(g);
  const double disc = E * E + 4.0 * A * m.sigma;
  if (!(disc >= 0.0))
    throw InfeasibleError("elastic_strain: no equilibrium at g = " + std::to_string(g) + " (negative discriminant)");
  return 2.0 * m.sigma / (E + std::sqrt(disc));
}

/// deps_p/dg
inline double creep_rate(const CreepModel& m, double g) {
  const double e = elastic_strain(m, g);
  return (m.dissipation.derivative(g) + 0.5 * m.modulus_slope() * e * e +
          m.nonlinearity.derivative(g) * e * e * e / 3.0) /
         m.sigma;
}

struct CreepSample {
  double gamma;
  double eps_p;
  double eps_elastic;
  double A_over_A0;
  double rate;
  double residual;  ///< |E e + A e^2 - sigma|
};

struct CreepTrace {
  std::vector<CreepSample> samples;
  bool valid = true;
  std::string failure;  ///< reason when !valid
};

inline constexpr double kMaxCreepGamma = 1.0 - 1e-3;
inline constexpr std::size_t kMinCreepSteps = 1000;

/// Classic RK4 on [0, gamma_max] with `steps` uniform steps.
///
/// A non-positive rate or a missing equilibrium stops the integration and
/// returns the samples accepted so far with valid = false.
inline CreepTrace integrate_creep(const CreepModel& m, double gamma_max = kMaxCreepGamma,
                                  std::size_t steps = 4000) {
  m.validate();
  if (!(gamma_max > 0.0 && gamma_max <= kMaxCreepGamma + 1e-15))
    throw DomainError("integrate_creep: gamma_max must lie in (0, 0.999]");
  if (steps < kMinCreepSteps) throw DomainError("integrate_creep: at least 1000 steps required");

  CreepTrace tr;
  tr.samples.reserve(steps + 1);
  const double h = gamma_max / static_cast<double>(steps);

  auto rate = [&](double g) {
    const double r = creep_rate(m, g);
    if (!(r > 0.0))
      throw InfeasibleError("integrate_creep: nonphysical non-positive creep rate at g = " + std::to_string(g));
    return r;
  };

  double eps_p = 0.0;
  try {
    for (std::size_t i = 0; i <= steps; ++i) {
      const double g = i == steps ? gamma_max : static_cast<double>(i) * h;
      const double e = elastic_strain(m, g);
      const double r = rate(g);
      const double res = stress_residual(m, g, e);
      if (!(res < kStressResidualTolerance * m.sigma))
        throw NumericalError("integrate_creep: stress residual too large at g = " + std::to_string(g));
      tr.samples.push_back({g, eps_p, e, m.nonlinearity.normalized(g), r, res});
      if (i == steps) break;
      const double g1 = static_cast<double>(i + 1) * h;
      const double step = (i + 1 == steps ? gamma_max : g1) - g;
      const double k1 = r;
      const double k2 = rate(g + 0.5 * step);
      const double k3 = k2;  // rate is independent of eps_p
      const double k4 = rate(g + step);
      eps_p += step * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    }
  } catch (const Error& ex) {
    tr.valid = false;
    tr.failure = ex.what();
  }
  return tr;
}

struct CreepNonlinearityPoint {
  double eps_p;
  double A_over_A0;
};

/// (eps_p, A/A0) along a trace.
inline std::vector<CreepNonlinearityPoint> nonlinearity_vs_creep(const CreepTrace& tr, const NonlinearityLaw& law) {
  std::vector<CreepNonlinearityPoint> out;
  out.reserve(tr.samples.size());
  for (const auto& s : tr.samples) out.push_back({s.eps_p, law.normalized(s.gamma)});
  return out;
}

}  // namespace nlus
