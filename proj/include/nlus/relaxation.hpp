#pragma once

/**
 * @file relaxation.hpp
 *
 * @brief Stress relaxation of a degrading spring held at a fixed position.
 *
 * The spring of stiffness k(g) = k0 (1 - g) holds the mass at x_m while its
 * unstretched length x0(g) migrates toward x_m. Energy balance at every
 * damage state:
 *
 *     1/2 k(g) (x_m - x0(g))^2 + W_nel(g) = 1/2 k0 (x_m - x0(0))^2
 *
 * Thermodynamic consistency requires W_nel to dissipate exactly the initial
 * stored energy, so the dissipation scale W0 is fixed by the geometry.
 */

#include <cmath>
#include <span>
#include <vector>

#include "nlus/catalog.hpp"
#include "nlus/errors.hpp"
#include "nlus/grid.hpp"

namespace nlus {

class SpringModel {
 public:
  /// Builds the model with W0 = 1/2 k0 (x_m - x0_initial)^2 for the given
  /// RelaxPolyline or RelaxExp exponent.
  static SpringModel make(double k0, double x0_initial, double x_m, double mass, DissipationFamily family, double n) {
    const double W0 = 0.5 * k0 * (x_m - x0_initial) * (x_m - x0_initial);
    switch (family) {
      case DissipationFamily::RelaxPolyline:
        return SpringModel(k0, x0_initial, x_m, mass, DissipationLaw::relax_polyline(W0, n));
      case DissipationFamily::RelaxExp:
        return SpringModel(k0, x0_initial, x_m, mass, DissipationLaw::relax_exp(W0, n));
      default:
        throw DomainError("SpringModel: dissipation must be RelaxPolyline or RelaxExp");
    }
  }

  SpringModel(double k0, double x0_initial, double x_m, double mass, DissipationLaw dissipation)
      : k0_(k0), x0_initial_(x0_initial), x_m_(x_m), mass_(mass), dissipation_(dissipation) {
    if (!(k0 > 0.0)) throw DomainError("SpringModel: k0 must be > 0");
    if (!(x_m > x0_initial)) throw DomainError("SpringModel: x_m must exceed x0_initial");
    if (!(mass > 0.0)) throw DomainError("SpringModel: mass must be > 0");
    const double stored = initial_energy();
    if (std::fabs(dissipation_.W0() - stored) > 1e-12 * stored)
      throw DomainError("SpringModel: W0 must equal the initial stored energy 1/2 k0 (x_m - x0)^2");
  }

  double k0() const noexcept { return k0_; }
  double x0_initial() const noexcept { return x0_initial_; }
  double x_m() const noexcept { return x_m_; }
  double mass() const noexcept { return mass_; }
  const DissipationLaw& dissipation() const noexcept { return dissipation_; }

  double stiffness(double g) const { return k0_ * (1.0 - g); }
  double initial_energy() const { return 0.5 * k0_ * (x_m_ - x0_initial_) * (x_m_ - x0_initial_); }
  double initial_force() const { return k0_ * (x_m_ - x0_initial_); }

 private:
  double k0_;
  double x0_initial_;
  double x_m_;
  double mass_;
  DissipationLaw dissipation_;
};

enum class RootMethod { Direct, Bisection };

namespace detail {

/// Elastic energy still stored at g after the dissipated part is removed.
inline double remaining_energy(const SpringModel& s, double g) {
  const double W0 = s.initial_energy();
  double rhs = W0 - s.dissipation().value(g);
  if (rhs < 0.0) {
    if (rhs < -1e-14 * W0) throw InfeasibleError("relaxation: dissipation exceeds the available elastic energy");
    rhs = 0.0;
  }
  return rhs;
}

inline double bisect_x0(const SpringModel& s, double g, double rhs) {
  const double k = s.stiffness(g);
  // residual of the energy balance as a function of x0 on the branch x0 <= x_m;
  // decreasing from r(lo) >= 0 to r(x_m) = -rhs <= 0
  auto residual = [&](double x0) { return 0.5 * k * (s.x_m() - x0) * (s.x_m() - x0) - rhs; };
  double hi = s.x_m();
  double lo = s.x0_initial();
  double width = s.x_m() - s.x0_initial();
  while (residual(lo) < 0.0) {
    width *= 2.0;
    lo = s.x_m() - width;
  }
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (residual(mid) >= 0.0 ? lo : hi) = mid;
  }
  return residual(lo) <= -residual(hi) ? lo : hi;
}

}  // namespace detail

/// Unstretched length x0(g) from the energy balance, branch x0 <= x_m.
inline double solve_x0(const SpringModel& s, double g, RootMethod method = RootMethod::Direct) {
  if (!(g >= 0.0 && g <= 1.0)) throw DomainError("solve_x0: damage variable outside [0, 1]");
  const double rhs = detail::remaining_energy(s, g);
  const double k = s.stiffness(g);
  if (k == 0.0) {
    if (rhs > 1e-14 * s.initial_energy())
      throw InfeasibleError("solve_x0: spring fully degraded with undissipated energy");
    return s.x_m();
  }
  if (method == RootMethod::Bisection) return detail::bisect_x0(s, g, rhs);
  return s.x_m() - std::sqrt(2.0 * rhs / k);
}

/// Tabulated closed forms for the two relaxation dissipation families:
///
///     polyline: x0 = x_m - sqrt(1 - (g^n - n g)/(1 - n)) (x_m - x0(0))
///     exp:      x0 = x_m - exp(-n g/(1 - g)) (x_m - x0(0))
///
/// These agree with solve_x0 at g = 0 and g = 1 only. In the interior they
/// omit the 1/sqrt(1 - g) that the softening stiffness puts into the
/// balance (and the exp form also the square root of its decay factor), so
/// they do not conserve energy. solve_x0 is the reference.
inline double closed_form_x0(const SpringModel& s, double g) {
  if (!(g >= 0.0 && g <= 1.0)) throw DomainError("closed_form_x0: damage variable outside [0, 1]");
  const auto& law = s.dissipation();
  const double gap0 = s.x_m() - s.x0_initial();
  const double n = law.n();
  switch (law.family()) {
    case DissipationFamily::RelaxPolyline: {
      const double frac = std::fmax(0.0, 1.0 - (std::pow(g, n) - n * g) / (1.0 - n));
      return s.x_m() - std::sqrt(frac) * gap0;
    }
    case DissipationFamily::RelaxExp:
      if (g == 1.0) return s.x_m();
      return s.x_m() - std::exp(-n * g / (1.0 - g)) * gap0;
    default:
      throw DomainError("closed_form_x0: no closed form for this dissipation family");
  }
}

/// F(g) = k(g) (x_m - x0(g))
inline double spring_force(const SpringModel& s, double g) {
  return s.stiffness(g) * (s.x_m() - solve_x0(s, g));
}

struct RelaxationSample {
  double gamma;
  double x0;
  double force;
  double w_el;
  double w_nel;
};

using RelaxationTrace = std::vector<RelaxationSample>;

inline constexpr double kEnergyBalanceTolerance = 1e-10;

/// |1/2 k (x_m - x0)^2 + W_nel - W0| / W0 for one sample.
inline double energy_balance_residual(const SpringModel& s, const RelaxationSample& r) {
  return std::fabs(r.w_el + r.w_nel - s.initial_energy()) / s.initial_energy();
}

inline RelaxationTrace relaxation_sweep(const SpringModel& s, std::span<const double> grid) {
  RelaxationTrace trace;
  trace.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double g = grid[i];
    if (i > 0 && !(g > grid[i - 1])) throw DomainError("relaxation_sweep: grid must be strictly increasing");
    RelaxationSample r;
    r.gamma = g;
    r.x0 = solve_x0(s, g);
    const double gap = s.x_m() - r.x0;
    r.force = s.stiffness(g) * gap;
    r.w_el = 0.5 * s.stiffness(g) * gap * gap;
    r.w_nel = s.dissipation().value(g);
    if (energy_balance_residual(s, r) >= kEnergyBalanceTolerance)
      throw NumericalError("relaxation_sweep: energy balance violated at g = " + std::to_string(g));
    trace.push_back(r);
  }
  return trace;
}

}  // namespace nlus
