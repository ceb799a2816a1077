#pragma once

/**
 * @file catalog.hpp
 *
 * @brief Candidate damage-dependence functions.
 *
 * Two families of scalar laws of the damage variable g in [0, 1]:
 *  - NonlinearityLaw: the third-order elastic constant A(g),
 *  - DissipationLaw:  the non-recoverable energy W_nel(g).
 *
 * Both are immutable value types. Evaluation at a point where the value or
 * slope is unbounded raises DivergenceError instead of returning inf.
 */

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "nlus/errors.hpp"

namespace nlus {

namespace detail {

inline void check_unit_interval(double g, std::string_view who) {
  if (!(g >= 0.0 && g <= 1.0))
    throw DomainError(std::string(who) + ": damage variable " + std::to_string(g) + " outside [0, 1]");
}

inline void require(bool ok, std::string_view who, std::string_view what) {
  if (!ok) throw DomainError(std::string(who) + ": " + std::string(what));
}

}  // namespace detail

enum class NonlinearityFamily { ArcTanh, TanhAsymptotic, PolyBump, ExpBump, Constant };

enum class DissipationFamily { Power, OneMinusPower, ArcTanhLog, RelaxPolyline, RelaxExp, CreepAffinePower };

inline std::string_view to_string(NonlinearityFamily f) {
  switch (f) {
    case NonlinearityFamily::ArcTanh: return "ArcTanh";
    case NonlinearityFamily::TanhAsymptotic: return "TanhAsymptotic";
    case NonlinearityFamily::PolyBump: return "PolyBump";
    case NonlinearityFamily::ExpBump: return "ExpBump";
    case NonlinearityFamily::Constant: return "Constant";
  }
  return "?";
}

inline std::string_view to_string(DissipationFamily f) {
  switch (f) {
    case DissipationFamily::Power: return "Power";
    case DissipationFamily::OneMinusPower: return "OneMinusPower";
    case DissipationFamily::ArcTanhLog: return "ArcTanhLog";
    case DissipationFamily::RelaxPolyline: return "RelaxPolyline";
    case DissipationFamily::RelaxExp: return "RelaxExp";
    case DissipationFamily::CreepAffinePower: return "CreepAffinePower";
  }
  return "?";
}

inline std::optional<NonlinearityFamily> parse_nonlinearity_family(std::string_view s) {
  for (auto f : {NonlinearityFamily::ArcTanh, NonlinearityFamily::TanhAsymptotic, NonlinearityFamily::PolyBump,
                 NonlinearityFamily::ExpBump, NonlinearityFamily::Constant})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

inline std::optional<DissipationFamily> parse_dissipation_family(std::string_view s) {
  for (auto f : {DissipationFamily::Power, DissipationFamily::OneMinusPower, DissipationFamily::ArcTanhLog,
                 DissipationFamily::RelaxPolyline, DissipationFamily::RelaxExp, DissipationFamily::CreepAffinePower})
    if (to_string(f) == s) return f;
  return std::nullopt;
}

/// Location of the maximum of g^n exp(-1/(1-g)) on (0, 1).
///
/// ln of the bump is strictly concave on (0, 1), so its single stationary
/// point n (1-g)^2 = g is the global maximizer.
inline double expbump_peak_location(double n) {
  detail::require(n > 0.0 && std::isfinite(n), "ExpBump", "n must be > 0");
  const double b = 2.0 * n + 1.0;
  // smaller root of n g^2 - (2n+1) g + n = 0, written without cancellation
  return 2.0 * n / (b + std::sqrt(4.0 * n + 1.0));
}

/// Normalization c such that max over [0,1] of c g^n exp(-1/(1-g)) equals 1,
/// i.e. A(g) = A0 (1 + c g^n e^{-1/(1-g)}) peaks at 2 A0.
inline double calibrate_expbump_c(double n) {
  const double g = expbump_peak_location(n);
  const double log_peak = n * std::log(g) - 1.0 / (1.0 - g);
  return std::exp(-log_peak);
}

class NonlinearityLaw {
 public:
  /// A0 atanh(g)
  static NonlinearityLaw arctanh(double A0) { return NonlinearityLaw(NonlinearityFamily::ArcTanh, A0, 1.0, 1.0); }

  /// A0 (1 + (m-1) tanh(n g) / tanh(n)); tends to m A0.
  static NonlinearityLaw tanh_asymptotic(double A0, double m, double n) {
    detail::require(m >= 1.0 && std::isfinite(m), "TanhAsymptotic", "m must be >= 1");
    return NonlinearityLaw(NonlinearityFamily::TanhAsymptotic, A0, m, n);
  }

  /// A0 (1 + g^n (1-g) (n+1)^(n+1) / n^n); peak 2 A0 at g = n/(n+1).
  static NonlinearityLaw poly_bump(double A0, double n) {
    return NonlinearityLaw(NonlinearityFamily::PolyBump, A0, 1.0, n);
  }

  /// A0 (1 + c g^n exp(-1/(1-g))) with c calibrated so the peak is 2 A0.
  static NonlinearityLaw exp_bump(double A0, double n) {
    return NonlinearityLaw(NonlinearityFamily::ExpBump, A0, 1.0, n);
  }

  static NonlinearityLaw constant(double A0) { return NonlinearityLaw(NonlinearityFamily::Constant, A0, 1.0, 1.0); }

  NonlinearityFamily family() const noexcept { return family_; }
  double A0() const noexcept { return A0_; }
  double m() const noexcept { return m_; }
  double n() const noexcept { return n_; }
  /// ExpBump normalization; 1 for other families.
  double c() const noexcept { return c_; }

  double value(double g) const {
    detail::check_unit_interval(g, to_string(family_));
    switch (family_) {
      case NonlinearityFamily::ArcTanh:
        if (g == 1.0) throw DivergenceError("ArcTanh: A(g) unbounded at g = 1");
        return A0_ * std::atanh(g);
      case NonlinearityFamily::TanhAsymptotic:
        return A0_ * (1.0 + (m_ - 1.0) * std::tanh(n_ * g) / std::tanh(n_));
      case NonlinearityFamily::PolyBump:
        return A0_ * (1.0 + std::pow(g, n_) * (1.0 - g) * c_);
      case NonlinearityFamily::ExpBump:
        if (g == 1.0) return A0_;
        return A0_ * (1.0 + c_ * std::pow(g, n_) * std::exp(-1.0 / (1.0 - g)));
      case NonlinearityFamily::Constant:
        return A0_;
    }
    return 0.0;
  }

  double derivative(double g) const {
    detail::check_unit_interval(g, to_string(family_));
    switch (family_) {
      case NonlinearityFamily::ArcTanh:
        if (g == 1.0) throw DivergenceError("ArcTanh: dA/dg unbounded at g = 1");
        return A0_ / (1.0 - g * g);
      case NonlinearityFamily::TanhAsymptotic: {
        const double t = std::tanh(n_ * g);
        return A0_ * (m_ - 1.0) * n_ * (1.0 - t * t) / std::tanh(n_);
      }
      case NonlinearityFamily::PolyBump:
        if (g == 0.0) return A0_ * c_ * zero_power_slope("PolyBump");
        return A0_ * c_ * (n_ * std::pow(g, n_ - 1.0) * (1.0 - g) - std::pow(g, n_));
      case NonlinearityFamily::ExpBump: {
        if (g == 1.0) return 0.0;
        const double inv = 1.0 / (1.0 - g);
        const double bump = std::exp(-inv);
        if (g == 0.0) return A0_ * c_ * bump * zero_power_slope("ExpBump");
        return A0_ * c_ * bump * (n_ * std::pow(g, n_ - 1.0) - std::pow(g, n_) * inv * inv);
      }
      case NonlinearityFamily::Constant:
        return 0.0;
    }
    return 0.0;
  }

  /// A(g) / A0
  double normalized(double g) const { return value(g) / A0_; }

  friend bool operator==(const NonlinearityLaw&, const NonlinearityLaw&) = default;

 private:
  NonlinearityLaw(NonlinearityFamily f, double A0, double m, double n) : family_(f), A0_(A0), m_(m), n_(n) {
    detail::require(std::isfinite(A0) && A0 != 0.0, to_string(f), "A0 must be finite and nonzero");
    detail::require(std::isfinite(n) && n > 0.0, to_string(f), "n must be > 0");
    if (f == NonlinearityFamily::PolyBump) c_ = std::pow(n + 1.0, n + 1.0) / std::pow(n, n);
    if (f == NonlinearityFamily::ExpBump) c_ = calibrate_expbump_c(n);
  }

  // d/dg of g^n at g = 0
  double zero_power_slope(std::string_view who) const {
    if (n_ < 1.0) throw DivergenceError(std::string(who) + ": slope unbounded at g = 0 for n < 1");
    return n_ == 1.0 ? 1.0 : 0.0;
  }

  NonlinearityFamily family_;
  double A0_;
  double m_;
  double n_;
  double c_ = 1.0;
};

class DissipationLaw {
 public:
  /// W0 g^n
  static DissipationLaw power(double W0, double n) { return DissipationLaw(DissipationFamily::Power, W0, n); }

  /// W0 (1 - (1-g)^n)
  static DissipationLaw one_minus_power(double W0, double n) {
    return DissipationLaw(DissipationFamily::OneMinusPower, W0, n);
  }

  /// W0 (g atanh(g) - ln(1 - g^2)); W0 is a plain scale factor, default 1.
  static DissipationLaw arctanh_log(double W0 = 1.0) { return DissipationLaw(DissipationFamily::ArcTanhLog, W0, 1.0); }

  /// W0 (g^n - n g) / (1 - n), 0 < n < 1. Reaches W0 at g = 1.
  static DissipationLaw relax_polyline(double W0, double n) {
    detail::require(n > 0.0 && n < 1.0, "RelaxPolyline", "n must lie in (0, 1)");
    return DissipationLaw(DissipationFamily::RelaxPolyline, W0, n);
  }

  /// W0 (1 - exp(-n g / (1-g))). Approaches W0 as g -> 1.
  static DissipationLaw relax_exp(double W0, double n) { return DissipationLaw(DissipationFamily::RelaxExp, W0, n); }

  /// K g + W0 g^m; constant driving force K plus a damage-dependent part.
  static DissipationLaw creep_affine_power(double K, double W0, double m) {
    detail::require(std::isfinite(K) && K >= 0.0, "CreepAffinePower", "K must be >= 0");
    return DissipationLaw(DissipationFamily::CreepAffinePower, W0, m, K);
  }

  DissipationFamily family() const noexcept { return family_; }
  double W0() const noexcept { return W0_; }
  double n() const noexcept { return n_; }
  /// Exponent of the power term; alias of n() for CreepAffinePower.
  double m() const noexcept { return n_; }
  double K() const noexcept { return K_; }

  /// Natural normalization for plots: total dissipation where finite, else W0.
  double scale() const noexcept {
    return family_ == DissipationFamily::CreepAffinePower ? K_ + W0_ : W0_;
  }

  double value(double g) const {
    detail::check_unit_interval(g, to_string(family_));
    switch (family_) {
      case DissipationFamily::Power:
        return W0_ * std::pow(g, n_);
      case DissipationFamily::OneMinusPower:
        return W0_ * (1.0 - std::pow(1.0 - g, n_));
      case DissipationFamily::ArcTanhLog:
        if (g == 1.0) throw DivergenceError("ArcTanhLog: W_nel unbounded at g = 1");
        return W0_ * (g * std::atanh(g) - std::log1p(-g * g));
      case DissipationFamily::RelaxPolyline:
        return W0_ * (std::pow(g, n_) - n_ * g) / (1.0 - n_);
      case DissipationFamily::RelaxExp:
        if (g == 1.0) return W0_;
        return -W0_ * std::expm1(-n_ * g / (1.0 - g));
      case DissipationFamily::CreepAffinePower:
        return K_ * g + W0_ * std::pow(g, n_);
    }
    return 0.0;
  }

  /// Driving force dW_nel/dg.
  double derivative(double g) const {
    detail::check_unit_interval(g, to_string(family_));
    const auto who = to_string(family_);
    switch (family_) {
      case DissipationFamily::Power:
        if (g == 0.0) return W0_ * zero_power_slope(who);
        return W0_ * n_ * std::pow(g, n_ - 1.0);
      case DissipationFamily::OneMinusPower:
        if (g == 1.0) {
          if (n_ < 1.0) throw DivergenceError("OneMinusPower: driving force unbounded at g = 1 for n < 1");
          return n_ == 1.0 ? W0_ : 0.0;
        }
        return W0_ * n_ * std::pow(1.0 - g, n_ - 1.0);
      case DissipationFamily::ArcTanhLog:
        if (g == 1.0) throw DivergenceError("ArcTanhLog: driving force unbounded at g = 1");
        return W0_ * (std::atanh(g) + 3.0 * g / (1.0 - g * g));
      case DissipationFamily::RelaxPolyline:
        if (g == 0.0) throw DivergenceError("RelaxPolyline: driving force unbounded at g = 0");
        return W0_ * n_ * (std::pow(g, n_ - 1.0) - 1.0) / (1.0 - n_);
      case DissipationFamily::RelaxExp: {
        if (g == 1.0) return 0.0;
        const double inv = 1.0 / (1.0 - g);
        return W0_ * n_ * inv * inv * std::exp(-n_ * g * inv);
      }
      case DissipationFamily::CreepAffinePower:
        if (g == 0.0) return K_ + W0_ * zero_power_slope(who);
        return K_ + W0_ * n_ * std::pow(g, n_ - 1.0);
    }
    return 0.0;
  }

  friend bool operator==(const DissipationLaw&, const DissipationLaw&) = default;

 private:
  DissipationLaw(DissipationFamily f, double W0, double n, double K = 0.0) : family_(f), W0_(W0), n_(n), K_(K) {
    detail::require(std::isfinite(W0) && W0 >= 0.0, to_string(f), "W0 must be finite and >= 0");
    detail::require(std::isfinite(n) && n > 0.0, to_string(f), "exponent must be > 0");
  }

  double zero_power_slope(std::string_view who) const {
    if (n_ < 1.0) throw DivergenceError(std::string(who) + ": driving force unbounded at g = 0 for exponent < 1");
    return n_ == 1.0 ? 1.0 : 0.0;
  }

  DissipationFamily family_;
  double W0_;
  double n_;
  double K_;
};

}  // namespace nlus
