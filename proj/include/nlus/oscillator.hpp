#pragma once

/**
 * @file oscillator.hpp
 *
 * @brief Free vibration of a mass on a degraded bilinear spring and
 *        extraction of its second-harmonic ratio.
 *
 * The spring is stiff in compression (k0) and softened in tension
 * (k0 (1 - g)) about its unstretched length x0(g). The damage variable is
 * frozen during a run. Each half cycle is harmonic, so the period is
 * pi (sqrt(m/k_t) + sqrt(m/k_c)), and the asymmetric waveform carries even
 * harmonics whose size grows with g.
 */

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "nlus/errors.hpp"

namespace nlus {

struct BilinearOscillator {
  double mass = 1.0;
  double k0 = 4.0 * std::numbers::pi * std::numbers::pi;
  double gamma = 0.0;
  double x0_gamma = 1.0;
  double initial_factor = 0.99;  ///< released from rest at initial_factor * x0_gamma

  void validate() const {
    if (!(mass > 0.0)) throw DomainError("BilinearOscillator: mass must be > 0");
    if (!(k0 > 0.0)) throw DomainError("BilinearOscillator: k0 must be > 0");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw DomainError("BilinearOscillator: gamma must lie in [0, 1)");
    if (!(x0_gamma > 0.0) || !std::isfinite(x0_gamma)) throw DomainError("BilinearOscillator: x0_gamma must be > 0");
    if (!(initial_factor > 0.0) || initial_factor == 1.0 || !std::isfinite(initial_factor))
      throw DomainError("BilinearOscillator: initial_factor must be positive and != 1");
  }

  double k_tension() const { return k0 * (1.0 - gamma); }
  double k_compression() const { return k0; }

  double stiffness_at(double x) const { return x > x0_gamma ? k_tension() : k_compression(); }

  /// Continuous piecewise-quadratic potential, zero at x0_gamma.
  double potential(double x) const {
    const double d = x - x0_gamma;
    return 0.5 * stiffness_at(x) * d * d;
  }

  double energy(double x, double v) const { return 0.5 * mass * v * v + potential(x); }

  double analytic_period() const {
    return std::numbers::pi * (std::sqrt(mass / k_tension()) + std::sqrt(mass / k_compression()));
  }

  /// Period of the undamaged spring, the shortest the system can have.
  double min_period() const { return 2.0 * std::numbers::pi * std::sqrt(mass / k0); }

  double initial_offset() const { return (initial_factor - 1.0) * x0_gamma; }
};

struct TimeTrace {
  double dt = 0.0;
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> v;

  std::size_t size() const noexcept { return t.size(); }
};

struct RunSettings {
  double duration;
  double dt;
};

inline constexpr double kMinPeriods = 64.0;
inline constexpr double kMinStepsPerMinPeriod = 200.0;

/// 64 analytic periods sampled 512 times per period; with these settings
/// the coherent FFT length is 2^15.
inline RunSettings default_run(const BilinearOscillator& osc, double periods = 64.0, double samples_per_period = 512.0) {
  const double T = osc.analytic_period();
  return {periods * T, T / samples_per_period};
}

namespace detail {

struct Phase {
  double x;
  double v;
};

// Fourth-order symplectic composition of velocity-Verlet (kick-drift-kick)
// substeps for the linear force -k (x - x0) / m.
inline Phase yoshida4(Phase p, double h, double k_over_m, double x0) {
  static const double cbrt2 = std::cbrt(2.0);
  static const double w1 = 1.0 / (2.0 - cbrt2);
  static const double w0 = -cbrt2 / (2.0 - cbrt2);
  for (double w : {w1, w0, w1}) {
    const double s = w * h;
    p.v -= 0.5 * s * k_over_m * (p.x - x0);
    p.x += s * p.v;
    p.v -= 0.5 * s * k_over_m * (p.x - x0);
  }
  return p;
}

}  // namespace detail

/// Integrates m x'' = -k(x) (x - x0) from rest at the release point.
///
/// Steps are fixed; a step whose end lands on the other side of x0 is split
/// at the crossing, located by bisection to 1e-12 of the period, and the
/// remainder is taken with the other branch's stiffness.
inline TimeTrace simulate(const BilinearOscillator& osc, double duration, double dt) {
  osc.validate();
  const double T = osc.analytic_period();
  if (!(dt > 0.0) || dt > osc.min_period() / kMinStepsPerMinPeriod)
    throw DomainError("simulate: dt exceeds the stability limit T_min / 200");
  if (!(duration >= kMinPeriods * T * (1.0 - 1e-12))) throw DomainError("simulate: duration shorter than 64 periods");

  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  const double x0 = osc.x0_gamma;
  const double event_tol = 1e-12 * T;

  TimeTrace tr;
  tr.dt = dt;
  tr.t.reserve(steps + 1);
  tr.x.reserve(steps + 1);
  tr.v.reserve(steps + 1);

  detail::Phase p{osc.initial_factor * x0, 0.0};
  int side = p.x > x0 ? 1 : -1;  // +1 tension, -1 compression
  auto k_over_m = [&](int s) { return (s > 0 ? osc.k_tension() : osc.k_compression()) / osc.mass; };

  tr.t.push_back(0.0);
  tr.x.push_back(p.x);
  tr.v.push_back(p.v);

  for (std::size_t i = 1; i <= steps; ++i) {
    double remaining = dt;
    for (int events = 0; remaining > 0.0; ++events) {
      if (events > 16) throw NumericalError("simulate: too many stiffness switches within one step");
      const double km = k_over_m(side);
      const auto trial = detail::yoshida4(p, remaining, km, x0);
      if ((trial.x - x0) * side >= 0.0) {
        p = trial;
        break;
      }
      double lo = 0.0, hi = remaining;
      while (hi - lo > event_tol) {
        const double mid = 0.5 * (lo + hi);
        if ((detail::yoshida4(p, mid, km, x0).x - x0) * side >= 0.0)
          lo = mid;
        else
          hi = mid;
      }
      p = detail::yoshida4(p, hi, km, x0);
      side = -side;
      remaining -= hi;
    }
    if (!std::isfinite(p.x) || !std::isfinite(p.v)) throw NumericalError("simulate: non-finite state");
    tr.t.push_back(static_cast<double>(i) * dt);
    tr.x.push_back(p.x);
    tr.v.push_back(p.v);
  }
  return tr;
}

inline TimeTrace simulate(const BilinearOscillator& osc) {
  const auto run = default_run(osc);
  return simulate(osc, run.duration, run.dt);
}

/// max |E(t) - E(0)| / E(0) along a trace.
inline double energy_drift(const BilinearOscillator& osc, const TimeTrace& tr) {
  const double e0 = osc.energy(tr.x.front(), tr.v.front());
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) worst = std::max(worst, std::fabs(osc.energy(tr.x[i], tr.v[i]) - e0));
  return worst / e0;
}

/// Interpolated times at which x rises through level.
inline std::vector<double> upward_crossings(const TimeTrace& tr, double level) {
  std::vector<double> out;
  for (std::size_t i = 1; i < tr.size(); ++i) {
    const double a = tr.x[i - 1] - level;
    const double b = tr.x[i] - level;
    if (a < 0.0 && b >= 0.0) out.push_back(tr.t[i - 1] + tr.dt * a / (a - b));
  }
  return out;
}

/// Mean spacing of upward crossings of level; 0 when fewer than two.
inline double measured_period(const TimeTrace& tr, double level) {
  const auto c = upward_crossings(tr, level);
  if (c.size() < 2) return 0.0;
  return (c.back() - c.front()) / static_cast<double>(c.size() - 1);
}

struct Excursions {
  double tension;      ///< max (x - x0)
  double compression;  ///< max (x0 - x)
};

/// Peak excursions on either side of x0, refined by a parabola through each
/// sampled extremum.
inline Excursions peak_excursions(const TimeTrace& tr, double x0) {
  Excursions ex{0.0, 0.0};
  const auto& x = tr.x;
  ex.tension = std::max(x.front() - x0, x.back() - x0);
  ex.compression = std::max(x0 - x.front(), x0 - x.back());
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double a = x[i - 1], b = x[i], c = x[i + 1];
    const bool is_max = b >= a && b >= c;
    const bool is_min = b <= a && b <= c;
    if (!is_max && !is_min) continue;
    const double curv = a - 2.0 * b + c;
    const double peak = curv != 0.0 ? b - (c - a) * (c - a) / (8.0 * curv) : b;
    if (is_max) ex.tension = std::max(ex.tension, peak - x0);
    if (is_min) ex.compression = std::max(ex.compression, x0 - peak);
  }
  return ex;
}

struct HarmonicSpectrum {
  std::vector<double> frequency;
  std::vector<double> amplitude;  ///< single-sided
  std::size_t fundamental_bin = 0;
  std::size_t samples = 0;  ///< FFT length after truncation
  double f1 = 0.0;
  double A1 = 0.0;
  double A2 = 0.0;
  double ratio = 0.0;
};

inline constexpr std::size_t kHarmonicSearchBins = 2;

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// Single-sided amplitude spectrum of a real signal.
inline std::vector<double> amplitude_spectrum(std::span<const double> signal) {
  const int n = static_cast<int>(signal.size());
  const std::size_t bins = signal.size() / 2 + 1;
  std::vector<double> in(signal.begin(), signal.end());
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins));
  if (out == nullptr) throw NumericalError("spectrum: allocation failed");
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data(), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::vector<double> amp(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double mag = std::hypot(out[k][0], out[k][1]) / static_cast<double>(n);
    const bool edge = k == 0 || (signal.size() % 2 == 0 && k == bins - 1);
    amp[k] = edge ? mag : 2.0 * mag;
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  return amp;
}

}  // namespace detail

/// Magnitude spectrum of x - mean(x) over an integer number of estimated
/// fundamental periods (rectangular window, coherent sampling).
inline HarmonicSpectrum spectrum(const TimeTrace& tr) {
  if (tr.size() < 8 || !(tr.dt > 0.0)) throw NumericalError("spectrum: trace too short");
  double mean = 0.0;
  for (double v : tr.x) mean += v;
  mean /= static_cast<double>(tr.size());
  double spread = 0.0;
  for (double v : tr.x) spread = std::max(spread, std::fabs(v - mean));
  if (!(spread > 1e-14 * std::max(1.0, std::fabs(mean)))) throw NumericalError("spectrum: degenerate (constant) trace");

  std::size_t n = tr.size();
  const auto crossings = upward_crossings(tr, mean);
  if (crossings.size() >= 2) {
    const double period = (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
    const double span = tr.t.back() - tr.t.front();
    const double periods = std::floor(span / period + 1e-6);
    const auto coherent = static_cast<std::size_t>(std::llround(periods * period / tr.dt));
    if (periods >= 1.0 && coherent >= 8) n = std::min(n, coherent);
  }

  std::vector<double> centered(n);
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) m2 += tr.x[i];
  m2 /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = tr.x[i] - m2;

  HarmonicSpectrum s;
  s.samples = n;
  s.amplitude = detail::amplitude_spectrum(centered);
  s.frequency.resize(s.amplitude.size());
  const double df = 1.0 / (static_cast<double>(n) * tr.dt);
  for (std::size_t k = 0; k < s.frequency.size(); ++k) s.frequency[k] = static_cast<double>(k) * df;

  const auto peak = std::max_element(s.amplitude.begin() + 1, s.amplitude.end());
  s.fundamental_bin = static_cast<std::size_t>(peak - s.amplitude.begin());
  s.A1 = *peak;
  s.f1 = s.frequency[s.fundamental_bin];
  if (!(s.A1 > 0.0)) throw NumericalError("spectrum: no fundamental");

  const std::size_t centre = 2 * s.fundamental_bin;
  const std::size_t lo = centre > kHarmonicSearchBins ? centre - kHarmonicSearchBins : 1;
  const std::size_t hi = std::min(centre + kHarmonicSearchBins, s.amplitude.size() - 1);
  s.A2 = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) s.A2 = std::max(s.A2, s.amplitude[k]);
  s.ratio = s.A2 / s.A1;
  return s;
}

struct OscillatorSetup {
  double mass = 1.0;
  double k0 = 4.0 * std::numbers::pi * std::numbers::pi;
  double initial_factor = 0.99;
  double periods = 64.0;
  double samples_per_period = 512.0;
  /// Unstretched length at each damage state; the ratio does not depend on it.
  std::function<double(double)> x0_of_gamma = [](double) { return 1.0; };

  BilinearOscillator at(double gamma) const {
    BilinearOscillator o{mass, k0, gamma, x0_of_gamma(gamma), initial_factor};
    o.validate();
    return o;
  }
};

struct SweepSample {
  double gamma;
  double f1;
  double A1;
  double A2;
  double ratio;
};

struct HarmonicSweep {
  std::vector<SweepSample> samples;
  /// Discrete second divided differences of ratio(gamma) all positive.
  bool convex = true;
};

inline constexpr double kMaxSweepGamma = 0.9;

inline HarmonicSweep harmonic_sweep(const OscillatorSetup& setup, std::span<const double> grid) {
  HarmonicSweep out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double g = grid[i];
    if (!(g >= 0.0 && g <= kMaxSweepGamma)) throw DomainError("harmonic_sweep: gamma outside [0, 0.9]");
    if (i > 0 && !(g > grid[i - 1])) throw DomainError("harmonic_sweep: grid must be strictly increasing");
    const auto osc = setup.at(g);
    const auto run = default_run(osc, setup.periods, setup.samples_per_period);
    const auto s = spectrum(simulate(osc, run.duration, run.dt));
    out.samples.push_back({g, s.f1, s.A1, s.A2, s.ratio});
  }
  for (std::size_t i = 1; i + 1 < out.samples.size(); ++i) {
    const auto& a = out.samples[i - 1];
    const auto& b = out.samples[i];
    const auto& c = out.samples[i + 1];
    const double left = (b.ratio - a.ratio) / (b.gamma - a.gamma);
    const double right = (c.ratio - b.ratio) / (c.gamma - b.gamma);
    if (!(right > left)) out.convex = false;
  }
  return out;
}

}  // namespace nlus
