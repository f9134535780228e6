#pragma once

// Closed-form EPR estimates and the envelope-width optimizer. All quantities
// in internal units: lengths in a, momenta in hbar/a, energies and k_B T in E_rec.

#include "lattice_epr/core.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace lattice_epr {

/// Delta x_-^2 = sigma^2 + 2 a^2 (V_hop / V_dd)^2.
inline double delta_x_minus(double sigma, double v_hop, double v_dd) {
  if (v_dd == 0.0) {
    throw SingularityError("Delta x_- needs a non-zero V_dd");
  }
  const double r = v_hop / v_dd;
  return std::sqrt(sigma * sigma + 2.0 * r * r);
}

struct ThermalWidth {
  double value = 0.0;   // hbar / a
  bool in_regime = true; // k_B T below the two-atom bandwidth
};

/// Delta p_+^2 = hbar^2 |V_dd| k_B T / (4 V_hop^2 a^2), flagged when
/// k_B T exceeds V_B^(2at) = 8 V_hop^2 / |V_dd|.
inline ThermalWidth delta_p_plus_thermal(double v_dd, double v_hop, double kt) {
  if (v_hop == 0.0) {
    throw SingularityError("Delta p_+ needs a non-zero V_hop");
  }
  if (!(kt >= 0.0)) {
    throw DomainError("temperature must be non-negative");
  }
  const double bandwidth = 8.0 * v_hop * v_hop / std::abs(v_dd);
  return {std::sqrt(std::abs(v_dd) * kt / (4.0 * v_hop * v_hop)), kt <= bandwidth};
}

/// Preparation-limited sum-momentum spread
///   Delta p_+ = hbar / {sqrt(2) sigma_E tanh[hbar^2 / (2 sigma_E^2 m k_B T)]}.
/// In internal units hbar^2 / (2 m) = a^2 E_rec / pi^2.
inline double delta_p_plus_prep(double sigma_e, double kt) {
  if (sigma_e == 0.0) {
    throw SingularityError("Delta p_+ diverges for sigma_E = 0");
  }
  detail::require_positive(sigma_e, "sigma_E");
  if (!(kt >= 0.0)) {
    throw DomainError("temperature must be non-negative");
  }
  const double ground = 1.0 / (std::sqrt(2.0) * sigma_e);
  if (kt == 0.0) {
    return ground;
  }
  const double pi = constants::pi;
  const double arg = 1.0 / (pi * pi * sigma_e * sigma_e * kt);
  return ground / std::tanh(arg);
}

/// s = hbar / (2 Delta x_- Delta p_+).
inline double s_parameter(double dx_minus, double dp_plus) {
  if (dx_minus == 0.0 || dp_plus == 0.0) {
    throw SingularityError("s-parameter needs non-zero widths");
  }
  detail::require_positive(dx_minus, "Delta x_-");
  detail::require_positive(dp_plus, "Delta p_+");
  return 1.0 / (2.0 * dx_minus * dp_plus);
}

/// s ~ (sigma_E / (sqrt(2) sigma)) tanh[(1/pi^2) (a/sigma_E)^2 E_rec / (k_B T)].
/// kt = 0 gives the saturated value.
inline double s_estimate(double sigma_e, double sigma, double kt) {
  detail::require_positive(sigma_e, "sigma_E");
  detail::require_positive(sigma, "sigma");
  if (!(kt >= 0.0)) {
    throw DomainError("temperature must be non-negative");
  }
  const double prefactor = sigma_e / (std::sqrt(2.0) * sigma);
  if (kt == 0.0) {
    return prefactor;
  }
  const double pi = constants::pi;
  return prefactor * std::tanh(1.0 / (pi * pi * sigma_e * sigma_e * kt));
}

struct PairFraction {
  double value = 0.0;
  bool meaningful = true; // false when sigma_E < a
};

/// Fraction ~ a / sigma_E of doubly occupied tube pairs left as bound diatoms.
inline PairFraction pair_fraction(double sigma_e) {
  detail::require_positive(sigma_e, "sigma_E");
  return {1.0 / sigma_e, sigma_e >= 1.0};
}

struct SigmaOptimum {
  double sigma_e = 0.0; // a
  double s = 0.0;
  bool on_boundary = false;
  int evaluations = 0;
};

/// Maximizes s_estimate over sigma_E in [lower, upper]: a coarse scan picks the
/// bracket around the best sample, then golden-section refines it to `tol`.
/// The scan also validates unimodality (samples rise then fall).
inline SigmaOptimum optimize_sigma_e(double sigma, double kt, double lower, double upper,
                                     double tol = 1e-4) {
  if (!(lower > 0.0) || !(upper > lower)) {
    throw DomainError("optimizer bounds must satisfy 0 < lower < upper");
  }
  detail::require_positive(kt, "temperature");
  auto f = [&](double x) { return s_estimate(x, sigma, kt); };

  constexpr int scan = 64;
  std::vector<double> xs(scan + 1), fs(scan + 1);
  int best = 0;
  for (int i = 0; i <= scan; ++i) {
    xs[i] = lower + (upper - lower) * i / scan;
    fs[i] = f(xs[i]);
    if (fs[i] > fs[best]) {
      best = i;
    }
  }
  for (int i = 1; i <= scan; ++i) {
    const bool rising = fs[i] > fs[i - 1];
    if (i <= best && !rising && fs[i] != fs[i - 1]) {
      throw NumericalError("s_estimate is not unimodal on the optimizer bracket");
    }
    if (i > best && rising) {
      throw NumericalError("s_estimate is not unimodal on the optimizer bracket");
    }
  }

  SigmaOptimum out;
  out.evaluations = scan + 1;
  double a = xs[std::max(best - 1, 0)];
  double b = xs[std::min(best + 1, scan)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  out.evaluations += 2;
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++out.evaluations;
  }
  out.sigma_e = 0.5 * (a + b);
  out.s = f(out.sigma_e);
  // Compare against the end points so a monotone objective reports its bound.
  if (fs[0] >= out.s) {
    out.sigma_e = lower;
    out.s = fs[0];
  }
  if (fs[scan] >= out.s) {
    out.sigma_e = upper;
    out.s = fs[scan];
  }
  out.on_boundary = out.sigma_e - lower <= tol || upper - out.sigma_e <= tol;
  return out;
}

} // namespace lattice_epr
