#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "orbits.hpp"
#include "spectra.hpp"

namespace hcx {

// Level-n pressure of the potential -t * phi(F), computed from periodic data:
//
//   Z_n(t)  = sum over periodic points x of period n of exp(-t * phi(period(x)))
//           = sum over classes [w] of length n of rot(w) * exp(-t * phi(lambda(w)))
//   P_n(t)  = log(Z_n(t)) / n
//
// rot(w) is the number of distinct rotations of the cyclic word. The limit
// pressure is estimated by n P_n - (n-1) P_{n-1} = log Z_n - log Z_{n-1},
// falling back to P_n itself when that scheme oscillates along the ray.

namespace detail {

constexpr std::size_t kReductionChunk = 4096;

/// log(sum_i exp(log_weights[i] - t * values[i])), as a chunked max-shifted
/// reduction. The chunk partition is fixed, so the result does not depend
/// on the worker count.
inline double log_partition(std::span<const double> log_weights, std::span<const double> values, double t,
                            unsigned threads = 1) {
  const std::size_t n = values.size();
  if (n == 0) return -std::numeric_limits<double>::infinity();
  const std::size_t chunks = (n + kReductionChunk - 1) / kReductionChunk;
  std::vector<double> chunk_max(chunks), chunk_sum(chunks);
  for_each_shard(chunks, threads, [&](std::size_t c) {
    const std::size_t lo = c * kReductionChunk, hi = std::min(n, lo + kReductionChunk);
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, log_weights[i] - t * values[i]);
    double s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += std::exp(log_weights[i] - t * values[i] - m);
    chunk_max[c] = m;
    chunk_sum[c] = s;
  });
  double m = -std::numeric_limits<double>::infinity();
  for (double x : chunk_max) m = std::max(m, x);
  double s = 0;
  for (std::size_t c = 0; c < chunks; ++c) s += chunk_sum[c] * std::exp(chunk_max[c] - m);
  return m + std::log(s);
}

/// Weighted mean of the period vectors with weights rot * exp(-phi(period)).
inline Vector gibbs_mean(const PeriodLevel& level, const Vector& phi) {
  const std::vector<double> v = level.values(phi);
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) m = std::max(m, std::log(level.rotations[i]) - v[i]);
  Vector acc = Vector::Zero(level.dim);
  double z = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = std::exp(std::log(level.rotations[i]) - v[i] - m);
    acc += w * level.period(i);
    z += w;
  }
  return acc / z;
}

}  // namespace detail

/// Scalar period values of one level for a fixed functional.
struct ScalarLevel {
  int length = 0;
  std::vector<double> log_weights;
  std::vector<double> values;

  ScalarLevel() = default;
  ScalarLevel(const PeriodLevel& level, const Vector& phi) : length(level.length), values(level.values(phi)) {
    log_weights.reserve(level.size());
    for (double r : level.rotations) log_weights.push_back(std::log(r));
  }

  double log_partition(double t, unsigned threads = default_threads()) const {
    return detail::log_partition(log_weights, values, t, threads);
  }
  double pressure(double t, unsigned threads = default_threads()) const {
    return log_partition(t, threads) / length;
  }
};

inline double level_pressure(const PeriodTable& table, const Vector& phi, double t, int n) {
  require(n >= 2, ErrorKind::kInvalidParameter, "level must be >= 2");
  return ScalarLevel(table.level(n), phi).pressure(t);
}

inline double level_pressure(const Representation& rep, const Functional& phi, double t, int n) {
  return level_pressure(class_spectra(rep, n), phi.coeffs(), t, n);
}

/// Throws kNotInDualCone unless phi(period) > 0 for every class in the table.
inline void require_positive_periods(const PeriodTable& table, const Vector& phi) {
  for (int n = 1; n <= table.n_max; ++n) {
    for (double v : table.level(n).values(phi))
      require(v > 0, ErrorKind::kNotInDualCone,
              "functional is not positive on every period (length " + std::to_string(n) + ")");
  }
}

/// Extrapolated pressure along the ray t -> t * phi: the difference scheme
/// log Z_n - log Z_{n-1}, or the plain level pressure P_n when `fallback`.
class ExtrapolatedPressure {
 public:
  ExtrapolatedPressure(const PeriodTable& table, const Vector& phi, int n, bool fallback = false)
      : top_(table.level(n), phi), fallback_(fallback) {
    require(n >= 3, ErrorKind::kInvalidParameter, "extrapolation needs n >= 3");
    if (!fallback_) below_ = ScalarLevel(table.level(n - 1), phi);
  }
  double operator()(double t) const {
    return fallback_ ? top_.pressure(t) : top_.log_partition(t) - below_.log_partition(t);
  }
  bool fallback() const { return fallback_; }

 private:
  ScalarLevel top_, below_;
  bool fallback_;
};

namespace detail {

// Root of a function that is positive at 0 and eventually negative. The
// difference scheme need not stay negative for huge t (the minimal period
// can shrink from level n-1 to n), so the bracket grows by doubling from
// below instead of evaluating at the far end of [0, 1000]. Bisection down to
// width 1e-3, then safeguarded secant to `tol`.
template <class F>
double monotone_root(const F& p, double tol) {
  double lo = 0, hi = 1.0 / 64;
  double f_lo = p(lo), f_hi = p(hi);
  require(f_lo > 0, ErrorKind::kBracketFailure, "pressure at t = 0 is not positive");
  while (f_hi >= 0) {
    lo = hi;
    f_lo = f_hi;
    hi *= 2;
    require(hi <= 1e3, ErrorKind::kBracketFailure, "pressure root not bracketed in [0, 1000]");
    f_hi = p(hi);
  }
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    const double f = p(mid);
    if (f > 0) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
      f_hi = f;
    }
  }
  double root = lo;
  for (int it = 0; it < 100; ++it) {
    double x = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double f = p(x);
    if (f == 0) return x;
    const double step = std::abs(x - root);
    root = x;
    if (f > 0) {
      lo = x;
      f_lo = f;
    } else {
      hi = x;
      f_hi = f;
    }
    if (step < tol || hi - lo < tol) break;
  }
  return root;
}

}  // namespace detail

struct PressureRoot {
  double root = 0;
  int n_max = 0;
  bool extrapolation_flag = false;  // difference scheme rejected, P_{n_max} used
};

/// True when the difference-scheme roots along the ray of phi at levels
/// n-2, n-1, n have sign-changing successive differences, or when one of
/// them does not exist. Depends only on the direction of phi.
inline bool extrapolation_oscillates(const PeriodTable& table, const Vector& phi, int n) {
  if (n < 5) return false;
  double r[3];
  for (int j = 0; j < 3; ++j) {
    try {
      r[j] = detail::monotone_root(ExtrapolatedPressure(table, phi, n - 2 + j), 1e-10);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kBracketFailure) throw;
      return true;
    }
  }
  const double d0 = r[1] - r[0], d1 = r[2] - r[1];
  return d0 * d1 < 0 && std::min(std::abs(d0), std::abs(d1)) > 1e-9 * std::abs(r[2]);
}

/// The pressure estimate used along the ray of phi at level n.
inline ExtrapolatedPressure ray_pressure(const PeriodTable& table, const Vector& phi, int n) {
  return ExtrapolatedPressure(table, phi, n, extrapolation_oscillates(table, phi, n));
}

/// Root in t of the extrapolated pressure of -t * phi(F), i.e. the critical
/// exponent h_phi.
inline PressureRoot pressure_root(const PeriodTable& table, const Vector& phi, double tol = 1e-6, int n_max = 0) {
  if (n_max == 0) n_max = table.n_max;
  require(n_max >= 3 && n_max <= table.n_max, ErrorKind::kInvalidParameter, "n_max outside the table");
  require(tol > 0, ErrorKind::kInvalidParameter, "tol must be positive");
  require_positive_periods(table, phi);
  const ExtrapolatedPressure p = ray_pressure(table, phi, n_max);
  return {detail::monotone_root(p, tol), n_max, p.fallback()};
}

inline PressureRoot pressure_root(const Representation& rep, const Functional& phi, int n_max = 12, double tol = 1e-6) {
  return pressure_root(class_spectra(rep, n_max), phi.coeffs(), tol, n_max);
}

/// Level pressures P_n(t) for 2 <= n <= n_max plus the extrapolated limit.
struct PressureTable {
  std::string weight_id;
  double t = 0;
  std::map<int, double> levels;
  double extrapolated = 0;
  bool extrapolation_flag = false;
  int n_max = 0;
};

inline PressureTable pressure_table(const PeriodTable& table, const Vector& phi, double t, std::string weight_id) {
  PressureTable out;
  out.weight_id = std::move(weight_id);
  out.t = t;
  out.n_max = table.n_max;
  for (int n = 2; n <= table.n_max; ++n) out.levels[n] = level_pressure(table, phi, t, n);
  const int n = table.n_max;
  if (n >= 3) {
    out.extrapolation_flag = extrapolation_oscillates(table, phi, n);
    out.extrapolated = out.extrapolation_flag ? out.levels[n] : n * out.levels[n] - (n - 1) * out.levels[n - 1];
  } else {
    out.extrapolated = out.levels[n];
  }
  return out;
}

/// Level-n Gibbs average of the periods per unit symbolic time, for the
/// potential -phi0(F). Coordinates are not re-sorted.
inline Vector gibbs_direction(const PeriodTable& table, const Vector& phi0, int n) {
  require(n >= 2, ErrorKind::kInvalidParameter, "level must be >= 2");
  return detail::gibbs_mean(table.level(n), phi0) / static_cast<double>(table.level(n).length);
}

/// Negative gradient in phi of the ray pressure at t = 1: n G_n - (n-1) G_{n-1}
/// for the difference scheme, G_n under fallback (G the per-unit-time Gibbs
/// averages). This is the normal of the traced boundary {root = 1}.
inline Vector extrapolated_gibbs_direction(const PeriodTable& table, const Vector& phi0, int n, bool fallback) {
  require(n >= 3, ErrorKind::kInvalidParameter, "level must be >= 3");
  if (fallback) return gibbs_direction(table, phi0, n);
  return detail::gibbs_mean(table.level(n), phi0) - detail::gibbs_mean(table.level(n - 1), phi0);
}

inline Vector extrapolated_gibbs_direction(const PeriodTable& table, const Vector& phi0, int n) {
  return extrapolated_gibbs_direction(table, phi0, n, extrapolation_oscillates(table, phi0, n));
}

inline Vector gibbs_direction(const Representation& rep, const Functional& phi0, int n) {
  return gibbs_direction(class_spectra(rep, n), phi0.coeffs(), n);
}

struct DerivativeCheck {
  double analytic = 0;
  double numeric = 0;
};

/// d/dt P_n(phi0 + t phi1) at t = 0, analytically (minus the Gibbs average of
/// phi1) and by central differences.
inline DerivativeCheck pressure_derivative_check(const PeriodTable& table, const Vector& phi0, const Vector& phi1, int n,
                                                 double h_step) {
  require(n >= 4, ErrorKind::kInvalidParameter, "level must be >= 4");
  require(h_step >= 1e-6 && h_step <= 1e-2, ErrorKind::kInvalidParameter, "h_step outside [1e-6, 1e-2]");
  DerivativeCheck out;
  out.analytic = -phi1.dot(gibbs_direction(table, phi0, n));
  const double plus = level_pressure(table, Vector(phi0 + h_step * phi1), 1.0, n);
  const double minus = level_pressure(table, Vector(phi0 - h_step * phi1), 1.0, n);
  out.numeric = (plus - minus) / (2 * h_step);
  return out;
}

/// Entropy of the equilibrium state of -phi0(F) for phi0 on the boundary
/// {h_phi = 1}: phi0 applied to the (difference-scheme) Gibbs average.
inline double entropy_of_state(const PeriodTable& table, const Vector& phi0, int n) {
  const PressureRoot r = pressure_root(table, phi0, 1e-9, n);
  require(std::abs(r.root - 1.0) < 1e-3, ErrorKind::kNotOnBoundary,
          "functional is not on the boundary (root " + std::to_string(r.root) + ")");
  return phi0.dot(extrapolated_gibbs_direction(table, phi0, n, r.extrapolation_flag));
}

}  // namespace hcx
