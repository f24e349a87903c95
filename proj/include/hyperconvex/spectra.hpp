#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "core.hpp"

namespace hcx {

/// Element of the closed Weyl chamber of sl(d, R): non-increasing
/// coordinates summing to zero. Houses both Cartan and Jordan projections.
struct CartanVector {
  Vector coords;

  CartanVector() = default;
  explicit CartanVector(Vector c) : coords(std::move(c)) {}

  int dim() const { return static_cast<int>(coords.size()); }
  double norm() const { return coords.norm(); }
  double operator[](int i) const { return coords(i); }

  bool in_chamber(double tol = 1e-12) const {
    for (int i = 0; i + 1 < dim(); ++i)
      if (coords(i) < coords(i + 1) - tol) return false;
    return std::abs(coords.sum()) < 1e-9 * dim();
  }
};

/// Opposition involution: (v_1, ..., v_d) -> (-v_d, ..., -v_1).
inline Vector opposition(const Vector& v) { return -v.reverse(); }

/// Linear form on the Cartan subspace, stored as its sum-zero coefficient
/// vector; evaluation is a plain dot product, no re-sorting.
class Functional {
 public:
  Functional() = default;
  explicit Functional(Vector coeffs) : coeffs_(std::move(coeffs)) {
    require(coeffs_.size() >= 1, ErrorKind::kInvalidParameter, "empty functional");
    if (coeffs_.size() > 1) coeffs_.array() -= coeffs_.mean();
  }
  Functional(std::initializer_list<double> c) : Functional(Vector(Eigen::Map<const Vector>(c.begin(), static_cast<Eigen::Index>(c.size())))) {}

  /// Simple root alpha_i(v) = v_i - v_{i+1}, with 1-based i.
  static Functional simple_root(int d, int i) {
    require(i >= 1 && i < d, ErrorKind::kInvalidParameter, "root index out of range");
    Vector c = Vector::Zero(d);
    c(i - 1) = 1;
    c(i) = -1;
    return Functional(c);
  }
  /// lambda_1 - lambda_d.
  static Functional first_minus_last(int d) {
    Vector c = Vector::Zero(d);
    c(0) = 1;
    c(d - 1) = -1;
    return Functional(c);
  }

  int dim() const { return static_cast<int>(coeffs_.size()); }
  const Vector& coeffs() const { return coeffs_; }
  double operator()(const Vector& v) const { return coeffs_.dot(v); }
  double operator()(const CartanVector& v) const { return coeffs_.dot(v.coords); }
  /// Dual Euclidean norm sup_{|v|=1} phi(v) on the sum-zero subspace.
  double norm() const { return coeffs_.norm(); }

  Functional operator*(double c) const { return Functional(Vector(coeffs_ * c)); }
  Functional operator+(const Functional& o) const { return Functional(Vector(coeffs_ + o.coeffs_)); }

 private:
  Vector coeffs_;
};

namespace detail {

inline Vector sorted_desc(Vector v) {
  std::sort(v.data(), v.data() + v.size(), std::greater<>());
  return v;
}

inline Vector centered(Vector v) {
  v.array() -= v.mean();
  return v;
}

inline Vector singular_values(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();  // non-increasing
}

// Eigenvalue moduli, non-increasing. Ties keep the stable order of
// (modulus, real part).
inline Vector eigen_moduli(const Matrix& m) {
  Eigen::EigenSolver<Matrix> es(m, false);
  require(es.info() == Eigen::Success, ErrorKind::kSpectralFailure, "eigensolver did not converge");
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::stable_sort(ev.begin(), ev.end(), [](auto a, auto b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    return a.real() > b.real();
  });
  Vector out(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out(i) = std::abs(ev[static_cast<std::size_t>(i)]);
  return out;
}

// Combines log spectra (non-increasing) of m and m^{-1}: the i-th value is
// taken from whichever side resolves it with the smaller relative error
// (large values from m, small values from the inverse). Given log|det m|,
// a value that neither side resolves (both gaps beyond kResolvedGap) is
// recovered from the sum instead.
constexpr double kResolvedGap = 20.0;

inline Vector combine_log_spectra(const Vector& log_fwd, const Vector& log_bwd,
                                  std::optional<double> log_det = std::nullopt) {
  const Eigen::Index d = log_fwd.size();
  Vector out(d), gap(d);
  const double top = log_fwd(0);
  const double bottom = -log_bwd(0);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double from_fwd = log_fwd(i);
    const double from_bwd = -log_bwd(d - 1 - i);
    const bool use_fwd = std::isfinite(from_fwd) && (top - from_fwd) <= (from_bwd - bottom);
    out(i) = use_fwd ? from_fwd : from_bwd;
    gap(i) = use_fwd ? top - from_fwd : from_bwd - bottom;
  }
  if (log_det && d >= 2) {
    Eigen::Index worst = 0;
    gap.maxCoeff(&worst);
    if (!(gap(worst) <= kResolvedGap)) out(worst) = *log_det - (out.sum() - out(worst));
  }
  require(out.allFinite(), ErrorKind::kSpectralFailure, "non-finite spectrum");
  return centered(sorted_desc(out));
}

inline Vector log_of(const Vector& v) { return v.array().log().matrix(); }

}  // namespace detail

constexpr double kMaxCondition = 1e14;

/// Cartan projection: sorted log singular values, mean-subtracted.
inline CartanVector cartan(const Matrix& m) {
  require(m.allFinite(), ErrorKind::kSpectralFailure, "non-finite matrix");
  const Vector s = detail::singular_values(m);
  require(s(s.size() - 1) > 0 && s(0) / s(s.size() - 1) <= kMaxCondition, ErrorKind::kSpectralFailure,
          "matrix is numerically singular");
  return CartanVector(detail::centered(s.array().log().matrix()));
}

/// Cartan projection of m given its exact inverse; accurate for condition
/// numbers far beyond double precision (long word products). Pass
/// log|det m| when known (0 for products of unimodular generators).
inline CartanVector cartan(const Matrix& m, const Matrix& m_inv, std::optional<double> log_det = std::nullopt) {
  require(m.allFinite() && m_inv.allFinite(), ErrorKind::kSpectralFailure, "non-finite matrix");
  return CartanVector(detail::combine_log_spectra(detail::log_of(detail::singular_values(m)),
                                                  detail::log_of(detail::singular_values(m_inv)), log_det));
}

/// Jordan projection: sorted log eigenvalue moduli, mean-subtracted.
inline CartanVector jordan(const Matrix& m) {
  require(m.allFinite(), ErrorKind::kSpectralFailure, "non-finite matrix");
  const Vector mod = detail::eigen_moduli(m);
  require(mod(mod.size() - 1) > 0, ErrorKind::kSpectralFailure, "zero eigenvalue");
  return CartanVector(detail::centered(mod.array().log().matrix()));
}

inline CartanVector jordan(const Matrix& m, const Matrix& m_inv, std::optional<double> log_det = std::nullopt) {
  require(m.allFinite() && m_inv.allFinite(), ErrorKind::kSpectralFailure, "non-finite matrix");
  return CartanVector(detail::combine_log_spectra(detail::log_of(detail::eigen_moduli(m)),
                                                  detail::log_of(detail::eigen_moduli(m_inv)), log_det));
}

/// (lambda_i - lambda_{i+1}) / lambda_1 for 1-based i.
inline double gap_ratio(const Matrix& m, int i, double tol = 1e-9) {
  const CartanVector l = jordan(m);
  require(i >= 1 && i < l.dim(), ErrorKind::kInvalidParameter, "gap index out of range");
  require(l[0] > tol, ErrorKind::kUndefinedGap, "lambda_1 vanishes");
  return std::max(0.0, (l[i - 1] - l[i]) / l[0]);
}

/// Unique real eigenvalue of maximal modulus, separated from the next by a
/// relative margin `tol`.
inline bool is_proximal(const Matrix& m, double tol = 1e-9) {
  require(m.allFinite(), ErrorKind::kSpectralFailure, "non-finite matrix");
  Eigen::EigenSolver<Matrix> es(m, false);
  require(es.info() == Eigen::Success, ErrorKind::kSpectralFailure, "eigensolver did not converge");
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::stable_sort(ev.begin(), ev.end(), [](auto a, auto b) { return std::abs(a) > std::abs(b); });
  const double top = std::abs(ev[0]);
  if (ev.size() < 2) return true;
  const bool separated = top > std::abs(ev[1]) * (1.0 + tol);
  const bool real = std::abs(ev[0].imag()) <= 1e-12 * top;
  return separated && real;
}

/// Computes m^n as (log scale, normalized matrix) by binary powering with
/// scalar renormalization after every product.
inline std::pair<double, Matrix> scaled_power(const Matrix& m, int n) {
  double log_scale = 0;
  Matrix result = Matrix::Identity(m.rows(), m.cols());
  double base_log = 0;
  Matrix base = m;
  auto renorm = [](Matrix& x, double& log_s) {
    const double s = x.cwiseAbs().maxCoeff();
    require(std::isfinite(s) && s > 0, ErrorKind::kSpectralFailure, "power underflow or overflow");
    x /= s;
    log_s += std::log(s);
  };
  renorm(base, base_log);
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) {
      result = result * base;
      log_scale += base_log;
      renorm(result, log_scale);
    }
    if (e > 1) {
      base = base * base;
      base_log *= 2;
      renorm(base, base_log);
    }
  }
  return {log_scale, result};
}

/// || cartan(m^n) / n - jordan(m) ||_inf, with m^n kept in log scale.
inline double power_consistency(const Matrix& m, int n) {
  require(n >= 1, ErrorKind::kInvalidParameter, "n must be >= 1");
  const Eigen::PartialPivLU<Matrix> lu(m);
  require(std::abs(lu.determinant()) > 0, ErrorKind::kSpectralFailure, "singular matrix");
  const Matrix m_inv = lu.inverse();
  const auto [fwd_log, fwd] = scaled_power(m, n);
  const auto [bwd_log, bwd] = scaled_power(m_inv, n);
  const Vector log_fwd = (detail::log_of(detail::singular_values(fwd)).array() + fwd_log).matrix();
  const Vector log_bwd = (detail::log_of(detail::singular_values(bwd)).array() + bwd_log).matrix();
  const double log_det = n * std::log(std::abs(lu.determinant()));
  const Vector a = detail::combine_log_spectra(log_fwd, log_bwd, log_det) / static_cast<double>(n);
  return (a - jordan(m).coords).cwiseAbs().maxCoeff();
}

}  // namespace hcx
