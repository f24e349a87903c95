#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "core.hpp"
#include "orbits.hpp"
#include "repgen.hpp"
#include "spectra.hpp"

namespace hcx {

/// A growth-indicator value: finite, or the explicit minus-infinity marker.
class PsiValue {
 public:
  static PsiValue minus_infinity() { return PsiValue(); }
  static PsiValue finite(double v) {
    require(std::isfinite(v), ErrorKind::kInvalidInput, "growth indicator value must be finite");
    PsiValue p;
    p.value_ = v;
    return p;
  }
  bool is_minus_infinity() const { return !value_.has_value(); }
  double value() const {
    require(value_.has_value(), ErrorKind::kInvalidInput, "value is minus infinity");
    return *value_;
  }
  friend bool operator==(const PsiValue&, const PsiValue&) = default;

 private:
  std::optional<double> value_;
};

// ---------------------------------------------------------------------------
// Geometry of the Cartan subspace

namespace cone {

/// Orthonormal basis of the sum-zero subspace of R^d (d >= 2), Helmert style.
/// For d = 3 the first vector is (1, 0, -1)/sqrt 2 and the second
/// (1, -2, 1)/sqrt 6.
inline Matrix sum_zero_basis(int d) {
  require(d >= 2, ErrorKind::kInvalidParameter, "dimension must be >= 2");
  Matrix b(d, d - 1);
  if (d == 3) {
    b.col(0) << 1, 0, -1;
    b.col(1) << 1, -2, 1;
    b.col(0) /= std::sqrt(2.0);
    b.col(1) /= std::sqrt(6.0);
    return b;
  }
  b.setZero();
  for (int j = 0; j < d - 1; ++j) {
    for (int i = 0; i <= j; ++i) b(i, j) = 1;
    b(j + 1, j) = -(j + 1);
    b.col(j).normalize();
  }
  return b;
}

/// 2-D coordinates of the L1-normalized point v / |v|_1 (d = 3).
inline Eigen::Vector2d slice_point(const Vector& v) {
  const double l1 = v.lpNorm<1>();
  require(l1 > 0, ErrorKind::kInvalidInput, "zero vector has no direction");
  static const Matrix basis = sum_zero_basis(3);
  return (basis.transpose() * (v / l1)).head<2>();
}

/// Angle between two nonzero vectors of the Cartan subspace.
inline double angle_between(const Vector& a, const Vector& b) {
  const double c = a.dot(b) / (a.norm() * b.norm());
  return std::acos(std::clamp(c, -1.0, 1.0));
}

inline double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

/// Convex hull (monotone chain), counter-clockwise, collinear points dropped,
/// vertices closer than `merge` collapsed.
inline std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> pts, double merge = 1e-7) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) {
    if (pts.size() == 2 && (pts[0] - pts[1]).norm() <= merge) pts.pop_back();
    return pts;
  }
  std::vector<Eigen::Vector2d> h(2 * pts.size());
  std::size_t m = 0;
  for (const auto& p : pts) {
    while (m >= 2 && cross(h[m - 2], h[m - 1], p) <= 0) --m;
    h[m++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = m + 1; i-- > 0;) {
    while (m >= lower && cross(h[m - 2], h[m - 1], pts[i]) <= 0) --m;
    h[m++] = pts[i];
  }
  h.resize(m - 1);
  std::vector<Eigen::Vector2d> out;
  for (const auto& p : h)
    if (out.empty() || (p - out.back()).norm() > merge) out.push_back(p);
  while (out.size() > 1 && (out.front() - out.back()).norm() <= merge) out.pop_back();
  return out;
}

inline double polygon_area(const std::vector<Eigen::Vector2d>& poly) {
  if (poly.size() < 3) return 0;
  double a = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * std::abs(a);
}

inline double point_segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

/// Distance from p to a convex polygon (counter-clockwise; point and segment
/// degenerate cases allowed). Zero inside.
inline double distance_to_polygon(const Eigen::Vector2d& p, const std::vector<Eigen::Vector2d>& poly) {
  require(!poly.empty(), ErrorKind::kInvalidInput, "empty polygon");
  if (poly.size() == 1) return (p - poly[0]).norm();
  if (poly.size() >= 3) {
    bool inside = true;
    for (std::size_t i = 0; i < poly.size() && inside; ++i)
      if (cross(poly[i], poly[(i + 1) % poly.size()], p) < 0) inside = false;
    if (inside) return 0;
  }
  double d = std::numeric_limits<double>::infinity();
  const std::size_t edges = poly.size() == 2 ? 1 : poly.size();
  for (std::size_t i = 0; i < edges; ++i) d = std::min(d, point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return d;
}

/// Hausdorff distance between two convex polygons; the farthest point of a
/// convex set from another convex set is one of its vertices.
inline double hausdorff(const std::vector<Eigen::Vector2d>& a, const std::vector<Eigen::Vector2d>& b) {
  double h = 0;
  for (const auto& p : a) h = std::max(h, distance_to_polygon(p, b));
  for (const auto& p : b) h = std::max(h, distance_to_polygon(p, a));
  return h;
}

}  // namespace cone

// ---------------------------------------------------------------------------
// Cone hulls

/// Projectivized sample directions and the extreme directions of their hull.
struct ConeHull {
  int dim = 0;
  Matrix samples;            // unit directions, one per column
  std::vector<Vector> hull;  // extreme unit directions; counter-clockwise in the slice for d = 3
  double max_norm_used = 0;

  std::size_t sample_count() const { return static_cast<std::size_t>(samples.cols()); }

  /// Hull vertices in the 2-D slice coordinates (d = 3).
  std::vector<Eigen::Vector2d> slice_polygon() const {
    require(dim == 3, ErrorKind::kInvalidParameter, "slice coordinates need d = 3");
    std::vector<Eigen::Vector2d> out;
    for (const auto& v : hull) out.push_back(cone::slice_point(v));
    return out;
  }

  /// Area of the hull in the slice; zero for d = 2.
  double area() const { return dim == 3 ? cone::polygon_area(slice_polygon()) : 0.0; }
};

namespace detail {

inline ConeHull make_hull(int dim, const std::vector<double>& vectors, double max_norm) {
  ConeHull h;
  h.dim = dim;
  h.max_norm_used = max_norm;
  const Eigen::Index n = static_cast<Eigen::Index>(vectors.size()) / dim;
  h.samples = Eigen::Map<const Matrix>(vectors.data(), dim, n);
  for (Eigen::Index j = 0; j < n; ++j) h.samples.col(j).normalize();
  if (dim == 2) {
    Vector v(2);
    v << 1, -1;
    h.hull.push_back(v / std::sqrt(2.0));
  } else if (dim == 3) {
    std::vector<Eigen::Vector2d> pts(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) pts[static_cast<std::size_t>(j)] = cone::slice_point(h.samples.col(j));
    const Matrix basis = cone::sum_zero_basis(3);
    for (const auto& p : cone::convex_hull(pts)) h.hull.push_back((basis * p).normalized());
  } else {
    // Extreme points by support-function sampling along 64 fixed random
    // directions of the sum-zero subspace.
    const Matrix basis = cone::sum_zero_basis(dim);
    std::mt19937_64 gen(0x5eedULL);
    std::normal_distribution<double> normal;
    std::vector<Eigen::Index> picked;
    for (int r = 0; r < 64; ++r) {
      Vector c(dim - 1);
      for (auto& x : c) x = normal(gen);
      const Vector dir = basis * c;
      Eigen::Index best = 0;
      (dir.transpose() * h.samples).maxCoeff(&best);
      picked.push_back(best);
    }
    std::sort(picked.begin(), picked.end());
    picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
    for (auto j : picked) h.hull.push_back(h.samples.col(j));
  }
  return h;
}

}  // namespace detail

/// Limit cone: hull of the projectivized Jordan projections of every class
/// with |w| <= N (vectors of norm below 1e-6 are skipped).
inline ConeHull limit_cone(const PeriodTable& table, int N) {
  require(N >= 4 && N <= table.n_max, ErrorKind::kInvalidParameter, "N must be in [4, n_max]");
  std::vector<double> kept;
  double max_norm = 0;
  for (int n = 1; n <= N; ++n) {
    const PeriodLevel& level = table.level(n);
    for (std::size_t i = 0; i < level.size(); ++i) {
      const auto p = level.period(i);
      const double norm = p.norm();
      if (norm < 1e-6) continue;
      max_norm = std::max(max_norm, norm);
      kept.insert(kept.end(), p.data(), p.data() + p.size());
    }
  }
  require(!kept.empty(), ErrorKind::kDegenerateCone, "every Jordan projection vanishes");
  return detail::make_hull(table.dim, kept, max_norm);
}

inline ConeHull limit_cone(const Representation& rep, int N, unsigned threads = default_threads()) {
  require(N >= 4, ErrorKind::kInvalidParameter, "N must be >= 4");
  return limit_cone(class_spectra(rep, N, threads), N);
}

/// Asymptotic cone: hull of the projectivized Cartan projections of the
/// reduced words with |w| <= N and |a| >= norm_floor.
inline ConeHull asymptotic_cone(const ElementTable& table, int N, double norm_floor) {
  require(N >= 4 && N <= table.max_len, ErrorKind::kInvalidParameter, "N must be in [4, max_len]");
  require(norm_floor > 0, ErrorKind::kInvalidParameter, "norm_floor must be positive");
  std::vector<double> kept;
  double max_norm = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.lengths[i] > N) continue;
    const auto a = table.value(i);
    const double norm = a.norm();
    if (norm < norm_floor) continue;
    max_norm = std::max(max_norm, norm);
    kept.insert(kept.end(), a.data(), a.data() + a.size());
  }
  require(!kept.empty(), ErrorKind::kInsufficientData, "no Cartan projection above the norm floor");
  return detail::make_hull(table.dim, kept, max_norm);
}

inline ConeHull asymptotic_cone(const Representation& rep, int N, double norm_floor,
                                unsigned threads = default_threads()) {
  require(N >= 4, ErrorKind::kInvalidParameter, "N must be >= 4");
  return asymptotic_cone(element_cartan(rep, N, threads), N, norm_floor);
}

/// Hausdorff distance of two projectivized hulls in the L1-normalized slice.
/// For d = 2 both hulls are the single chamber direction.
inline double hull_distance(const ConeHull& a, const ConeHull& b) {
  require(a.dim == b.dim, ErrorKind::kInvalidParameter, "hull dimensions differ");
  if (a.dim == 2) return 0;
  if (a.dim == 3) return cone::hausdorff(a.slice_polygon(), b.slice_polygon());
  // Vertex-set Hausdorff distance of the L1-normalized extreme points.
  auto l1 = [](const Vector& v) { return Vector(v / v.lpNorm<1>()); };
  auto one_side = [&](const ConeHull& x, const ConeHull& y) {
    double h = 0;
    for (const auto& p : x.hull) {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& q : y.hull) d = std::min(d, (l1(p) - l1(q)).norm());
      h = std::max(h, d);
    }
    return h;
  };
  return std::max(one_side(a, b), one_side(b, a));
}

/// True if the direction v lies in the hull. For d = 3 the projectivized cone
/// is an interval of angles in the Cartan plane; `margin` shrinks it on both
/// sides. For d = 2 any chamber-ordered nonzero v.
inline bool hull_contains(const ConeHull& hull, const Vector& v, double margin = 0) {
  require(hull.dim == v.size(), ErrorKind::kInvalidParameter, "dimension mismatch");
  if (hull.dim == 2) return v(0) > v(1);
  require(hull.dim == 3, ErrorKind::kInvalidParameter, "containment needs d <= 3");
  static const Matrix basis = cone::sum_zero_basis(3);
  auto angle = [&](const Vector& x) {
    const Vector c = basis.transpose() * x;
    return std::atan2(c(1), c(0));
  };
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& h : hull.hull) {
    lo = std::min(lo, angle(h));
    hi = std::max(hi, angle(h));
  }
  const double t = angle(v);
  return hi > lo && t >= lo + margin && t <= hi - margin;
}

// ---------------------------------------------------------------------------
// Critical exponents by direct counting

enum class CountMode { kConjugacy, kElement };

inline const char* to_string(CountMode m) { return m == CountMode::kConjugacy ? "conjugacy" : "element"; }

struct ExponentEstimate {
  double value = 0;
  double std_error = 0;
  CountMode mode = CountMode::kConjugacy;
  double saturation = 0;           // largest threshold covered by lengths <= N
  std::vector<double> thresholds;  // full grid
  std::vector<double> counts;      // #{phi <= threshold}
  std::size_t fit_start = 0;       // first grid index used by the fit
};

namespace detail {

constexpr int kGridPoints = 64;
constexpr double kTransientFraction = 0.2;

struct Fit {
  double slope = 0;
  double std_error = 0;
};

inline Fit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  require(n >= 3, ErrorKind::kInsufficientData, "too few regression points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0, ErrorKind::kInsufficientData, "degenerate regression grid");
  const double slope = sxy / sxx;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - my - slope * (x[i] - mx);
    ssr += r * r;
  }
  return {slope, std::sqrt(ssr / static_cast<double>(n - 2) / sxx)};
}

// Least squares for log N(s) = log Ei(h s) + c, the counting law of
// primitive closed orbits. c is profiled out; h by golden section over the
// normalized variable x = s / x_scale so the estimate is scale-equivariant.
inline Fit ei_fit(const std::vector<double>& s, const std::vector<double>& y, double x_scale) {
  const std::size_t n = s.size();
  require(n >= 3, ErrorKind::kInsufficientData, "too few regression points");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = s[i] / x_scale;
  const double x_min = *std::min_element(x.begin(), x.end());
  auto ssr = [&](double h) {
    double c = 0;
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = y[i] - std::log(std::expint(h * x[i]));
      c += r[i];
    }
    c /= n;
    double acc = 0;
    for (double v : r) acc += (v - c) * (v - c);
    return acc;
  };
  // Ei is positive beyond 0.3725; keep h x_min above 0.5.
  double lo = 0.5 / x_min, hi = 200.0;
  require(lo < hi, ErrorKind::kInsufficientData, "regression grid too close to zero");
  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = ssr(a), fb = ssr(b);
  while (hi - lo > 1e-13 * hi) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = ssr(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = ssr(b);
    }
  }
  const double h = 0.5 * (lo + hi);
  // Linearized standard error: columns d/dh log Ei(h x) = e^{hx} / (h Ei(hx)) and 1.
  Matrix jac(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    jac(static_cast<Eigen::Index>(i), 0) = std::exp(h * x[i]) / (h * std::expint(h * x[i]));
    jac(static_cast<Eigen::Index>(i), 1) = 1;
  }
  const double sigma2 = ssr(h) / static_cast<double>(n - 2);
  const Matrix cov = sigma2 * (jac.transpose() * jac).inverse();
  return {h / x_scale, std::sqrt(std::max(0.0, cov(0, 0))) / x_scale};
}

// Uniform grid from the smallest value to `saturation`, with the cumulative
// counts of the sorted values.
inline ExponentEstimate count_on_grid(std::vector<double> values, double saturation, CountMode mode) {
  require(!values.empty(), ErrorKind::kInsufficientData, "nothing to count");
  std::sort(values.begin(), values.end());
  const double lo = values.front();
  require(saturation > lo, ErrorKind::kInsufficientData, "saturation threshold below the smallest value");
  ExponentEstimate e;
  e.mode = mode;
  e.saturation = saturation;
  for (int j = 0; j < kGridPoints; ++j) {
    const double s = j == kGridPoints - 1 ? saturation : lo + (saturation - lo) * j / (kGridPoints - 1.0);
    e.thresholds.push_back(s);
    e.counts.push_back(static_cast<double>(std::upper_bound(values.begin(), values.end(), s) - values.begin()));
  }
  e.fit_start = static_cast<std::size_t>(std::ceil(kTransientFraction * kGridPoints));
  return e;
}

inline void require_positive(const std::vector<double>& v, const char* what) {
  for (double x : v) require(x > 0, ErrorKind::kNotInDualCone, std::string("functional is not positive on every ") + what);
}

}  // namespace detail

/// Growth rate of #{[w] : |w| <= N, phi(lambda) <= s} in s (conjugacy mode).
/// The grid ends at the smallest value at cyclic length N.
inline ExponentEstimate critical_exponent_direct(const PeriodTable& table, const Vector& phi, int N) {
  require(N >= 6 && N <= table.n_max, ErrorKind::kInvalidParameter, "N must be in [6, n_max]");
  std::vector<double> values;
  for (int n = 1; n <= N; ++n) {
    const auto v = table.level(n).values(phi);
    detail::require_positive(v, "period");
    values.insert(values.end(), v.begin(), v.end());
  }
  const auto top = table.level(N).values(phi);
  ExponentEstimate e = detail::count_on_grid(std::move(values), *std::min_element(top.begin(), top.end()),
                                             CountMode::kConjugacy);
  std::vector<double> s, y;
  for (std::size_t j = e.fit_start; j < e.thresholds.size(); ++j) {
    s.push_back(e.thresholds[j]);
    y.push_back(std::log(e.counts[j]));
  }
  const detail::Fit f = detail::ei_fit(s, y, e.saturation);
  e.value = f.slope;
  e.std_error = f.std_error;
  return e;
}

/// Growth rate of #{w : |w| <= N, phi(a) <= s} in s (element mode), by a
/// linear fit of the log count.
inline ExponentEstimate critical_exponent_direct(const ElementTable& table, const Vector& phi, int N) {
  require(N >= 6 && N <= table.max_len, ErrorKind::kInvalidParameter, "N must be in [6, max_len]");
  require(phi.size() == table.dim, ErrorKind::kInvalidParameter, "functional dimension mismatch");
  std::vector<double> values;
  double saturation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.lengths[i] > N) continue;
    const double v = phi.dot(table.value(i));
    require(v > 0, ErrorKind::kNotInDualCone, "functional is not positive on every Cartan projection");
    values.push_back(v);
    if (table.lengths[i] == N) saturation = std::min(saturation, v);
  }
  ExponentEstimate e = detail::count_on_grid(std::move(values), saturation, CountMode::kElement);
  std::vector<double> s, y;
  for (std::size_t j = e.fit_start; j < e.thresholds.size(); ++j) {
    s.push_back(e.thresholds[j]);
    y.push_back(std::log(e.counts[j]));
  }
  const detail::Fit f = detail::linear_fit(s, y);
  e.value = f.slope;
  e.std_error = f.std_error;
  return e;
}

inline ExponentEstimate critical_exponent_direct(const Representation& rep, const Functional& phi, int N, CountMode mode,
                                                 unsigned threads = default_threads()) {
  require(N >= 6, ErrorKind::kInvalidParameter, "N must be >= 6");
  if (mode == CountMode::kConjugacy) return critical_exponent_direct(class_spectra(rep, N, threads), phi.coeffs(), N);
  return critical_exponent_direct(element_cartan(rep, N, threads), phi.coeffs(), N);
}

// ---------------------------------------------------------------------------
// Growth indicator by cone counting

enum class PsiMethod { kDirectCount, kDuality };

inline const char* to_string(PsiMethod m) { return m == PsiMethod::kDirectCount ? "direct-count" : "duality"; }

struct GrowthIndicatorSample {
  Vector direction;
  PsiValue value;
  PsiMethod method = PsiMethod::kDirectCount;
  int max_len = 0;
  double half_angle = 0;
  double std_error = 0;
};

/// Growth rate in s of #{w : |w| <= N, a(w) within `half_angle` of v,
/// |a(w)| <= s}. The grid starts at the smallest norm inside the cone and
/// ends at the smallest norm at word length N.
inline GrowthIndicatorSample growth_indicator_direct(const ElementTable& table, const Vector& v, double half_angle, int N) {
  require(v.size() == table.dim, ErrorKind::kInvalidParameter, "direction dimension mismatch");
  require(std::abs(v.norm() - 1) < 1e-9, ErrorKind::kInvalidParameter, "direction must have unit norm");
  require(half_angle > 0 && half_angle <= std::numbers::pi / 4, ErrorKind::kInvalidParameter,
          "half_angle must be in (0, pi/4]");
  require(N >= 4 && N <= table.max_len, ErrorKind::kInvalidParameter, "N must be in [4, max_len]");
  GrowthIndicatorSample out;
  out.direction = v;
  out.method = PsiMethod::kDirectCount;
  out.max_len = N;
  out.half_angle = half_angle;
  const double cos_half = std::cos(half_angle);
  std::vector<double> inside;
  double saturation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.lengths[i] > N) continue;
    const auto a = table.value(i);
    const double norm = a.norm();
    if (table.lengths[i] == N) saturation = std::min(saturation, norm);
    if (norm > 0 && a.dot(v) >= cos_half * norm) inside.push_back(norm);
  }
  if (inside.empty()) {
    out.value = PsiValue::minus_infinity();
    return out;
  }
  const ExponentEstimate e = detail::count_on_grid(std::move(inside), saturation, CountMode::kElement);
  std::vector<double> s, y;
  for (std::size_t j = e.fit_start; j < e.thresholds.size(); ++j) {
    if (e.counts[j] <= 0) continue;
    s.push_back(e.thresholds[j]);
    y.push_back(std::log(e.counts[j]));
  }
  const detail::Fit f = detail::linear_fit(s, y);
  out.value = PsiValue::finite(f.slope);
  out.std_error = f.std_error;
  return out;
}

inline GrowthIndicatorSample growth_indicator_direct(const Representation& rep, const Vector& v, double half_angle, int N,
                                                     unsigned threads = default_threads()) {
  require(N >= 4, ErrorKind::kInvalidParameter, "N must be >= 4");
  return growth_indicator_direct(element_cartan(rep, N, threads), v, half_angle, N);
}

// ---------------------------------------------------------------------------
// Orbit counting ratio

struct RatioRow {
  double t = 0;
  double ratio = 0;
};

struct OrbitCountRatio {
  double h = 0;
  std::vector<RatioRow> rows;
};

/// h t e^{-h t} #{[w] : lambda_i - lambda_{i+1} <= t} on the counting grid,
/// with h the conjugacy-mode exponent of the i-th simple root (1-based i).
inline OrbitCountRatio orbit_count_ratio(const PeriodTable& table, int i, int N) {
  require(i >= 1 && i < table.dim, ErrorKind::kInvalidParameter, "root index out of range");
  const Vector phi = Functional::simple_root(table.dim, i).coeffs();
  const ExponentEstimate e = critical_exponent_direct(table, phi, N);
  OrbitCountRatio out;
  out.h = e.value;
  for (std::size_t j = 0; j < e.thresholds.size(); ++j) {
    const double t = e.thresholds[j];
    out.rows.push_back({t, e.value * t * std::exp(-e.value * t) * e.counts[j]});
  }
  return out;
}

inline OrbitCountRatio orbit_count_ratio(const Representation& rep, int i, int N, unsigned threads = default_threads()) {
  require(i >= 1 && i < rep.dim(), ErrorKind::kInvalidParameter, "root index out of range");
  require(N >= 6, ErrorKind::kInvalidParameter, "N must be >= 6");
  return orbit_count_ratio(class_spectra(rep, N, threads), i, N);
}

// ---------------------------------------------------------------------------
// Spectral sanity measures over the class table

/// For each simple root i: min over classes |w| <= N of
/// (lambda_i - lambda_{i+1}) / |lambda|, skipping vanishing lambda.
inline Vector wall_margins(const PeriodTable& table, int N) {
  require(N >= 1 && N <= table.n_max, ErrorKind::kInvalidParameter, "N outside the table");
  Vector out = Vector::Constant(table.dim - 1, std::numeric_limits<double>::infinity());
  for (int n = 1; n <= N; ++n) {
    const PeriodLevel& level = table.level(n);
    for (std::size_t c = 0; c < level.size(); ++c) {
      const auto p = level.period(c);
      const double norm = p.norm();
      if (norm < 1e-6) continue;
      for (int i = 0; i + 1 < table.dim; ++i) out(i) = std::min(out(i), (p(i) - p(i + 1)) / norm);
    }
  }
  return out;
}

struct RatioBounds {
  double min = 0;
  double max = 0;
};

/// min and max over classes |w| <= N of phi(lambda) / |w|.
inline RatioBounds period_ratio_bounds(const PeriodTable& table, const Vector& phi, int N) {
  require(N >= 1 && N <= table.n_max, ErrorKind::kInvalidParameter, "N outside the table");
  RatioBounds b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int n = 1; n <= N; ++n) {
    for (double v : table.level(n).values(phi)) {
      b.min = std::min(b.min, v / n);
      b.max = std::max(b.max, v / n);
    }
  }
  return b;
}

}  // namespace hcx
