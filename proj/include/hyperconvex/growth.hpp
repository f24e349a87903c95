#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "core.hpp"
#include "counting.hpp"
#include "orbits.hpp"
#include "pressure.hpp"
#include "repgen.hpp"
#include "spectra.hpp"

namespace hcx {

/// A functional with h_phi = 1 together with its tangency data.
struct BoundaryPoint {
  Vector direction;   // the sampled direction u (unit norm)
  double angle = 0;   // angle of u in the dual plane (d = 3)
  double s_star = 0;  // pressure_root along u, so functional = s_star * u
  Vector functional;
  Vector gibbs_dir;  // unit normal direction of the boundary at `functional`
  double gibbs_scale = 0;  // norm of the unnormalized Gibbs average
  double entropy = 0;      // functional applied to the unnormalized Gibbs average
  int n_used = 0;
  bool extrapolation_flag = false;
};

struct DualBody {
  int dim = 0;
  std::vector<BoundaryPoint> boundary;  // ordered by angle
  std::vector<Vector> dual_cone_rays;   // extreme unit rays of the dual cone estimate
  std::vector<double> gap_angles;       // sampled directions whose root-find failed
};

namespace dual {

/// Dual-plane angle of a sum-zero vector of R^3 in the basis
/// (1, 0, -1)/sqrt 2, (1, -2, 1)/sqrt 6.
inline double angle_of(const Vector& v) {
  static const Matrix basis = cone::sum_zero_basis(3);
  const Vector c = basis.transpose() * v;
  return std::atan2(c(1), c(0));
}

inline Vector direction_at(double angle) {
  static const Matrix basis = cone::sum_zero_basis(3);
  return basis * Eigen::Vector2d(std::cos(angle), std::sin(angle));
}

struct Window {
  double lo = 0;
  double hi = 0;
};

/// Angular range of the dual cone of a d = 3 hull: functionals nonnegative
/// on every hull direction, shrunk by `inset` of its width on both sides.
inline Window dual_window(const ConeHull& hull, double inset) {
  require(hull.dim == 3, ErrorKind::kInvalidParameter, "dual window needs d = 3");
  require(!hull.hull.empty(), ErrorKind::kDegenerateCone, "empty hull");
  require(inset >= 0 && inset < 0.5, ErrorKind::kInvalidParameter, "inset must be in [0, 0.5)");
  double t_min = std::numeric_limits<double>::infinity(), t_max = -t_min;
  for (const auto& v : hull.hull) {
    t_min = std::min(t_min, angle_of(v));
    t_max = std::max(t_max, angle_of(v));
  }
  const double lo = t_max - std::numbers::pi / 2, hi = t_min + std::numbers::pi / 2;
  const double w = hi - lo;
  require(w > 0, ErrorKind::kDegenerateCone, "dual cone has empty interior");
  return {lo + inset * w, hi - inset * w};
}

// Golden-section minimum of a unimodal function on [lo, hi].
template <class F>
std::pair<double, double> golden_min(const F& f, double lo, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
  double fa = f(a), fb = f(b);
  while (hi - lo > tol) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = f(b);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

}  // namespace dual

/// Scales the direction u onto the boundary {h_phi = 1} and attaches the
/// boundary normal (Gibbs average) and the entropy of the equilibrium state.
inline BoundaryPoint boundary_point(const PeriodTable& table, const Vector& u, double tol = 1e-9, int n = 0) {
  if (n == 0) n = table.n_max;
  require(u.size() == table.dim && u.norm() > 0, ErrorKind::kInvalidParameter, "bad direction");
  BoundaryPoint b;
  b.direction = Functional(u).coeffs().normalized();
  b.angle = table.dim == 3 ? dual::angle_of(b.direction) : 0.0;
  const PressureRoot r = pressure_root(table, b.direction, tol, n);
  b.s_star = r.root;
  b.functional = r.root * b.direction;
  b.n_used = n;
  b.extrapolation_flag = r.extrapolation_flag;
  const Vector g = extrapolated_gibbs_direction(table, b.functional, n, r.extrapolation_flag);
  b.gibbs_scale = g.norm();
  b.gibbs_dir = g / b.gibbs_scale;
  b.entropy = b.functional.dot(g);
  return b;
}

inline BoundaryPoint boundary_point(const Representation& rep, const Functional& u, int n_max = 12, double tol = 1e-9) {
  return boundary_point(class_spectra(rep, n_max), u.coeffs(), tol, n_max);
}

namespace detail {

inline DualBody trace_boundary(const PeriodTable& table, const dual::Window& w, int resolution, int n, unsigned threads) {
  DualBody body;
  body.dim = 3;
  body.dual_cone_rays = {dual::direction_at(w.lo), dual::direction_at(w.hi)};
  std::vector<double> angles(static_cast<std::size_t>(resolution));
  for (int j = 0; j < resolution; ++j) angles[static_cast<std::size_t>(j)] = w.lo + (w.hi - w.lo) * j / (resolution - 1.0);
  std::vector<BoundaryPoint> points(angles.size());
  std::vector<char> ok(angles.size(), 0);
  for_each_shard(angles.size(), threads, [&](std::size_t j) {
    try {
      points[j] = boundary_point(table, dual::direction_at(angles[j]), 1e-9, n);
      ok[j] = 1;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kBracketFailure && e.kind() != ErrorKind::kNotInDualCone) throw;
    }
  });
  for (std::size_t j = 0; j < angles.size(); ++j) {
    if (ok[j]) {
      body.boundary.push_back(std::move(points[j]));
    } else {
      body.gap_angles.push_back(angles[j]);
    }
  }
  return body;
}

}  // namespace detail

/// Traces the boundary of the dual body at `resolution` directions spread
/// uniformly in angle over the dual cone estimate (5% angular inset). d = 2
/// gives the single boundary point.
inline DualBody boundary_curve(const PeriodTable& table, int resolution, int n = 0,
                               unsigned threads = default_threads()) {
  if (n == 0) n = table.n_max;
  if (table.dim == 2) {
    DualBody body;
    body.dim = 2;
    Vector u(2);
    u << 1, -1;
    body.boundary.push_back(boundary_point(table, u, 1e-9, n));
    body.dual_cone_rays.push_back(body.boundary.front().direction);
    return body;
  }
  require(table.dim == 3, ErrorKind::kInvalidParameter, "boundary curves need d <= 3");
  require(resolution >= 8, ErrorKind::kInvalidParameter, "resolution must be >= 8");
  const ConeHull hull = limit_cone(table, n);
  require(hull.area() > 0, ErrorKind::kDegenerateCone, "limit cone has empty interior; the dual body has no curved boundary");
  DualBody body = detail::trace_boundary(table, dual::dual_window(hull, 0.05), resolution, n, threads);
  require(5 * body.gap_angles.size() <= static_cast<std::size_t>(resolution), ErrorKind::kInsufficientData,
          "more than 20% of the boundary directions failed");
  return body;
}

inline DualBody boundary_curve(const Representation& rep, int resolution, int n_max = 12,
                               unsigned threads = default_threads()) {
  return boundary_curve(class_spectra(rep, n_max, threads), resolution, n_max, threads);
}

/// psi from the dual body: the minimum of phi(v) over the traced boundary.
/// A minimum attained at an end of the traced window, with v beyond the
/// normal there, is flagged, and reported as minus infinity when it is not
/// positive.
struct DualPsi {
  PsiValue value;
  bool boundary_flag = false;
  std::size_t argmin = 0;
};

inline DualPsi psi_from_duality(const DualBody& body, const Vector& v) {
  require(!body.boundary.empty(), ErrorKind::kInvalidInput, "empty dual body");
  require(v.size() == body.dim, ErrorKind::kInvalidParameter, "dimension mismatch");
  DualPsi out;
  if (body.dim == 2) {
    if (v(0) > v(1)) {
      out.value = PsiValue::finite(body.boundary.front().functional.dot(v));
    } else {
      out.value = PsiValue::minus_infinity();
      out.boundary_flag = true;
    }
    return out;
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < body.boundary.size(); ++j) {
    const double x = body.boundary[j].functional.dot(v);
    if (x < best) {
      best = x;
      out.argmin = j;
    }
  }
  // At an end of the curve, v is only outside the traced window when it lies
  // beyond that end's normal; otherwise its tangent point is still inside.
  const bool at_end = body.boundary.size() > 1 && (out.argmin == 0 || out.argmin + 1 == body.boundary.size());
  if (at_end) {
    const double g_end = dual::angle_of(body.boundary[out.argmin].gibbs_dir);
    const double g_next = dual::angle_of(body.boundary[out.argmin == 0 ? 1 : out.argmin - 1].gibbs_dir);
    const double a = dual::angle_of(v);
    out.boundary_flag = g_end > g_next ? a >= g_end : a <= g_end;
  }
  out.value = (out.boundary_flag && best <= 0) ? PsiValue::minus_infinity() : PsiValue::finite(best);
  return out;
}

struct GrowthForm {
  Vector theta;  // growth form
  double h = 0;  // its Euclidean dual norm
  Vector tau;    // unit vector maximizing theta
  Vector tau_gibbs;  // Gibbs direction of the nearest sampled point
  std::size_t index = 0;
};

/// Boundary functional of least Euclidean norm. The discrete minimum is
/// refined by a parabola through it and its two neighbours in angle.
inline GrowthForm growth_form(const DualBody& body) {
  require(!body.boundary.empty(), ErrorKind::kInvalidInput, "empty dual body");
  GrowthForm g;
  const auto& pts = body.boundary;
  for (std::size_t j = 1; j < pts.size(); ++j)
    if (pts[j].s_star < pts[g.index].s_star) g.index = j;
  g.h = pts[g.index].s_star;
  g.tau = pts[g.index].direction;
  g.tau_gibbs = pts[g.index].gibbs_dir;
  if (body.dim == 3 && g.index > 0 && g.index + 1 < pts.size()) {
    const double x0 = pts[g.index - 1].angle, x1 = pts[g.index].angle, x2 = pts[g.index + 1].angle;
    const double y0 = pts[g.index - 1].s_star, y1 = pts[g.index].s_star, y2 = pts[g.index + 1].s_star;
    const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
    const double curv = (d12 - d01) / (x2 - x0);
    if (curv > 0) {
      const double xs = 0.5 * (x0 + x1) - d01 / (2 * curv);
      const double a = std::clamp(xs, x0, x2);
      // Newton form of the interpolating parabola.
      g.h = y0 + d01 * (a - x0) + curv * (a - x0) * (a - x1);
      g.tau = dual::direction_at(a);
    }
  }
  g.theta = g.h * g.tau;
  return g;
}

/// Distance from every point of `coarse` to the polygon through the points
/// of `fine`, in the functional plane (d = 3).
inline double refinement_error(const DualBody& coarse, const DualBody& fine) {
  require(coarse.dim == 3 && fine.dim == 3, ErrorKind::kInvalidParameter, "refinement error needs d = 3");
  require(fine.boundary.size() >= 2, ErrorKind::kInsufficientData, "fine curve has fewer than two points");
  static const Matrix basis = cone::sum_zero_basis(3);
  auto plane = [&](const Vector& f) { return Eigen::Vector2d(basis.transpose() * f); };
  double err = 0;
  for (const auto& p : coarse.boundary) {
    const Eigen::Vector2d x = plane(p.functional);
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < fine.boundary.size(); ++j)
      d = std::min(d, cone::point_segment_distance(x, plane(fine.boundary[j].functional), plane(fine.boundary[j + 1].functional)));
    err = std::max(err, d);
  }
  return err;
}

struct ConcavityReport {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  std::size_t strict = 0;  // pairs whose three midpoints all have a positive margin
  double min_margin = 0;
  std::vector<double> slopes_low;   // |d psi / d angle| toward the low edge, outermost last
  std::vector<double> slopes_high;  // same toward the high edge
  bool concave = false;
  bool strictly_concave = false;  // strict on at least 90% of pairs
  bool vertical_tangent_trend = false;
};

/// Concavity of psi = psi_from_duality on `samples` unit directions spread
/// along the boundary normals (Gibbs angle interpolated linearly in the
/// boundary index), for every pair and t in {1/4, 1/2, 3/4}; plus the growth
/// of |d psi/d angle| along the last three Gibbs directions toward each edge.
inline ConcavityReport concavity_audit(const DualBody& body, int samples) {
  ConcavityReport rep;
  if (body.dim == 2) {
    rep.concave = rep.strictly_concave = rep.vertical_tangent_trend = true;
    return rep;
  }
  require(body.dim == 3, ErrorKind::kInvalidParameter, "concavity audit needs d <= 3");
  require(samples >= 16, ErrorKind::kInvalidParameter, "samples must be >= 16");
  require(body.boundary.size() >= 4, ErrorKind::kInsufficientData, "too few boundary points");
  std::vector<double> gibbs_angles;
  for (const auto& p : body.boundary) gibbs_angles.push_back(dual::angle_of(p.gibbs_dir));
  const std::size_t m = gibbs_angles.size();
  std::vector<Vector> dirs;
  for (int j = 0; j < samples; ++j) {
    const double x = static_cast<double>(m - 1) * j / (samples - 1.0);
    const std::size_t i = std::min(static_cast<std::size_t>(x), m - 2);
    const double f = x - static_cast<double>(i);
    dirs.push_back(dual::direction_at((1 - f) * gibbs_angles[i] + f * gibbs_angles[i + 1]));
  }
  auto psi = [&](const Vector& v) {
    const DualPsi p = psi_from_duality(body, v);
    return p.value.is_minus_infinity() ? -std::numeric_limits<double>::infinity() : p.value.value();
  };
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    for (std::size_t j = i + 1; j < dirs.size(); ++j) {
      ++rep.pairs;
      bool strict = true, ok = true;
      for (double t : {0.25, 0.5, 0.75}) {
        const double margin = psi(t * dirs[i] + (1 - t) * dirs[j]) - (t * psi(dirs[i]) + (1 - t) * psi(dirs[j]));
        rep.min_margin = std::min(rep.min_margin, margin);
        if (margin < -1e-6) ok = false;
        if (!(margin > 1e-12)) strict = false;
      }
      if (!ok) ++rep.violations;
      if (strict) ++rep.strict;
    }
  }
  rep.concave = rep.violations == 0;
  rep.strictly_concave = 10 * rep.strict >= 9 * rep.pairs;
  // Probe: the boundary points' Gibbs directions, where psi equals the
  // entropy, ordered by angle.
  std::vector<std::pair<double, double>> probe;
  for (std::size_t j = 0; j < body.boundary.size(); ++j) probe.emplace_back(gibbs_angles[j], psi(body.boundary[j].gibbs_dir));
  std::sort(probe.begin(), probe.end());
  auto slope = [&](std::size_t a, std::size_t b) {
    return std::abs((probe[b].second - probe[a].second) / (probe[b].first - probe[a].first));
  };
  for (std::size_t k = 3; k-- > 0;) rep.slopes_low.push_back(slope(k, k + 1));
  for (std::size_t k = m - 4; k < m - 1; ++k) rep.slopes_high.push_back(slope(k, k + 1));
  auto increasing = [](const std::vector<double>& s) { return s[0] < s[1] && s[1] < s[2]; };
  rep.vertical_tangent_trend = increasing(rep.slopes_low) && increasing(rep.slopes_high);
  return rep;
}

// ---------------------------------------------------------------------------
// Continuity under deformation

namespace detail {

// psi(v) = min over dual directions u of pressure_root(u) * u(v), and the
// growth norm h = min over u of pressure_root(u), each by golden section on
// the dual-plane angle. The boundary is convex, so both are unimodal.
struct ExactDual {
  const PeriodTable& table;
  dual::Window window;
  int n;

  double root_at(double angle) const { return pressure_root(table, dual::direction_at(angle), 1e-9, n).root; }
  double psi(const Vector& v) const {
    return dual::golden_min([&](double a) { return root_at(a) * dual::direction_at(a).dot(v); }, window.lo, window.hi, 1e-5).second;
  }
  std::pair<double, Vector> growth() const {
    const auto [a, h] = dual::golden_min([&](double x) { return root_at(x); }, window.lo, window.hi, 1e-5);
    return {h, Vector(h * dual::direction_at(a))};
  }
};

}  // namespace detail

struct ContinuityRow {
  double epsilon = 0;
  bool failed = false;
  std::string error;
  double hausdorff = 0;
  double dpsi_max = 0;
  double dh = 0;
  double dtheta = 0;  // distance of growth forms
};

struct ContinuityOptions {
  int n_max = 12;
  double inset = 0.05;
  double probe_margin = 0.1;
};

/// Rebuilds limit cone, psi at the probes and the growth form on
/// perturb(rep, epsilon, seed) for each epsilon and reports the deviation
/// from rep itself (d = 3).
inline std::vector<ContinuityRow> continuity_scan(const Representation& rep, const std::vector<double>& epsilons,
                                                  std::uint64_t seed, const std::vector<Vector>& probes,
                                                  const ContinuityOptions& opt = {},
                                                  unsigned threads = default_threads()) {
  require(rep.dim() == 3, ErrorKind::kInvalidParameter, "continuity scans need d = 3");
  require(!probes.empty(), ErrorKind::kInvalidParameter, "no probes");
  const PeriodTable base_table = class_spectra(rep, opt.n_max, threads);
  const ConeHull base_hull = limit_cone(base_table, opt.n_max);
  const bool degenerate = !(base_hull.area() > 0);
  for (const auto& p : probes) {
    require(p.size() == 3 && std::abs(p.norm() - 1) < 1e-9, ErrorKind::kInvalidParameter, "probes must be unit vectors");
    if (degenerate) {
      require(cone::angle_between(p, base_hull.hull.front()) < 1e-6, ErrorKind::kInvalidParameter,
              "probe off the (one-dimensional) limit cone");
    } else {
      require(hull_contains(base_hull, p, opt.probe_margin), ErrorKind::kInvalidParameter,
              "probe not inside the limit cone with the angular margin");
    }
  }
  const detail::ExactDual base{base_table, dual::dual_window(base_hull, opt.inset), opt.n_max};
  std::vector<double> base_psi;
  for (const auto& p : probes) base_psi.push_back(base.psi(p));
  const auto [base_h, base_theta] = base.growth();

  std::vector<ContinuityRow> rows;
  for (double eps : epsilons) {
    ContinuityRow row;
    row.epsilon = eps;
    try {
      const PeriodTable table = class_spectra(perturb(rep, eps, seed), opt.n_max, threads);
      const ConeHull hull = limit_cone(table, opt.n_max);
      row.hausdorff = hull_distance(base_hull, hull);
      const detail::ExactDual d{table, dual::dual_window(hull, opt.inset), opt.n_max};
      for (std::size_t i = 0; i < probes.size(); ++i) row.dpsi_max = std::max(row.dpsi_max, std::abs(d.psi(probes[i]) - base_psi[i]));
      const auto [h, theta] = d.growth();
      row.dh = std::abs(h - base_h);
      row.dtheta = (theta - base_theta).norm();
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

/// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorKind::kInvalidParameter, "need two equal-length samples");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * (i + j) + 1;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  require(sxx > 0 && syy > 0, ErrorKind::kInsufficientData, "constant sample");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace hcx
