#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hyperconvex/orbits.hpp"
#include "hyperconvex/pressure.hpp"

using namespace hcx;

namespace {

Representation s2() { return make_schottky({2, 2}, {0, std::numbers::pi / 2}); }

Vector v1(double x) { return Vector::Constant(1, x); }

struct Tables {
  PeriodTable hook = word_length_periods(2, 12);
  PeriodTable s2_table = class_spectra(s2(), 10);
  PeriodTable p3_table = class_spectra(perturb(sym_power_embed(s2(), 3), 0.05, 1), 8);
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

TEST(RootFinder, RootOnADyadicBracketEnd) {
  // The doubling bracket lands on t = 1 with the value at or just above zero.
  EXPECT_NEAR(detail::monotone_root([](double t) { return 1.0 - t; }, 1e-10), 1.0, 1e-10);
  EXPECT_NEAR(detail::monotone_root([](double t) { return 1.0 + 0x1p-40 - t; }, 1e-10), 1.0 + 0x1p-40, 1e-10);
  EXPECT_NEAR(detail::monotone_root([](double t) { return std::exp(-t) - 0.3; }, 1e-12), -std::log(0.3), 1e-12);
}

TEST(LevelPressure, WordLengthClosedForm) {
  // Every periodic point of period n has weight e^{-t n}.
  for (int n = 2; n <= 12; ++n)
    for (double t : {0.0, 0.5, 2.0}) {
      const double expect = std::log(cyclically_reduced_count(2, n)) / n - t;
      EXPECT_NEAR(level_pressure(tables().hook, v1(1), t, n), expect, 1e-12);
    }
}

TEST(LevelPressure, StrictlyDecreasingInT) {
  const Vector phi = Functional::first_minus_last(2).coeffs();
  for (int n = 2; n <= 10; ++n) {
    double prev = level_pressure(tables().s2_table, phi, 0, n);
    for (double t = 0.1; t < 2; t += 0.1) {
      const double p = level_pressure(tables().s2_table, phi, t, n);
      EXPECT_LT(p, prev);
      prev = p;
    }
  }
}

TEST(LogPartition, StableForHugeExponents) {
  const std::vector<double> lw{0.0, std::log(2.0)}, vals{-1000.0, -1000.0};
  EXPECT_NEAR(detail::log_partition(lw, vals, 1.0), 1000 + std::log(3.0), 1e-9);
  EXPECT_EQ(detail::log_partition(std::vector<double>{}, std::vector<double>{}, 1.0), -INFINITY);
}

TEST(LogPartition, IndependentOfThreadCount) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 5);
  std::vector<double> lw(50000), vals(50000);
  for (auto& x : lw) x = std::log(1 + std::floor(u(rng)));
  for (auto& x : vals) x = u(rng);
  const double one = detail::log_partition(lw, vals, 0.7, 1);
  EXPECT_EQ(detail::log_partition(lw, vals, 0.7, 4), one);
  EXPECT_EQ(detail::log_partition(lw, vals, 0.7, 8), one);
}

TEST(PressureRoot, FreeGroupEntropy) {
  const PressureRoot r = pressure_root(tables().hook, v1(1));
  EXPECT_NEAR(r.root, std::log(3.0), 1e-3);
  EXPECT_EQ(r.n_max, 12);
  // Scaling the functional by c divides the root by c.
  EXPECT_NEAR(pressure_root(tables().hook, v1(2.5), 1e-10).root * 2.5, pressure_root(tables().hook, v1(1), 1e-10).root, 1e-8);
}

TEST(PressureRoot, HomogeneousOnSchottky) {
  const Vector phi = Functional::first_minus_last(2).coeffs();
  const PressureRoot r = pressure_root(tables().s2_table, phi, 1e-10);
  // Periods per letter lie in [lo, hi], so the root lies in [log 3 / hi, log 3 / lo] up to truncation.
  double lo = INFINITY, hi = 0;
  for (int n = 1; n <= 10; ++n)
    for (double v : tables().s2_table.level(n).values(phi)) {
      lo = std::min(lo, v / n);
      hi = std::max(hi, v / n);
    }
  EXPECT_GT(r.root, 0.98 * std::log(3.0) / hi);
  EXPECT_LT(r.root, 1.02 * std::log(3.0) / lo);
  const PressureRoot r3 = pressure_root(tables().s2_table, Vector(3 * phi), 1e-10);
  EXPECT_NEAR(r3.root * 3, r.root, 1e-8);
  EXPECT_EQ(r3.extrapolation_flag, r.extrapolation_flag);
  // The root is a zero of the pressure used.
  EXPECT_NEAR(ExtrapolatedPressure(tables().s2_table, phi, 10, r.extrapolation_flag)(r.root), 0.0, 1e-8);
}

TEST(PressureRoot, Preconditions) {
  const Vector phi = Functional::first_minus_last(2).coeffs();
  EXPECT_THROW(pressure_root(tables().s2_table, phi, 0.0), Error);
  EXPECT_THROW(pressure_root(tables().s2_table, phi, 1e-6, 11), Error);
  try {
    pressure_root(tables().s2_table, Vector(-phi));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotInDualCone);
  }
}

TEST(PressureTable, ExtrapolatesLevels) {
  const PressureTable t = pressure_table(tables().hook, v1(1), 0.3, "hook");
  EXPECT_EQ(t.levels.size(), 11u);
  EXPECT_EQ(t.weight_id, "hook");
  const double expect = t.extrapolation_flag ? t.levels.at(12) : 12 * t.levels.at(12) - 11 * t.levels.at(11);
  EXPECT_DOUBLE_EQ(t.extrapolated, expect);
  EXPECT_NEAR(t.extrapolated, std::log(3.0) - 0.3, 1e-3);
}

TEST(Gibbs, DerivativeMatchesCentralDifference) {
  const PeriodTable& pt = tables().p3_table;
  const Vector phi0 = Vector(Eigen::Vector3d(1, 0, -1)) * pressure_root(pt, Vector(Eigen::Vector3d(1, 0, -1))).root;
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 5; ++trial) {
    const Vector phi1 = Functional(Vector(Eigen::Vector3d(n(rng), n(rng), n(rng)))).coeffs();
    const DerivativeCheck c = pressure_derivative_check(pt, phi0, phi1, 8, 1e-4);
    EXPECT_LT(std::abs(c.analytic - c.numeric), 1e-6 * (1 + std::abs(c.analytic)));
  }
  EXPECT_THROW(pressure_derivative_check(pt, phi0, phi0, 3, 1e-4), Error);
  EXPECT_THROW(pressure_derivative_check(pt, phi0, phi0, 8, 1.0), Error);
}

TEST(Gibbs, WordLengthDirectionIsOne) {
  EXPECT_NEAR(gibbs_direction(tables().hook, v1(std::log(3.0)), 10)(0), 1.0, 1e-12);
  EXPECT_NEAR(extrapolated_gibbs_direction(tables().hook, v1(std::log(3.0)), 10, false)(0), 1.0, 1e-12);
}

TEST(Entropy, MaximalEntropyCase) {
  const double root = pressure_root(tables().hook, v1(1), 1e-12).root;
  EXPECT_NEAR(entropy_of_state(tables().hook, v1(root), 12), std::log(3.0), 1e-3);
}

TEST(Entropy, SchottkyBoundedByTopologicalEntropy) {
  const Vector phi = Functional::first_minus_last(2).coeffs();
  const PeriodTable& pt = tables().s2_table;
  const double root = pressure_root(pt, phi, 1e-12).root;
  const double h = entropy_of_state(pt, Vector(root * phi), 10);
  EXPECT_GT(h, 0);
  EXPECT_LE(h, level_pressure(pt, phi, 0, 10) + 0.05);
  try {
    entropy_of_state(pt, Vector(2 * root * phi), 10);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNotOnBoundary);
  }
}

TEST(Convexity, SecondDifferencePositive) {
  const PeriodTable& pt = tables().p3_table;
  const Vector phi0 = Vector(Eigen::Vector3d(1, 0, -1)) * pressure_root(pt, Vector(Eigen::Vector3d(1, 0, -1))).root;
  Vector phi1 = Functional{0.2, -1.0, 0.8}.coeffs();
  const Vector g = gibbs_direction(pt, phi0, 8);
  // Make the Gibbs mean of phi1 vanish by removing its component along phi0.
  phi1 -= (phi1.dot(g) / phi0.dot(g)) * phi0;
  std::vector<double> p;
  for (int j = -2; j <= 2; ++j) p.push_back(level_pressure(pt, Vector(phi0 + 0.1 * j * phi1), 1.0, 8));
  for (std::size_t j = 1; j + 1 < p.size(); ++j) EXPECT_GT(p[j - 1] - 2 * p[j] + p[j + 1], 0);
}
