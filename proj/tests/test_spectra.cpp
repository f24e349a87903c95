#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "hyperconvex/spectra.hpp"
#include "hyperconvex/words.hpp"

using namespace hcx;

namespace {

// Cyclic Jacobi eigenvalue iteration for a symmetric matrix.
std::vector<double> jacobi_eigenvalues(Matrix a) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30 * a.squaredNorm()) break;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        const double t = (theta >= 0 ? 1 : -1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

Vector cartan_oracle(const Matrix& m) {
  const auto ev = jacobi_eigenvalues(m.transpose() * m);
  Vector out(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out(i) = 0.5 * std::log(ev[static_cast<std::size_t>(i)]);
  out.array() -= out.mean();
  return out;
}

Matrix random_matrix(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Matrix m(d, d);
  for (int i = 0; i < d * d; ++i) m.data()[i] = n(rng);
  return m;
}

}  // namespace

TEST(Cartan, MatchesJacobiOracle) {
  std::mt19937_64 rng(5);
  for (int d : {2, 3, 4, 5})
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix m = random_matrix(d, rng);
      const CartanVector a = cartan(m);
      EXPECT_TRUE(a.in_chamber());
      EXPECT_LT((a.coords - cartan_oracle(m)).cwiseAbs().maxCoeff(), 1e-9) << d;
    }
}

TEST(Cartan, InversePairAgreesAndIsOpposed) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = random_matrix(3, rng);
    const Matrix inv = m.inverse();
    EXPECT_LT((cartan(m, inv).coords - cartan(m).coords).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((cartan(inv).coords - opposition(cartan(m).coords)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Cartan, LongWordsKeepSmallSingularValues) {
  // Top value from m, bottom value from the inverse, middle from the sum.
  const Representation rep = perturb(sym_power_embed(make_schottky({2, 2}, {0, std::numbers::pi / 2}), 3), 0.05, 2);
  Word w;
  for (int i = 0; i < 12; ++i) w.letters.push_back(i % 2 ? 2 : 0);
  const Matrix m = evaluate(rep, w), inv = evaluate(rep, inverse(w));
  const double top = 0.5 * std::log(jacobi_eigenvalues(m.transpose() * m)[0]);
  const double bottom = -0.5 * std::log(jacobi_eigenvalues(inv.transpose() * inv)[0]);
  const CartanVector a = cartan(m, inv, 0.0);
  // The oracle squares entries of size e^20, so it is only good to ~1e-8.
  EXPECT_NEAR(a[0], top, 1e-7);
  EXPECT_NEAR(a[2], bottom, 1e-7);
  EXPECT_NEAR(a[1], -(top + bottom), 1e-7);
  // sigma_min / sigma_max is below machine epsilon.
  EXPECT_GT(a[0] - a[2], -std::log(std::numeric_limits<double>::epsilon()));
}

TEST(Jordan, ConjugatedDiagonal) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix p = random_matrix(3, rng);
    const Vector diag = Eigen::Vector3d(4.0, -0.5, 0.5);
    const Matrix m = p * diag.asDiagonal() * p.inverse();
    const CartanVector l = jordan(m);
    Vector expect = Eigen::Vector3d(std::log(4.0), std::log(0.5), std::log(0.5));
    expect.array() -= expect.mean();
    EXPECT_LT((l.coords - expect).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((jordan(m, p * diag.cwiseInverse().asDiagonal() * p.inverse()).coords - expect).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Jordan, TwoByTwoTrace) {
  Matrix m(2, 2);
  m << 3, 1, 2, 1;  // det 1, trace 4
  const double r = (4 + std::sqrt(12.0)) / 2;
  const CartanVector l = jordan(m);
  EXPECT_NEAR(l[0], std::log(r), 1e-12);
  EXPECT_NEAR(l[1], -std::log(r), 1e-12);
  EXPECT_NEAR(gap_ratio(m, 1), 2.0, 1e-12);
}

TEST(Jordan, RotationHasZeroSpectrum) {
  const CartanVector l = jordan(rotation2(0.7));
  EXPECT_NEAR(l.norm(), 0.0, 1e-12);
  EXPECT_FALSE(is_proximal(rotation2(0.7)));
  EXPECT_THROW(gap_ratio(rotation2(0.7), 1), Error);
}

TEST(Jordan, PowerConsistency) {
  const Representation rep = perturb(sym_power_embed(make_schottky({2, 2}, {0, std::numbers::pi / 2}), 3), 0.05, 1);
  const Matrix m = evaluate(rep, parse_word("a b a^-1 b", rep.labels()));
  EXPECT_LT(power_consistency(m, 64), power_consistency(m, 4));
  EXPECT_LT(power_consistency(m, 1000), 0.01);
  EXPECT_LT(power_consistency(m, 100000), 1e-4);
}

TEST(Proximal, Detection) {
  EXPECT_TRUE(is_proximal(Vector(Eigen::Vector3d(2, 1, 0.5)).asDiagonal().toDenseMatrix()));
  EXPECT_FALSE(is_proximal(Vector(Eigen::Vector3d(2, -2, 0.25)).asDiagonal().toDenseMatrix()));
  Matrix m = Matrix::Zero(3, 3);
  m.topLeftCorner(2, 2) = 2 * rotation2(1.0);
  m(2, 2) = 0.25;
  EXPECT_FALSE(is_proximal(m));
}

TEST(ScaledPower, MatchesDirectPower) {
  Matrix m(2, 2);
  m << 1.2, 0.3, -0.4, 0.9;
  const auto [log_s, normed] = scaled_power(m, 7);
  Matrix direct = Matrix::Identity(2, 2);
  for (int i = 0; i < 7; ++i) direct = direct * m;
  EXPECT_TRUE((normed * std::exp(log_s)).isApprox(direct, 1e-12));
}

TEST(Functional, CentersAndEvaluates) {
  const Functional f{2.0, 1.0, 0.0};
  EXPECT_NEAR(f.coeffs().sum(), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(f(Vector(Eigen::Vector3d(1, 0, -1))), 2.0);
  EXPECT_TRUE(Functional::simple_root(3, 2).coeffs().isApprox(Vector(Eigen::Vector3d(0, 1, -1))));
  EXPECT_TRUE(Functional::first_minus_last(3).coeffs().isApprox(Vector(Eigen::Vector3d(1, 0, -1))));
  EXPECT_DOUBLE_EQ((f * 2.0).norm(), 2 * f.norm());
  EXPECT_THROW(Functional::simple_root(3, 3), Error);
  EXPECT_EQ(opposition(Vector(Eigen::Vector3d(3, 1, -4))), Vector(Eigen::Vector3d(4, -1, -3)));
}
