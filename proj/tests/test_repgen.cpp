#include <cmath>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "hyperconvex/repgen.hpp"
#include "hyperconvex/spectra.hpp"

using namespace hcx;

namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Representation s2() { return make_schottky({2, 2}, {0, std::numbers::pi / 2}); }

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::kInternal;
}

}  // namespace

TEST(Representation, RescalesToDeterminantOne) {
  Representation rep({m2(2, 0, 0, 2), m2(1, 1, 0, 4)}, {"a", "b"});
  for (const auto& g : rep.generators()) EXPECT_NEAR(g.determinant(), 1.0, 1e-14);
  EXPECT_NEAR(rep.generators()[0](0, 0), 1.0, 1e-15);
  for (int i = 0; i < 2; ++i)
    EXPECT_TRUE((rep.generators()[i] * rep.inverses()[i]).isIdentity(1e-12));
}

TEST(Representation, NegativeDeterminantOddDimension) {
  Matrix a = -Matrix::Identity(3, 3) * 2.0;
  Representation rep({a, Matrix::Identity(3, 3)}, {"a", "b"});
  EXPECT_NEAR(rep.generators()[0].determinant(), 1.0, 1e-14);
  EXPECT_NEAR(rep.generators()[0](0, 0), 1.0, 1e-14);
}

TEST(Representation, RejectsBadInput) {
  EXPECT_EQ(kind_of([] { Representation({m2(1, 0, 0, 1)}, {"a"}); }), ErrorKind::kInvalidParameter);
  EXPECT_EQ(kind_of([] { Representation({m2(1, 0, 0, 1), m2(1, 0, 0, 1)}, {"a", "a"}); }), ErrorKind::kInvalidParameter);
  EXPECT_EQ(kind_of([] { Representation({m2(1, 0, 0, 1), m2(1, 0, 0, 1)}, {"a", "b c"}); }), ErrorKind::kInvalidParameter);
  EXPECT_EQ(kind_of([] { Representation({m2(1, 0, 0, 1), m2(1, 2, 2, 4)}, {"a", "b"}); }), ErrorKind::kPerturbationFailed);
  EXPECT_EQ(kind_of([] { Representation({m2(1, 0, 0, 1), m2(0, 1, 1, 0)}, {"a", "b"}); }), ErrorKind::kPerturbationFailed);
  EXPECT_EQ(kind_of([] { Representation({m2(1, 0, 0, 1), Matrix::Identity(3, 3)}, {"a", "b"}); }), ErrorKind::kInvalidParameter);
}

TEST(Schottky, TranslationLengthsAndAxes) {
  const Representation rep = make_schottky({2, 3}, {0.3, 1.9});
  EXPECT_NEAR(rep.generators()[0].trace(), 2 * std::cosh(1.0), 1e-12);
  EXPECT_NEAR(rep.generators()[1].trace(), 2 * std::cosh(1.5), 1e-12);
  // Generators are symmetric (hyperbolic translations through the origin).
  for (const auto& g : rep.generators()) EXPECT_TRUE(g.isApprox(g.transpose(), 1e-14));
  const CartanVector l = jordan(rep.generators()[0]);
  EXPECT_NEAR(l[0] - l[1], 2.0, 1e-12);
}

TEST(Schottky, Preconditions) {
  EXPECT_THROW(make_schottky({2}, {0}), Error);
  EXPECT_THROW(make_schottky({2, -1}, {0, 1}), Error);
  EXPECT_THROW(make_schottky({2, 2}, {0, std::numbers::pi}), Error);
}

TEST(SymPower, ExplicitDegreeTwo) {
  const double a = 1.3, b = -0.4, c = 0.7, d = 2.1;
  const Matrix s = sym_power(m2(a, b, c, d), 3);
  // Rows: (ax + by)^2, (ax + by)(cx + dy), (cx + dy)^2 in the basis x^2, xy, y^2.
  Matrix expect(3, 3);
  expect << a * a, 2 * a * b, b * b,
            a * c, a * d + b * c, b * d,
            c * c, 2 * c * d, d * d;
  EXPECT_TRUE(s.isApprox(expect, 1e-14));
  Matrix unipotent(3, 3);
  unipotent << 1, 2, 1, 0, 1, 1, 0, 0, 1;
  EXPECT_EQ(sym_power(m2(1, 1, 0, 1), 3), unipotent);
  EXPECT_EQ(sym_power(Matrix::Identity(2, 2), 5), Matrix::Identity(5, 5));
}

TEST(SymPower, DiagonalAndHomomorphism) {
  const Matrix s = sym_power(m2(2, 0, 0, 0.5), 4);
  EXPECT_TRUE(s.isApprox(Vector(Eigen::Vector4d(8, 2, 0.5, 0.125)).asDiagonal().toDenseMatrix(), 1e-14));
  const Matrix x = m2(1.1, 0.3, -0.2, 0.9), y = m2(0.5, -1, 2, 0.4);
  for (int d : {2, 3, 5})
    EXPECT_TRUE(sym_power(x * y, d).isApprox(sym_power(x, d) * sym_power(y, d), 1e-12)) << d;
  EXPECT_TRUE(sym_power(x, 2).isApprox(x, 1e-15));
}

TEST(SymPower, EmbedsJordanProjection) {
  const Representation f3 = sym_power_embed(s2(), 3);
  EXPECT_EQ(f3.dim(), 3);
  const CartanVector l = jordan(f3.generators()[1]);
  EXPECT_NEAR(l[0], 2.0, 1e-12);
  EXPECT_NEAR(l[1], 0.0, 1e-12);
  EXPECT_NEAR(l[2], -2.0, 1e-12);
  EXPECT_THROW(sym_power_embed(f3, 4), Error);
}

TEST(Perturb, ZeroIsIdentityAndSeedsAreReproducible) {
  const Representation f3 = sym_power_embed(s2(), 3);
  EXPECT_EQ(perturb(f3, 0, 7), f3);
  const Representation a = perturb(f3, 0.05, 1), b = perturb(f3, 0.05, 1), c = perturb(f3, 0.05, 2);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == c);
  for (const auto& g : a.generators()) EXPECT_NEAR(g.determinant(), 1.0, 1e-12);
  // Entrywise noise of size 0.05 up to the determinant rescale.
  for (std::size_t i = 0; i < 2; ++i) {
    const Matrix& g = a.generators()[i];
    const double s = (g.array() * f3.generators()[i].array()).sum() / g.squaredNorm();
    const double dev = (s * g - f3.generators()[i]).cwiseAbs().maxCoeff();
    EXPECT_GT(dev, 0.0);
    EXPECT_LT(dev, 2 * 0.05);
  }
  EXPECT_THROW(perturb(f3, -1, 1), Error);
}

TEST(DualRep, JordanIsOpposed) {
  const Representation p3 = perturb(sym_power_embed(s2(), 3), 0.05, 3);
  const Representation d = dual_rep(p3);
  for (int i = 0; i < 2; ++i) {
    const Vector l = jordan(p3.generators()[i]).coords;
    EXPECT_TRUE(jordan(d.generators()[i]).coords.isApprox(opposition(l), 1e-10));
  }
}

TEST(RepIo, TextAndJsonRoundTrip) {
  const Representation p3 = perturb(sym_power_embed(s2(), 3), 0.05, 1);
  EXPECT_EQ(parse_rep(write_rep_text(p3)), p3);
  EXPECT_EQ(parse_rep(rep_to_json(p3).dump()), p3);
  const auto dir = std::filesystem::temp_directory_path();
  const std::string txt = (dir / "hcx_repgen_rt.rep").string(), js = (dir / "hcx_repgen_rt.json").string();
  save_rep(p3, txt);
  save_rep(p3, js, true);
  EXPECT_EQ(load_rep(txt), p3);
  EXPECT_EQ(load_rep(js), p3);
  std::filesystem::remove(txt);
  std::filesystem::remove(js);
}

TEST(RepIo, NestedRowsAccepted) {
  const Representation rep = parse_rep(R"({"dim":2,"labels":["x","y"],"generators":[[[2,0],[0,0.5]],[[1,1],[0,1]]]})");
  EXPECT_EQ(rep.labels(), (std::vector<std::string>{"x", "y"}));
  EXPECT_DOUBLE_EQ(rep.generators()[1](0, 1), 1.0);
}

TEST(RepIo, Errors) {
  EXPECT_EQ(kind_of([] { parse_rep(""); }), ErrorKind::kInvalidInput);
  EXPECT_EQ(kind_of([] { parse_rep("dim=2\n"); }), ErrorKind::kInvalidInput);
  EXPECT_EQ(kind_of([] { parse_rep("dim=2 gens=2\na 1 0 0 1\nb 1 0\n"); }), ErrorKind::kInvalidInput);
  EXPECT_EQ(kind_of([] { parse_rep("dim=2 gens=2\na 1 0 0 1\nb 1 0 x 1\n"); }), ErrorKind::kInvalidInput);
  EXPECT_EQ(kind_of([] { parse_rep("{\"dim\": 2"); }), ErrorKind::kInvalidInput);
  EXPECT_EQ(kind_of([] { parse_rep(R"({"dim":2,"labels":["a","b"],"generators":[[1,0,0,1],[1,0]]})"); }),
            ErrorKind::kInvalidInput);
  EXPECT_EQ(kind_of([] { load_rep("/nonexistent/dir/x.rep"); }), ErrorKind::kFile);
}
