#include "phinull/linalg.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace phinull;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("inner product on Minkowski space") {
  const auto g = ScalarProduct::diagonal({-1, 1, 1, 1});
  CHECK(inner(g, vec({1, 0, 0, 0}), vec({1, 0, 0, 0})) == -1.0);
  CHECK(inner(g, vec({0.3, -2, 1, 5}), Vector::Zero(4)) == 0.0);
  const auto plane = ScalarProduct::diagonal({-1, 1});
  CHECK(inner(plane, vec({1, 1}), vec({1, 1})) == 0.0);
}

TEST_CASE("inner product is exactly symmetric") {
  std::mt19937_64 rng(11);
  Matrix a = support::random_matrix(5, 5, rng);
  const ScalarProduct g(a + a.transpose());
  for (int k = 0; k < 20; ++k) {
    const Vector x = support::random_vector(5, rng);
    const Vector y = support::random_vector(5, rng);
    CHECK(g(x, y) == g(y, x));
  }
}

TEST_CASE("causal character") {
  const auto g = ScalarProduct::diagonal({-1, 1, 1});
  CHECK(causal_character(g, vec({1, 1, 0})) == Causal::null);
  CHECK(causal_character(g, vec({1, 0, 0})) == Causal::timelike);
  CHECK(causal_character(g, vec({0, 0, 0})) == Causal::zero);
  CHECK(causal_character(g, vec({0, 1, 0})) == Causal::spacelike);
  CHECK(to_string(Causal::null) == "null");
}

TEST_CASE("degenerate scalar product is refused") {
  Matrix m = Matrix::Identity(3, 3);
  m(2, 2) = 0.0;
  CHECK_THROWS_AS(ScalarProduct{m}, DegenerateError);
}

TEST_CASE("signature from inertia") {
  CHECK(ScalarProduct::diagonal({-1, 1, 1, 1}).signature() == Signature{3, 1});
  CHECK(ScalarProduct::diagonal({-1, 1, 1, 1}).lorentzian());
  CHECK_FALSE(ScalarProduct::diagonal({-1, -1, 1, 1}).lorentzian());
  Matrix hyperbolic(2, 2);
  hyperbolic << 0, 1, 1, 0;
  CHECK(ScalarProduct(hyperbolic).signature() == Signature{1, 1});
}

TEST_CASE("orthogonal complement examples") {
  const auto g = ScalarProduct::diagonal({-1, 1, 1});
  const SubspaceBasis c = orthogonal_complement(g, Vector(vec({0, 1, 0})));
  CHECK(c.dim() == 2);
  for (Index i = 0; i < c.dim(); ++i) CHECK(std::abs(c.vector(i)(1)) < 1e-14);

  const auto plane = ScalarProduct::diagonal({-1, 1});
  const SubspaceBasis u = orthogonal_complement(plane, Vector(vec({1, 1})));
  REQUIRE(u.dim() == 1);
  CHECK(std::abs(u.vector(0)(0) - u.vector(0)(1)) < 1e-14);

  const auto mink = ScalarProduct::diagonal({-1, 1, 1, 1});
  const SubspaceBasis s = orthogonal_complement(mink, Vector(vec({1, 0, 0, 0})));
  CHECK(s.dim() == 3);
  CHECK(inertia(s.gram()).plus == 3);
}

TEST_CASE("orthogonal complement of several vectors is orthogonal to each") {
  std::mt19937_64 rng(3);
  const auto g = ScalarProduct::diagonal({-1, 1, 1, 1, 1, 1});
  const Matrix vs = support::random_matrix(6, 2, rng);
  const SubspaceBasis c = orthogonal_complement(g, vs);
  CHECK(c.dim() == 4);
  CHECK((vs.transpose() * g.components() * c.vectors()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("orthonormalize examples") {
  Matrix b(2, 2);
  b << 1, 1, 0, 1;
  const auto e = ScalarProduct::diagonal({1, 1});
  const SubspaceBasis on = orthonormalize(e, SubspaceBasis(e, b));
  CHECK((on.vectors() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);

  const auto plane = ScalarProduct::diagonal({-1, 1});
  Matrix nb(2, 2);
  nb << 1, 1, 1, 0;
  CHECK_THROWS_AS(orthonormalize(plane, SubspaceBasis(plane, nb)), DegenerateError);

  const auto g3 = ScalarProduct::diagonal({-1, 1, 1});
  Matrix b3(3, 2);
  b3 << 1, 0, 0, 2, 0, 0;
  const SubspaceBasis o3 = orthonormalize(g3, SubspaceBasis(g3, b3));
  Matrix expected(2, 2);
  expected << -1, 0, 0, 1;
  CHECK((o3.gram() - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("orthonormal frame puts timelike vectors first and spans the input") {
  std::mt19937_64 rng(5);
  const Matrix T = Matrix::Identity(5, 5) + support::random_matrix(5, 5, rng, 0.3);
  const Matrix G = T.transpose() * ScalarProduct::diagonal({1, -1, 1, 1, 1}).components() * T;
  const ScalarProduct g(G);
  const SubspaceBasis f = orthonormal_frame(g);
  Matrix expected = Matrix::Identity(5, 5);
  expected(0, 0) = -1;
  CHECK((f.gram() - expected).cwiseAbs().maxCoeff() < 1e-12);

  // A null vector in the input basis does not stop the eigen-based frame.
  const auto plane = ScalarProduct::diagonal({-1, 1});
  Matrix nb(2, 2);
  nb << 1, 1, 1, 0;
  const SubspaceBasis pf = orthonormal_frame(plane, SubspaceBasis(plane, nb));
  CHECK(pf.gram()(0, 0) == doctest::Approx(-1));
  CHECK(pf.gram()(1, 1) == doctest::Approx(1));
}

TEST_CASE("dependent columns are refused by SubspaceBasis") {
  const auto g = ScalarProduct::diagonal({1, 1, 1});
  Matrix b(3, 2);
  b << 1, 2, 1, 2, 0, 0;
  CHECK_THROWS_AS(SubspaceBasis(g, b), PreconditionError);
}

TEST_CASE("projection onto a nondegenerate subspace") {
  const auto g = ScalarProduct::diagonal({-1, 1, 1});
  Matrix b(3, 1);
  b << 1, 0, 0;
  const SubspaceBasis line(g, b);
  const Vector p = line.project(g, vec({2, 3, 4}));
  CHECK(p(0) == doctest::Approx(2));
  CHECK(p(1) == doctest::Approx(0));
}

TEST_CASE("null space and numerical rank") {
  Matrix a(2, 3);
  a << 1, 0, 0, 0, 1, 0;
  CHECK(numerical_rank(a) == 2);
  const Matrix ns = null_space(a);
  REQUIRE(ns.cols() == 1);
  CHECK(std::abs(std::abs(ns(2, 0)) - 1.0) < 1e-14);
  const Inertia in = inertia(ScalarProduct::diagonal({-1, 0.5, 2}).components());
  CHECK(in.plus == 2);
  CHECK(in.minus == 1);
  CHECK(in.zero == 0);
}
