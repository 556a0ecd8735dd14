#pragma once

// Algebraic curvature tensors at a point.
//
// Sign convention: components(a,b,c,d) = R(e_a, e_b, e_c, e_d) where
// R(X,Y,Z,W) = g(R(Z,W)Y, X) and R(Z,W) = [nabla_Z, nabla_W] - nabla_[Z,W].
//
//   this engine            | R(X,Y,Z,W) = g(R(Z,W)Y, X)
//   "R_abcd = g(R(a,b)c,d)" | R_engine(X,Y,Z,W) = R_other(Z,W,Y,X)
//   opposite operator sign | R_engine = -R_other
//
// With this convention the space form of curvature c has
// R(Z,W)Y = c (g(Y,W) Z - g(Y,Z) W) and sectional curvature c.

#include "phinull/gff.hpp"
#include "phinull/linalg.hpp"
#include "phinull/parallel.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace phinull {

/// Dense rank-4 array of lowered curvature components.
class CurvatureTensor {
 public:
  explicit CurvatureTensor(Index dim);
  CurvatureTensor(Index dim, std::vector<double> components);

  Index dim() const { return dim_; }
  const std::vector<double>& components() const { return data_; }

  double operator()(Index a, Index b, Index c, Index d) const { return data_[offset(a, b, c, d)]; }

  /// R(X, Y, Z, W).
  double evaluate(const Vector& x, const Vector& y, const Vector& z, const Vector& w) const;

  /// Covector a -> R(e_a, Y, Z, W) = g(R(Z,W)Y, e_a).
  Vector lowered(const Vector& y, const Vector& z, const Vector& w) const;

  /// The vector R(Z,W)Y.
  Vector apply(const ScalarProduct& g, const Vector& z, const Vector& w, const Vector& y) const;

  /// Symmetric matrix Q(a,c) = R(e_a, v, e_c, v); y^T Q z = g(R(z,v)v, y).
  Matrix jacobi_form(const Vector& v, Exec exec = Exec::serial) const;

  std::size_t offset(Index a, Index b, Index c, Index d) const {
    return static_cast<std::size_t>(((a * dim_ + b) * dim_ + c) * dim_ + d);
  }

 private:
  Index dim_;
  std::vector<double> data_;
};

struct CurvatureCheck {
  std::string name;
  double residual = 0.0;
  bool pass = true;
  std::array<Index, 4> worst_index{0, 0, 0, 0};
};

struct CurvatureReport {
  std::vector<CurvatureCheck> checks;
  bool pass() const;
  const CurvatureCheck* worst() const;
};

/// Residuals of skew (1,2), skew (3,4), pair symmetry and first Bianchi.
CurvatureReport validate_curvature(const CurvatureTensor& R, const ScalarProduct& g,
                                   double tol = Tolerances{}.validation);

/// Orthogonal projection onto the space of algebraic curvature tensors.
CurvatureTensor project_curvature_symmetries(const CurvatureTensor& raw,
                                             Exec exec = Exec::serial);

CurvatureTensor constant_curvature(const ScalarProduct& g, double c);

/// R(x,y,x,y) / (g(x,x)g(y,y) - g(x,y)^2); DegenerateError on a degenerate plane.
double sectional_curvature(const CurvatureTensor& R, const ScalarProduct& g, const Vector& x,
                           const Vector& y, double tol = Tolerances{}.rank);

/// Gram determinant g(x,x)g(y,y) - g(x,y)^2 of the plane spanned by x, y.
double plane_delta(const ScalarProduct& g, const Vector& x, const Vector& y);

/// i.i.d. normal array times scale, projected onto the curvature symmetries.
CurvatureTensor random_algebraic_curvature(const ScalarProduct& g, std::uint64_t seed,
                                           double scale = 1.0, Exec exec = Exec::serial);

/// R(Z,W)Y = a (g(Y,W)Z - g(Y,Z)W)
///         + b (g(phi W,Y) phi Z - g(phi Z,Y) phi W - 2 g(phi Z,W) phi Y).
/// For unit x in S_phi: R_x(phi x) = (a+3b) phi x and R_x = a on the rest of x^perp.
CurvatureTensor phi_model_family(const GffStructure& S, double a, double b,
                                 Exec exec = Exec::serial);

/// Sum of two tensors of the same dimension, scaled.
CurvatureTensor combine(const CurvatureTensor& lhs, double lhs_scale, const CurvatureTensor& rhs,
                        double rhs_scale);

}  // namespace phinull
