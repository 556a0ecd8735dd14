#pragma once

// Linear algebra over real vector spaces carrying an indefinite
// (nondegenerate, symmetric) scalar product.

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace phinull {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class of every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated (shape, causal character, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A subspace, plane or form turned out to be degenerate under tolerance.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Numerical thresholds shared by all modules. Defaults are the documented
/// engine constants; every field can be overridden per call site.
struct Tolerances {
  double rank = 1e-9;        // relative to the max-norm of the matrix examined
  double null = 1e-10;       // absolute, |g(x,x)| for null classification
  double validation = 1e-10; // structure and curvature identity residuals
  double grouping = 1e-6;    // eigenvalue multiplicity grouping
  double constancy = 1e-8;   // spectra agreement across samples
};

struct Signature {
  int plus = 0;
  int minus = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Nondegenerate symmetric bilinear form on R^m. Components are stored
/// symmetrized; the signature is the computed inertia.
class ScalarProduct {
 public:
  explicit ScalarProduct(const Matrix& components, double rank_tol = Tolerances{}.rank);

  static ScalarProduct diagonal(const std::vector<double>& entries);

  Index dim() const { return components_.rows(); }
  const Matrix& components() const { return components_; }
  const Matrix& inverse() const { return inverse_; }
  Signature signature() const { return signature_; }
  bool lorentzian() const { return signature_.minus == 1 && signature_.plus >= 1; }

  /// Exactly symmetric evaluation: operator()(x, y) == operator()(y, x) bitwise.
  double operator()(const Vector& x, const Vector& y) const;

  /// Raise an index: the vector v with g(v, .) = covector.
  Vector sharp(const Vector& covector) const { return inverse_ * covector; }
  /// Lower an index: the covector g(x, .).
  Vector flat(const Vector& x) const { return components_ * x; }

 private:
  Matrix components_;
  Matrix inverse_;
  Signature signature_;
};

/// Ordered, linearly independent vectors (columns) with their Gram matrix.
class SubspaceBasis {
 public:
  SubspaceBasis() = default;
  SubspaceBasis(const ScalarProduct& g, Matrix vectors, double rank_tol = Tolerances{}.rank);

  Index ambient_dim() const { return vectors_.rows(); }
  Index dim() const { return vectors_.cols(); }
  const Matrix& vectors() const { return vectors_; }
  Vector vector(Index i) const { return vectors_.col(i); }
  const Matrix& gram() const { return gram_; }

  /// Coordinates c with vectors() * c equal to the g-orthogonal projection of v.
  /// Requires a nondegenerate gram.
  Vector coordinates(const ScalarProduct& g, const Vector& v) const;
  /// g-orthogonal projection of v onto the span.
  Vector project(const ScalarProduct& g, const Vector& v) const;

 private:
  Matrix vectors_;
  Matrix gram_;
};

enum class Causal { spacelike, timelike, null, zero };

std::string to_string(Causal c);

double inner(const ScalarProduct& g, const Vector& x, const Vector& y);

Causal causal_character(const ScalarProduct& g, const Vector& x,
                        double null_tol = Tolerances{}.null);

/// Numerical rank via singular values, threshold rank_tol * max(1, |A|_max).
Index numerical_rank(const Matrix& a, double rank_tol = Tolerances{}.rank);

/// Orthonormal (Euclidean) basis of the null space of a, as columns.
Matrix null_space(const Matrix& a, double rank_tol = Tolerances{}.rank);

/// Basis of { y : g(y, v) = 0 for every column v }.
SubspaceBasis orthogonal_complement(const ScalarProduct& g, const Matrix& vectors,
                                    const Tolerances& tol = {});
SubspaceBasis orthogonal_complement(const ScalarProduct& g, const Vector& v,
                                    const Tolerances& tol = {});

/// Sequential indefinite Gram-Schmidt, no pivoting: a null (or nearly null)
/// pivot raises DegenerateError. Output gram is diag(+-1).
SubspaceBasis orthonormalize(const ScalarProduct& g, const SubspaceBasis& basis,
                             const Tolerances& tol = {});

/// Orthonormal frame of the same span built from the eigendecomposition of
/// the gram (never hits a null pivot). Timelike vectors come first.
SubspaceBasis orthonormal_frame(const ScalarProduct& g, const SubspaceBasis& basis,
                                const Tolerances& tol = {});

/// Orthonormal frame of the whole space; timelike vectors first.
SubspaceBasis orthonormal_frame(const ScalarProduct& g, const Tolerances& tol = {});

/// Inertia (plus, minus, zero) of a symmetric matrix at the given tolerance.
struct Inertia {
  int plus = 0;
  int minus = 0;
  int zero = 0;
};
Inertia inertia(const Matrix& symmetric, double rank_tol = Tolerances{}.rank);

}  // namespace phinull
