#include "phinull/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phinull {

namespace {

double threshold(const Matrix& a, double rank_tol) {
  return a.size() == 0 ? 0.0 : rank_tol * a.cwiseAbs().maxCoeff();
}

// Flip column signs so the first clearly nonzero entry is positive.
void canonical_signs(Matrix& columns) {
  for (Index j = 0; j < columns.cols(); ++j) {
    for (Index i = 0; i < columns.rows(); ++i) {
      if (std::abs(columns(i, j)) > 1e-12) {
        if (columns(i, j) < 0) columns.col(j) *= -1.0;
        break;
      }
    }
  }
}

}  // namespace

std::string to_string(Causal c) {
  switch (c) {
    case Causal::spacelike: return "spacelike";
    case Causal::timelike: return "timelike";
    case Causal::null: return "null";
    case Causal::zero: return "zero";
  }
  return "unknown";
}

ScalarProduct::ScalarProduct(const Matrix& components, double rank_tol) {
  if (components.rows() != components.cols() || components.rows() == 0) {
    throw PreconditionError("scalar product: components must be a nonempty square matrix");
  }
  components_ = 0.5 * (components + components.transpose());
  Eigen::JacobiSVD<Matrix> svd(components_);
  const double smallest = svd.singularValues().minCoeff();
  if (smallest <= threshold(components_, rank_tol)) {
    std::ostringstream msg;
    msg << "scalar product is degenerate (smallest singular value " << smallest << ")";
    throw DegenerateError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(components_, Eigen::EigenvaluesOnly);
  for (Index i = 0; i < eig.eigenvalues().size(); ++i) {
    if (eig.eigenvalues()(i) > 0) {
      ++signature_.plus;
    } else {
      ++signature_.minus;
    }
  }
  inverse_ = components_.inverse();
}

ScalarProduct ScalarProduct::diagonal(const std::vector<double>& entries) {
  Vector d = Eigen::Map<const Vector>(entries.data(), static_cast<Index>(entries.size()));
  return ScalarProduct(d.asDiagonal().toDenseMatrix());
}

double ScalarProduct::operator()(const Vector& x, const Vector& y) const {
  const Index m = dim();
  if (x.size() != m || y.size() != m) {
    throw PreconditionError("inner: dimension mismatch");
  }
  // Pairing (i,j) with (j,i) keeps the sum bitwise symmetric in x and y.
  double sum = 0.0;
  for (Index i = 0; i < m; ++i) {
    sum += components_(i, i) * (x(i) * y(i));
    for (Index j = i + 1; j < m; ++j) {
      sum += components_(i, j) * (x(i) * y(j) + x(j) * y(i));
    }
  }
  return sum;
}

SubspaceBasis::SubspaceBasis(const ScalarProduct& g, Matrix vectors, double rank_tol)
    : vectors_(std::move(vectors)) {
  if (vectors_.rows() != g.dim()) {
    throw PreconditionError("subspace basis: vector length does not match the scalar product");
  }
  if (vectors_.cols() > 0 && numerical_rank(vectors_, rank_tol) != vectors_.cols()) {
    throw PreconditionError("subspace basis: vectors are linearly dependent");
  }
  const Index k = vectors_.cols();
  gram_.resize(k, k);
  for (Index i = 0; i < k; ++i) {
    for (Index j = i; j < k; ++j) {
      gram_(i, j) = gram_(j, i) = g(vectors_.col(i), vectors_.col(j));
    }
  }
}

Vector SubspaceBasis::coordinates(const ScalarProduct& g, const Vector& v) const {
  return gram_.fullPivLu().solve(vectors_.transpose() * g.flat(v));
}

Vector SubspaceBasis::project(const ScalarProduct& g, const Vector& v) const {
  return vectors_ * coordinates(g, v);
}

double inner(const ScalarProduct& g, const Vector& x, const Vector& y) { return g(x, y); }

Causal causal_character(const ScalarProduct& g, const Vector& x, double null_tol) {
  if (x.size() != g.dim()) throw PreconditionError("causal_character: dimension mismatch");
  if (x.isZero(0.0)) return Causal::zero;
  const double q = g(x, x);
  if (std::abs(q) <= null_tol) return Causal::null;
  return q < 0 ? Causal::timelike : Causal::spacelike;
}

Index numerical_rank(const Matrix& a, double rank_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(a);
  const double thr = threshold(a, rank_tol);
  Index rank = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > thr) ++rank;
  }
  return rank;
}

Matrix null_space(const Matrix& a, double rank_tol) {
  const Index m = a.cols();
  if (a.rows() == 0) return Matrix::Identity(m, m);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const double thr = threshold(a, rank_tol);
  Index rank = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > thr) ++rank;
  }
  Matrix basis = svd.matrixV().rightCols(m - rank);
  canonical_signs(basis);
  return basis;
}

SubspaceBasis orthogonal_complement(const ScalarProduct& g, const Matrix& vectors,
                                    const Tolerances& tol) {
  if (vectors.rows() != g.dim()) {
    throw PreconditionError("orthogonal_complement: dimension mismatch");
  }
  if (numerical_rank(vectors, tol.rank) != vectors.cols()) {
    throw PreconditionError("orthogonal_complement: input vectors are linearly dependent");
  }
  const Matrix constraints = (g.components() * vectors).transpose();
  return SubspaceBasis(g, null_space(constraints, tol.rank), tol.rank);
}

SubspaceBasis orthogonal_complement(const ScalarProduct& g, const Vector& v,
                                    const Tolerances& tol) {
  return orthogonal_complement(g, Matrix(v), tol);
}

SubspaceBasis orthonormalize(const ScalarProduct& g, const SubspaceBasis& basis,
                             const Tolerances& tol) {
  const Index k = basis.dim();
  Matrix out(basis.ambient_dim(), k);
  std::vector<double> signs;
  for (Index i = 0; i < k; ++i) {
    Vector w = basis.vector(i);
    for (Index j = 0; j < i; ++j) {
      w -= signs[j] * g(basis.vector(i), out.col(j)) * out.col(j);
    }
    const double q = g(w, w);
    if (std::abs(q) <= tol.rank * std::max(1.0, w.squaredNorm())) {
      std::ostringstream msg;
      msg << "orthonormalize: degenerate pivot at vector " << i << " (g(w,w) = " << q << ")";
      throw DegenerateError(msg.str());
    }
    signs.push_back(q < 0 ? -1.0 : 1.0);
    out.col(i) = w / std::sqrt(std::abs(q));
  }
  return SubspaceBasis(g, std::move(out), tol.rank);
}

SubspaceBasis orthonormal_frame(const ScalarProduct& g, const SubspaceBasis& basis,
                                const Tolerances& tol) {
  const Index k = basis.dim();
  if (k == 0) return basis;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(basis.gram());
  const Vector& lambda = eig.eigenvalues();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  Matrix frame(basis.ambient_dim(), k);
  for (Index i = 0; i < k; ++i) {
    if (std::abs(lambda(i)) <= tol.rank * scale) {
      throw DegenerateError("orthonormal_frame: restriction of the scalar product is degenerate");
    }
    frame.col(i) = basis.vectors() * eig.eigenvectors().col(i) / std::sqrt(std::abs(lambda(i)));
  }
  canonical_signs(frame);
  return SubspaceBasis(g, std::move(frame), tol.rank);
}

SubspaceBasis orthonormal_frame(const ScalarProduct& g, const Tolerances& tol) {
  return orthonormal_frame(g, SubspaceBasis(g, Matrix::Identity(g.dim(), g.dim())), tol);
}

Inertia inertia(const Matrix& symmetric, double rank_tol) {
  Inertia out;
  if (symmetric.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (symmetric + symmetric.transpose()),
                                            Eigen::EigenvaluesOnly);
  const double thr = rank_tol * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
  for (Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double l = eig.eigenvalues()(i);
    if (l > thr) {
      ++out.plus;
    } else if (l < -thr) {
      ++out.minus;
    } else {
      ++out.zero;
    }
  }
  return out;
}

}  // namespace phinull
