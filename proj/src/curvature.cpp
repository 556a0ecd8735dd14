#include "phinull/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace phinull {

namespace {

std::size_t volume(Index dim) {
  const auto m = static_cast<std::size_t>(dim);
  return m * m * m * m;
}

void require_same_dim(const CurvatureTensor& R, Index m, const char* what) {
  if (R.dim() != m) throw PreconditionError(std::string(what) + ": dimension mismatch");
}

// Fills out(a,b,c,d) = f(a,b,c,d), parallel over the first index.
template <class F>
std::vector<double> tabulate(Index m, Exec exec, F&& f) {
  std::vector<double> out(volume(m));
  for_each_index(exec, m, [&](std::ptrdiff_t a) {
    std::size_t k = static_cast<std::size_t>(a) * static_cast<std::size_t>(m * m * m);
    for (Index b = 0; b < m; ++b)
      for (Index c = 0; c < m; ++c)
        for (Index d = 0; d < m; ++d) out[k++] = f(a, b, c, d);
  });
  return out;
}

}  // namespace

CurvatureTensor::CurvatureTensor(Index dim) : dim_(dim), data_(volume(dim), 0.0) {
  if (dim < 1) throw PreconditionError("curvature tensor: dimension must be positive");
}

CurvatureTensor::CurvatureTensor(Index dim, std::vector<double> components)
    : dim_(dim), data_(std::move(components)) {
  if (dim < 1) throw PreconditionError("curvature tensor: dimension must be positive");
  if (data_.size() != volume(dim)) {
    std::ostringstream msg;
    msg << "curvature tensor: expected " << volume(dim) << " components, got " << data_.size();
    throw PreconditionError(msg.str());
  }
}

double CurvatureTensor::evaluate(const Vector& x, const Vector& y, const Vector& z,
                                 const Vector& w) const {
  return x.dot(lowered(y, z, w));
}

Vector CurvatureTensor::lowered(const Vector& y, const Vector& z, const Vector& w) const {
  if (y.size() != dim_ || z.size() != dim_ || w.size() != dim_) {
    throw PreconditionError("curvature: dimension mismatch");
  }
  Vector out = Vector::Zero(dim_);
  std::size_t k = 0;
  for (Index a = 0; a < dim_; ++a) {
    double acc = 0.0;
    for (Index b = 0; b < dim_; ++b)
      for (Index c = 0; c < dim_; ++c) {
        const double ybzc = y(b) * z(c);
        for (Index d = 0; d < dim_; ++d) acc += data_[k++] * ybzc * w(d);
      }
    out(a) = acc;
  }
  return out;
}

Vector CurvatureTensor::apply(const ScalarProduct& g, const Vector& z, const Vector& w,
                              const Vector& y) const {
  return g.sharp(lowered(y, z, w));
}

Matrix CurvatureTensor::jacobi_form(const Vector& v, Exec exec) const {
  if (v.size() != dim_) throw PreconditionError("jacobi_form: dimension mismatch");
  Matrix q = Matrix::Zero(dim_, dim_);
  for_each_index(exec, dim_, [&](std::ptrdiff_t a) {
    for (Index c = 0; c < dim_; ++c) {
      double acc = 0.0;
      for (Index b = 0; b < dim_; ++b)
        for (Index d = 0; d < dim_; ++d) acc += data_[offset(a, b, c, d)] * v(b) * v(d);
      q(a, c) = acc;
    }
  });
  // Exact symmetry; the two halves agree up to rounding for valid tensors.
  return 0.5 * (q + q.transpose());
}

bool CurvatureReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

const CurvatureCheck* CurvatureReport::worst() const {
  const CurvatureCheck* worst = nullptr;
  for (const auto& c : checks) {
    if (worst == nullptr || c.residual > worst->residual) worst = &c;
  }
  return worst;
}

CurvatureReport validate_curvature(const CurvatureTensor& R, const ScalarProduct& g, double tol) {
  require_same_dim(R, g.dim(), "validate_curvature");
  const Index m = R.dim();
  CurvatureCheck skew12{"skew(1,2)"}, skew34{"skew(3,4)"}, pair{"pair symmetry"},
      bianchi{"first Bianchi"};
  auto track = [](CurvatureCheck& c, double r, Index a, Index b, Index cc, Index d) {
    if (r > c.residual) {
      c.residual = r;
      c.worst_index = {a, b, cc, d};
    }
  };
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b)
      for (Index c = 0; c < m; ++c)
        for (Index d = 0; d < m; ++d) {
          const double v = R(a, b, c, d);
          track(skew12, std::abs(v + R(b, a, c, d)), a, b, c, d);
          track(skew34, std::abs(v + R(a, b, d, c)), a, b, c, d);
          track(pair, std::abs(v - R(c, d, a, b)), a, b, c, d);
          track(bianchi, std::abs(v + R(a, c, d, b) + R(a, d, b, c)), a, b, c, d);
        }
  CurvatureReport report;
  for (auto* c : {&skew12, &skew34, &pair, &bianchi}) {
    c->pass = c->residual < tol;
    report.checks.push_back(*c);
  }
  return report;
}

CurvatureTensor project_curvature_symmetries(const CurvatureTensor& raw, Exec exec) {
  const Index m = raw.dim();
  const CurvatureTensor skew(m, tabulate(m, exec, [&](Index a, Index b, Index c, Index d) {
    return 0.25 * (raw(a, b, c, d) - raw(b, a, c, d) - raw(a, b, d, c) + raw(b, a, d, c));
  }));
  const CurvatureTensor paired(m, tabulate(m, exec, [&](Index a, Index b, Index c, Index d) {
    return 0.5 * (skew(a, b, c, d) + skew(c, d, a, b));
  }));
  // The Bianchi sum of a tensor with the three symmetries above is totally
  // antisymmetric, so subtracting a third of it keeps them.
  return CurvatureTensor(m, tabulate(m, exec, [&](Index a, Index b, Index c, Index d) {
    const double cyclic = paired(a, b, c, d) + paired(a, c, d, b) + paired(a, d, b, c);
    return paired(a, b, c, d) - cyclic / 3.0;
  }));
}

CurvatureTensor constant_curvature(const ScalarProduct& g, double c) {
  const Matrix& G = g.components();
  return CurvatureTensor(g.dim(), tabulate(g.dim(), Exec::serial,
                                           [&](Index a, Index b, Index cc, Index d) {
                                             return c * (G(b, d) * G(a, cc) - G(b, cc) * G(a, d));
                                           }));
}

double plane_delta(const ScalarProduct& g, const Vector& x, const Vector& y) {
  const double xy = g(x, y);
  return g(x, x) * g(y, y) - xy * xy;
}

double sectional_curvature(const CurvatureTensor& R, const ScalarProduct& g, const Vector& x,
                           const Vector& y, double tol) {
  require_same_dim(R, g.dim(), "sectional_curvature");
  if (x.size() != g.dim() || y.size() != g.dim()) {
    throw PreconditionError("sectional_curvature: dimension mismatch");
  }
  Matrix pair(g.dim(), 2);
  pair << x, y;
  if (numerical_rank(pair, tol) < 2) {
    throw DegenerateError("sectional_curvature: x and y are linearly dependent");
  }
  const double delta = plane_delta(g, x, y);
  if (std::abs(delta) <= tol * std::max(1.0, x.squaredNorm() * y.squaredNorm())) {
    std::ostringstream msg;
    msg << "sectional_curvature: degenerate plane (Delta = " << delta << ")";
    throw DegenerateError(msg.str());
  }
  return R.evaluate(x, y, x, y) / delta;
}

CurvatureTensor random_algebraic_curvature(const ScalarProduct& g, std::uint64_t seed,
                                           double scale, Exec exec) {
  const Index m = g.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> raw(volume(m));
  for (auto& v : raw) v = scale * normal(rng);
  return project_curvature_symmetries(CurvatureTensor(m, std::move(raw)), exec);
}

CurvatureTensor phi_model_family(const GffStructure& S, double a, double b, Exec exec) {
  const Matrix& G = S.g().components();
  const Matrix F = G * S.phi();  // F(i,j) = g(e_i, phi e_j)
  return CurvatureTensor(S.dim(), tabulate(S.dim(), exec, [&](Index i, Index j, Index k,
                                                              Index l) {
    return a * (G(j, l) * G(i, k) - G(j, k) * G(i, l)) +
           b * (F(j, l) * F(i, k) - F(j, k) * F(i, l) + 2.0 * F(k, l) * F(i, j));
  }));
}

CurvatureTensor combine(const CurvatureTensor& lhs, double lhs_scale, const CurvatureTensor& rhs,
                        double rhs_scale) {
  require_same_dim(rhs, lhs.dim(), "combine");
  std::vector<double> out(lhs.components().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = lhs_scale * lhs.components()[i] + rhs_scale * rhs.components()[i];
  }
  return CurvatureTensor(lhs.dim(), std::move(out));
}

}  // namespace phinull
