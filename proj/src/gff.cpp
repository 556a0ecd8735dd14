#include "phinull/gff.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace phinull {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Check make_check(std::string name, double residual, double tol, std::string detail = {}) {
  return Check{std::move(name), residual, residual < tol, std::move(detail)};
}

Matrix epsilon_diag(const std::vector<int>& eps) {
  Matrix e = Matrix::Zero(static_cast<Index>(eps.size()), static_cast<Index>(eps.size()));
  for (std::size_t a = 0; a < eps.size(); ++a) e(static_cast<Index>(a), static_cast<Index>(a)) = eps[a];
  return e;
}

SubspaceBasis build_image_frame(const ScalarProduct& g, const Matrix& phi) {
  Eigen::JacobiSVD<Matrix> svd(phi, Eigen::ComputeFullU);
  const double thr = Tolerances{}.rank * std::max(1.0, max_abs(phi));
  Index rank = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > thr) ++rank;
  }
  if (rank == 0) return SubspaceBasis(g, Matrix(phi.rows(), 0));
  return orthonormal_frame(g, SubspaceBasis(g, svd.matrixU().leftCols(rank)));
}

void require_lorentzian(const GffStructure& S, const char* what) {
  if (!S.lorentzian_normalized()) {
    throw PreconditionError(std::string(what) +
                            ": structure must be Lorentzian with xi_1 the timelike field");
  }
}

void require_count(int count) {
  if (count < 1) throw PreconditionError("sampler: count must be at least 1");
}

}  // namespace

bool ValidationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* ValidationReport::worst_failure() const {
  const Check* worst = nullptr;
  for (const auto& c : checks) {
    if (!c.pass && (worst == nullptr || c.residual > worst->residual)) worst = &c;
  }
  return worst;
}

const Check* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

GffStructure::GffStructure(int n, int s, ScalarProduct g, Matrix phi, Matrix xi, Matrix eta,
                           std::vector<int> epsilon)
    : n_(n),
      s_(s),
      g_(std::move(g)),
      phi_(std::move(phi)),
      xi_(std::move(xi)),
      eta_(std::move(eta)),
      epsilon_(std::move(epsilon)) {
  if (n_ < 1) throw PreconditionError("g.f.f-structure: n must be at least 1");
  if (s_ < 1) {
    throw PreconditionError("g.f.f-structure: s must be at least 1 (s = 0 is not supported)");
  }
  const Index m = dim();
  if (g_.dim() != m || phi_.rows() != m || phi_.cols() != m) {
    throw PreconditionError("g.f.f-structure: metric and phi must be (2n+s)x(2n+s)");
  }
  if (xi_.rows() != m || xi_.cols() != s_ || eta_.rows() != s_ || eta_.cols() != m) {
    throw PreconditionError("g.f.f-structure: expected s characteristic vectors and s one-forms");
  }
  if (static_cast<int>(epsilon_.size()) != s_ ||
      std::any_of(epsilon_.begin(), epsilon_.end(), [](int e) { return e != 1 && e != -1; })) {
    throw PreconditionError("g.f.f-structure: epsilon must hold s signs +-1");
  }
  try {
    image_frame_ = build_image_frame(g_, phi_);
  } catch (const DegenerateError&) {
    // Left empty; validate_gff reports the broken splitting.
  }
}

bool GffStructure::lorentzian_normalized() const {
  return epsilon_.front() == -1 &&
         std::count(epsilon_.begin(), epsilon_.end(), -1) == 1;
}

GffStructure canonical_structure(int n, int s) {
  if (n < 1 || s < 1) throw PreconditionError("canonical_structure: need n >= 1 and s >= 1");
  const Index m = 2 * n + s;
  Vector diag = Vector::Ones(m);
  diag(2 * n) = -1.0;
  ScalarProduct g(diag.asDiagonal().toDenseMatrix());

  Matrix phi = Matrix::Zero(m, m);
  phi.block(0, n, n, n) = -Matrix::Identity(n, n);
  phi.block(n, 0, n, n) = Matrix::Identity(n, n);

  Matrix xi = Matrix::Zero(m, s);
  Matrix eta = Matrix::Zero(s, m);
  std::vector<int> eps(static_cast<std::size_t>(s), 1);
  eps[0] = -1;
  for (int a = 0; a < s; ++a) {
    xi(2 * n + a, a) = 1.0;
    eta.row(a) = eps[static_cast<std::size_t>(a)] * g.flat(xi.col(a)).transpose();
  }
  return GffStructure(n, s, std::move(g), std::move(phi), std::move(xi), std::move(eta),
                      std::move(eps));
}

GffStructure normalize_timelike_first(const GffStructure& S) {
  const auto& eps = S.epsilon();
  if (std::count(eps.begin(), eps.end(), -1) != 1 || eps.front() == -1) return S;
  const auto timelike = static_cast<int>(std::find(eps.begin(), eps.end(), -1) - eps.begin());
  std::vector<int> order(static_cast<std::size_t>(S.s()));
  std::iota(order.begin(), order.end(), 0);
  std::rotate(order.begin(), order.begin() + timelike, order.begin() + timelike + 1);
  Matrix xi(S.dim(), S.s());
  Matrix eta(S.s(), S.dim());
  std::vector<int> new_eps;
  for (int a = 0; a < S.s(); ++a) {
    const int src = order[static_cast<std::size_t>(a)];
    xi.col(a) = S.xi().col(src);
    eta.row(a) = S.eta().row(src);
    new_eps.push_back(eps[static_cast<std::size_t>(src)]);
  }
  return GffStructure(S.n(), S.s(), S.g(), S.phi(), std::move(xi), std::move(eta),
                      std::move(new_eps));
}

ValidationReport validate_gff(const GffStructure& S, const GffValidationOptions& opts) {
  const Matrix& G = S.g().components();
  const Matrix& phi = S.phi();
  const Matrix& xi = S.xi();
  const Matrix& eta = S.eta();
  const Matrix E = epsilon_diag(S.epsilon());
  const Index m = S.dim();
  const Matrix I = Matrix::Identity(m, m);
  const double tol = opts.tol;

  ValidationReport r;
  r.checks.push_back(make_check("phi^3+phi=0", max_abs(phi * phi * phi + phi), tol));
  r.checks.push_back(
      make_check("phi^2=-I+eta(x)xi", max_abs(phi * phi + I - xi * eta), tol));
  r.checks.push_back(
      make_check("eta(xi)=delta", max_abs(eta * xi - Matrix::Identity(S.s(), S.s())), tol));
  r.checks.push_back(make_check("g(phiX,phiY)=g(X,Y)-sum eps eta(X)eta(Y)",
                                max_abs(phi.transpose() * G * phi - G + eta.transpose() * E * eta),
                                tol));
  r.checks.push_back(make_check("phi xi=0", max_abs(phi * xi), tol));
  r.checks.push_back(make_check("eta o phi=0", max_abs(eta * phi), tol));
  r.checks.push_back(
      make_check("g(X,xi)=eps eta(X)", max_abs(G * xi - eta.transpose() * E), tol));
  r.checks.push_back(
      make_check("g(X,phiY)=-g(phiX,Y)", max_abs(G * phi + phi.transpose() * G), tol));
  r.checks.push_back(make_check("gram(xi)=diag(eps)", max_abs(xi.transpose() * G * xi - E), tol));
  r.checks.push_back(make_check("trace(phi)=0", std::abs(phi.trace()), tol));

  {
    Eigen::JacobiSVD<Matrix> svd(phi);
    const Vector& sv = svd.singularValues();
    const Index expected = 2 * S.n();
    const Index rank = numerical_rank(phi);
    const double tail = expected < sv.size() ? sv(expected) : 0.0;
    std::ostringstream detail;
    detail << "rank " << rank << ", expected " << expected;
    Check c{"rank(phi)=2n", tail, rank == expected && tail < tol, detail.str()};
    r.checks.push_back(c);
  }
  r.checks.push_back(
      make_check("Im(phi) perp ker(phi)", max_abs(xi.transpose() * G * phi), tol));

  if (opts.require_lorentzian) {
    const bool ok = S.lorentzian_normalized() && S.g().lorentzian();
    r.checks.push_back(Check{"lorentzian: only eps_1=-1", ok ? 0.0 : 1.0, ok,
                             ok ? "" : "exactly one timelike xi, first in order, is required"});
  }
  return r;
}

double fundamental_two_form(const GffStructure& S, const Vector& x, const Vector& y) {
  if (x.size() != S.dim() || y.size() != S.dim()) {
    throw PreconditionError("fundamental_two_form: dimension mismatch");
  }
  return S.g()(x, S.phi() * y);
}

std::string to_string(SphereKind k) {
  switch (k) {
    case SphereKind::S_of_z: return "S_of_z";
    case SphereKind::S_phi: return "S_phi";
    case SphereKind::N_of_z: return "N_of_z";
    case SphereKind::N_phi: return "N_phi";
  }
  return "unknown";
}

Matrix sample_frame_sphere(const SubspaceBasis& frame, int count, std::uint64_t seed) {
  require_count(count);
  const Index k = frame.dim();
  if (k == 0) throw PreconditionError("sampler: empty frame");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix points(frame.ambient_dim(), count);
  Vector w(k);
  for (int i = 0; i < count; ++i) {
    double norm = 0.0;
    do {
      for (Index j = 0; j < k; ++j) w(j) = normal(rng);
      norm = w.norm();
    } while (norm < 1e-8);
    points.col(i) = frame.vectors() * (w / norm);
  }
  return points;
}

namespace {

// Unit vectors with respect to g; renormalized after the frame push-forward.
Matrix renormalize(const ScalarProduct& g, Matrix points) {
  for (Index i = 0; i < points.cols(); ++i) {
    points.col(i) /= std::sqrt(g(points.col(i), points.col(i)));
  }
  return points;
}

SubspaceBasis positive_frame(const ScalarProduct& g, const SubspaceBasis& basis, const char* what) {
  SubspaceBasis frame = orthonormal_frame(g, basis);
  for (Index i = 0; i < frame.dim(); ++i) {
    if (frame.gram()(i, i) < 0) {
      throw PreconditionError(std::string(what) + ": sphere carrier is not positive definite");
    }
  }
  return frame;
}

SubspaceBasis phi_celestial_frame(const GffStructure& S) {
  require_lorentzian(S, "sample_phi_celestial");
  const SubspaceBasis& image = S.image_frame();
  if (image.dim() == 0) throw PreconditionError("sample_phi_celestial: Im(phi) is empty");
  const Vector z = S.xi(0);
  const double zz = S.g()(z, z);
  Matrix v = image.vectors();
  for (Index i = 0; i < v.cols(); ++i) {
    v.col(i) -= (S.g()(v.col(i), z) / zz) * z;
  }
  return positive_frame(S.g(), SubspaceBasis(S.g(), std::move(v)), "sample_phi_celestial");
}

CelestialSample shifted(CelestialSample sample, const Vector& z, SphereKind kind) {
  sample.points.colwise() += z;
  sample.kind = kind;
  return sample;
}

}  // namespace

CelestialSample sample_phi_celestial(const GffStructure& S, int count, std::uint64_t seed) {
  const SubspaceBasis frame = phi_celestial_frame(S);
  return CelestialSample{renormalize(S.g(), sample_frame_sphere(frame, count, seed)),
                         SphereKind::S_phi, seed, count};
}

CelestialSample sample_celestial(const ScalarProduct& g, const Vector& z, int count,
                                 std::uint64_t seed) {
  if (causal_character(g, z) != Causal::timelike || std::abs(g(z, z) + 1.0) > Tolerances{}.null) {
    throw PreconditionError("sample_celestial: z must be unit timelike");
  }
  const SubspaceBasis frame =
      positive_frame(g, orthogonal_complement(g, z), "sample_celestial");
  return CelestialSample{renormalize(g, sample_frame_sphere(frame, count, seed)),
                         SphereKind::S_of_z, seed, count};
}

CelestialSample sample_celestial(const GffStructure& S, int count, std::uint64_t seed) {
  require_lorentzian(S, "sample_celestial");
  return sample_celestial(S.g(), S.xi(0), count, seed);
}

CelestialSample sample_null_congruence(const GffStructure& S, int count, std::uint64_t seed) {
  return shifted(sample_celestial(S, count, seed), S.xi(0), SphereKind::N_of_z);
}

CelestialSample sample_phi_null_congruence(const GffStructure& S, int count,
                                           std::uint64_t seed) {
  return shifted(sample_phi_celestial(S, count, seed), S.xi(0), SphereKind::N_phi);
}

Vector psi(const GffStructure& S, const Vector& u, double tol) {
  require_lorentzian(S, "psi");
  if (u.size() != S.dim()) throw PreconditionError("psi: dimension mismatch");
  const Vector z = S.xi(0);
  const double uu = S.g()(u, u);
  const double uz = S.g()(u, z);
  if (std::abs(uz + 1.0) > tol) {
    std::ostringstream msg;
    msg << "psi: u is not in N(xi_1): g(u,xi_1) = " << uz << " != -1";
    throw PreconditionError(msg.str());
  }
  if (std::abs(uu) > tol) {
    std::ostringstream msg;
    msg << "psi: u is not null: g(u,u) = " << uu;
    throw PreconditionError(msg.str());
  }
  return u - z;
}

Vector psi_inverse(const GffStructure& S, const Vector& x, double tol) {
  require_lorentzian(S, "psi_inverse");
  if (x.size() != S.dim()) throw PreconditionError("psi_inverse: dimension mismatch");
  const Vector z = S.xi(0);
  const double xx = S.g()(x, x);
  const double xz = S.g()(x, z);
  if (std::abs(xz) > tol) {
    std::ostringstream msg;
    msg << "psi_inverse: x is not orthogonal to xi_1: g(x,xi_1) = " << xz;
    throw PreconditionError(msg.str());
  }
  if (std::abs(xx - 1.0) > tol) {
    std::ostringstream msg;
    msg << "psi_inverse: x is not unit: g(x,x) = " << xx;
    throw PreconditionError(msg.str());
  }
  return z + x;
}

}  // namespace phinull
