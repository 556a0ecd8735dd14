#pragma once

// Metric globally framed f-structures (phi, xi_a, eta^a, g) at a single point,
// their validation, and samplers for the celestial spheres.

#include "phinull/linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace phinull {

struct Check {
  std::string name;
  double residual = 0.0;
  bool pass = true;
  std::string detail;
};

struct ValidationReport {
  std::vector<Check> checks;

  bool pass() const;
  /// Failing check with the largest residual, or nullptr when everything passes.
  const Check* worst_failure() const;
  const Check* find(const std::string& name) const;
};

/// Pointwise metric g.f.f-structure on R^{2n+s}. The xi are columns of xi(),
/// the eta are rows of eta(). epsilon[a] = g(xi_a, xi_a).
class GffStructure {
 public:
  GffStructure(int n, int s, ScalarProduct g, Matrix phi, Matrix xi, Matrix eta,
               std::vector<int> epsilon);

  int n() const { return n_; }
  int s() const { return s_; }
  Index dim() const { return 2 * n_ + s_; }
  const ScalarProduct& g() const { return g_; }
  const Matrix& phi() const { return phi_; }
  const Matrix& xi() const { return xi_; }
  Vector xi(int a) const { return xi_.col(a); }
  const Matrix& eta() const { return eta_; }
  Vector eta(int a) const { return eta_.row(a).transpose(); }
  const std::vector<int>& epsilon() const { return epsilon_; }

  /// Exactly one epsilon is -1 and it is the first one.
  bool lorentzian_normalized() const;

  /// g-orthonormal frame of Im(phi).
  const SubspaceBasis& image_frame() const { return image_frame_; }

  /// sum of the xi_a.
  Vector xi_bar() const { return xi_.rowwise().sum(); }

 private:
  int n_;
  int s_;
  ScalarProduct g_;
  Matrix phi_;
  Matrix xi_;
  Matrix eta_;
  std::vector<int> epsilon_;
  SubspaceBasis image_frame_;
};

/// Block model on R^{2n+s}: g = I_2n + diag(-1, 1, ..., 1), phi the standard
/// complex structure on the first 2n coordinates, xi_a = e_{2n+a}.
GffStructure canonical_structure(int n, int s);

/// Reorders (xi, eta, epsilon) so the timelike characteristic vector is first.
/// Structures without exactly one timelike xi are returned unchanged.
GffStructure normalize_timelike_first(const GffStructure& S);

struct GffValidationOptions {
  double tol = Tolerances{}.validation;
  bool require_lorentzian = true;
};

ValidationReport validate_gff(const GffStructure& S, const GffValidationOptions& opts = {});

/// Phi(X, Y) = g(X, phi Y).
double fundamental_two_form(const GffStructure& S, const Vector& x, const Vector& y);

enum class SphereKind { S_of_z, S_phi, N_of_z, N_phi };

std::string to_string(SphereKind k);

struct CelestialSample {
  Matrix points;  // one point per column
  SphereKind kind = SphereKind::S_phi;
  std::uint64_t seed = 0;
  int count = 0;
};

/// Uniform unit-sphere draws pushed through a positive-definite orthonormal frame.
Matrix sample_frame_sphere(const SubspaceBasis& frame, int count, std::uint64_t seed);

/// Points x with g(x,x) = 1, g(x, xi_1) = 0, x in Im(phi).
CelestialSample sample_phi_celestial(const GffStructure& S, int count, std::uint64_t seed);
/// Unit vectors of xi_1^perp (the full celestial sphere of xi_1).
CelestialSample sample_celestial(const GffStructure& S, int count, std::uint64_t seed);
/// Celestial sphere of an arbitrary unit timelike z.
CelestialSample sample_celestial(const ScalarProduct& g, const Vector& z, int count,
                                 std::uint64_t seed);
/// psi^{-1} images of the samplers above.
CelestialSample sample_null_congruence(const GffStructure& S, int count, std::uint64_t seed);
CelestialSample sample_phi_null_congruence(const GffStructure& S, int count, std::uint64_t seed);

/// psi(u) = u - xi_1 for u in N(xi_1).
Vector psi(const GffStructure& S, const Vector& u, double tol = Tolerances{}.null);
/// psi^{-1}(x) = xi_1 + x for x in S(xi_1).
Vector psi_inverse(const GffStructure& S, const Vector& x, double tol = Tolerances{}.null);

}  // namespace phinull
