#pragma once

// Jacobi operators (classical, null-quotient, phi-null) and the sampled
// spectral deciders for the Osserman-type conditions.

#include "phinull/curvature.hpp"
#include "phinull/gff.hpp"
#include "phinull/linalg.hpp"
#include "phinull/parallel.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace phinull {

/// Operator on a subspace, in the coordinates of domain.vectors():
/// image of domain vector j is sum_i matrix(i,j) * domain vector i.
struct JacobiOperator {
  Vector base;
  SubspaceBasis domain;
  Matrix matrix;
  /// Symmetric bilinear form K = gram * matrix, i.e. K(i,j) = g(b_i, Op b_j).
  Matrix form;

  const Matrix& gram() const { return domain.gram(); }
  /// |gram * matrix - (gram * matrix)^T|_max.
  double self_adjointness_residual() const;
  /// Apply to an ambient vector lying in the span of the domain.
  Vector apply(const ScalarProduct& g, const Vector& y) const;
};

/// Builds the operator with form K and gram from domain.
JacobiOperator operator_from_form(Vector base, SubspaceBasis domain, Matrix form);

/// Representatives of u^perp / span(u) together with the induced inner product.
struct NullQuotient {
  Vector u;
  SubspaceBasis reps;  // dimension m - 2
  const Matrix& gbar() const { return reps.gram(); }
};

struct SpectralData {
  std::vector<double> eigenvalues;  // sorted by real part, then imaginary part
  std::vector<double> imag;         // imaginary parts (all zero on the self-adjoint path)
  std::vector<int> multiplicities;
  std::vector<double> group_values;  // mean real part per group
  std::vector<double> group_imag;    // mean imaginary part per group
  double grouping_tol = Tolerances{}.grouping;
  bool self_adjoint_path = true;
  double max_imag = 0.0;

  bool real() const { return max_imag <= grouping_tol; }
  Index dimension() const { return static_cast<Index>(eigenvalues.size()); }
};

/// R_z(y) = R(y,z)z on z^perp. z must be spacelike or timelike.
JacobiOperator jacobi(const CurvatureTensor& R, const ScalarProduct& g, const Vector& z,
                      const Tolerances& tol = {});
/// Same, on a caller-provided basis of z^perp.
JacobiOperator jacobi(const CurvatureTensor& R, const ScalarProduct& g, const Vector& z,
                      const SubspaceBasis& domain, const Tolerances& tol = {});

/// Throws PreconditionError if u is not null, DegenerateError if gbar is not
/// positive definite (the quotient is Euclidean only in Lorentzian signature).
NullQuotient null_quotient(const ScalarProduct& g, const Vector& u, const Tolerances& tol = {});
/// Quotient with caller-chosen representatives (columns), checked to lie in
/// u^perp and to be independent modulo u.
NullQuotient null_quotient(const ScalarProduct& g, const Vector& u, const Matrix& reps,
                           const Tolerances& tol = {});

/// bar R_u(bar x) = pi(R(x,u)u) on the quotient.
JacobiOperator null_jacobi(const CurvatureTensor& R, const ScalarProduct& g, const Vector& u,
                           const Tolerances& tol = {});
JacobiOperator null_jacobi(const CurvatureTensor& R, const ScalarProduct& g,
                           const NullQuotient& quotient);

/// Sorted eigenvalues with multiplicities. Definite domain grams use the
/// generalized symmetric solver; indefinite ones fall back to a general
/// eigensolver in a g-orthonormal frame and report imaginary parts.
SpectralData spectrum(const JacobiOperator& op, double grouping_tol = Tolerances{}.grouping);
/// Spectrum of a plain symmetric matrix (identity gram).
SpectralData spectrum_of_symmetric(const Matrix& m, double grouping_tol = Tolerances{}.grouping);

/// Groups sorted values into multiplicities.
SpectralData group_spectrum(std::vector<double> re, std::vector<double> im, double grouping_tol,
                            bool self_adjoint_path);

/// Whether two spectra have the same groups and multiplicities, with group
/// values within tol; deviation receives the largest group discrepancy.
bool same_spectrum(const SpectralData& lhs, const SpectralData& rhs, double tol,
                   double* deviation = nullptr);

struct SpectrumRecord {
  Vector base;
  SpectralData spectrum;
};

struct GroupRange {
  int multiplicity = 0;
  double min = 0.0;
  double max = 0.0;
};

struct DecisionReport {
  std::string condition;
  bool pass = false;
  std::uint64_t seed = 0;
  int samples = 0;
  double tol = Tolerances{}.constancy;
  double grouping_tol = Tolerances{}.grouping;
  std::vector<SpectrumRecord> records;
  /// Per-group ranges across samples; filled when group structure is constant.
  std::vector<GroupRange> groups;
  double max_deviation = 0.0;
  /// First sample whose spectrum disagrees with sample 0.
  std::optional<int> counterexample;
};

/// Builds the constancy verdict from per-sample spectra.
DecisionReport decide_constancy(std::string condition, std::vector<SpectrumRecord> records,
                                std::uint64_t seed, double tol, double grouping_tol);

struct DeciderOptions {
  int samples = 64;
  std::uint64_t seed = 0;
  Tolerances tol{};
  Exec exec = default_exec;
  /// Rapidity bound for unit vectors drawn on the (noncompact) pseudo-spheres.
  double max_rapidity = 1.5;
};

/// Unit vectors of the given causal kind (spacelike or timelike), drawn in a
/// g-orthonormal frame; deterministic per seed.
Matrix sample_unit_vectors(const ScalarProduct& g, Causal kind, int count, std::uint64_t seed,
                           double max_rapidity = 1.5);

DecisionReport is_osserman_at(const CurvatureTensor& R, const ScalarProduct& g, Causal kind,
                              const DeciderOptions& opts = {});

DecisionReport is_null_osserman_wrt(const CurvatureTensor& R, const ScalarProduct& g,
                                    const Vector& z, const DeciderOptions& opts = {});

struct PhiNullReport {
  DecisionReport quotient;  // spectra of bar R_u, u in N_phi(xi_1)
  DecisionReport direct;    // spectra of R_x, x in S_phi(xi_1)
  /// The definition of the condition is the quotient path.
  bool pass() const { return quotient.pass; }
  bool paths_agree() const { return quotient.pass == direct.pass; }
};

PhiNullReport is_phi_null_osserman_wrt(const CurvatureTensor& R, const GffStructure& S,
                                       const DeciderOptions& opts = {});

}  // namespace phinull
