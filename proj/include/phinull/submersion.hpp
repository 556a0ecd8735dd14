#pragma once

// Pointwise models of the torus-bundle projections of a Lorentzian metric
// g.f.f-structure: horizontal/vertical splitting, closed-form O'Neill A-tensor,
// the base Jacobi operator R*, and the deciders built on them.

#include "phinull/curvature.hpp"
#include "phinull/gff.hpp"
#include "phinull/jacobi.hpp"

#include <optional>
#include <string>
#include <vector>

namespace phinull {

/// pi_full:       V = span(xi_1..xi_s),     H = Im(phi),               sigma = s - 2
/// tau:           V = span(xi_2..xi_s),     H = Im(phi) + span(xi_1),  sigma = s - 1
/// pi_prime:      V = span(xi_1), s = 1,    H = Im(phi),               sigma = -1
/// remark_sasaki: V = span(xi_1..xi_{s-1}), H = Im(phi) + span(xi_s),  sigma = s - 3
enum class FibrationKind { pi_full, tau, pi_prime, remark_sasaki };

std::string to_string(FibrationKind k);
FibrationKind fibration_kind_from_string(const std::string& name);

struct FibrationModel {
  FibrationKind kind;
  GffStructure structure;
  SubspaceBasis horizontal;
  SubspaceBasis vertical;
  std::vector<int> vertical_indices;  // 0-based indices a of the xi_a spanning V
  /// Vertical sign sum; the rank-one shift of R* is 3 * sigma.
  double sigma;

  /// Vertical part of v: sum over vertical a of eta^a(v) xi_a.
  Vector vertical_part(const Vector& v) const;
  Vector horizontal_part(const Vector& v) const { return v - vertical_part(v); }
  /// Sum of the vertical xi_a.
  Vector vertical_sum() const;
};

FibrationModel make_fibration(const GffStructure& S, FibrationKind kind,
                              const Tolerances& tol = {});

/// A_X Y from the closed forms; X must be horizontal, Y arbitrary (the
/// tensor is extended linearly over Y = hY + vY).
Vector oneill_A(const FibrationModel& F, const Vector& x, const Vector& y,
                const Tolerances& tol = {});

/// g(R*(w, y) w, z) = R(w,y,w,z) + 2 g(A_w y, A_w z) - g(A_y w, A_w z) for
/// horizontal w; returns the matrix over the columns of basis.
Matrix base_jacobi_form(const CurvatureTensor& R, const FibrationModel& F, const Vector& w,
                        const Matrix& basis, const Tolerances& tol = {});

/// R*_x on x^perp intersected with H; x horizontal and unit spacelike.
JacobiOperator r_star(const CurvatureTensor& R, const FibrationModel& F, const Vector& x,
                      const Tolerances& tol = {});

/// Basis of x^perp intersected with Im(phi).
SubspaceBasis phi_orthogonal_space(const GffStructure& S, const Vector& x,
                                   const Tolerances& tol = {});

struct ShiftResidual {
  /// |R*_x(y) - h R_x(y) - 3 sigma g(y, phi x) phi x|.
  double residual = 0.0;
  /// Component of R_x(y) outside V = x^perp intersected with Im(phi).
  double v_leak = 0.0;
};

/// x in S_phi(xi_1), y in x^perp intersected with Im(phi).
ShiftResidual shift_identity_residual(const CurvatureTensor& R, const FibrationModel& F,
                                      const Vector& x, const Vector& y,
                                      const Tolerances& tol = {});

/// Osserman condition of the base through R*; kind pi_full or pi_prime.
DecisionReport base_osserman_check(const CurvatureTensor& R, const FibrationModel& F,
                                   const DeciderOptions& opts = {});

struct BaseNullReport {
  DecisionReport quotient;  // null Jacobi operators of the base, u' = xi_1 + x
  DecisionReport direct;    // R*_x on x^perp intersected with H
  bool pass() const { return quotient.pass; }
};

/// Base null quotient operator at the null horizontal vector u.
JacobiOperator base_null_jacobi(const CurvatureTensor& R, const FibrationModel& F,
                                const Vector& u, const Tolerances& tol = {});

/// Null Osserman condition of the base with respect to xi' = xi_1; kind tau.
BaseNullReport base_null_osserman_check(const CurvatureTensor& R, const FibrationModel& F,
                                        const DeciderOptions& opts = {});

struct TheoremOptions {
  DeciderOptions decider{};
  /// Test hook: added to the stored sigma of both fibrations after construction.
  double sigma_fault = 0.0;
};

enum class TheoremStatus { agree, hypothesis_false, disagree, inconsistent };

std::string to_string(TheoremStatus s);

struct TheoremReport {
  PhiNullReport phi_null;   // (a), direct path carries the verdict
  DecisionReport base;      // (b), pi_full
  BaseNullReport base_null; // (c), tau
  bool verdict_a = false;
  bool verdict_b = false;
  bool verdict_c = false;
  bool hypothesis = false;
  double hypothesis_residual = 0.0;  // max |R_x(phi x) - lambda phi x|
  /// max |g(R*_x phi x, phi x) - g(R_x phi x, phi x) - 3 sigma| over samples and
  /// both fibrations; an engine self-check.
  double shift_consistency_residual = 0.0;
  bool contract_applies = false;
  TheoremStatus status = TheoremStatus::agree;
  double tol = Tolerances{}.constancy;
};

TheoremReport theorem_equivalence_report(const CurvatureTensor& R, const GffStructure& S,
                                         const TheoremOptions& opts = {});

enum class RemarkKind { sasaki_base, lorentz_sasaki_base };

std::string to_string(RemarkKind k);
RemarkKind remark_kind_from_string(const std::string& name);

struct RemarkSample {
  Vector x;
  double k_total = 0.0;       // k(x, phi x) from R
  double k_base = 0.0;        // k*(x, phi x) from R*
  double a_norm = 0.0;        // g(A_x phi x, A_x phi x)
  double identity_residual = 0.0;
  bool necessary_condition = false;
};

struct RemarkReport {
  RemarkKind kind;
  FibrationKind fibration;
  double vertical_sign_sum = 0.0;
  double target = 0.0;  // 1 - 3(s-3) or -1 - 3(s-1)
  std::vector<RemarkSample> samples;
  double max_identity_residual = 0.0;
  double max_sign_sum_residual = 0.0;  // |g(A_x phi x, A_x phi x) - sign sum|
  bool identity_pass = false;
  bool necessary_condition_all = false;
  std::uint64_t seed = 0;
  double tol = Tolerances{}.constancy;
};

RemarkReport remark_sectional_conditions(const CurvatureTensor& R, const GffStructure& S,
                                         RemarkKind kind, const DeciderOptions& opts = {},
                                         double identity_tol = 1e-9);

struct BaseStructure {
  FibrationKind kind;
  SubspaceBasis carrier;
  Matrix metric;            // restricted gram
  Matrix complex_or_contact;  // phi restricted to the carrier, carrier coordinates
  /// Induced structure for the tau and remark_sasaki bases.
  std::optional<GffStructure> contact;
  double residual = 0.0;
};

BaseStructure base_structure(const FibrationModel& F, const Tolerances& tol = {});

}  // namespace phinull
