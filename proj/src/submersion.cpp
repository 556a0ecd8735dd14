#include "phinull/submersion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace phinull {

namespace {

bool is_horizontal(const FibrationModel& F, const Vector& x, double tol) {
  return F.vertical_part(x).norm() <= tol * std::max(1.0, x.norm());
}

void require_horizontal(const FibrationModel& F, const Vector& x, const Tolerances& tol,
                        const char* what) {
  if (x.size() != F.structure.dim()) {
    throw PreconditionError(std::string(what) + ": dimension mismatch");
  }
  if (!is_horizontal(F, x, tol.validation)) {
    std::ostringstream msg;
    msg << what << ": vector is not horizontal (vertical residual " << F.vertical_part(x).norm()
        << ")";
    throw PreconditionError(msg.str());
  }
}

double expected_sigma(FibrationKind kind, int s) {
  switch (kind) {
    case FibrationKind::pi_full: return s - 2;
    case FibrationKind::tau: return s - 1;
    case FibrationKind::pi_prime: return -1;
    case FibrationKind::remark_sasaki: return s - 3;
  }
  return 0;
}

// Basis of { v in span(basis) : constraints^T v = 0 } for the given ambient covectors.
Matrix constrained_span(const Matrix& basis, const Matrix& covectors, const Tolerances& tol) {
  return basis * null_space((basis.transpose() * covectors).transpose(), tol.rank);
}

}  // namespace

std::string to_string(FibrationKind k) {
  switch (k) {
    case FibrationKind::pi_full: return "pi_full";
    case FibrationKind::tau: return "tau";
    case FibrationKind::pi_prime: return "pi_prime";
    case FibrationKind::remark_sasaki: return "remark_sasaki";
  }
  return "unknown";
}

FibrationKind fibration_kind_from_string(const std::string& name) {
  for (auto k : {FibrationKind::pi_full, FibrationKind::tau, FibrationKind::pi_prime,
                 FibrationKind::remark_sasaki}) {
    if (to_string(k) == name) return k;
  }
  throw PreconditionError("unknown fibration kind: " + name);
}

Vector FibrationModel::vertical_part(const Vector& v) const {
  Vector out = Vector::Zero(v.size());
  for (int a : vertical_indices) out += structure.eta(a).dot(v) * structure.xi(a);
  return out;
}

Vector FibrationModel::vertical_sum() const {
  Vector out = Vector::Zero(structure.dim());
  for (int a : vertical_indices) out += structure.xi(a);
  return out;
}

FibrationModel make_fibration(const GffStructure& S, FibrationKind kind, const Tolerances& tol) {
  const int s = S.s();
  if (kind == FibrationKind::pi_prime && s != 1) {
    throw PreconditionError("make_fibration: pi_prime requires s = 1");
  }
  if (kind != FibrationKind::pi_prime && s < 2) {
    throw PreconditionError("make_fibration: " + to_string(kind) + " requires s >= 2");
  }
  if (!S.lorentzian_normalized()) {
    throw PreconditionError("make_fibration: structure must be Lorentzian with xi_1 timelike");
  }
  const SubspaceBasis& image = S.image_frame();
  if (image.dim() != 2 * S.n()) {
    throw PreconditionError("make_fibration: Im(phi) does not have dimension 2n");
  }

  std::vector<int> vertical;
  Matrix horizontal = image.vectors();
  auto add_horizontal = [&](int a) {
    horizontal.conservativeResize(Eigen::NoChange, horizontal.cols() + 1);
    horizontal.col(horizontal.cols() - 1) = S.xi(a);
  };
  switch (kind) {
    case FibrationKind::pi_full:
    case FibrationKind::pi_prime:
      for (int a = 0; a < s; ++a) vertical.push_back(a);
      break;
    case FibrationKind::tau:
      for (int a = 1; a < s; ++a) vertical.push_back(a);
      add_horizontal(0);
      break;
    case FibrationKind::remark_sasaki:
      for (int a = 0; a < s - 1; ++a) vertical.push_back(a);
      add_horizontal(s - 1);
      break;
  }
  Matrix v(S.dim(), static_cast<Index>(vertical.size()));
  double sign_sum = 0.0;
  for (std::size_t i = 0; i < vertical.size(); ++i) {
    v.col(static_cast<Index>(i)) = S.xi(vertical[i]);
    sign_sum += S.epsilon()[static_cast<std::size_t>(vertical[i])];
  }
  const double sigma = expected_sigma(kind, s);
  if (sign_sum != sigma) {
    std::ostringstream msg;
    msg << "make_fibration: vertical sign sum " << sign_sum << " does not match sigma " << sigma;
    throw PreconditionError(msg.str());
  }
  FibrationModel F{kind,
                   S,
                   SubspaceBasis(S.g(), std::move(horizontal), tol.rank),
                   SubspaceBasis(S.g(), std::move(v), tol.rank),
                   std::move(vertical),
                   sigma};
  const Matrix cross = F.horizontal.vectors().transpose() * S.g().components() * F.vertical.vectors();
  if (cross.size() > 0 && cross.cwiseAbs().maxCoeff() > tol.validation) {
    throw PreconditionError("make_fibration: horizontal and vertical spaces are not orthogonal");
  }
  if (F.horizontal.dim() + F.vertical.dim() != S.dim()) {
    throw PreconditionError("make_fibration: splitting does not span the tangent space");
  }
  return F;
}

Vector oneill_A(const FibrationModel& F, const Vector& x, const Vector& y, const Tolerances& tol) {
  require_horizontal(F, x, tol, "oneill_A");
  if (y.size() != x.size()) throw PreconditionError("oneill_A: dimension mismatch");
  const GffStructure& S = F.structure;
  const ScalarProduct& g = S.g();
  const Vector phi_x = S.phi() * x;
  const Vector hy = F.horizontal_part(y);

  // Horizontal argument: vertical output.
  double coefficient = 0.0;
  switch (F.kind) {
    case FibrationKind::pi_full:
    case FibrationKind::pi_prime:
    case FibrationKind::tau:
      coefficient = -g(x, S.phi() * hy);
      break;
    case FibrationKind::remark_sasaki:
      coefficient = g(hy, phi_x);
      break;
  }
  Vector out = coefficient * F.vertical_sum();

  // Vertical argument: horizontal output, A_X xi_a = -eps_a phi X.
  for (int a : F.vertical_indices) {
    const double component = S.eta(a).dot(y);
    if (F.kind == FibrationKind::tau) {
      out -= component * phi_x;
    } else {
      out -= component * S.epsilon()[static_cast<std::size_t>(a)] * phi_x;
    }
  }
  return out;
}

Matrix base_jacobi_form(const CurvatureTensor& R, const FibrationModel& F, const Vector& w,
                        const Matrix& basis, const Tolerances& tol) {
  require_horizontal(F, w, tol, "base_jacobi_form");
  const ScalarProduct& g = F.structure.g();
  const Index k = basis.cols();
  Matrix form = basis.transpose() * R.jacobi_form(w) * basis;
  std::vector<Vector> a_w(static_cast<std::size_t>(k));
  std::vector<Vector> a_b(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    a_w[static_cast<std::size_t>(i)] = oneill_A(F, w, basis.col(i), tol);
    a_b[static_cast<std::size_t>(i)] = oneill_A(F, basis.col(i), w, tol);
  }
  for (Index i = 0; i < k; ++i) {
    for (Index j = 0; j < k; ++j) {
      const auto si = static_cast<std::size_t>(i);
      const auto sj = static_cast<std::size_t>(j);
      form(i, j) += 2.0 * g(a_w[si], a_w[sj]) - g(a_b[si], a_w[sj]);
    }
  }
  return form;
}

JacobiOperator r_star(const CurvatureTensor& R, const FibrationModel& F, const Vector& x,
                      const Tolerances& tol) {
  require_horizontal(F, x, tol, "r_star");
  const ScalarProduct& g = F.structure.g();
  if (std::abs(g(x, x) - 1.0) > tol.null) {
    throw PreconditionError("r_star: x must be unit spacelike");
  }
  const Matrix domain =
      constrained_span(F.horizontal.vectors(), Matrix(g.flat(x)), tol);
  return operator_from_form(x, SubspaceBasis(g, domain, tol.rank),
                            base_jacobi_form(R, F, x, domain, tol));
}

SubspaceBasis phi_orthogonal_space(const GffStructure& S, const Vector& x, const Tolerances& tol) {
  return SubspaceBasis(S.g(),
                       constrained_span(S.image_frame().vectors(), Matrix(S.g().flat(x)), tol),
                       tol.rank);
}

namespace {

void require_phi_sphere(const GffStructure& S, const Vector& x, const Tolerances& tol,
                        const char* what) {
  const ScalarProduct& g = S.g();
  const bool unit = std::abs(g(x, x) - 1.0) <= tol.null;
  const bool in_image = (S.eta() * x).cwiseAbs().maxCoeff() <= tol.validation * std::max(1.0, x.norm());
  if (!unit || !in_image || std::abs(g(x, S.xi(0))) > tol.null) {
    throw PreconditionError(std::string(what) + ": x must lie in S_phi(xi_1)");
  }
}

}  // namespace

ShiftResidual shift_identity_residual(const CurvatureTensor& R, const FibrationModel& F,
                                      const Vector& x, const Vector& y, const Tolerances& tol) {
  const GffStructure& S = F.structure;
  const ScalarProduct& g = S.g();
  require_phi_sphere(S, x, tol, "shift_identity_residual");
  const double scale = std::max(1.0, y.norm());
  if (std::abs(g(x, y)) > tol.validation * scale ||
      (S.eta() * y).cwiseAbs().maxCoeff() > tol.validation * scale) {
    throw PreconditionError("shift_identity_residual: y must lie in x^perp and Im(phi)");
  }
  const Vector phi_x = S.phi() * x;
  const Vector rx_y = R.apply(g, y, x, x);
  const Vector lhs = r_star(R, F, x, tol).apply(g, y);
  const Vector rhs = F.horizontal_part(rx_y) + 3.0 * F.sigma * g(y, phi_x) * phi_x;
  const SubspaceBasis v_space = phi_orthogonal_space(S, x, tol);
  return ShiftResidual{(lhs - rhs).norm(), (rx_y - v_space.project(g, rx_y)).norm()};
}

DecisionReport base_osserman_check(const CurvatureTensor& R, const FibrationModel& F,
                                   const DeciderOptions& opts) {
  if (F.kind != FibrationKind::pi_full && F.kind != FibrationKind::pi_prime) {
    throw PreconditionError("base_osserman_check: fibration must be pi_full or pi_prime");
  }
  const CelestialSample sphere = sample_phi_celestial(F.structure, opts.samples, opts.seed);
  std::vector<SpectrumRecord> records(static_cast<std::size_t>(sphere.count));
  for_each_index(opts.exec, sphere.count, [&](std::ptrdiff_t i) {
    const Vector x = sphere.points.col(i);
    records[static_cast<std::size_t>(i)] =
        SpectrumRecord{x, spectrum(r_star(R, F, x, opts.tol), opts.tol.grouping)};
  });
  return decide_constancy("base-osserman/" + to_string(F.kind), std::move(records), opts.seed,
                          opts.tol.constancy, opts.tol.grouping);
}

JacobiOperator base_null_jacobi(const CurvatureTensor& R, const FibrationModel& F,
                                const Vector& u, const Tolerances& tol) {
  require_horizontal(F, u, tol, "base_null_jacobi");
  const ScalarProduct& g = F.structure.g();
  if (causal_character(g, u, tol.null) != Causal::null) {
    throw PreconditionError("base_null_jacobi: u is not null");
  }
  Matrix constraints(g.dim(), 2);
  constraints << g.flat(u), u;
  const Matrix reps = constrained_span(F.horizontal.vectors(), constraints, tol);
  SubspaceBasis domain(g, reps, tol.rank);
  const Inertia in = inertia(domain.gram(), tol.rank);
  if (in.minus > 0 || in.zero > 0) {
    throw DegenerateError("base_null_jacobi: induced quotient metric is not positive definite");
  }
  Matrix form = base_jacobi_form(R, F, u, reps, tol);
  return operator_from_form(u, std::move(domain), std::move(form));
}

BaseNullReport base_null_osserman_check(const CurvatureTensor& R, const FibrationModel& F,
                                        const DeciderOptions& opts) {
  if (F.kind != FibrationKind::tau) {
    throw PreconditionError("base_null_osserman_check: fibration must be tau");
  }
  const CelestialSample sphere = sample_phi_celestial(F.structure, opts.samples, opts.seed);
  const Vector xi1 = F.structure.xi(0);
  std::vector<SpectrumRecord> quotient(static_cast<std::size_t>(sphere.count));
  std::vector<SpectrumRecord> direct(static_cast<std::size_t>(sphere.count));
  for_each_index(opts.exec, sphere.count, [&](std::ptrdiff_t i) {
    const Vector x = sphere.points.col(i);
    const Vector u = xi1 + x;
    const auto si = static_cast<std::size_t>(i);
    quotient[si] = SpectrumRecord{u, spectrum(base_null_jacobi(R, F, u, opts.tol), opts.tol.grouping)};
    direct[si] = SpectrumRecord{x, spectrum(r_star(R, F, x, opts.tol), opts.tol.grouping)};
  });
  return BaseNullReport{
      decide_constancy("base-null-osserman/quotient", std::move(quotient), opts.seed,
                       opts.tol.constancy, opts.tol.grouping),
      decide_constancy("base-null-osserman/direct", std::move(direct), opts.seed,
                       opts.tol.constancy, opts.tol.grouping)};
}

std::string to_string(TheoremStatus s) {
  switch (s) {
    case TheoremStatus::agree: return "agree";
    case TheoremStatus::hypothesis_false: return "hypothesis-false";
    case TheoremStatus::disagree: return "disagree";
    case TheoremStatus::inconsistent: return "inconsistent";
  }
  return "unknown";
}

TheoremReport theorem_equivalence_report(const CurvatureTensor& R, const GffStructure& S,
                                         const TheoremOptions& opts) {
  if (S.s() < 2) throw PreconditionError("theorem_equivalence_report: requires s >= 2");
  const DeciderOptions& d = opts.decider;
  FibrationModel pi = make_fibration(S, FibrationKind::pi_full, d.tol);
  FibrationModel tau = make_fibration(S, FibrationKind::tau, d.tol);
  pi.sigma += opts.sigma_fault;
  tau.sigma += opts.sigma_fault;

  TheoremReport report{is_phi_null_osserman_wrt(R, S, d), base_osserman_check(R, pi, d),
                       base_null_osserman_check(R, tau, d)};
  report.tol = d.tol.constancy;
  report.verdict_a = report.phi_null.direct.pass;
  report.verdict_b = report.base.pass;
  report.verdict_c = report.base_null.pass();

  const ScalarProduct& g = S.g();
  const CelestialSample sphere = sample_phi_celestial(S, d.samples, d.seed);
  std::vector<double> hyp(static_cast<std::size_t>(sphere.count));
  std::vector<double> shift(static_cast<std::size_t>(sphere.count));
  for_each_index(d.exec, sphere.count, [&](std::ptrdiff_t i) {
    const Vector x = sphere.points.col(i);
    const Vector phi_x = S.phi() * x;
    const Vector rx = R.apply(g, phi_x, x, x);
    const double lambda = g(rx, phi_x);
    hyp[static_cast<std::size_t>(i)] = (rx - lambda * phi_x).norm();
    double worst = 0.0;
    for (const FibrationModel* F : {&pi, &tau}) {
      const double base = g(r_star(R, *F, x, d.tol).apply(g, phi_x), phi_x);
      worst = std::max(worst, std::abs(base - lambda - 3.0 * F->sigma));
    }
    shift[static_cast<std::size_t>(i)] = worst;
  });
  report.hypothesis_residual = *std::max_element(hyp.begin(), hyp.end());
  report.shift_consistency_residual = *std::max_element(shift.begin(), shift.end());
  report.hypothesis = report.hypothesis_residual < d.tol.constancy;

  bool agree = true;
  if (report.hypothesis) {
    report.contract_applies = true;
    agree = report.verdict_a == report.verdict_b && report.verdict_b == report.verdict_c;
  } else if (S.s() == 2) {
    report.contract_applies = true;
    agree = report.verdict_a == report.verdict_b;
  }
  if (report.shift_consistency_residual > 1e-9) {
    report.status = TheoremStatus::inconsistent;
  } else if (report.contract_applies && !agree) {
    report.status = TheoremStatus::disagree;
  } else if (!report.contract_applies) {
    report.status = TheoremStatus::hypothesis_false;
  } else {
    report.status = TheoremStatus::agree;
  }
  return report;
}

std::string to_string(RemarkKind k) {
  return k == RemarkKind::sasaki_base ? "sasaki_base" : "lorentz_sasaki_base";
}

RemarkKind remark_kind_from_string(const std::string& name) {
  if (name == "sasaki_base" || name == "sasaki-base") return RemarkKind::sasaki_base;
  if (name == "lorentz_sasaki_base" || name == "lorentz-sasaki-base") {
    return RemarkKind::lorentz_sasaki_base;
  }
  throw PreconditionError("unknown remark kind: " + name);
}

RemarkReport remark_sectional_conditions(const CurvatureTensor& R, const GffStructure& S,
                                         RemarkKind kind, const DeciderOptions& opts,
                                         double identity_tol) {
  if (S.s() < 2) throw PreconditionError("remark_sectional_conditions: requires s >= 2");
  const int s = S.s();
  const FibrationKind fk =
      kind == RemarkKind::sasaki_base ? FibrationKind::remark_sasaki : FibrationKind::tau;
  const FibrationModel F = make_fibration(S, fk, opts.tol);
  const ScalarProduct& g = S.g();

  RemarkReport report;
  report.kind = kind;
  report.fibration = fk;
  report.vertical_sign_sum = F.sigma;
  report.target = kind == RemarkKind::sasaki_base ? 1.0 - 3.0 * (s - 3) : -1.0 - 3.0 * (s - 1);
  report.seed = opts.seed;
  report.tol = opts.tol.constancy;

  const CelestialSample sphere = sample_phi_celestial(S, opts.samples, opts.seed);
  report.samples.resize(static_cast<std::size_t>(sphere.count));
  for_each_index(opts.exec, sphere.count, [&](std::ptrdiff_t i) {
    RemarkSample r;
    r.x = sphere.points.col(i);
    const Vector phi_x = S.phi() * r.x;
    const double delta = plane_delta(g, r.x, phi_x);
    r.k_total = sectional_curvature(R, g, r.x, phi_x);
    r.k_base = g(r_star(R, F, r.x, opts.tol).apply(g, phi_x), phi_x) / delta;
    const Vector a = oneill_A(F, r.x, phi_x, opts.tol);
    r.a_norm = g(a, a);
    r.identity_residual = r.k_total - (r.k_base - 3.0 * r.a_norm);
    r.necessary_condition = std::abs(r.k_total - report.target) <= opts.tol.constancy;
    report.samples[static_cast<std::size_t>(i)] = std::move(r);
  });
  report.necessary_condition_all = true;
  for (const auto& r : report.samples) {
    report.max_identity_residual = std::max(report.max_identity_residual, std::abs(r.identity_residual));
    report.max_sign_sum_residual =
        std::max(report.max_sign_sum_residual, std::abs(r.a_norm - report.vertical_sign_sum));
    report.necessary_condition_all = report.necessary_condition_all && r.necessary_condition;
  }
  report.identity_pass = report.max_identity_residual < identity_tol;
  return report;
}

BaseStructure base_structure(const FibrationModel& F, const Tolerances& tol) {
  const GffStructure& S = F.structure;
  const ScalarProduct& g = S.g();
  BaseStructure out{F.kind, F.horizontal, F.horizontal.gram(), Matrix(), std::nullopt, 0.0};
  const Matrix& B = F.horizontal.vectors();
  const Matrix image = S.phi() * B;
  Matrix coords(B.cols(), B.cols());
  for (Index j = 0; j < B.cols(); ++j) coords.col(j) = F.horizontal.coordinates(g, image.col(j));
  out.complex_or_contact = coords;
  const double closure = (B * coords - image).cwiseAbs().maxCoeff();

  if (F.kind == FibrationKind::pi_full || F.kind == FibrationKind::pi_prime) {
    const Index k = coords.rows();
    out.residual = std::max(closure, (coords * coords + Matrix::Identity(k, k)).cwiseAbs().maxCoeff());
    if (out.residual > tol.validation) {
      std::ostringstream msg;
      msg << "base_structure: restricted phi does not square to -I (residual " << out.residual
          << ")";
      throw PreconditionError(msg.str());
    }
    return out;
  }

  // Contact-type base: the extra horizontal xi is the last carrier vector.
  const int extra = F.kind == FibrationKind::tau ? 0 : S.s() - 1;
  const Index k = B.cols();
  Matrix xi = Matrix::Zero(k, 1);
  xi(k - 1, 0) = 1.0;
  Matrix eta = S.eta().row(extra) * B;
  GffStructure contact(S.n(), 1, ScalarProduct(out.metric), coords, std::move(xi), std::move(eta),
                       {S.epsilon()[static_cast<std::size_t>(extra)]});
  const ValidationReport report =
      validate_gff(contact, GffValidationOptions{tol.validation, F.kind == FibrationKind::tau});
  out.residual = closure;
  for (const auto& c : report.checks) out.residual = std::max(out.residual, c.residual);
  if (!report.pass() || closure > tol.validation) {
    const Check* worst = report.worst_failure();
    std::ostringstream msg;
    msg << "base_structure: induced structure fails validation";
    if (worst != nullptr) msg << " (" << worst->name << ", residual " << worst->residual << ")";
    throw PreconditionError(msg.str());
  }
  out.contact = std::move(contact);
  return out;
}

}  // namespace phinull
