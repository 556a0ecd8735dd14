#include "phinull/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace phinull {

namespace {

std::string describe(const Inertia& in) {
  std::ostringstream out;
  out << "(+" << in.plus << ", -" << in.minus << ", 0:" << in.zero << ")";
  return out.str();
}

}  // namespace

double JacobiOperator::self_adjointness_residual() const {
  if (matrix.size() == 0) return 0.0;
  const Matrix k = gram() * matrix;
  return (k - k.transpose()).cwiseAbs().maxCoeff();
}

Vector JacobiOperator::apply(const ScalarProduct& g, const Vector& y) const {
  return domain.vectors() * (matrix * domain.coordinates(g, y));
}

JacobiOperator operator_from_form(Vector base, SubspaceBasis domain, Matrix form) {
  const Matrix& gram = domain.gram();
  if (gram.rows() > 0 && inertia(gram).zero > 0) {
    throw DegenerateError("jacobi operator: the domain carries a degenerate metric");
  }
  Matrix k = 0.5 * (form + form.transpose());
  Matrix m = gram.rows() > 0 ? Matrix(gram.fullPivLu().solve(k)) : Matrix(0, 0);
  return JacobiOperator{std::move(base), std::move(domain), std::move(m), std::move(k)};
}

JacobiOperator jacobi(const CurvatureTensor& R, const ScalarProduct& g, const Vector& z,
                      const Tolerances& tol) {
  const Causal c = causal_character(g, z, tol.null);
  if (c == Causal::null || c == Causal::zero) {
    throw PreconditionError("jacobi: base vector is " + to_string(c) + "; use null_jacobi");
  }
  return jacobi(R, g, z, orthogonal_complement(g, z, tol), tol);
}

JacobiOperator jacobi(const CurvatureTensor& R, const ScalarProduct& g, const Vector& z,
                      const SubspaceBasis& domain, const Tolerances& tol) {
  if (R.dim() != g.dim() || z.size() != g.dim() || domain.ambient_dim() != g.dim()) {
    throw PreconditionError("jacobi: dimension mismatch");
  }
  const Causal c = causal_character(g, z, tol.null);
  if (c == Causal::null || c == Causal::zero) {
    throw PreconditionError("jacobi: base vector is " + to_string(c) + "; use null_jacobi");
  }
  const Vector gz = g.flat(z);
  const double leak = (domain.vectors().transpose() * gz).cwiseAbs().maxCoeff();
  if (domain.dim() > 0 && leak > tol.validation * std::max(1.0, gz.norm())) {
    throw PreconditionError("jacobi: domain is not contained in z^perp");
  }
  const Matrix& B = domain.vectors();
  return operator_from_form(z, domain, B.transpose() * R.jacobi_form(z) * B);
}

NullQuotient null_quotient(const ScalarProduct& g, const Vector& u, const Tolerances& tol) {
  if (u.size() != g.dim()) throw PreconditionError("null_quotient: dimension mismatch");
  if (causal_character(g, u, tol.null) != Causal::null) {
    throw PreconditionError("null_quotient: u is not a null vector");
  }
  Matrix constraints(2, g.dim());
  constraints.row(0) = g.flat(u).transpose();
  constraints.row(1) = u.transpose();
  return null_quotient(g, u, null_space(constraints, tol.rank), tol);
}

NullQuotient null_quotient(const ScalarProduct& g, const Vector& u, const Matrix& reps,
                           const Tolerances& tol) {
  const Index m = g.dim();
  if (u.size() != m || reps.rows() != m) {
    throw PreconditionError("null_quotient: dimension mismatch");
  }
  if (causal_character(g, u, tol.null) != Causal::null) {
    throw PreconditionError("null_quotient: u is not a null vector");
  }
  if (reps.cols() != m - 2) {
    throw PreconditionError("null_quotient: expected m - 2 representatives");
  }
  const Vector gu = g.flat(u);
  if (reps.cols() > 0 &&
      (reps.transpose() * gu).cwiseAbs().maxCoeff() > tol.validation * std::max(1.0, gu.norm()) *
                                                          std::max(1.0, reps.norm())) {
    throw PreconditionError("null_quotient: representatives are not in u^perp");
  }
  Matrix with_u(m, m - 1);
  with_u << reps, u;
  if (numerical_rank(with_u, tol.rank) != m - 1) {
    throw PreconditionError("null_quotient: representatives are dependent modulo u");
  }
  NullQuotient q{u, SubspaceBasis(g, reps, tol.rank)};
  const Inertia in = inertia(q.gbar(), tol.rank);
  if (in.minus > 0 || in.zero > 0) {
    throw DegenerateError("null_quotient: gbar is not positive definite, inertia " + describe(in) +
                          " (requires Lorentzian signature)");
  }
  return q;
}

JacobiOperator null_jacobi(const CurvatureTensor& R, const ScalarProduct& g, const Vector& u,
                           const Tolerances& tol) {
  return null_jacobi(R, g, null_quotient(g, u, tol));
}

JacobiOperator null_jacobi(const CurvatureTensor& R, const ScalarProduct& g,
                           const NullQuotient& quotient) {
  if (R.dim() != g.dim()) throw PreconditionError("null_jacobi: dimension mismatch");
  // g(x_i, R(x_j,u)u) only sees R(x_j,u)u modulo span(u), since g(x_i, u) = 0.
  const Matrix& B = quotient.reps.vectors();
  return operator_from_form(quotient.u, quotient.reps,
                            B.transpose() * R.jacobi_form(quotient.u) * B);
}

SpectralData group_spectrum(std::vector<double> re, std::vector<double> im, double grouping_tol,
                            bool self_adjoint_path) {
  std::vector<std::size_t> order(re.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return re[a] != re[b] ? re[a] < re[b] : im[a] < im[b];
  });
  SpectralData out;
  out.grouping_tol = grouping_tol;
  out.self_adjoint_path = self_adjoint_path;
  for (std::size_t idx : order) {
    out.eigenvalues.push_back(re[idx]);
    out.imag.push_back(im[idx]);
    out.max_imag = std::max(out.max_imag, std::abs(im[idx]));
  }
  std::size_t start = 0;
  for (std::size_t i = 1; i <= out.eigenvalues.size(); ++i) {
    const bool split = i == out.eigenvalues.size() ||
                       out.eigenvalues[i] - out.eigenvalues[i - 1] > grouping_tol ||
                       std::abs(out.imag[i] - out.imag[i - 1]) > grouping_tol;
    if (!split) continue;
    double sum_re = 0.0;
    double sum_im = 0.0;
    for (std::size_t j = start; j < i; ++j) {
      sum_re += out.eigenvalues[j];
      sum_im += out.imag[j];
    }
    const auto count = static_cast<double>(i - start);
    out.multiplicities.push_back(static_cast<int>(i - start));
    out.group_values.push_back(sum_re / count);
    out.group_imag.push_back(sum_im / count);
    start = i;
  }
  return out;
}

SpectralData spectrum_of_symmetric(const Matrix& m, double grouping_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  std::vector<double> re(eig.eigenvalues().data(),
                         eig.eigenvalues().data() + eig.eigenvalues().size());
  return group_spectrum(std::move(re), std::vector<double>(re.size(), 0.0), grouping_tol, true);
}

SpectralData spectrum(const JacobiOperator& op, double grouping_tol) {
  const Matrix& gram = op.gram();
  const Index k = gram.rows();
  if (k == 0) return group_spectrum({}, {}, grouping_tol, true);
  const Inertia in = inertia(gram);
  if (in.zero > 0) throw DegenerateError("spectrum: degenerate domain metric");
  if (in.minus == 0 || in.plus == 0) {
    const double sign = in.minus == 0 ? 1.0 : -1.0;
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> eig(sign * op.form, sign * gram,
                                                         Eigen::EigenvaluesOnly);
    std::vector<double> re(eig.eigenvalues().data(), eig.eigenvalues().data() + k);
    return group_spectrum(std::move(re), std::vector<double>(static_cast<std::size_t>(k), 0.0),
                          grouping_tol, true);
  }
  // Indefinite domain: pass to a g-orthonormal frame and use a general solver.
  Eigen::SelfAdjointEigenSolver<Matrix> frame(gram);
  const Matrix scale = frame.eigenvalues().cwiseAbs().cwiseSqrt().asDiagonal();
  const Matrix T = frame.eigenvectors() * scale.inverse();
  const Matrix T_inv = scale * frame.eigenvectors().transpose();
  Eigen::EigenSolver<Matrix> eig(T_inv * op.matrix * T, false);
  std::vector<double> re;
  std::vector<double> im;
  for (Index i = 0; i < k; ++i) {
    re.push_back(eig.eigenvalues()(i).real());
    im.push_back(eig.eigenvalues()(i).imag());
  }
  return group_spectrum(std::move(re), std::move(im), grouping_tol, false);
}

bool same_spectrum(const SpectralData& lhs, const SpectralData& rhs, double tol,
                   double* deviation) {
  double dev = 0.0;
  bool same = lhs.multiplicities == rhs.multiplicities;
  if (same) {
    for (std::size_t i = 0; i < lhs.group_values.size(); ++i) {
      dev = std::max(dev, std::abs(lhs.group_values[i] - rhs.group_values[i]));
      dev = std::max(dev, std::abs(lhs.group_imag[i] - rhs.group_imag[i]));
    }
    same = dev < tol;
  } else {
    dev = std::numeric_limits<double>::infinity();
  }
  if (deviation != nullptr) *deviation = dev;
  return same;
}

DecisionReport decide_constancy(std::string condition, std::vector<SpectrumRecord> records,
                                std::uint64_t seed, double tol, double grouping_tol) {
  DecisionReport report;
  report.condition = std::move(condition);
  report.seed = seed;
  report.samples = static_cast<int>(records.size());
  report.tol = tol;
  report.grouping_tol = grouping_tol;
  report.records = std::move(records);
  report.pass = true;
  if (report.records.empty()) return report;

  const SpectralData& ref = report.records.front().spectrum;
  bool structure_constant = true;
  for (std::size_t i = 1; i < report.records.size(); ++i) {
    const SpectralData& cur = report.records[i].spectrum;
    double dev = 0.0;
    const bool same = same_spectrum(ref, cur, tol, &dev);
    if (ref.multiplicities != cur.multiplicities) structure_constant = false;
    if (std::isfinite(dev)) report.max_deviation = std::max(report.max_deviation, dev);
    if (!same && report.pass) {
      report.pass = false;
      report.counterexample = static_cast<int>(i);
    }
  }
  if (!structure_constant) {
    report.max_deviation = std::numeric_limits<double>::infinity();
    return report;
  }
  for (std::size_t gidx = 0; gidx < ref.multiplicities.size(); ++gidx) {
    GroupRange range{ref.multiplicities[gidx], ref.group_values[gidx], ref.group_values[gidx]};
    for (const auto& rec : report.records) {
      range.min = std::min(range.min, rec.spectrum.group_values[gidx]);
      range.max = std::max(range.max, rec.spectrum.group_values[gidx]);
    }
    report.groups.push_back(range);
  }
  return report;
}

Matrix sample_unit_vectors(const ScalarProduct& g, Causal kind, int count, std::uint64_t seed,
                           double max_rapidity) {
  if (kind != Causal::spacelike && kind != Causal::timelike) {
    throw PreconditionError("sample_unit_vectors: kind must be spacelike or timelike");
  }
  if (count < 1) throw PreconditionError("sample_unit_vectors: count must be at least 1");
  const SubspaceBasis frame = orthonormal_frame(g);
  const Index q = g.signature().minus;
  const Index p = g.signature().plus;
  const Matrix negative = frame.vectors().leftCols(q);
  const Matrix positive = frame.vectors().rightCols(p);
  const Matrix& own = kind == Causal::timelike ? negative : positive;
  const Matrix& other = kind == Causal::timelike ? positive : negative;
  if (own.cols() == 0) {
    throw PreconditionError("sample_unit_vectors: signature has no " + to_string(kind) +
                            " vectors");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> rapidity(0.0, max_rapidity);
  auto unit = [&](Index k) {
    Vector w(k);
    double norm = 0.0;
    do {
      for (Index i = 0; i < k; ++i) w(i) = normal(rng);
      norm = w.norm();
    } while (norm < 1e-8);
    return Vector(w / norm);
  };
  Matrix out(g.dim(), count);
  for (int i = 0; i < count; ++i) {
    Vector v = own * unit(own.cols());
    if (other.cols() > 0) {
      const double t = rapidity(rng);
      v = std::cosh(t) * v + std::sinh(t) * (other * unit(other.cols()));
    }
    out.col(i) = v / std::sqrt(std::abs(g(v, v)));
  }
  return out;
}

namespace {

template <class Build>
std::vector<SpectrumRecord> spectra_over(const Matrix& bases, Exec exec, double grouping_tol,
                                         Build&& build) {
  std::vector<SpectrumRecord> records(static_cast<std::size_t>(bases.cols()));
  for_each_index(exec, bases.cols(), [&](std::ptrdiff_t i) {
    const Vector base = bases.col(i);
    records[static_cast<std::size_t>(i)] = SpectrumRecord{base, spectrum(build(base), grouping_tol)};
  });
  return records;
}

}  // namespace

DecisionReport is_osserman_at(const CurvatureTensor& R, const ScalarProduct& g, Causal kind,
                              const DeciderOptions& opts) {
  const Matrix bases = sample_unit_vectors(g, kind, opts.samples, opts.seed, opts.max_rapidity);
  auto records = spectra_over(bases, opts.exec, opts.tol.grouping, [&](const Vector& z) {
    return jacobi(R, g, z, opts.tol);
  });
  return decide_constancy("osserman/" + to_string(kind), std::move(records), opts.seed,
                          opts.tol.constancy, opts.tol.grouping);
}

DecisionReport is_null_osserman_wrt(const CurvatureTensor& R, const ScalarProduct& g,
                                    const Vector& z, const DeciderOptions& opts) {
  const CelestialSample sphere = sample_celestial(g, z, opts.samples, opts.seed);
  Matrix nulls = sphere.points;
  nulls.colwise() += z;
  auto records = spectra_over(nulls, opts.exec, opts.tol.grouping, [&](const Vector& u) {
    return null_jacobi(R, g, u, opts.tol);
  });
  return decide_constancy("null-osserman", std::move(records), opts.seed, opts.tol.constancy,
                          opts.tol.grouping);
}

PhiNullReport is_phi_null_osserman_wrt(const CurvatureTensor& R, const GffStructure& S,
                                       const DeciderOptions& opts) {
  const CelestialSample sphere = sample_phi_celestial(S, opts.samples, opts.seed);
  Matrix nulls = sphere.points;
  nulls.colwise() += S.xi(0);
  auto quotient = spectra_over(nulls, opts.exec, opts.tol.grouping, [&](const Vector& u) {
    return null_jacobi(R, S.g(), u, opts.tol);
  });
  auto direct = spectra_over(sphere.points, opts.exec, opts.tol.grouping, [&](const Vector& x) {
    return jacobi(R, S.g(), x, opts.tol);
  });
  return PhiNullReport{
      decide_constancy("phi-null-osserman/quotient", std::move(quotient), opts.seed,
                       opts.tol.constancy, opts.tol.grouping),
      decide_constancy("phi-null-osserman/direct", std::move(direct), opts.seed,
                       opts.tol.constancy, opts.tol.grouping)};
}

}  // namespace phinull
