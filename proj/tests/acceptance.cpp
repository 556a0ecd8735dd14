// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "cli.hpp"
#include "phinull/io.hpp"
#include "phinull/submersion.hpp"

#include "oracle.hpp"
#include "support.hpp"

#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

using namespace phinull;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<int> vertical_of(FibrationKind kind, int s) {
  std::vector<int> v;
  switch (kind) {
    case FibrationKind::pi_full:
    case FibrationKind::pi_prime:
      for (int a = 0; a < s; ++a) v.push_back(a);
      break;
    case FibrationKind::tau:
      for (int a = 1; a < s; ++a) v.push_back(a);
      break;
    case FibrationKind::remark_sasaki:
      for (int a = 0; a < s - 1; ++a) v.push_back(a);
      break;
  }
  return v;
}

// Horizontal part by the dual one-forms of the vertical xi.
Vector horizontal(const GffStructure& S, const std::vector<int>& vertical, const Vector& v) {
  Vector out = v;
  for (int a : vertical) out -= S.eta(a).dot(v) * S.xi(a);
  return out;
}

Matrix horizontal_basis(const GffStructure& S, FibrationKind kind) {
  Matrix H = S.image_frame().vectors();
  auto add = [&](int a) {
    H.conservativeResize(Eigen::NoChange, H.cols() + 1);
    H.col(H.cols() - 1) = S.xi(a);
  };
  if (kind == FibrationKind::tau) add(0);
  if (kind == FibrationKind::remark_sasaki) add(S.s() - 1);
  return H;
}

Outcome structure_axioms() {
  double worst = 0.0;
  int perturbations = 0, caught = 0;
  std::string missed;
  for (int n = 1; n <= 3; ++n) {
    for (int s = 1; s <= 4; ++s) {
      const GffStructure c = canonical_structure(n, s);
      const ValidationReport r = validate_gff(c);
      if (!r.pass()) return {false, "canonical structure rejected"};
      for (const auto& chk : r.checks) worst = std::max(worst, chk.residual);
      const Index m = c.dim();
      auto probe = [&](const GffStructure& p, const std::string& what) {
        ++perturbations;
        if (!validate_gff(p).pass()) {
          ++caught;
        } else if (missed.empty()) {
          missed = what;
        }
      };
      for (Index i = 0; i < m; ++i) {
        for (Index j = 0; j < m; ++j) {
          Matrix phi = c.phi();
          phi(i, j) += 1e-3;
          probe(GffStructure(n, s, c.g(), phi, c.xi(), c.eta(), c.epsilon()), "phi");
          Matrix G = c.g().components();
          G(i, j) += 1e-3;
          probe(GffStructure(n, s, ScalarProduct(G), c.phi(), c.xi(), c.eta(), c.epsilon()), "g");
        }
        for (int a = 0; a < s; ++a) {
          Matrix eta = c.eta();
          eta(a, i) += 1e-3;
          probe(GffStructure(n, s, c.g(), c.phi(), c.xi(), eta, c.epsilon()), "eta");
        }
      }
    }
  }
  std::ostringstream d;
  d << "max residual " << worst << "; " << caught << "/" << perturbations
    << " single-entry perturbations rejected" << (missed.empty() ? "" : ", first miss in " + missed);
  return {worst < 1e-10 && caught == perturbations, d.str()};
}

Outcome space_form_anchor() {
  double worst = 0.0;
  bool groups_ok = true;
  int count = 0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const GffStructure S = support::random_structure(1 + static_cast<int>(seed % 2), 1 + static_cast<int>(seed % 3), seed);
    const Matrix& G = S.g().components();
    const double c = -1.5 + 0.9 * static_cast<double>(seed);
    const CurvatureTensor R = constant_curvature(S.g(), c);
    const Matrix zs = sample_unit_vectors(S.g(), Causal::spacelike, 25, seed);
    for (Index i = 0; i < zs.cols(); ++i, ++count) {
      const Vector z = zs.col(i);
      const SpectralData sp = spectrum(jacobi(R, S.g(), z));
      groups_ok = groups_ok && sp.multiplicities.size() == 1 &&
                  sp.multiplicities[0] == static_cast<int>(S.dim() - 1);
      for (double v : sp.eigenvalues) worst = std::max(worst, std::abs(v - c));
      const auto eig = oracle::map_eigenvalues(
          G, oracle::complement(G, z), [&](const Vector& y) { return oracle::jacobi_apply(R, G, z, y); });
      for (double v : eig) worst = std::max(worst, std::abs(v - c));
    }
  }
  return {groups_ok && worst < 1e-10,
          std::to_string(count) + " unit spacelike z, spectrum {(c, m-1)}, max deviation " +
              fmt("%.2e", worst)};
}

Outcome null_quotient_soundness() {
  const GffStructure S = support::random_structure(2, 2, 11);
  const CurvatureTensor R = random_algebraic_curvature(S.g(), 12);
  std::mt19937_64 rng(13);
  bool definite = true;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Vector u = support::random_null(S.g(), rng);
    const NullQuotient q = null_quotient(S.g(), u);
    definite = definite && inertia(q.gbar()).plus == q.reps.dim();
    const Matrix shift = u * support::random_vector(q.reps.dim(), rng).transpose();
    const NullQuotient q2 = null_quotient(S.g(), u, q.reps.vectors() + shift);
    const JacobiOperator a = null_jacobi(R, S.g(), q);
    const JacobiOperator b = null_jacobi(R, S.g(), q2);
    worst = std::max(worst, (a.matrix - b.matrix).cwiseAbs().maxCoeff());
    worst = std::max(worst, (q.gbar() - q2.gbar()).cwiseAbs().maxCoeff());
  }
  return {definite && worst < 1e-10,
          std::string("100 null u, gbar positive definite: ") + (definite ? "yes" : "no") +
              ", max change under r -> r + t u " + fmt("%.2e", worst)};
}

Outcome a_composition() {
  std::ostringstream d;
  bool ok = true;
  std::mt19937_64 rng(21);
  for (FibrationKind kind : {FibrationKind::pi_full, FibrationKind::tau, FibrationKind::pi_prime,
                             FibrationKind::remark_sasaki}) {
    double worst = 0.0, worst_oracle = 0.0;
    for (int k = 0; k < 200; ++k) {
      const int n = 1 + k % 3;
      const int s = kind == FibrationKind::pi_prime ? 1 : 2 + k % 3;
      const GffStructure S = support::random_structure(n, s, 1000 + static_cast<std::uint64_t>(k));
      const FibrationModel F = make_fibration(S, kind);
      const double sigma = kind == FibrationKind::pi_full   ? s - 2
                           : kind == FibrationKind::tau     ? s - 1
                           : kind == FibrationKind::pi_prime ? -1
                                                             : s - 3;
      if (F.sigma != sigma) ok = false;
      const Vector x = sample_phi_celestial(S, 1, static_cast<std::uint64_t>(k)).points.col(0);
      Vector y = horizontal_basis(S, kind) * support::random_vector(F.horizontal.dim(), rng);
      y /= y.norm();
      const Vector phi_x = S.phi() * x;
      const Vector rhs = -sigma * S.g()(y, phi_x) * phi_x;
      worst = std::max(worst, (oneill_A(F, x, oneill_A(F, x, y)) - rhs).norm());
      const auto v = vertical_of(kind, s);
      worst_oracle = std::max(
          worst_oracle, (oracle::oneill_A(S, v, x, oracle::oneill_A(S, v, x, y)) - rhs).norm());
    }
    ok = ok && worst < 1e-10 && worst_oracle < 1e-10;
    d << to_string(kind) << " " << fmt("%.1e", worst) << "/" << fmt("%.1e", worst_oracle) << "  ";
  }
  return {ok, "200 draws per kind, residual engine/oracle: " + d.str()};
}

Outcome shift_identity() {
  double worst = 0.0, worst_oracle = 0.0, leak = 0.0, s2 = 0.0;
  const FibrationKind kinds[] = {FibrationKind::pi_full, FibrationKind::tau, FibrationKind::pi_prime};
  std::mt19937_64 rng(31);
  for (int k = 0; k < 200; ++k) {
    const FibrationKind kind = kinds[k % 3];
    const int n = 1 + (k / 3) % 2;
    const int s = kind == FibrationKind::pi_prime ? 1 : 2 + (k / 6) % 3;
    const GffStructure S = support::random_structure(n, s, 2000 + static_cast<std::uint64_t>(k));
    const FibrationModel F = make_fibration(S, kind);
    const CurvatureTensor R = random_algebraic_curvature(S.g(), static_cast<std::uint64_t>(k));
    const Vector x = sample_phi_celestial(S, 1, static_cast<std::uint64_t>(k)).points.col(0);
    const SubspaceBasis V = phi_orthogonal_space(S, x);
    Vector y = V.vectors() * support::random_vector(V.dim(), rng);
    y /= y.norm();
    const ShiftResidual r = shift_identity_residual(R, F, x, y);
    worst = std::max(worst, r.residual);
    leak = std::max(leak, r.v_leak);

    // The same identity with R* from the explicit contraction and the oracle A.
    const Matrix& G = S.g().components();
    const auto v = vertical_of(kind, s);
    const Matrix B = oracle::horizontal_complement(G, horizontal_basis(S, kind), x);
    const Vector lhs = oracle::base_apply(R, S, v, B, x, y);
    const Vector phi_x = S.phi() * x;
    const Vector rhs = horizontal(S, v, oracle::jacobi_apply(R, G, x, y)) +
                       3.0 * F.sigma * oracle::metric(G, y, phi_x) * phi_x;
    worst_oracle = std::max(worst_oracle, (lhs - rhs).norm());

    if (kind == FibrationKind::pi_full && s == 2) {
      const Vector rstar = r_star(R, F, x).apply(S.g(), y);
      s2 = std::max(s2, (rstar - F.horizontal_part(R.apply(S.g(), y, x, x))).norm());
    }
  }
  return {worst < 1e-9 && worst_oracle < 1e-9 && s2 < 1e-10,
          "200 random tensors, residual engine " + fmt("%.1e", worst) + ", oracle " +
              fmt("%.1e", worst_oracle) + "; V-leak max " + fmt("%.2f", leak) +
              "; s=2 pi: |R*_x - hR_x| " + fmt("%.1e", s2)};
}

Outcome curated_spectra() {
  const GffStructure S = canonical_structure(2, 3);
  const Matrix& G = S.g().components();
  const CurvatureTensor R = phi_model_family(S, 1.0, 1.0);
  DeciderOptions opts;
  double lib = 0.0, orc = 0.0;
  bool ok = true;

  const PhiNullReport phi = is_phi_null_osserman_wrt(R, S, opts);
  const FibrationModel pi = make_fibration(S, FibrationKind::pi_full);
  const DecisionReport base = base_osserman_check(R, pi, opts);
  const FibrationModel tau = make_fibration(S, FibrationKind::tau);
  const BaseNullReport bn = base_null_osserman_check(R, tau, opts);
  ok = phi.direct.pass && base.pass && bn.direct.pass && bn.quotient.pass;

  const auto direct_expected = support::expand({{1, 5}, {4, 1}});
  const auto pi_expected = support::expand({{1, 2}, {7, 1}});
  const auto tau_expected = support::expand({{1, 3}, {10, 1}});
  for (int i = 0; i < opts.samples; ++i) {
    const auto si = static_cast<std::size_t>(i);
    const Vector x = phi.direct.records[si].base;
    lib = std::max(lib, oracle::multiset_distance(phi.direct.records[si].spectrum.eigenvalues,
                                                  direct_expected));
    lib = std::max(lib, oracle::multiset_distance(base.records[si].spectrum.eigenvalues, pi_expected));
    lib = std::max(lib, oracle::multiset_distance(bn.direct.records[si].spectrum.eigenvalues,
                                                  tau_expected));
    const auto d = oracle::map_eigenvalues(
        G, oracle::complement(G, x), [&](const Vector& y) { return oracle::jacobi_apply(R, G, x, y); });
    orc = std::max(orc, oracle::multiset_distance(d, direct_expected));
    const Vector xb = base.records[si].base;
    orc = std::max(orc, oracle::multiset_distance(
                            oracle::base_eigenvalues(R, S, vertical_of(FibrationKind::pi_full, 3),
                                                     oracle::horizontal_complement(
                                                         G, horizontal_basis(S, FibrationKind::pi_full), xb),
                                                     xb),
                            pi_expected));
    const Vector xt = bn.direct.records[si].base;
    const auto tv = vertical_of(FibrationKind::tau, 3);
    const Matrix Bt = oracle::horizontal_complement(G, horizontal_basis(S, FibrationKind::tau), xt);
    orc = std::max(orc, oracle::multiset_distance(oracle::base_eigenvalues(R, S, tv, Bt, xt),
                                                  tau_expected));
    const Vector pxt = S.phi() * xt;
    orc = std::max(orc, (oracle::base_apply(R, S, tv, Bt, xt, pxt) - 10.0 * pxt).norm());
  }
  return {ok && lib < 1e-8 && orc < 1e-8,
          "phi_model(1,1) on canonical(2,3): direct {(1,5),(4,1)}, pi-base {(1,2),(7,1)}, "
          "tau-base phi x eigenvalue 10; engine " +
              fmt("%.1e", lib) + ", oracle " + fmt("%.1e", orc)};
}

Outcome theorem_equivalence() {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  DeciderOptions d;
  int model_agree = 0, s2_agree = 0, detected = 0, wrong = 0;
  for (int k = 0; k < 25; ++k) {
    const int n = 1 + k % 2, s = 2 + k % 3;
    const GffStructure S = support::random_structure(n, s, 3000 + static_cast<std::uint64_t>(k));
    const TheoremReport r = theorem_equivalence_report(phi_model_family(S, coef(rng), coef(rng)), S, {d, 0.0});
    if (r.hypothesis && r.status == TheoremStatus::agree && r.verdict_a && r.verdict_b && r.verdict_c) {
      ++model_agree;
    }
  }
  int s2_by_n[4] = {0, 0, 0, 0}, s2_total_by_n[4] = {0, 0, 0, 0};
  for (int k = 0; k < 25; ++k) {
    const int n = 1 + k % 3;
    const GffStructure S = support::random_structure(n, 2, 4000 + static_cast<std::uint64_t>(k));
    const TheoremReport r =
        theorem_equivalence_report(random_algebraic_curvature(S.g(), static_cast<std::uint64_t>(k)), S, {d, 0.0});
    ++s2_total_by_n[n];
    if (r.contract_applies && r.status == TheoremStatus::agree && r.verdict_a == r.verdict_b) {
      ++s2_agree;
      ++s2_by_n[n];
    }
  }
  for (int k = 0; k < 25; ++k) {
    const GffStructure S = support::random_structure(1 + k % 2, 3 + k % 2, 5000 + static_cast<std::uint64_t>(k));
    const TheoremReport r =
        theorem_equivalence_report(random_algebraic_curvature(S.g(), 100 + static_cast<std::uint64_t>(k)), S, {d, 0.0});
    if (!r.hypothesis && r.status == TheoremStatus::hypothesis_false) {
      ++detected;
    } else if (r.status == TheoremStatus::agree) {
      ++wrong;
    }
  }
  std::ostringstream out;
  out << "phi_model agree " << model_agree << "/25, s=2 random (a)<=>(b) " << s2_agree << "/25 (";
  for (int n = 1; n <= 3; ++n) {
    out << (n > 1 ? " " : "") << "n=" << n << ": " << s2_by_n[n] << "/" << s2_total_by_n[n];
  }
  out << "), generic s>=3 hypothesis-false " << detected << "/25 (false agreement claims: " << wrong
      << ")";
  return {model_agree == 25 && s2_agree == 25 && detected == 25 && wrong == 0, out.str()};
}

Outcome remark_identities() {
  DeciderOptions opts;
  opts.samples = 50;
  double worst = 0.0, worst_oracle = 0.0;
  for (int s = 2; s <= 4; ++s) {
    const GffStructure S = support::random_structure(2, s, 6000 + static_cast<std::uint64_t>(s));
    const Matrix& G = S.g().components();
    const CurvatureTensor R = random_algebraic_curvature(S.g(), static_cast<std::uint64_t>(s));
    for (RemarkKind kind : {RemarkKind::sasaki_base, RemarkKind::lorentz_sasaki_base}) {
      const RemarkReport r = remark_sectional_conditions(R, S, kind, opts);
      const FibrationKind fk = r.fibration;
      const auto v = vertical_of(fk, s);
      for (const auto& smp : r.samples) {
        // k = k* - 3 (vertical sign sum), with k* from the oracle.
        const Vector px = S.phi() * smp.x;
        const double delta = oracle::metric(G, smp.x, smp.x) * oracle::metric(G, px, px) -
                             std::pow(oracle::metric(G, smp.x, px), 2);
        const double k = oracle::contract(R, smp.x, px, smp.x, px) / delta;
        const double k_star = oracle::base_form(R, S, v, smp.x, px, px) / delta;
        worst_oracle = std::max(worst_oracle, std::abs(k - (k_star - 3.0 * r.vertical_sign_sum)));
        worst = std::max(worst, std::abs(smp.k_total - (smp.k_base - 3.0 * r.vertical_sign_sum)));
      }
    }
  }
  bool targets = true;
  std::ostringstream t;
  for (int s = 2; s <= 4; ++s) {
    const GffStructure S = canonical_structure(1, s);
    const double sas = 1.0 - 3.0 * (s - 3), lor = -1.0 - 3.0 * (s - 1);
    const RemarkReport a = remark_sectional_conditions(phi_model_family(S, sas - 1.5, 0.5), S,
                                                       RemarkKind::sasaki_base, opts);
    const RemarkReport b = remark_sectional_conditions(constant_curvature(S.g(), lor), S,
                                                       RemarkKind::lorentz_sasaki_base, opts);
    targets = targets && a.target == sas && a.necessary_condition_all && b.target == lor &&
              b.necessary_condition_all;
    t << " s=" << s << ": " << a.target << "," << b.target;
  }
  return {worst < 1e-9 && worst_oracle < 1e-9 && targets,
          "50 samples x 2 kinds x s=2..4, identity residual engine " + fmt("%.1e", worst) +
              ", oracle " + fmt("%.1e", worst_oracle) + "; targets met" + t.str()};
}

Outcome psi_correspondence() {
  double round = 0.0, null = 0.0, unit = 0.0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const GffStructure S = support::random_structure(1 + static_cast<int>(seed % 2), 1 + static_cast<int>(seed), seed);
    const CelestialSample xs = sample_celestial(S, 25, seed);
    for (Index i = 0; i < xs.points.cols(); ++i) {
      const Vector x = xs.points.col(i);
      const Vector u = psi_inverse(S, x);
      round = std::max(round, (psi(S, u) - x).norm());
      round = std::max(round, (psi_inverse(S, psi(S, u)) - u).norm());
      null = std::max(null, std::abs(S.g()(u, u)));
      unit = std::max(unit, std::abs(S.g()(u, S.xi(0)) + 1.0));
    }
  }
  return {round < 1e-12 && null < 1e-12 && unit < 1e-12,
          "100 points, round trip " + fmt("%.1e", round) + ", |g(u,u)| " + fmt("%.1e", null) +
              ", |g(u,xi_1)+1| " + fmt("%.1e", unit)};
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "phinull_acceptance";
  std::filesystem::create_directories(dir);
  auto run = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    cli::run(args, out, err);
    return out.str();
  };
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream b;
    b << in.rdbuf();
    return b.str();
  };
  const std::string pm = (dir / "pm.json").string();
  const std::string rnd = (dir / "rnd.json").string();
  run({"generate", "--family", "phi_model", "--n", "2", "--s", "3", "--seed", "7", "--out", pm});
  const std::string pm_first = slurp(pm);
  run({"generate", "--family", "random", "--n", "1", "--s", "3", "--seed", "7", "--out", rnd});
  const std::string rnd_first = slurp(rnd);
  run({"generate", "--family", "phi_model", "--n", "2", "--s", "3", "--seed", "7", "--out", pm});
  run({"generate", "--family", "random", "--n", "1", "--s", "3", "--seed", "7", "--out", rnd});
  bool ok = slurp(pm) == pm_first && slurp(rnd) == rnd_first;
  int commands = 2;
  const std::vector<std::vector<std::string>> cmds = {
      {"validate", pm, "--json"},
      {"check", pm, "--condition", "osserman", "--seed", "5", "--json"},
      {"check", rnd, "--condition", "null-osserman", "--seed", "5", "--json"},
      {"check", pm, "--condition", "phi-null-osserman", "--seed", "5", "--json"},
      {"verify-theorem", pm, "--seed", "5", "--json"},
      {"verify-theorem", rnd, "--seed", "5", "--json"},
      {"remarks", rnd, "--seed", "5", "--json"},
      {"spectrum", pm, "--vector", "0.6,0.8,0,0,0,0,0", "--json"},
      {"generate", "--family", "random", "--n", "1", "--s", "2", "--seed", "9"}};
  const int threads = omp_get_max_threads();
  for (const auto& c : cmds) {
    ++commands;
    omp_set_num_threads(1);
    const std::string a = run(c);
    omp_set_num_threads(4);
    const std::string b = run(c);
    const std::string again = run(c);
    ok = ok && !a.empty() && a == b && b == again;
  }
  omp_set_num_threads(threads);
  return {ok, std::to_string(commands) +
                  " commands repeated (1 and 4 OpenMP threads), JSON byte-identical: " +
                  (ok ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"structure axioms", structure_axioms},
      {"space-form Jacobi anchor", space_form_anchor},
      {"null-quotient soundness", null_quotient_soundness},
      {"A-tensor composition law", a_composition},
      {"shift identity", shift_identity},
      {"curated spectra", curated_spectra},
      {"theorem equivalence", theorem_equivalence},
      {"remark identities", remark_identities},
      {"psi correspondence", psi_correspondence},
      {"determinism", determinism}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
