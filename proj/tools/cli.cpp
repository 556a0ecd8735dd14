#include "cli.hpp"

#include "phinull/curvature.hpp"
#include "phinull/gff.hpp"
#include "phinull/io.hpp"
#include "phinull/jacobi.hpp"
#include "phinull/submersion.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace phinull::cli {

namespace {

struct CommonFlags {
  int samples = 64;
  std::uint64_t seed = 0;
  double tol = Tolerances{}.constancy;
  double grouping_tol = Tolerances{}.grouping;
  std::string json_out;
  CLI::Option* json = nullptr;

  DeciderOptions decider() const {
    DeciderOptions d;
    d.samples = samples;
    d.seed = seed;
    d.tol.constancy = tol;
    d.tol.grouping = grouping_tol;
    return d;
  }
};

void add_common(CLI::App* cmd, CommonFlags& f, bool sampling = true) {
  if (sampling) {
    cmd->add_option("--samples", f.samples, "Number of sampled directions")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", f.seed, "Sampler seed")->capture_default_str();
    cmd->add_option("--tol", f.tol, "Spectral constancy tolerance")->capture_default_str();
    cmd->add_option("--grouping-tol", f.grouping_tol, "Eigenvalue grouping tolerance")
        ->capture_default_str();
  }
  f.json = cmd->add_option("--json", f.json_out,
                           "Write the JSON report to a file, or standard output when no file "
                           "(or '-') is given")
               ->expected(0, 1);
}

bool wants_json(const CommonFlags& f) { return f.json != nullptr && f.json->count() > 0; }

void emit_json(const CommonFlags& f, const json& report, std::ostream& out) {
  if (f.json_out.empty() || f.json_out == "-") {
    out << dump(report);
    return;
  }
  std::ofstream file(f.json_out, std::ios::binary);
  if (!file) throw ParseError("cannot write " + f.json_out);
  file << dump(report);
}

bool json_to_stdout(const CommonFlags& f) {
  return wants_json(f) && (f.json_out.empty() || f.json_out == "-");
}

std::string format_spectrum(const SpectralData& s) {
  std::ostringstream out;
  out << std::setprecision(10);
  for (std::size_t i = 0; i < s.multiplicities.size(); ++i) {
    if (i > 0) out << ", ";
    // Text only; JSON keeps the raw values.
    const double v = s.group_values[i];
    out << (std::abs(v) < 1e-12 ? 0.0 : v);
    if (!s.self_adjoint_path && std::abs(s.group_imag[i]) > s.grouping_tol) {
      out << (s.group_imag[i] < 0 ? " - " : " + ") << std::abs(s.group_imag[i]) << "i";
    }
    out << " (x" << s.multiplicities[i] << ")";
  }
  return "{" + out.str() + "}";
}

void print_decision(std::ostream& out, const std::string& label, const DecisionReport& r) {
  out << label << ": " << (r.pass ? "PASS" : "FAIL") << " over " << r.samples << " samples";
  if (r.pass && !r.records.empty()) {
    out << ", spectrum " << format_spectrum(r.records.front().spectrum);
  }
  if (r.counterexample && !r.records.empty()) {
    out << "\n  sample 0: " << format_spectrum(r.records.front().spectrum) << "\n  sample "
        << *r.counterexample << ": "
        << format_spectrum(r.records[static_cast<std::size_t>(*r.counterexample)].spectrum);
  }
  out << "\n";
}

Vector parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParseError("cannot parse vector component '" + item + "'");
    }
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

const CurvatureTensor& require_curvature(const Instance& inst) {
  if (!inst.curvature) throw ValidationError("instance has no curvature block");
  return *inst.curvature;
}

int cmd_validate(const std::string& path, const CommonFlags& f, std::ostream& out) {
  const Instance inst = parse_instance(path);
  const ValidationReport sr = validate_gff(inst.structure);
  json report;
  report["command"] = "validate";
  report["path"] = path;
  report["structure"] = to_json(sr);
  bool ok = sr.pass();
  std::optional<CurvatureReport> cr;
  if (inst.curvature) {
    if (inst.curvature->dim() != inst.structure.dim()) {
      throw ValidationError("curvature dimension does not match the structure");
    }
    cr = validate_curvature(*inst.curvature, inst.structure.g());
    report["curvature"] = to_json(*cr);
    ok = ok && cr->pass();
  }
  const bool family_ok = known_family(inst.metadata.family);
  report["family"] = inst.metadata.family;
  report["family_known"] = family_ok;
  ok = ok && family_ok;
  report["pass"] = ok;

  if (wants_json(f)) emit_json(f, report, out);
  if (!json_to_stdout(f)) {
    out << "structure (n=" << inst.structure.n() << ", s=" << inst.structure.s() << ")\n";
    for (const auto& c : sr.checks) {
      out << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name << "  residual " << c.residual
          << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
    }
    if (cr) {
      out << "curvature\n";
      for (const auto& c : cr->checks) {
        out << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name << "  residual " << c.residual
            << "  worst index [" << c.worst_index[0] << "," << c.worst_index[1] << ","
            << c.worst_index[2] << "," << c.worst_index[3] << "]\n";
      }
    }
    if (!family_ok) out << "unknown family '" << inst.metadata.family << "'\n";
    out << (ok ? "valid" : "INVALID") << "\n";
  }
  return ok ? kPass : kValidationError;
}

struct GenerateFlags {
  std::string family;
  int n = 1;
  int s = 1;
  double a = 1.0;
  double b = 1.0;
  double c = -1.0;
  double scale = 1.0;
  std::uint64_t seed = 0;
  std::string out_path;
};

int cmd_generate(const GenerateFlags& f, std::ostream& out) {
  const GffStructure S = canonical_structure(f.n, f.s);
  std::ostringstream name;
  name << f.family << "-n" << f.n << "-s" << f.s << "-seed" << f.seed;
  InstanceMetadata meta{name.str(), f.seed, "canonical+" + f.family, json::object()};
  std::optional<CurvatureTensor> R;
  if (f.family == "constant") {
    R = constant_curvature(S.g(), f.c);
    meta.parameters = {{"c", f.c}};
  } else if (f.family == "phi_model") {
    R = phi_model_family(S, f.a, f.b);
    meta.parameters = {{"a", f.a}, {"b", f.b}};
  } else if (f.family == "random") {
    R = random_algebraic_curvature(S.g(), f.seed, f.scale);
    meta.parameters = {{"scale", f.scale}};
  } else {
    throw ValidationError("unknown family '" + f.family + "'");
  }
  const Instance inst{S, R, meta};
  require_valid(inst);
  if (f.out_path.empty() || f.out_path == "-") {
    out << dump(instance_to_json(inst));
  } else {
    save_instance(inst, f.out_path);
  }
  return kPass;
}

int cmd_check(const std::string& path, const std::string& condition, const std::string& causal,
              const CommonFlags& f, std::ostream& out) {
  const Instance inst = load_instance(path);
  const CurvatureTensor& R = require_curvature(inst);
  const GffStructure& S = inst.structure;
  const DeciderOptions opts = f.decider();
  bool pass = false;
  json report;
  if (condition == "osserman") {
    const Causal kind = causal == "spacelike" ? Causal::spacelike : Causal::timelike;
    const DecisionReport r = is_osserman_at(R, S.g(), kind, opts);
    pass = r.pass;
    report = report_json(r);
    if (!json_to_stdout(f)) print_decision(out, r.condition, r);
  } else if (condition == "null-osserman") {
    const DecisionReport r = is_null_osserman_wrt(R, S.g(), S.xi(0), opts);
    pass = r.pass;
    report = report_json(r);
    if (!json_to_stdout(f)) print_decision(out, "null-osserman wrt xi_1", r);
  } else {
    const PhiNullReport r = is_phi_null_osserman_wrt(R, S, opts);
    pass = r.pass();
    report = report_json(r);
    if (!json_to_stdout(f)) {
      print_decision(out, "phi-null-osserman (quotient)", r.quotient);
      print_decision(out, "phi-null-osserman (direct)", r.direct);
      if (!r.paths_agree()) out << "note: the quotient and direct paths disagree\n";
    }
  }
  report["path"] = path;
  if (wants_json(f)) emit_json(f, report, out);
  return pass ? kPass : kConditionFail;
}

int cmd_verify_theorem(const std::string& path, double sigma_fault, const CommonFlags& f,
                       std::ostream& out) {
  const Instance inst = load_instance(path);
  TheoremOptions opts;
  opts.decider = f.decider();
  opts.sigma_fault = sigma_fault;
  const TheoremReport r = theorem_equivalence_report(require_curvature(inst), inst.structure, opts);
  json report = report_json(r);
  report["path"] = path;
  if (wants_json(f)) emit_json(f, report, out);
  if (!json_to_stdout(f)) {
    out << "(a) phi-null Osserman wrt xi_1:  " << (r.verdict_a ? "PASS" : "FAIL") << "\n"
        << "(b) base Osserman (pi):          " << (r.verdict_b ? "PASS" : "FAIL") << "\n"
        << "(c) base null Osserman (tau):    " << (r.verdict_c ? "PASS" : "FAIL") << "\n"
        << "hypothesis (phi x eigenvector):  " << (r.hypothesis ? "true" : "false")
        << "  residual " << r.hypothesis_residual << "\n"
        << "shift consistency residual:      " << r.shift_consistency_residual << "\n"
        << "status: " << to_string(r.status) << "\n";
  }
  switch (r.status) {
    case TheoremStatus::agree:
    case TheoremStatus::hypothesis_false: return kPass;
    case TheoremStatus::disagree:
    case TheoremStatus::inconsistent: return kSentinel;
  }
  return kSentinel;
}

int cmd_remarks(const std::string& path, const std::string& kind, const CommonFlags& f,
                std::ostream& out) {
  const Instance inst = load_instance(path);
  const CurvatureTensor& R = require_curvature(inst);
  std::vector<RemarkKind> kinds;
  if (kind.empty() || kind == "both") {
    kinds = {RemarkKind::sasaki_base, RemarkKind::lorentz_sasaki_base};
  } else {
    kinds = {remark_kind_from_string(kind)};
  }
  bool ok = true;
  json report;
  report["command"] = "remarks";
  report["path"] = path;
  report["reports"] = json::array();
  for (RemarkKind k : kinds) {
    const RemarkReport r = remark_sectional_conditions(R, inst.structure, k, f.decider());
    ok = ok && r.identity_pass;
    report["reports"].push_back(report_json(r));
    if (!json_to_stdout(f)) {
      out << to_string(k) << " (" << to_string(r.fibration) << "): identity "
          << (r.identity_pass ? "PASS" : "FAIL") << ", max residual " << r.max_identity_residual
          << "\n  necessary condition k(x,phi x) = " << r.target << ": "
          << (r.necessary_condition_all ? "satisfied" : "not satisfied") << " on all samples";
      if (!r.samples.empty()) out << " (sample 0: k = " << r.samples.front().k_total << ")";
      out << "\n";
    }
  }
  if (kinds.size() == 1) {
    json single = report["reports"].front();
    single["path"] = path;
    report = std::move(single);
  }
  if (wants_json(f)) emit_json(f, report, out);
  return ok ? kPass : kConditionFail;
}

int cmd_spectrum(const std::string& path, const std::string& vector_text,
                 const std::string& op_kind, const CommonFlags& f, std::ostream& out) {
  const Instance inst = load_instance(path);
  const CurvatureTensor& R = require_curvature(inst);
  const ScalarProduct& g = inst.structure.g();
  const Vector v = parse_vector(vector_text);
  if (v.size() != g.dim()) throw ValidationError("vector length does not match the instance");
  std::string kind = op_kind;
  if (kind == "auto") kind = causal_character(g, v) == Causal::null ? "null" : "jacobi";
  Tolerances tol;
  tol.grouping = f.grouping_tol;
  const JacobiOperator op = kind == "null" ? null_jacobi(R, g, v, tol) : jacobi(R, g, v, tol);
  const SpectralData s = spectrum(op, f.grouping_tol);
  json report;
  report["command"] = "spectrum";
  report["path"] = path;
  report["operator"] = kind;
  report["base"] = json::array();
  for (Index i = 0; i < v.size(); ++i) report["base"].push_back(v(i));
  report["causal"] = to_string(causal_character(g, v));
  report["spectrum"] = to_json(s);
  if (wants_json(f)) emit_json(f, report, out);
  if (!json_to_stdout(f)) {
    out << kind << " operator at a " << to_string(causal_character(g, v)) << " vector: "
        << format_spectrum(s) << "\n";
  }
  return kPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jacobi operators and Osserman-type conditions for Lorentzian g.f.f-structures",
               "phinull"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::string path;
  CommonFlags validate_flags, check_flags, theorem_flags, remark_flags, spectrum_flags;

  auto* validate = app.add_subcommand("validate", "Validate an instance file");
  validate->add_option("path", path, "Instance file")->required();
  add_common(validate, validate_flags, false);

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "Write a canonical test instance");
  generate->add_option("--family", gen.family, "constant | phi_model | random")
      ->required()
      ->check(CLI::IsMember({"constant", "phi_model", "random"}));
  generate->add_option("--n", gen.n, "Half rank of phi")->capture_default_str();
  generate->add_option("--s", gen.s, "Number of characteristic vectors")->capture_default_str();
  generate->add_option("--a", gen.a, "phi_model: space-form part")->capture_default_str();
  generate->add_option("--b", gen.b, "phi_model: phi part")->capture_default_str();
  generate->add_option("--c", gen.c, "constant: sectional curvature")->capture_default_str();
  generate->add_option("--scale", gen.scale, "random: entry scale")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  generate->add_option("--out,-o", gen.out_path, "Output file (standard output if omitted)");

  std::string condition;
  std::string causal = "timelike";
  auto* check = app.add_subcommand("check", "Decide an Osserman-type condition");
  check->add_option("path", path, "Instance file")->required();
  check->add_option("--condition", condition, "osserman | null-osserman | phi-null-osserman")
      ->required()
      ->check(CLI::IsMember({"osserman", "null-osserman", "phi-null-osserman"}));
  check->add_option("--causal", causal, "osserman: direction kind (timelike | spacelike)")
      ->capture_default_str()
      ->check(CLI::IsMember({"timelike", "spacelike"}));
  add_common(check, check_flags);

  double sigma_fault = 0.0;
  auto* theorem = app.add_subcommand("verify-theorem", "Three-way equivalence report");
  theorem->add_option("path", path, "Instance file")->required();
  theorem->add_option("--tamper-sigma", sigma_fault, "Test hook: offset the stored shift")
      ->group("");
  add_common(theorem, theorem_flags);

  std::string remark_kind;
  auto* remarks = app.add_subcommand("remarks", "Sectional-curvature identities of the Sasaki bases");
  remarks->add_option("path", path, "Instance file")->required();
  remarks->add_option("--kind", remark_kind, "sasaki_base | lorentz_sasaki_base | both")
      ->check(CLI::IsMember({"sasaki_base", "lorentz_sasaki_base", "sasaki-base",
                             "lorentz-sasaki-base", "both"}));
  add_common(remarks, remark_flags);

  std::string vector_text;
  std::string op_kind = "auto";
  auto* spec_cmd = app.add_subcommand("spectrum", "Spectrum of the Jacobi operator at a vector");
  spec_cmd->add_option("path", path, "Instance file")->required();
  spec_cmd->add_option("--vector", vector_text, "Comma-separated coordinates")->required();
  spec_cmd->add_option("--operator", op_kind, "auto | jacobi | null")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "jacobi", "null"}));
  add_common(spec_cmd, spectrum_flags, false);
  spec_cmd->add_option("--grouping-tol", spectrum_flags.grouping_tol,
                       "Eigenvalue grouping tolerance")
      ->capture_default_str();

  std::vector<std::string> argv_storage{"phinull"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kValidationError;
  }

  try {
    if (validate->parsed()) return cmd_validate(path, validate_flags, out);
    if (generate->parsed()) return cmd_generate(gen, out);
    if (check->parsed()) return cmd_check(path, condition, causal, check_flags, out);
    if (theorem->parsed()) return cmd_verify_theorem(path, sigma_fault, theorem_flags, out);
    if (remarks->parsed()) return cmd_remarks(path, remark_kind, remark_flags, out);
    if (spec_cmd->parsed()) return cmd_spectrum(path, vector_text, op_kind, spectrum_flags, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidationError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kSentinel;
  }
  return kValidationError;
}

}  // namespace phinull::cli
