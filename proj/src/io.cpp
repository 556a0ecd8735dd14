#include "phinull/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace phinull {

namespace {

const char* const kFamilies[] = {"canonical+constant", "canonical+phi_model", "canonical+random",
                                 "external"};

json vector_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json row_major(const Matrix& m) {
  json out = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

// JSON has no infinities; encode them as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

std::vector<double> flat_numbers(const json& j, const char* what) {
  std::vector<double> out;
  auto take = [&](const json& v) {
    if (!v.is_number()) throw ParseError(std::string(what) + ": expected numbers");
    out.push_back(v.get<double>());
  };
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array");
  for (const auto& item : j) {
    if (item.is_array()) {
      for (const auto& v : item) take(v);
    } else {
      take(item);
    }
  }
  return out;
}

Matrix square_matrix(const json& j, Index dim, const char* what) {
  const auto values = flat_numbers(j, what);
  if (static_cast<Index>(values.size()) != dim * dim) {
    throw ParseError(std::string(what) + ": expected dim*dim entries");
  }
  Matrix m(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index k = 0; k < dim; ++k) m(i, k) = values[static_cast<std::size_t>(i * dim + k)];
  return m;
}

Matrix vector_list(const json& j, Index dim, Index count, const char* what) {
  if (!j.is_array() || static_cast<Index>(j.size()) != count) {
    throw ParseError(std::string(what) + ": expected s vectors");
  }
  Matrix out(dim, count);
  for (Index a = 0; a < count; ++a) {
    const auto values = flat_numbers(j.at(static_cast<std::size_t>(a)), what);
    if (static_cast<Index>(values.size()) != dim) {
      throw ParseError(std::string(what) + ": each vector needs dim entries");
    }
    for (Index i = 0; i < dim; ++i) out(i, a) = values[static_cast<std::size_t>(i)];
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json spectra_json(const DecisionReport& r) {
  json out = json::array();
  for (const auto& rec : r.records) {
    json s = to_json(rec.spectrum);
    s["base"] = vector_json(rec.base);
    out.push_back(std::move(s));
  }
  return out;
}

json groups_json(const DecisionReport& r) {
  json out = json::array();
  for (const auto& g : r.groups) {
    out.push_back({{"multiplicity", g.multiplicity}, {"min", g.min}, {"max", g.max}});
  }
  return out;
}

// Shared skeleton of all reports.
json report_skeleton(const std::string& command, std::uint64_t seed, double tol,
                     double grouping_tol) {
  json out;
  out["command"] = command;
  out["verdicts"] = json::object();
  out["hypothesis_flag"] = nullptr;
  out["per_sample_spectra"] = json::object();
  out["groups"] = json::object();
  out["counterexample"] = json::object();
  out["residual_maxima"] = json::object();
  out["seeds"] = {{"seed", seed}};
  out["tolerances"] = {{"constancy", tol}, {"grouping", grouping_tol}};
  return out;
}

void add_path(json& out, const std::string& name, const DecisionReport& r) {
  out["verdicts"][name] = r.pass;
  out["per_sample_spectra"][name] = spectra_json(r);
  out["groups"][name] = groups_json(r);
  out["counterexample"][name] = r.counterexample ? json(*r.counterexample) : json(nullptr);
  out["residual_maxima"][name + "/spectral_deviation"] = number(r.max_deviation);
  out["seeds"]["samples"] = r.samples;
}

}  // namespace

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json structure_to_json(const GffStructure& S) {
  json out;
  out["dim"] = S.dim();
  out["n"] = S.n();
  out["s"] = S.s();
  out["metric"] = row_major(S.g().components());
  out["phi"] = row_major(S.phi());
  out["xi"] = json::array();
  out["eta"] = json::array();
  for (int a = 0; a < S.s(); ++a) {
    out["xi"].push_back(vector_json(S.xi(a)));
    out["eta"].push_back(vector_json(S.eta(a)));
  }
  out["epsilon"] = S.epsilon();
  return out;
}

GffStructure structure_from_json(const json& j) {
  try {
    const auto dim = field(j, "dim").get<Index>();
    const int n = field(j, "n").get<int>();
    const int s = field(j, "s").get<int>();
    if (dim != 2 * n + s) throw ParseError("structure: dim must equal 2n+s");
    const Matrix metric = square_matrix(field(j, "metric"), dim, "metric");
    const Matrix phi = square_matrix(field(j, "phi"), dim, "phi");
    const Matrix xi = vector_list(field(j, "xi"), dim, s, "xi");
    const Matrix eta_cols = vector_list(field(j, "eta"), dim, s, "eta");
    const auto eps = field(j, "epsilon").get<std::vector<int>>();
    return normalize_timelike_first(GffStructure(n, s, ScalarProduct(metric), phi, xi,
                                                 eta_cols.transpose(), eps));
  } catch (const json::exception& e) {
    throw ParseError(std::string("structure: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  } catch (const DegenerateError& e) {
    throw ValidationError(e.what());
  }
}

json curvature_to_json(const CurvatureTensor& R) {
  return {{"dim", R.dim()}, {"components", R.components()}};
}

CurvatureTensor curvature_from_json(const json& j) {
  try {
    const auto dim = field(j, "dim").get<Index>();
    if (dim < 1) throw ParseError("curvature: dim must be positive");
    if (j.contains("components")) {
      auto values = flat_numbers(j.at("components"), "components");
      return CurvatureTensor(dim, std::move(values));
    }
    CurvatureTensor blank(dim);
    std::vector<double> values(blank.components());
    for (const auto& e : field(j, "entries")) {
      const auto i = field(e, "i").get<Index>();
      const auto k = field(e, "j").get<Index>();
      const auto l = field(e, "k").get<Index>();
      const auto m = field(e, "l").get<Index>();
      const double v = field(e, "value").get<double>();
      for (Index idx : {i, k, l, m}) {
        if (idx < 0 || idx >= dim) throw ParseError("curvature: entry index out of range");
      }
      if ((i == k || l == m) && v != 0.0) {
        throw ParseError("curvature: entry violates antisymmetry (repeated index in a pair)");
      }
      auto set = [&](Index a, Index b, Index c, Index d, double val) {
        values[blank.offset(a, b, c, d)] = val;
      };
      set(i, k, l, m, v);
      set(k, i, l, m, -v);
      set(i, k, m, l, -v);
      set(k, i, m, l, v);
      set(l, m, i, k, v);
      set(m, l, i, k, -v);
      set(l, m, k, i, -v);
      set(m, l, k, i, v);
    }
    return CurvatureTensor(dim, std::move(values));
  } catch (const json::exception& e) {
    throw ParseError(std::string("curvature: ") + e.what());
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

json instance_to_json(const Instance& inst) {
  json out;
  out["structure"] = structure_to_json(inst.structure);
  if (inst.curvature) out["curvature"] = curvature_to_json(*inst.curvature);
  out["metadata"] = {{"name", inst.metadata.name},
                     {"seed", inst.metadata.seed},
                     {"family", inst.metadata.family},
                     {"parameters", inst.metadata.parameters}};
  return out;
}

Instance instance_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("instance: top level must be an object");
  Instance inst{structure_from_json(field(j, "structure")), std::nullopt, {}};
  if (j.contains("curvature")) inst.curvature = curvature_from_json(j.at("curvature"));
  if (j.contains("metadata")) {
    const json& m = j.at("metadata");
    try {
      inst.metadata.name = m.value("name", std::string());
      inst.metadata.seed = m.value("seed", std::uint64_t{0});
      inst.metadata.family = m.value("family", std::string("external"));
      inst.metadata.parameters = m.value("parameters", json::object());
    } catch (const json::exception& e) {
      throw ParseError(std::string("metadata: ") + e.what());
    }
  }
  return inst;
}

Instance parse_instance(const std::string& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return instance_from_json(j);
}

bool known_family(const std::string& family) {
  for (const char* f : kFamilies) {
    if (family == f) return true;
  }
  return false;
}

void require_valid(const Instance& inst) {
  if (!known_family(inst.metadata.family)) throw ValidationError("unknown instance family '" + inst.metadata.family + "'");

  const ValidationReport sr = validate_gff(inst.structure);
  if (!sr.pass()) {
    const Check* w = sr.worst_failure();
    std::ostringstream msg;
    msg << "structure fails '" << w->name << "' (residual " << w->residual << ")";
    throw ValidationError(msg.str());
  }
  if (inst.curvature) {
    if (inst.curvature->dim() != inst.structure.dim()) {
      throw ValidationError("curvature dimension does not match the structure");
    }
    const CurvatureReport cr = validate_curvature(*inst.curvature, inst.structure.g());
    if (!cr.pass()) {
      const CurvatureCheck* w = cr.worst();
      std::ostringstream msg;
      msg << "curvature fails '" << w->name << "' (residual " << w->residual << " at ["
          << w->worst_index[0] << "," << w->worst_index[1] << "," << w->worst_index[2] << ","
          << w->worst_index[3] << "])";
      throw ValidationError(msg.str());
    }
  }
}

Instance load_instance(const std::string& path) {
  Instance inst = parse_instance(path);
  require_valid(inst);
  return inst;
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << dump(instance_to_json(inst));
  if (!out) throw ParseError("write failed for " + path);
}

json to_json(const ValidationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back(
        {{"name", c.name}, {"residual", c.residual}, {"pass", c.pass}, {"detail", c.detail}});
  }
  return {{"pass", r.pass()}, {"checks", checks}};
}

json to_json(const CurvatureReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"residual", c.residual},
                      {"pass", c.pass},
                      {"worst_index", c.worst_index}});
  }
  return {{"pass", r.pass()}, {"checks", checks}};
}

json to_json(const SpectralData& s) {
  json out;
  out["eigenvalues"] = s.eigenvalues;
  out["multiplicities"] = s.multiplicities;
  out["group_values"] = s.group_values;
  out["self_adjoint_path"] = s.self_adjoint_path;
  out["max_imag"] = s.max_imag;
  if (!s.self_adjoint_path) {
    out["imag"] = s.imag;
    out["group_imag"] = s.group_imag;
  }
  return out;
}

json to_json(const DecisionReport& r) {
  json out;
  out["condition"] = r.condition;
  out["pass"] = r.pass;
  out["seed"] = r.seed;
  out["samples"] = r.samples;
  out["tol"] = r.tol;
  out["grouping_tol"] = r.grouping_tol;
  out["max_deviation"] = number(r.max_deviation);
  out["groups"] = groups_json(r);
  out["counterexample"] = r.counterexample ? json(*r.counterexample) : json(nullptr);
  out["spectra"] = spectra_json(r);
  return out;
}

json to_json(const Tolerances& t) {
  return {{"rank", t.rank},
          {"null", t.null},
          {"validation", t.validation},
          {"grouping", t.grouping},
          {"constancy", t.constancy}};
}

json report_json(const DecisionReport& r) {
  json out = report_skeleton(r.condition, r.seed, r.tol, r.grouping_tol);
  add_path(out, r.condition, r);
  out["status"] = r.pass ? "pass" : "fail";
  return out;
}

json report_json(const PhiNullReport& r) {
  json out = report_skeleton("phi-null-osserman", r.quotient.seed, r.quotient.tol,
                             r.quotient.grouping_tol);
  add_path(out, "quotient", r.quotient);
  add_path(out, "direct", r.direct);
  out["verdicts"]["phi-null-osserman"] = r.pass();
  out["paths_agree"] = r.paths_agree();
  out["status"] = r.pass() ? "pass" : "fail";
  return out;
}

json report_json(const TheoremReport& r) {
  json out = report_skeleton("verify-theorem", r.base.seed, r.tol, r.base.grouping_tol);
  add_path(out, "a/phi-null-direct", r.phi_null.direct);
  add_path(out, "a/phi-null-quotient", r.phi_null.quotient);
  add_path(out, "b/base-osserman", r.base);
  add_path(out, "c/base-null-quotient", r.base_null.quotient);
  add_path(out, "c/base-null-direct", r.base_null.direct);
  out["verdicts"]["a"] = r.verdict_a;
  out["verdicts"]["b"] = r.verdict_b;
  out["verdicts"]["c"] = r.verdict_c;
  out["hypothesis_flag"] = r.hypothesis;
  out["contract_applies"] = r.contract_applies;
  out["residual_maxima"]["hypothesis"] = r.hypothesis_residual;
  out["residual_maxima"]["shift_consistency"] = r.shift_consistency_residual;
  out["status"] = to_string(r.status);
  return out;
}

json report_json(const RemarkReport& r) {
  json out = report_skeleton("remarks", r.seed, r.tol, 0.0);
  out["tolerances"].erase("grouping");
  out["kind"] = to_string(r.kind);
  out["fibration"] = to_string(r.fibration);
  out["vertical_sign_sum"] = r.vertical_sign_sum;
  out["target"] = r.target;
  out["verdicts"]["identity"] = r.identity_pass;
  out["verdicts"]["necessary_condition"] = r.necessary_condition_all;
  out["residual_maxima"]["identity"] = r.max_identity_residual;
  out["residual_maxima"]["sign_sum"] = r.max_sign_sum_residual;
  json samples = json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"x", vector_json(s.x)},
                       {"k_total", s.k_total},
                       {"k_base", s.k_base},
                       {"a_norm", s.a_norm},
                       {"identity_residual", s.identity_residual},
                       {"necessary_condition", s.necessary_condition}});
  }
  out["samples"] = std::move(samples);
  out["seeds"]["samples"] = static_cast<int>(r.samples.size());
  out["status"] = r.identity_pass ? "pass" : "fail";
  return out;
}

}  // namespace phinull
