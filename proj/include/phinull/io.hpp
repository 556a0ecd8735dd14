#pragma once

// JSON instance files and machine-readable reports.

#include "phinull/curvature.hpp"
#include "phinull/gff.hpp"
#include "phinull/jacobi.hpp"
#include "phinull/submersion.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace phinull {

using json = nlohmann::json;

/// Malformed document or unreadable file.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Document parsed but a validator rejected its content.
class ValidationError : public Error {
 public:
  using Error::Error;
};

struct InstanceMetadata {
  std::string name;
  std::uint64_t seed = 0;
  std::string family = "external";
  json parameters = json::object();
};

struct Instance {
  GffStructure structure;
  std::optional<CurvatureTensor> curvature;
  InstanceMetadata metadata;
};

json structure_to_json(const GffStructure& S);
/// Reads and normalizes (xi_1 timelike first). Shape errors raise ParseError.
GffStructure structure_from_json(const json& j);

json curvature_to_json(const CurvatureTensor& R);
/// Dense {dim, components} or sparse {dim, entries: [{i,j,k,l,value}]}; sparse
/// entries are expanded over their symmetry orbit.
CurvatureTensor curvature_from_json(const json& j);

json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& j);

/// Reads and parses without running the validators.
Instance parse_instance(const std::string& path);
/// Parses and runs both validators; ValidationError carries the worst residual.
Instance load_instance(const std::string& path);
bool known_family(const std::string& family);
/// Throws ValidationError unless both validators pass.
void require_valid(const Instance& inst);
void save_instance(const Instance& inst, const std::string& path);

/// Dump used for every file and report: two-space indent and trailing newline.
std::string dump(const json& j);

json to_json(const ValidationReport& r);
json to_json(const CurvatureReport& r);
json to_json(const SpectralData& s);
json to_json(const DecisionReport& r);
json to_json(const Tolerances& t);

/// Reports in the common schema: verdicts, hypothesis_flag,
/// per_sample_spectra, residual_maxima, seeds, tolerances.
json report_json(const DecisionReport& r);
json report_json(const PhiNullReport& r);
json report_json(const TheoremReport& r);
json report_json(const RemarkReport& r);

}  // namespace phinull
