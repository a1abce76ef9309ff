#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "paretobin/frontier.hpp"
#include "paretobin/models.hpp"
#include "paretobin/pipeline.hpp"

namespace paretobin {

// Fixed-format floating point rendering ("%.<digits>g"); all emitted files go
// through these so repeated runs are byte-identical.
std::string fmt_float(double x, int significant_digits);

// Frontier tables: one header line "H,I,M,provenance,cuts", 12 significant
// digits, cuts serialized as semicolon-separated positions in (0,1).
void write_frontier(std::ostream& out, const std::vector<ParetoPoint>& points, int N);

struct FrontierRow {
  double H = 0.0;
  double I = 0.0;
  int M = 1;
  std::string provenance;
  std::vector<double> cuts01;  // positions in (0,1)
};
std::vector<FrontierRow> read_frontier(std::istream& in);
std::vector<FrontierRow> read_frontier_file(const std::string& path);

// Sample files: header "w,y", '#' comments.
void write_samples(std::ostream& out, const SampleSet& s);

// Micro-bin model serialization: N, sorted flag, p1 at 17 significant digits.
void write_microbin_model(std::ostream& out, const MicroBinModel& m);
MicroBinModel read_microbin_model(std::istream& in);

// Model-spec files: key-value structured text declaring
// family in {analytic, expbeta, cifarcdf}, degree, per-class coefficients,
// prior. '#' starts a comment.
struct ModelSpec {
  std::string family;
  std::shared_ptr<const ClassConditionalModel> model;
};
ModelSpec load_model_spec(std::istream& in);
ModelSpec load_model_spec_file(const std::string& path);

}  // namespace paretobin
