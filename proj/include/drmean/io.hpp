#pragma once

#include <iosfwd>
#include <nlohmann/json_fwd.hpp>
#include <string>
#include <vector>

#include "drmean/empirical.hpp"
#include "drmean/experiments.hpp"
#include "drmean/moments.hpp"
#include "drmean/oracle.hpp"

namespace drmean::io {

// CSV sample reader: one row per observation, columns are coordinates. A
// non-numeric first row is treated as a header. Parse failures report the
// 1-based line number.
std::vector<Eigen::VectorXd> read_csv_sample(std::istream& in);
std::vector<Eigen::VectorXd> read_csv_file(const std::string& path);

std::string fmt17(double x);  // %.17g

nlohmann::json to_json(const DiscreteDistribution& dist);
DiscreteDistribution distribution_from_json(const nlohmann::json& j);

Model model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Model& model);

ExperimentSpec spec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const EmpiricalEstimate& e);
nlohmann::json to_json(const DominationReport& r);
nlohmann::json to_json(const SaddleReport& r);
nlohmann::json to_json(const Fig1Report& r);
nlohmann::json to_json(const IdentityReport& r);

// "lambda_bar,mse_vs_truth_mean,mse_vs_draw,ci_halfwidth,trials_used"
std::string curve_to_csv(const MseCurve& curve);
std::string fig1_curve_to_csv(const Fig1Report& r);

}  // namespace drmean::io
