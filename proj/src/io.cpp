#include "drmean/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace drmean::io {

using nlohmann::json;

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  std::size_t pos = 0;
  try {
    out = std::stod(s, &pos);
  } catch (const std::exception&) {
    return false;
  }
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  return pos == s.size();
}

}  // namespace

std::vector<Eigen::VectorXd> read_csv_sample(std::istream& in) {
  std::vector<Eigen::VectorXd> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first_content = true;
  Eigen::Index width = -1;
  while (std::getline(in, line)) {
    ++lineno;
    std::string trimmed = line;
    while (!trimmed.empty() && (trimmed.back() == '\r' || trimmed.back() == ' '))
      trimmed.pop_back();
    if (trimmed.empty()) continue;

    const auto fields = split_fields(trimmed);
    Eigen::VectorXd row(static_cast<Eigen::Index>(fields.size()));
    bool ok = true;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      double v = 0.0;
      if (!parse_double(fields[i], v)) {
        ok = false;
        break;
      }
      row(static_cast<Eigen::Index>(i)) = v;
    }
    if (!ok) {
      if (first_content) {  // header row
        first_content = false;
        continue;
      }
      throw std::invalid_argument("CSV parse error at line " + std::to_string(lineno));
    }
    first_content = false;
    if (width < 0) width = row.size();
    if (row.size() != width)
      throw std::invalid_argument("CSV parse error at line " + std::to_string(lineno) +
                                  ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("empty sample");
  return rows;
}

std::vector<Eigen::VectorXd> read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  return read_csv_sample(in);
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

json to_json(const DiscreteDistribution& dist) {
  json atoms = json::array();
  for (const auto& a : dist.atoms()) {
    json row = json::array();
    for (Eigen::Index i = 0; i < a.size(); ++i) row.push_back(a(i));
    atoms.push_back(row);
  }
  return json{{"atoms", atoms}, {"weights", dist.weights()}};
}

DiscreteDistribution distribution_from_json(const json& j) {
  if (!j.contains("atoms") || !j.contains("weights"))
    throw std::invalid_argument("distribution JSON needs \"atoms\" and \"weights\"");
  std::vector<Eigen::VectorXd> atoms;
  for (const auto& a : j.at("atoms")) {
    if (a.is_number()) {
      atoms.push_back(Eigen::VectorXd::Constant(1, a.get<double>()));
    } else {
      Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
      Eigen::Index i = 0;
      for (const auto& x : a) v(i++) = x.get<double>();
      atoms.push_back(std::move(v));
    }
  }
  return DiscreteDistribution(std::move(atoms), j.at("weights").get<std::vector<double>>());
}

Model model_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "gaussian")
    return Model::gaussian(j.at("mean").get<double>(), j.at("sigma").get<double>());
  if (type == "mixture")
    return Model::mixture(j.at("means").get<std::vector<double>>(),
                          j.at("sigmas").get<std::vector<double>>(),
                          j.at("props").get<std::vector<double>>());
  if (type == "uniform")
    return Model::uniform(j.at("a").get<double>(), j.at("b").get<double>());
  if (type == "bernoulli") return Model::bernoulli(j.at("p").get<double>());
  if (type == "exponential") return Model::exponential(j.at("rate").get<double>());
  throw std::invalid_argument("unknown model type: " + type);
}

json to_json(const Model& model) {
  json j{{"type", model.tag()}};
  std::visit(
      [&j](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Model::Gaussian>) {
          j["mean"] = m.mean;
          j["sigma"] = m.sigma;
        } else if constexpr (std::is_same_v<T, Model::Mixture>) {
          j["means"] = m.means;
          j["sigmas"] = m.sigmas;
          j["props"] = m.props;
        } else if constexpr (std::is_same_v<T, Model::Uniform>) {
          j["a"] = m.a;
          j["b"] = m.b;
        } else if constexpr (std::is_same_v<T, Model::Bernoulli>) {
          j["p"] = m.p;
        } else {
          j["rate"] = m.rate;
        }
      },
      model.impl());
  return j;
}

ExperimentSpec spec_from_json(const json& j) {
  ExperimentSpec spec;
  spec.model = model_from_json(j.at("model"));
  spec.n = j.at("n").get<std::int64_t>();
  spec.trials = j.at("trials").get<std::int64_t>();
  spec.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("lambda_grid"))
    spec.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
  spec.epsilon = j.value("epsilon", 1e-6);
  spec.threads = j.value("threads", 0);
  spec.validate();
  return spec;
}

json to_json(const EmpiricalEstimate& e) {
  return json{{"xbar", e.xbar},
              {"t_n", e.t_n},
              {"lambda_bar", e.lambda_bar},
              {"estimate", e.estimate},
              {"n", e.n}};
}

json to_json(const DominationReport& r) {
  return json{{"g", r.g},
              {"cross_term", r.cross_term},
              {"t2_estimate", r.t2_estimate},
              {"t2_std_error", r.t2_std_error},
              {"epsilon", r.epsilon},
              {"threshold_exact", r.threshold_exact},
              {"threshold_simple", r.threshold_simple},
              {"slope0", r.slope0},
              {"domination_feasible", r.domination_feasible},
              {"note", r.domination_feasible
                           ? "strict domination feasible below threshold_exact"
                           : "no strict domination; lambda_bar = 0 optimal"},
              {"n", r.n},
              {"trials", r.trials}};
}

json to_json(const SaddleReport& r) {
  json xh = json::array();
  for (Eigen::Index i = 0; i < r.xhat_star.size(); ++i) xh.push_back(r.xhat_star(i));
  return json{{"minimax", r.minimax},
              {"maximin", r.maximin},
              {"gap", r.gap},
              {"xhat_star", xh},
              {"nu_star", to_json(r.nu_star)},
              {"self_consistent", r.self_consistent},
              {"admissible", r.admissible},
              {"radius", r.radius},
              {"recovered_epsilon", r.recovered_epsilon},
              {"recovered_lambda_mv", r.recovered_lambda_mv}};
}

json to_json(const Fig1Report& r) {
  return json{{"mixture",
               {{"means", r.mixture_means},
                {"sigmas", r.mixture_sigmas},
                {"props", r.mixture_props}}},
              {"analytic",
               {{"mean", r.analytic_mean},
                {"m2", r.analytic_m2},
                {"m3", r.analytic_m3},
                {"m4", r.analytic_m4},
                {"g", r.analytic_g}}},
              {"reference",
               {{"m2", r.reference_m2},
                {"m4", r.reference_m4},
                {"g", r.reference_g},
                {"xbar", r.reference_xbar},
                {"t", r.reference_t},
                {"minimizer", r.reference_minimizer},
                {"minimum", r.reference_minimum},
                {"slope0", r.reference_slope0}}},
              {"n", r.n},
              {"seed", r.seed},
              {"surrogate_samples", r.surrogate_samples},
              {"realized_xbar", r.realized_xbar},
              {"realized_t", r.realized_t},
              {"lambda_grid", r.lambda_grid},
              {"mse_analytic", r.mse_analytic},
              {"mse_surrogate", r.mse_surrogate},
              {"minimizer_analytic", r.minimizer_analytic},
              {"minimum_analytic", r.minimum_analytic}};
}

json to_json(const IdentityReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back(json{{"name", c.name},
                          {"n", c.n},
                          {"closed_form", c.closed_form},
                          {"mc_estimate", c.mc_estimate},
                          {"std_error", c.std_error},
                          {"z", c.z},
                          {"pass", c.pass}});
  }
  return json{{"checks", checks},
              {"cross_normalization", r.cross_normalization},
              {"all_pass", r.all_pass}};
}

std::string curve_to_csv(const MseCurve& curve) {
  std::ostringstream out;
  out << "lambda_bar,mse_vs_truth_mean,mse_vs_draw,ci_halfwidth,trials_used\n";
  for (const auto& p : curve.points) {
    out << fmt17(p.lambda_bar) << ',' << fmt17(p.mse_vs_truth_mean) << ','
        << fmt17(p.mse_vs_draw) << ',' << fmt17(p.ci_halfwidth) << ',' << p.trials_used
        << '\n';
  }
  return out.str();
}

std::string fig1_curve_to_csv(const Fig1Report& r) {
  std::ostringstream out;
  out << "lambda_bar,mse_analytic,mse_surrogate\n";
  for (std::size_t i = 0; i < r.lambda_grid.size(); ++i) {
    out << fmt17(r.lambda_grid[i]) << ',' << fmt17(r.mse_analytic[i]) << ','
        << fmt17(r.mse_surrogate[i]) << '\n';
  }
  return out.str();
}

}  // namespace drmean::io
