#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "multibandit/errors.hpp"
#include "multibandit/harness.hpp"

namespace multibandit {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(path, "cannot open for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw IoError(path, "write failed");
  }
}

json config_json(const ExperimentConfig& config) {
  json policies = json::array();
  for (PolicyKind p : config.policies) policies.push_back(policy_name(p));
  return json{{"policies", policies},
              {"n_casinos", config.n_casinos},
              {"budget", config.budget},
              {"repetitions", config.repetitions},
              {"seed", config.seed},
              {"pool_size", config.pool_size},
              {"arm_sigma", config.arm_sigma},
              {"checkpoints", config.checkpoints},
              {"ucb_c", config.ucb_c},
              {"threads", config.threads},
              {"paired_environments", true}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig config;
  config.policies.clear();
  for (const json& name : j.at("policies")) {
    const auto kind = parse_policy(name.get<std::string>());
    if (!kind) {
      throw DataError("unknown policy in report: " + name.get<std::string>());
    }
    config.policies.push_back(*kind);
  }
  config.n_casinos = j.at("n_casinos").get<int>();
  config.budget = j.at("budget").get<int>();
  config.repetitions = j.at("repetitions").get<int>();
  config.seed = j.at("seed").get<std::uint64_t>();
  config.pool_size = j.at("pool_size").get<int>();
  config.arm_sigma = j.at("arm_sigma").get<double>();
  config.checkpoints = j.at("checkpoints").get<std::vector<int>>();
  config.ucb_c = j.at("ucb_c").get<double>();
  config.threads = j.at("threads").get<int>();
  return config;
}

}  // namespace

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "policy,repetition,regret,reward\n";
  for (const PolicyReport& pr : report.policies) {
    const std::string name = policy_name(pr.policy);
    for (std::size_t r = 0; r < pr.regrets.size(); ++r) {
      out << name << ',' << r << ',' << fmt(pr.regrets[r]) << ','
          << fmt(pr.rewards[r]) << '\n';
    }
  }
  return out.str();
}

std::string report_json_text(const ExperimentReport& report) {
  json policies = json::array();
  for (const PolicyReport& pr : report.policies) {
    policies.push_back(json{{"policy", policy_name(pr.policy)},
                            {"regrets", pr.regrets},
                            {"rewards", pr.rewards},
                            {"mean_regret", pr.mean_regret},
                            {"std_regret", pr.std_regret},
                            {"mean_reward", pr.mean_reward},
                            {"checkpoint_mean_regret",
                             pr.checkpoint_mean_regret}});
  }
  const json j{{"config", config_json(report.config)},
               {"policies", policies},
               {"wall_clock_seconds", report.wall_clock_seconds}};
  return j.dump(2) + "\n";
}

ExperimentReport report_from_json_text(const std::string& text) {
  const json j = json::parse(text);
  ExperimentReport report;
  report.config = config_from_json(j.at("config"));
  for (const json& pj : j.at("policies")) {
    PolicyReport pr;
    const auto kind = parse_policy(pj.at("policy").get<std::string>());
    if (!kind) {
      throw DataError("unknown policy in report");
    }
    pr.policy = *kind;
    pr.regrets = pj.at("regrets").get<std::vector<double>>();
    pr.rewards = pj.at("rewards").get<std::vector<double>>();
    pr.mean_regret = pj.at("mean_regret").get<double>();
    pr.std_regret = pj.at("std_regret").get<double>();
    pr.mean_reward = pj.at("mean_reward").get<double>();
    pr.checkpoint_mean_regret =
        pj.at("checkpoint_mean_regret").get<std::vector<double>>();
    report.policies.push_back(std::move(pr));
  }
  report.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  return report;
}

std::string render_whisker_svg(const std::vector<WhiskerDatum>& data,
                               const std::string& title) {
  const double width = 640.0;
  const double height = 420.0;
  const double left = 70.0;
  const double right = width - 30.0;
  const double top = 50.0;
  const double bottom = height - 60.0;

  double y_max = 1.0;
  double y_min = 0.0;
  for (const WhiskerDatum& d : data) {
    y_max = std::max(y_max, d.mean + d.stddev);
    y_min = std::min(y_min, d.mean - d.stddev);
  }
  y_max *= 1.05;
  if (y_min > 0.0) y_min = 0.0;

  const auto y_of = [&](double v) {
    return bottom - (v - y_min) / (y_max - y_min) * (bottom - top);
  };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width)
      << " " << fmt(height) << "\">\n";
  out << "  <rect x=\"0\" y=\"0\" width=\"" << fmt(width) << "\" height=\""
      << fmt(height) << "\" fill=\"white\"/>\n";
  out << "  <text x=\"" << fmt(width / 2)
      << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << title << "</text>\n";

  // Axes and horizontal gridlines.
  out << "  <line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\""
      << fmt(left) << "\" y2=\"" << fmt(bottom)
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  out << "  <line x1=\"" << fmt(left) << "\" y1=\"" << fmt(y_of(0.0))
      << "\" x2=\"" << fmt(right) << "\" y2=\"" << fmt(y_of(0.0))
      << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  const int n_ticks = 5;
  for (int t = 0; t <= n_ticks; ++t) {
    const double v = y_min + (y_max - y_min) * t / n_ticks;
    const double y = y_of(v);
    out << "  <line x1=\"" << fmt(left - 4) << "\" y1=\"" << fmt(y)
        << "\" x2=\"" << fmt(right) << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "  <text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(v) << "</text>\n";
  }

  const double slot = (right - left) / static_cast<double>(
                                           data.empty() ? 1 : data.size());
  const double bar_half = std::min(24.0, slot * 0.3);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const WhiskerDatum& d = data[i];
    const double cx = left + slot * (static_cast<double>(i) + 0.5);
    const double y_mean = y_of(d.mean);
    const double y_hi = y_of(d.mean + d.stddev);
    const double y_lo = y_of(d.mean - d.stddev);
    out << "  <g class=\"whisker\">\n";
    out << "    <line x1=\"" << fmt(cx) << "\" y1=\"" << fmt(y_hi)
        << "\" x2=\"" << fmt(cx) << "\" y2=\"" << fmt(y_lo)
        << "\" stroke=\"#444444\" stroke-width=\"1.5\"/>\n";
    out << "    <line x1=\"" << fmt(cx - bar_half * 0.5) << "\" y1=\""
        << fmt(y_hi) << "\" x2=\"" << fmt(cx + bar_half * 0.5) << "\" y2=\""
        << fmt(y_hi) << "\" stroke=\"#444444\" stroke-width=\"1.5\"/>\n";
    out << "    <line x1=\"" << fmt(cx - bar_half * 0.5) << "\" y1=\""
        << fmt(y_lo) << "\" x2=\"" << fmt(cx + bar_half * 0.5) << "\" y2=\""
        << fmt(y_lo) << "\" stroke=\"#444444\" stroke-width=\"1.5\"/>\n";
    out << "    <line x1=\"" << fmt(cx - bar_half) << "\" y1=\"" << fmt(y_mean)
        << "\" x2=\"" << fmt(cx + bar_half) << "\" y2=\"" << fmt(y_mean)
        << "\" stroke=\"#1f5fbf\" stroke-width=\"4\"/>\n";
    out << "    <text x=\"" << fmt(cx) << "\" y=\"" << fmt(bottom + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\">"
        << d.label << "</text>\n";
    out << "    <text x=\"" << fmt(cx + bar_half + 6) << "\" y=\""
        << fmt(y_mean + 4)
        << "\" text-anchor=\"start\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(d.mean) << "</text>\n";
    out << "  </g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string report_svg(const ExperimentReport& report) {
  std::vector<WhiskerDatum> data;
  data.reserve(report.policies.size());
  for (const PolicyReport& pr : report.policies) {
    data.push_back(
        WhiskerDatum{policy_name(pr.policy), pr.mean_regret, pr.std_regret});
  }
  std::ostringstream title;
  title << "mean regret, " << report.config.n_casinos << " casinos, budget "
        << report.config.budget << ", " << report.config.repetitions
        << " repetitions";
  return render_whisker_svg(data, title.str());
}

void write_report(const ExperimentReport& report, ReportFormat format,
                  const std::string& path) {
  switch (format) {
    case ReportFormat::Csv:
      write_text_file(path, report_csv(report));
      return;
    case ReportFormat::Json:
      write_text_file(path, report_json_text(report));
      return;
    case ReportFormat::Svg:
      write_text_file(path, report_svg(report));
      return;
  }
}

std::vector<WhiskerDatum> summarize_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError(path, "cannot open for reading");
  }
  std::string line;
  if (!std::getline(in, line) || line != "policy,repetition,regret,reward") {
    throw DataError(path + ": missing results header");
  }
  std::vector<std::string> order;
  std::vector<std::vector<double>> regrets;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string policy, rep, regret_s, reward_s;
    if (!std::getline(row, policy, ',') || !std::getline(row, rep, ',') ||
        !std::getline(row, regret_s, ',') || !std::getline(row, reward_s)) {
      throw DataError(path + ": malformed row at line " +
                      std::to_string(line_no));
    }
    double regret_v;
    try {
      regret_v = std::stod(regret_s);
    } catch (const std::exception&) {
      throw DataError(path + ": bad regret value at line " +
                      std::to_string(line_no));
    }
    std::size_t idx = 0;
    for (; idx < order.size(); ++idx) {
      if (order[idx] == policy) break;
    }
    if (idx == order.size()) {
      order.push_back(policy);
      regrets.emplace_back();
    }
    regrets[idx].push_back(regret_v);
  }
  std::vector<WhiskerDatum> data;
  data.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    data.push_back(WhiskerDatum{order[i], mean_of(regrets[i]),
                                sample_stddev(regrets[i])});
  }
  return data;
}

}  // namespace multibandit
