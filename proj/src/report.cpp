#include "taunets/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace taunets {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

nlohmann::ordered_json report_to_json(const VerificationReport& rep) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["suite"] = rep.suite;
  nlohmann::ordered_json cfg;
  cfg["grid_min_exp"] = rep.config.grid_min_exp;
  cfg["grid_points"] = rep.config.grid_points;
  cfg["dim"] = rep.config.dim;
  cfg["j_max"] = rep.config.j_max;
  cfg["p_max"] = rep.config.p_max;
  cfg["n_max"] = rep.config.n_max;
  cfg["m_max"] = rep.config.m_max;
  cfg["seed"] = rep.config.seed;
  cfg["slack_structural"] = rep.config.slack_structural;
  cfg["slack_estimate"] = rep.config.slack_estimate;
  j["config"] = cfg;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : rep.checks) {
    nlohmann::ordered_json jc;
    jc["id"] = c.id;
    jc["verdict"] = c.pass ? "pass" : "fail";
    jc["margin"] = c.margin;
    if (c.witness_eps)
      jc["witness"] = {{"eps", *c.witness_eps}, {"x", c.witness_x}};
    else
      jc["witness"] = nullptr;
    jc["details"] = c.details;
    checks.push_back(jc);
  }
  j["checks"] = checks;
  j["overall"] = rep.overall() ? "pass" : "fail";
  return j;
}

std::string report_to_csv(const VerificationReport& rep) {
  std::ostringstream os;
  os << "suite,check_id,verdict,margin,witness_eps,witness_x,details\n";
  for (const auto& c : rep.checks) {
    os << csv_escape(rep.suite) << ',' << csv_escape(c.id) << ','
       << (c.pass ? "pass" : "fail") << ',' << fmt_double(c.margin) << ','
       << (c.witness_eps ? fmt_double(*c.witness_eps) : "") << ','
       << csv_escape(c.witness_x) << ',' << csv_escape(c.details) << '\n';
  }
  os << csv_escape(rep.suite) << ",overall," << (rep.overall() ? "pass" : "fail") << ",,,,\n";
  return os.str();
}

void write_report(const VerificationReport& rep, std::ostream& fallback) {
  std::string payload;
  if (rep.config.format == "csv")
    payload = report_to_csv(rep);
  else
    payload = report_to_json(rep).dump(2) + "\n";
  if (rep.config.out_path.empty()) {
    fallback << payload;
    return;
  }
  std::ofstream out(rep.config.out_path, std::ios::binary);
  if (!out) throw DomainError("cannot open output path: " + rep.config.out_path);
  out << payload;
}

}  // namespace taunets
