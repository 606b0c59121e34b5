#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "taunets/asymptotics.hpp"

namespace taunets {

struct RunConfig {
  int grid_min_exp = 4;
  int grid_points = 37;
  int dim = 1;
  int j_max = 6;
  int p_max = 8;
  int n_max = 16;
  int m_max = 24;
  std::uint64_t seed = 1;
  std::string format = "json";  // json|csv
  std::string out_path;         // empty: report goes to stdout
  double slack_structural = 1.0;
  double slack_estimate = 16.0;

  EpsGrid make_grid() const { return EpsGrid::dyadic(grid_min_exp, grid_points); }
  Thresholds thresholds() const {
    Thresholds t;
    t.n_max = n_max;
    t.m_max = m_max;
    t.p_max = p_max;
    t.slack_structural = slack_structural;
    t.slack_estimate = slack_estimate;
    t.seed = seed;
    return t;
  }
};

// One verified statement. margin is the worst log-space margin, divided by
// |ln eps| so it is comparable across grid points.
struct CheckRecord {
  std::string id;
  bool pass = false;
  double margin = 0.0;
  std::optional<double> witness_eps;
  std::string witness_x;
  std::string details;
};

struct VerificationReport {
  std::string suite;
  RunConfig config;
  std::vector<CheckRecord> checks;
  double wall_ms = 0.0;  // console diagnostics only; never serialized

  void add(CheckRecord r) { checks.push_back(std::move(r)); }
  bool overall() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

nlohmann::ordered_json report_to_json(const VerificationReport& rep);
std::string report_to_csv(const VerificationReport& rep);

// Serializes per config.format to config.out_path (or the stream when the
// path is empty). Output bytes depend only on the report contents.
void write_report(const VerificationReport& rep, std::ostream& fallback);

}  // namespace taunets
