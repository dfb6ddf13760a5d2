#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qfosc/experiments.hpp"
#include "qfosc/franckhertz.hpp"

namespace qfosc::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kNumerical = 3 };

/// Header row plus preformatted data rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

/// Formatted CSV document: metadata header, table, optional trailer comments.
struct CsvDocument {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> config;
  CsvTable table;
  std::vector<std::string> trailer;  // written as "# <line>"
};

void write_csv(std::ostream& os, const CsvDocument& doc);

std::string format_energy(double x);  // 17 significant digits
std::string format_time(double x);    // 6 significant digits

/// Parses "lo:hi:step" into lo, lo + step, ... <= hi. Empty when lo > hi.
/// Throws std::invalid_argument on malformed text or step <= 0.
std::vector<double> parse_grid(const std::string& spec);

// Subcommand bodies. Arguments are already validated by run().

CsvTable cmd_levels(int n_max);

struct TraceArgs {
  double alpha = 0.1;
  double q0 = 0.0;
  double v0 = 0.0;
  double t_end = 100.0;
  IntegratorConfig integrator{kDefaultStep, {}, 0, 10};
  ResidenceOptions residence;
};

struct TraceOutput {
  CsvTable trajectory;  // t, q, v, E
  CsvTable residences;  // level, E_n, t_enter, t_exit, duration, censored
};

TraceOutput cmd_trace(const TraceArgs& args);

struct SettleArgs {
  double alpha = 0.1;
  double q0 = 0.0;
  std::vector<double> v0_grid;
  double t_end = 100.0;
  IntegratorConfig integrator;
};

CsvTable cmd_settle(const SettleArgs& args);

struct LifetimeArgs {
  std::vector<double> alphas{7.0};
  IntegratorConfig integrator{kDefaultStep, NoiseSpec::gaussian(kStudySigma), 0, 1};
  LifetimeStudyConfig study;
};

struct LifetimeOutput {
  CsvTable table;  // alpha, E_n, tau_mean, n_obs, censored
  std::vector<std::string> fit_lines;
};

LifetimeOutput cmd_lifetime(const LifetimeArgs& args);

struct FhArgs {
  std::vector<double> e0_grid;
  ScatterConfig scatter;
  bool detail = false;  // per-trial rows instead of ensemble means
};

CsvTable cmd_fh(const FhArgs& args);

/// Full command-line entry point. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfosc::cli
