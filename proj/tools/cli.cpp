#include "cli.hpp"

#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qfosc/errors.hpp"
#include "qfosc/parallel.hpp"
#include "qfosc/seeding.hpp"

namespace qfosc::cli {

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) throw std::logic_error("csv row width mismatch");
  rows.push_back(std::move(row));
}

namespace {

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  return line;
}

std::string format_g(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_energy(double x) { return format_g(x, 17); }
std::string format_time(double x) { return format_g(x, 6); }

void write_csv(std::ostream& os, const CsvDocument& doc) {
  os << "# qfosc " << doc.subcommand << '\n';
  for (const auto& [key, value] : doc.config) os << "# " << key << '=' << value << '\n';
  os << join(doc.table.header) << '\n';
  for (const auto& row : doc.table.rows) os << join(row) << '\n';
  for (const auto& line : doc.trailer) os << "# " << line << '\n';
}

std::vector<double> parse_grid(const std::string& spec) {
  std::array<double, 3> parts{};
  std::size_t pos = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t colon = spec.find(':', pos);
    if ((k < 2) != (colon != std::string::npos)) {
      throw std::invalid_argument("grid must be lo:hi:step, got '" + spec + "'");
    }
    const std::string field = spec.substr(pos, k < 2 ? colon - pos : std::string::npos);
    std::size_t used = 0;
    try {
      parts[k] = std::stod(field, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != field.size()) throw std::invalid_argument("bad number '" + field + "' in grid");
    pos = colon + 1;
  }
  const auto [lo, hi, step] = parts;
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("grid bounds must be finite and step > 0");
  }
  std::vector<double> grid;
  if (lo > hi) return grid;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  grid.reserve(count);
  for (std::size_t i = 0; i < count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

CsvTable cmd_levels(int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
  CsvTable t{{"n", "E_n"}, {}};
  for (int n = 0; n <= n_max; ++n) {
    t.add_row({std::to_string(n), format_energy(stationary_level_energy(n))});
  }
  return t;
}

TraceOutput cmd_trace(const TraceArgs& args) {
  const RelaxTrace trace = relax_trace(args.q0, args.v0, ModelParams{args.alpha}, args.integrator,
                                       args.t_end, args.residence);
  TraceOutput out;
  out.trajectory.header = {"t", "q", "v", "E"};
  for (const auto& s : trace.samples) {
    out.trajectory.add_row(
        {format_time(s.t), format_energy(s.q), format_energy(s.v), format_energy(s.energy)});
  }
  out.residences.header = {"level", "E_n", "t_enter", "t_exit", "duration", "censored"};
  for (const auto& seg : trace.residences) {
    out.residences.add_row({std::to_string(seg.level.n), format_energy(seg.level.energy()),
                            format_time(seg.t_enter), format_time(seg.t_exit),
                            format_time(seg.duration()), format_bool(seg.censored)});
  }
  return out;
}

CsvTable cmd_settle(const SettleArgs& args) {
  const auto rows =
      settle_sweep(args.v0_grid, args.q0, ModelParams{args.alpha}, args.integrator, args.t_end);
  CsvTable t{{"v0", "E_final", "level", "classical_E"}, {}};
  for (const auto& r : rows) {
    t.add_row({format_energy(r.v0), format_energy(r.energy_final), std::to_string(r.level),
               format_energy(r.classical_energy)});
  }
  return t;
}

LifetimeOutput cmd_lifetime(const LifetimeArgs& args) {
  LifetimeOutput out;
  out.table.header = {"alpha", "E_n", "tau_mean", "n_obs", "censored"};
  std::vector<AlphaPoint> alpha_points;
  for (double alpha : args.alphas) {
    std::vector<LifetimeRecord> records;
    try {
      records = lifetime_study(ModelParams{alpha}, args.integrator, args.study);
    } catch (const NoTransitions& e) {
      records = e.records();
    }
    for (const auto& rec : records) {
      out.table.add_row({format_energy(alpha), format_energy(rec.level.energy()),
                         format_time(rec.tau_mean), std::to_string(rec.observed()),
                         std::to_string(rec.censored)});
    }
    const auto points = lifetime_fit_points(records, args.study.start_level);
    std::string prefix = "fit alpha=" + format_energy(alpha);
    try {
      const PowerLawFit fit = fit_power_law(points);
      out.fit_lines.push_back(prefix + " ln_A=" + format_energy(fit.ln_a) +
                              " beta=" + format_energy(fit.beta) + " r2=" + format_energy(fit.r2) +
                              " n_points=" + std::to_string(fit.n_points));
      alpha_points.push_back({alpha, fit.ln_a});
    } catch (const std::exception& e) {
      out.fit_lines.push_back(prefix + " refused: " + e.what());
    }
  }
  if (args.alphas.size() > 1) {
    try {
      const AlphaScaling s = fit_a_vs_alpha(alpha_points);
      out.fit_lines.push_back("alpha_scaling ln_A0=" + format_energy(s.ln_a0) +
                              " exponent=" + format_energy(s.exponent) +
                              " r2=" + format_energy(s.r2));
    } catch (const std::exception& e) {
      out.fit_lines.push_back(std::string("alpha_scaling refused: ") + e.what());
    }
  }
  return out;
}

CsvTable cmd_fh(const FhArgs& args) {
  if (args.e0_grid.empty()) throw std::invalid_argument("empty E0 grid");
  if (args.detail) {
    CsvTable t{{"E0", "phase", "Ee_final", "Eosc_final", "elastic", "clamp_events"}, {}};
    for (std::size_t i = 0; i < args.e0_grid.size(); ++i) {
      ScatterConfig point = args.scatter;
      point.seed = derive_seed(args.scatter.seed, i);
      for (const auto& r : scatter_ensemble(args.e0_grid[i], point).trials) {
        t.add_row({format_energy(r.e0), format_energy(r.phase), format_energy(r.electron_final),
                   format_energy(r.oscillator_final), format_bool(r.elastic),
                   std::to_string(r.clamp_events)});
      }
    }
    return t;
  }
  CsvTable t{{"E0", "mean_Ee", "mean_Ve", "stddev_Ee", "window_limited"}, {}};
  for (const auto& r : fh_sweep(args.e0_grid, args.scatter)) {
    t.add_row({format_energy(r.e0), format_energy(r.mean_electron),
               format_energy(r.mean_velocity), format_energy(r.stddev_electron),
               format_bool(r.window_limited)});
  }
  return t;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

// Reads flat key=value lines; '#' starts a comment.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::vector<std::string> flags;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    auto key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    auto value = line.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    flags.push_back("--" + key + "=" + value);
  }
  return flags;
}

// Splices config-file flags in front of the user's own flags so the latter win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.size() < 2) return args;
  std::vector<std::string> out{args[0], args[1]};
  for (auto& f : read_config(path)) out.push_back(std::move(f));
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

struct Common {
  std::string out_path;
  std::string config_path;
  std::uint64_t seed = kDefaultSeed;
  double h = kDefaultStep;
  double sigma = 0.0;
  unsigned workers = 0;
};

void add_common(CLI::App* sub, Common& c, bool with_integrator) {
  // "-h" would collide with the step-size flag --h.
  sub->set_help_flag("--help", "Print this help message and exit");
  sub->add_option("--out", c.out_path, "Output CSV path (default stdout)");
  sub->add_option("--config", c.config_path, "Flat key=value defaults file");
  if (with_integrator) {
    sub->add_option("--seed", c.seed, "RNG seed")->envname("QFOSC_SEED");
    sub->add_option("--h", c.h, "Integration step")->check(CLI::Range(1e-12, kMaxStep));
    sub->add_option("--sigma", c.sigma, "Per-step velocity kick std")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
  }
}

IntegratorConfig integrator_from(const Common& c, std::size_t sample_every) {
  IntegratorConfig cfg;
  cfg.h = c.h;
  cfg.noise = c.sigma > 0.0 ? NoiseSpec::gaussian(c.sigma) : NoiseSpec{};
  cfg.seed = c.seed;
  cfg.sample_every = sample_every;
  cfg.validate();
  return cfg;
}

void add_integrator_meta(CsvDocument& doc, const Common& c) {
  doc.config.emplace_back("h", format_energy(c.h));
  doc.config.emplace_back("sigma", format_energy(c.sigma));
  doc.config.emplace_back("seed", std::to_string(c.seed));
}

void emit(const Common& c, const CsvDocument& doc, std::ostream& out) {
  if (c.out_path.empty()) {
    write_csv(out, doc);
    return;
  }
  std::ofstream file(c.out_path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot write '" + c.out_path + "'");
  write_csv(file, doc);
}

std::vector<std::string> table_as_comments(const std::string& title, const CsvTable& t) {
  std::vector<std::string> lines{title, join(t.header)};
  for (const auto& row : t.rows) lines.push_back(join(row));
  return lines;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum-friction oscillator simulations", "qfosc"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Common common;

  int n_max = 12;
  auto* levels = app.add_subcommand("levels", "Stationary level table");
  levels->add_option("--n-max", n_max, "Highest level")->required();
  add_common(levels, common, false);

  TraceArgs trace;
  trace.integrator.sample_every = 10;
  std::size_t trace_every = 10;
  auto* trace_cmd = app.add_subcommand("trace", "Single relaxation/cascade trajectory");
  trace_cmd->add_option("--alpha", trace.alpha)->check(CLI::NonNegativeNumber);
  trace_cmd->add_option("--q0", trace.q0);
  trace_cmd->add_option("--v0", trace.v0);
  trace_cmd->add_option("--t-end", trace.t_end)->check(CLI::PositiveNumber);
  trace_cmd->add_option("--tol", trace.residence.tol)->check(CLI::Range(1e-12, 0.5));
  trace_cmd->add_option("--min-dwell", trace.residence.min_dwell)->check(CLI::PositiveNumber);
  trace_cmd->add_option("--sample-every", trace_every)->check(CLI::Range(1, 1 << 30));
  add_common(trace_cmd, common, true);

  SettleArgs settle;
  std::string v0_grid;
  auto* settle_cmd = app.add_subcommand("settle", "Final energy against initial velocity");
  settle_cmd->add_option("--alpha", settle.alpha)->check(CLI::NonNegativeNumber);
  settle_cmd->add_option("--q0", settle.q0);
  settle_cmd->add_option("--v0-grid", v0_grid, "lo:hi:step")->required();
  settle_cmd->add_option("--t-end", settle.t_end)->check(CLI::PositiveNumber);
  add_common(settle_cmd, common, true);

  LifetimeArgs life;
  std::vector<double> life_alphas;
  auto* life_cmd = app.add_subcommand("lifetime", "Excited-level lifetimes and power-law fit");
  life_cmd->add_option("--alpha", life_alphas, "One or more alpha values (comma separated)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
      ->check(CLI::PositiveNumber);
  life_cmd->add_option("--start-level", life.study.start_level)->check(CLI::NonNegativeNumber);
  life_cmd->add_option("--t-max", life.study.t_max)->check(CLI::PositiveNumber);
  life_cmd->add_option("--repeats", life.study.repeats)->check(CLI::PositiveNumber);
  life_cmd->add_option("--tol", life.study.residence.tol)->check(CLI::Range(1e-12, 0.5));
  life_cmd->add_option("--min-dwell", life.study.residence.min_dwell)
      ->check(CLI::PositiveNumber);
  add_common(life_cmd, common, true);

  FhArgs fh;
  std::string e0_grid = "0.1:4.0:0.1";
  std::string window = "stepwise";
  auto* fh_cmd = app.add_subcommand("fh", "Franck-Hertz scattering sweep");
  fh_cmd->add_option("--alpha", fh.scatter.params.alpha)->check(CLI::PositiveNumber);
  fh_cmd->add_option("--e0-grid", e0_grid, "lo:hi:step");
  fh_cmd->add_option("--trials", fh.scatter.trials)->check(CLI::PositiveNumber);
  fh_cmd->add_option("--t-int", fh.scatter.window.t_int)->check(CLI::PositiveNumber);
  fh_cmd->add_option("--window", window)->check(CLI::IsMember({"stepwise", "exponential"}));
  fh_cmd->add_option("--rate", fh.scatter.window.rate, "Exponential window decay rate")
      ->check(CLI::PositiveNumber);
  fh_cmd->add_option("--elastic-tol", fh.scatter.elastic_tol)->check(CLI::PositiveNumber);
  fh_cmd->add_flag("--detail", fh.detail, "Emit per-trial rows");
  add_common(fh_cmd, common, true);

  // Subcommand-specific sigma defaults; an explicit flag overrides them.
  const std::map<const CLI::App*, double> default_sigma{
      {trace_cmd, 0.0}, {settle_cmd, 0.0}, {life_cmd, kStudySigma}, {fh_cmd, kStudySigma}};

  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const std::exception& e) {
    err << "qfosc: " << e.what() << '\n';
    return kUsage;
  }
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (default_sigma.count(chosen) && chosen->count("--sigma") == 0) {
    common.sigma = default_sigma.at(chosen);
  }
  set_worker_count(common.workers);

  CsvDocument doc;
  doc.subcommand = chosen->get_name();
  try {
    if (chosen == levels) {
      doc.config.emplace_back("n_max", std::to_string(n_max));
      doc.table = cmd_levels(n_max);
    } else if (chosen == trace_cmd) {
      trace.integrator = integrator_from(common, trace_every);
      doc.config = {{"alpha", format_energy(trace.alpha)},
                    {"q0", format_energy(trace.q0)},
                    {"v0", format_energy(trace.v0)},
                    {"t_end", format_energy(trace.t_end)},
                    {"tol", format_energy(trace.residence.tol)},
                    {"min_dwell", format_energy(trace.residence.min_dwell)},
                    {"sample_every", std::to_string(trace_every)}};
      add_integrator_meta(doc, common);
      TraceOutput result = cmd_trace(trace);
      doc.table = std::move(result.trajectory);
      doc.trailer = table_as_comments("residences", result.residences);
    } else if (chosen == settle_cmd) {
      settle.v0_grid = parse_grid(v0_grid);
      if (settle.v0_grid.empty()) throw std::invalid_argument("empty v0 grid '" + v0_grid + "'");
      settle.integrator = integrator_from(common, 1);
      doc.config = {{"alpha", format_energy(settle.alpha)},
                    {"q0", format_energy(settle.q0)},
                    {"v0_grid", v0_grid},
                    {"t_end", format_energy(settle.t_end)}};
      add_integrator_meta(doc, common);
      doc.table = cmd_settle(settle);
    } else if (chosen == life_cmd) {
      if (!life_alphas.empty()) life.alphas = life_alphas;
      life.integrator = integrator_from(common, 1);
      std::string alphas;
      for (double a : life.alphas) alphas += (alphas.empty() ? "" : ",") + format_energy(a);
      doc.config = {{"alpha", alphas},
                    {"start_level", std::to_string(life.study.start_level)},
                    {"t_max", format_energy(life.study.t_max)},
                    {"repeats", std::to_string(life.study.repeats)},
                    {"tol", format_energy(life.study.residence.tol)},
                    {"min_dwell", format_energy(life.study.residence.min_dwell)}};
      add_integrator_meta(doc, common);
      LifetimeOutput result = cmd_lifetime(life);
      doc.table = std::move(result.table);
      doc.trailer = std::move(result.fit_lines);
    } else if (chosen == fh_cmd) {
      fh.e0_grid = parse_grid(e0_grid);
      if (fh.e0_grid.empty()) throw std::invalid_argument("empty E0 grid '" + e0_grid + "'");
      if (window == "exponential") {
        fh.scatter.window.kind = WindowKind::exponential;
        if (fh_cmd->count("--rate") == 0) {
          throw std::invalid_argument("--window exponential requires --rate");
        }
      }
      fh.scatter.integrator = integrator_from(common, 1);
      fh.scatter.seed = common.seed;
      fh.scatter.validate();
      doc.config = {{"alpha", format_energy(fh.scatter.params.alpha)},
                    {"e0_grid", e0_grid},
                    {"trials", std::to_string(fh.scatter.trials)},
                    {"window", window}};
      if (fh.scatter.window.kind == WindowKind::stepwise) {
        doc.config.emplace_back("t_int", format_energy(fh.scatter.window.t_int));
      } else {
        doc.config.emplace_back("rate", format_energy(fh.scatter.window.rate));
      }
      doc.config.emplace_back("elastic_tol", format_energy(fh.scatter.elastic_tol));
      doc.config.emplace_back("detail", format_bool(fh.detail));
      add_integrator_meta(doc, common);
      doc.table = cmd_fh(fh);
    }
    emit(common, doc, out);
  } catch (const NonFiniteState& e) {
    err << "qfosc: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "qfosc: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

}  // namespace qfosc::cli
