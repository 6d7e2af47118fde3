#include "bougerol_cli/cli.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>

#include "bougerol/closedform.hpp"
#include "bougerol/error.hpp"
#include "bougerol/sde.hpp"
#include "bougerol/verify.hpp"
#include "bougerol/version.hpp"

namespace bougerol::cli {
namespace {

using nlohmann::ordered_json;

constexpr std::array<std::pair<Command, const char*>, 8> kCommands{{
    {Command::verify_boug, "verify-boug"},
    {Command::verify_bdy, "verify-bdy"},
    {Command::verify_main, "verify-main"},
    {Command::verify_second, "verify-second"},
    {Command::verify_reversal, "verify-reversal"},
    {Command::density, "density"},
    {Command::mellin, "mellin"},
    {Command::sde_check, "sde-check"},
}};

std::string command_list() {
  std::string out;
  for (const auto& [c, name] : kCommands) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  if constexpr (std::is_floating_point_v<T>) {
    // from_chars rejects a leading '+', std::stod accepts trailing junk; do it by hand.
    if (s.front() == '+') s.remove_prefix(1);
  }
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

// Collects every invalid flag instead of stopping at the first.
class Checker {
 public:
  explicit Checker(std::vector<std::string>& errors) : errors_(errors) {}

  template <typename T, typename Pred>
  void field(const char* flag, const std::optional<std::string>& raw, T& dst, Pred ok, const char* requirement) {
    if (!raw) return;
    T v{};
    if (!parse_number(*raw, v)) {
      errors_.push_back(std::string(flag) + ": '" + *raw + "' is not a valid number");
      return;
    }
    if (!ok(v)) {
      errors_.push_back(std::string(flag) + " must be " + requirement + " (got " + *raw + ")");
      return;
    }
    dst = v;
  }

 private:
  std::vector<std::string>& errors_;
};

bool is_pow2(std::uint64_t n) { return n >= 2 && (n & (n - 1)) == 0; }

ordered_json meta_value(const std::string& s) {
  std::int64_t i = 0;
  if (parse_number(s, i)) return i;
  double d = 0.0;
  if (parse_number(s, d) && std::isfinite(d)) return d;
  return s;
}

ordered_json common(const RunConfig& cfg) {
  ordered_json row;
  row["command"] = command_name(cfg.command);
  return row;
}

void stamp(ordered_json& row, const RunConfig& cfg) {
  const auto put = [&](const char* k, const ordered_json& v) {
    if (!row.contains(k)) row[k] = v;
  };
  put("t", cfg.t);
  put("x", cfg.x);
  put("n_mc", cfg.n_mc);
  put("n_steps", cfg.n_steps);
  put("seed", cfg.seed);
  put("version", kVersion);
}

ordered_json report_row(const RunConfig& cfg, const TestReport& r) {
  ordered_json row = common(cfg);
  row["test_name"] = r.test_name;
  row["verdict"] = r.verdict();
  row["decisive"] = r.decisive;
  row["statistic"] = r.statistic;
  row["threshold_or_pvalue"] = r.threshold_or_pvalue;
  row["n1"] = r.n1;
  row["n2"] = r.n2;
  stamp(row, cfg);
  for (const auto& [k, v] : r.metadata)
    if (!row.contains(k)) row[k] = meta_value(v);
  return row;
}

VerifyConfig verify_config(const RunConfig& cfg) {
  VerifyConfig v;
  v.t = cfg.t;
  v.x = cfg.x;
  v.n_mc = cfg.n_mc;
  v.n_steps = cfg.n_steps;
  v.rng = RngStream{cfg.seed, 0};
  v.threads = cfg.threads;
  v.validate();
  return v;
}

Rows density_rows(const RunConfig& cfg, bool& all_passed) {
  Rows rows;
  const std::uint64_t n = cfg.points;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double v = n == 1 ? cfg.v_min
                            : cfg.v_min + (cfg.v_max - cfg.v_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    const DensityEval d = density_A(cfg.t, v, cfg.tol);
    all_passed = all_passed && d.tolerance_met;
    ordered_json row = common(cfg);
    row["v"] = v;
    row["density"] = d.value;
    row["err_estimate"] = d.abs_error_estimate;
    row["nodes_used"] = d.nodes_used;
    row["tolerance_met"] = d.tolerance_met;
    row["small_t_warning"] = d.small_t_warning;
    row["verdict"] = d.tolerance_met ? "pass" : "fail";
    row["tol"] = cfg.tol;
    row["t"] = cfg.t;
    row["seed"] = cfg.seed;
    row["version"] = kVersion;
    rows.push_back(std::move(row));
  }
  return rows;
}

Rows mellin_rows(const RunConfig& cfg, bool& all_passed) {
  const MellinEstimate m = mellin_A(cfg.t, cfg.nu, cfg.n_mc, RngStream{cfg.seed, 0}, cfg.n_steps, cfg.threads);
  const double gap = std::abs(m.lhs - m.rhs);
  const bool pass = cfg.nu == 1.0 ? m.lhs == m.rhs : gap <= 3.0 * m.mc_se;
  all_passed = pass;
  ordered_json row = common(cfg);
  row["test_name"] = "mellin";
  row["verdict"] = pass ? "pass" : "fail";
  row["nu"] = cfg.nu;
  row["lhs"] = m.lhs;
  row["rhs"] = m.rhs;
  row["mc_se"] = m.mc_se;
  row["z_score"] = m.mc_se > 0.0 ? gap / m.mc_se : 0.0;
  stamp(row, cfg);
  return {row};
}

Rows study_rows(const RunConfig& cfg, const char* name, const ConvergenceStudy& s, bool pass, double target) {
  Rows rows;
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    ordered_json row = common(cfg);
    row["test_name"] = std::string(name) + "_level";
    row["verdict"] = "pass";
    row["decisive"] = false;
    row["scheme_steps"] = s.steps[i];
    row["rms_error"] = s.rms_error[i];
    stamp(row, cfg);
    rows.push_back(std::move(row));
  }
  ordered_json row = common(cfg);
  row["test_name"] = name;
  row["verdict"] = pass ? "pass" : "fail";
  row["decisive"] = true;
  row["statistic"] = s.observed_order;
  row["threshold_or_pvalue"] = target;
  stamp(row, cfg);
  rows.push_back(std::move(row));
  return rows;
}

Rows sde_rows(const RunConfig& cfg, bool& all_passed) {
  const std::array<std::size_t, 3> steps{cfg.n_steps / 16, cfg.n_steps / 4, cfg.n_steps};
  const RngStream base{cfg.seed, 0};
  Rows rows;

  const ConvergenceStudy em = em_strong_error(cfg.x, cfg.t, steps, cfg.n_mc, base.child(6, 0), cfg.threads);
  const bool em_ok = std::abs(em.observed_order - 0.5) <= 0.1;
  for (auto& r : study_rows(cfg, "em_strong_order", em, em_ok, 0.5)) rows.push_back(std::move(r));

  const ConvergenceStudy ex = explicit_residual_study(cfg.x, cfg.t, steps, cfg.n_mc, base.child(7, 0), cfg.threads);
  bool ex_ok = true;
  for (std::size_t i = 1; i < ex.rms_error.size(); ++i) ex_ok = ex_ok && ex.rms_error[i] < ex.rms_error[i - 1];
  for (auto& r : study_rows(cfg, "explicit_self_convergence", ex, ex_ok, 0.0)) rows.push_back(std::move(r));

  const TestReport drift = bougerol_drift_check(cfg.t, cfg.x, cfg.n_mc, base.child(8, 0), cfg.n_steps, cfg.threads);
  rows.push_back(report_row(cfg, drift));
  all_passed = em_ok && ex_ok && drift.passed;
  return rows;
}

std::string csv_cell(const ordered_json& v) {
  if (v.is_null()) return "";
  if (!v.is_string()) return v.dump();
  const auto& s = v.get_ref<const std::string&>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

const char* command_name(Command c) noexcept {
  for (const auto& [cmd, name] : kCommands)
    if (cmd == c) return name;
  return "?";
}

std::optional<Command> parse_command(const std::string& name) noexcept {
  for (const auto& [cmd, n] : kCommands)
    if (name == n) return cmd;
  return std::nullopt;
}

ParseResult parse_flags(const std::vector<std::string>& args, const char* seed_env) {
  ParseResult result;
  CLI::App app{"Monte Carlo and closed-form checks for exponential functionals of Brownian motion", "bougerol"};
  app.allow_extras();

  std::string command;
  std::optional<std::string> t, x, n_mc, n_steps, seed, format, output, threads, v_min, v_max, points, nu, tol;
  app.add_option("command", command, "One of: " + command_list());
  app.add_option("--t", t, "Horizon t > 0 (default 1)");
  app.add_option("--x", x, "Starting level x (default 0)");
  app.add_option("--n-mc", n_mc, "Monte Carlo sample size, >= 100 (default 100000)");
  app.add_option("--n-steps", n_steps, "Path grid steps, a power of two (default 4096)");
  app.add_option("--seed", seed, std::string("Base seed (default 0, or $") + kSeedEnv + ")");
  app.add_option("--format", format, "json or csv (default json)");
  app.add_option("--output", output, "Output file, '-' for stdout (default -)");
  app.add_option("--threads", threads, "Worker threads, 0 = all cores (default 0)");
  app.add_option("--v-min", v_min, "density: first abscissa > 0 (default 0.1)");
  app.add_option("--v-max", v_max, "density: last abscissa (default 5)");
  app.add_option("--points", points, "density: number of abscissae (default 100)");
  app.add_option("--nu", nu, "mellin: exponent nu > 1/2 (default 1.5)");
  app.add_option("--tol", tol, "density: absolute quadrature tolerance (default 1e-10)");
  for (CLI::Option* opt : app.get_options())
    if (opt->get_name() != "--help") opt->type_name(opt->get_name() == "--format" ? "FMT" : "VALUE");
  app.get_option("command")->type_name("COMMAND");
  app.get_option("--output")->type_name("PATH");
  result.usage = app.help();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    result.help = true;
    return result;
  } catch (const CLI::ParseError& e) {
    result.errors.emplace_back(e.what());
    return result;
  }
  for (const auto& extra : app.remaining()) result.errors.push_back("unrecognized argument '" + extra + "'");

  RunConfig cfg;
  if (command.empty()) {
    result.errors.push_back("missing command; expected one of: " + command_list());
  } else if (auto c = parse_command(command)) {
    cfg.command = *c;
  } else {
    result.errors.push_back("unknown command '" + command + "'; expected one of: " + command_list());
  }

  const auto finite = [](double v) { return std::isfinite(v); };
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  Checker check(result.errors);
  check.field("--t", t, cfg.t, positive, "a finite number > 0");
  check.field("--x", x, cfg.x, finite, "finite");
  check.field("--n-mc", n_mc, cfg.n_mc, [](std::uint64_t v) { return v >= 100; }, "an integer >= 100");
  check.field("--n-steps", n_steps, cfg.n_steps, is_pow2, "a power of two >= 2");
  if (seed_env && !seed) {
    const std::optional<std::string> env{seed_env};
    check.field(kSeedEnv, env, cfg.seed, [](std::uint64_t) { return true; }, "an unsigned integer");
  }
  check.field("--seed", seed, cfg.seed, [](std::uint64_t) { return true; }, "an unsigned integer");
  check.field("--threads", threads, cfg.threads, [](unsigned) { return true; }, "an unsigned integer");
  check.field("--v-min", v_min, cfg.v_min, positive, "a finite number > 0");
  check.field("--v-max", v_max, cfg.v_max, positive, "a finite number > 0");
  check.field("--points", points, cfg.points, [](std::uint64_t v) { return v >= 1 && v <= 1000000; },
              "an integer in [1, 1000000]");
  check.field("--nu", nu, cfg.nu, [](double v) { return std::isfinite(v) && v > 0.5; }, "a finite number > 0.5");
  check.field("--tol", tol, cfg.tol, positive, "a finite number > 0");
  if (format) {
    if (*format == "json") {
      cfg.format = Format::json;
    } else if (*format == "csv") {
      cfg.format = Format::csv;
    } else {
      result.errors.push_back("--format: '" + *format + "' is not allowed; expected one of: json, csv");
    }
  }
  if (output) {
    if (output->empty())
      result.errors.push_back("--output must not be empty");
    else
      cfg.output_path = *output;
  }
  if (cfg.v_max < cfg.v_min) result.errors.push_back("--v-max must be >= --v-min");
  if (cfg.command == Command::sde_check && cfg.n_steps < 16)
    result.errors.push_back("--n-steps must be >= 16 for sde-check");

  if (result.errors.empty()) result.config = cfg;
  return result;
}

Rows execute(const RunConfig& cfg, bool& all_passed) {
  all_passed = true;
  switch (cfg.command) {
    case Command::density:
      return density_rows(cfg, all_passed);
    case Command::mellin:
      return mellin_rows(cfg, all_passed);
    case Command::sde_check:
      return sde_rows(cfg, all_passed);
    default:
      break;
  }
  const VerifyConfig v = verify_config(cfg);
  std::vector<TestReport> reports;
  switch (cfg.command) {
    case Command::verify_boug: reports = verify_boug(v); break;
    case Command::verify_bdy: reports = verify_bdy(v); break;
    case Command::verify_main: reports = verify_main(v); break;
    case Command::verify_second: reports = verify_second(v); break;
    case Command::verify_reversal: reports = verify_reversal(v); break;
    default: break;
  }
  all_passed = identity_holds(reports);
  Rows rows;
  for (const auto& r : reports) rows.push_back(report_row(cfg, r));
  return rows;
}

std::string render(const Rows& rows, Format format) {
  if (format == Format::json) return ordered_json(rows).dump(2) + "\n";
  std::vector<std::string> header;
  for (const auto& row : rows)
    for (const auto& item : row.items())
      if (std::find(header.begin(), header.end(), item.key()) == header.end()) header.push_back(item.key());
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out << ',';
      if (auto it = row.find(header[i]); it != row.end()) out << csv_cell(*it);
    }
    out << '\n';
  }
  return out.str();
}

int run(const std::vector<std::string>& args, const char* seed_env, std::ostream& out, std::ostream& err) {
  const ParseResult parsed = parse_flags(args, seed_env);
  if (parsed.help) {
    out << parsed.usage;
    return 0;
  }
  if (!parsed.config) {
    for (const auto& e : parsed.errors) err << "error: " << e << '\n';
    err << parsed.usage;
    return 1;
  }
  const RunConfig& cfg = *parsed.config;
  bool passed = true;
  std::string text;
  try {
    text = render(execute(cfg, passed), cfg.format);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  if (cfg.output_path == "-") {
    out << text;
  } else {
    std::ofstream file(cfg.output_path, std::ios::binary);
    file << text;
    if (!file) {
      err << "error: cannot write " << cfg.output_path << '\n';
      return 1;
    }
  }
  err << command_name(cfg.command) << ": " << (passed ? "pass" : "fail") << '\n';
  return passed ? 0 : 2;
}

}  // namespace bougerol::cli
