#include "xdyn/analysis/analysis.hpp"
#include "xdyn/errors.hpp"
#include "xdyn/measures/measures.hpp"
#include "xdyn/solutions/audit.hpp"
#include "xdyn/solutions/evolution.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <unistd.h>

using namespace xdyn;
using json = nlohmann::json;

namespace {

enum Exit { ok = 0, invalid_config = 2, internal_error = 3, audit_failure = 4 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string state = "ewl-phi";
  double r = 1.0;
  double alpha2 = 0.5;
  double theta = 0.0;
  bool theta_pi = false;
  double a = 1.0, b = 0.0, c = 0.0, d = 0.0;
  double re_w = 0.0, im_w = 0.0, re_z = 0.0, im_z = 0.0;
  double gamma = 1.0;
  double omega = 5.0;
  double tmax = 20.0;
  int steps = 2000;
  std::string out;
  std::string format = "csv";
  double zero_tol = 1e-6;
  std::string time_unit = "scaled";
  bool no_corrections = false;
  unsigned threads = 0;
  std::string axis = "r";
  std::vector<double> values;
  double from = 0.0;
  double to = 1.0;
  int count = 11;
  bool transform_corpus = false;
};

// Each flag is registered once; the same entry copies a given flag over the
// config file and reads the matching JSON key.
struct Binding {
  CLI::Option* option;
  std::function<void(Config&, const Config&)> copy;
};

class Flags {
 public:
  Flags(CLI::App* app, Config& parsed) : app_(app), parsed_(parsed) {}

  template <class T>
  CLI::Option* add(const std::string& key, T Config::*field, const std::string& help) {
    CLI::Option* opt;
    if constexpr (std::is_same_v<T, bool>)
      opt = app_->add_flag("--" + key, parsed_.*field, help);
    else
      opt = app_->add_option("--" + key, parsed_.*field, help);
    bindings_.push_back({opt, [field](Config& dst, const Config& src) { dst.*field = src.*field; }});
    readers_[key] = [field, key](Config& dst, const json& v) {
      try {
        dst.*field = v.get<T>();
      } catch (const json::exception&) {
        throw ConfigError(fmt::format("config key '{}' has the wrong type", key));
      }
    };
    return opt;
  }

  Config resolve(const std::string& config_path) const {
    Config cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file " + config_path);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config file {}: {}", config_path, e.what()));
      }
      if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
      for (const auto& [key, value] : j.items()) {
        const auto it = readers_.find(key);
        if (it == readers_.end()) throw ConfigError(fmt::format("unknown config key '{}'", key));
        it->second(cfg, value);
      }
    }
    for (const auto& b : bindings_)
      if (b.option->count() > 0) b.copy(cfg, parsed_);
    return cfg;
  }

 private:
  CLI::App* app_;
  Config& parsed_;
  std::vector<Binding> bindings_;
  std::map<std::string, std::function<void(Config&, const json&)>> readers_;
};

std::string num(double x) { return fmt::format("{:.17g}", x); }

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += fmt::format(".tmp{}", static_cast<long>(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write " + tmp.string());
    f << text;
    f.close();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot move output into place at " + path);
  }
}

double theta_of(const Config& cfg) { return cfg.theta_pi ? cfg.theta * kPi : cfg.theta; }

InitialStateSpec make_spec(const Config& cfg) {
  const double th = theta_of(cfg);
  InitialStateSpec spec;
  if (cfg.state == "bell-phi")
    spec = BellPhi{cfg.alpha2, th};
  else if (cfg.state == "bell-psi")
    spec = BellPsi{cfg.alpha2, th};
  else if (cfg.state == "ewl-phi")
    spec = EwlPhi{cfg.r, cfg.alpha2, th};
  else if (cfg.state == "ewl-psi")
    spec = EwlPsi{cfg.r, cfg.alpha2, th};
  else if (cfg.state == "werner")
    spec = Werner{cfg.r};
  else if (cfg.state == "factorized-mixed")
    spec = FactorizedMixed{cfg.alpha2};
  else if (cfg.state == "raw-x")
    spec = RawX{XState{cfg.a, cfg.b, cfg.c, cfg.d, cplx(cfg.re_w, cfg.im_w), cplx(cfg.re_z, cfg.im_z)}};
  else
    throw ConfigError("unknown state '" + cfg.state + "'");
  validate(spec);
  return spec;
}

solutions::Corrections corrections_of(const Config& cfg) {
  return cfg.no_corrections ? solutions::Corrections::none() : solutions::Corrections{};
}

void check_common(const Config& cfg) {
  if (!(cfg.gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (!(cfg.omega > 0.0)) throw ConfigError("omega must be positive");
  if (!(cfg.tmax > 0.0)) throw ConfigError("tmax must be positive");
  if (cfg.steps < 2) throw ConfigError("steps must be at least 2");
  if (cfg.format != "csv" && cfg.format != "json") throw ConfigError("format must be csv or json");
  if (cfg.time_unit != "scaled" && cfg.time_unit != "raw") throw ConfigError("time-unit must be scaled or raw");
  if (!(cfg.zero_tol >= 0.0)) throw ConfigError("zero-tol must be non-negative");
}

std::vector<double> time_grid(const Config& cfg) { return solutions::linear_times(cfg.tmax, cfg.steps + 1); }

// Converts a scaled time for output.
struct TimeAxis {
  bool raw;
  double gamma0;
  std::string column() const { return raw ? "t" : "gamma0_t"; }
  double operator()(double tau) const { return raw ? tau / gamma0 : tau; }
};

TimeAxis time_axis(const Config& cfg, const ReservoirParams& params) {
  return {cfg.time_unit == "raw", params.gamma0()};
}

json config_json(const Config& cfg, const InitialStateSpec& spec) {
  return {{"state", kind_name(spec)}, {"gamma", cfg.gamma}, {"omega", cfg.omega},
          {"tmax", cfg.tmax},          {"steps", cfg.steps}, {"time_unit", cfg.time_unit},
          {"corrections", !cfg.no_corrections}};
}

int cmd_simulate(const Config& cfg) {
  check_common(cfg);
  const auto spec = make_spec(cfg);
  const ReservoirParams params(cfg.gamma, cfg.omega);
  const auto traj = solutions::propagate(
      std::make_shared<const solutions::Evolution>(spec, params, corrections_of(cfg)), time_grid(cfg));
  const TimeAxis tx = time_axis(cfg, params);

  const std::vector<std::string> columns = {tx.column(), "a",    "b",           "c",       "d",
                                            "re_w",      "im_w", "re_z",        "im_z",    "concurrence",
                                            "entropy",   "rho_pp", "rho_mm",    "abs_rho_pm"};
  std::vector<std::array<double, 14>> rows;
  rows.reserve(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const XState& s = traj.states[i];
    const auto m = measures::measure(s);
    rows.push_back({tx(traj.times[i]), s.a, s.b, s.c, s.d, s.w.real(), s.w.imag(), s.z.real(), s.z.imag(),
                    m.concurrence, m.entropy, m.rho_pp, m.rho_mm, m.abs_rho_pm});
  }

  std::string text;
  if (cfg.format == "csv") {
    std::ostringstream os;
    for (std::size_t k = 0; k < columns.size(); ++k) os << (k ? "," : "") << columns[k];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << num(row[k]);
      os << '\n';
    }
    text = os.str();
  } else {
    json j = config_json(cfg, spec);
    j["columns"] = columns;
    j["rows"] = rows;
    text = j.dump(1) + "\n";
  }
  write_output(cfg.out, text);
  return ok;
}

int cmd_sweep(const Config& cfg) {
  check_common(cfg);
  const auto axis = analysis::parse_axis(cfg.axis);
  std::vector<double> values = cfg.values;
  if (values.empty()) {
    if (cfg.count < 1) throw ConfigError("count must be at least 1");
    if (!(cfg.to >= cfg.from)) throw ConfigError("to must not be below from");
    for (int i = 0; i < cfg.count; ++i)
      values.push_back(cfg.count == 1 ? cfg.from : cfg.from + (cfg.to - cfg.from) * i / (cfg.count - 1));
  }
  if (axis == analysis::SweepAxis::theta && cfg.theta_pi)
    for (double& v : values) v *= kPi;

  const auto spec = make_spec(cfg);
  const ReservoirParams params(cfg.gamma, cfg.omega);
  const auto grid =
      analysis::sweep(spec, axis, values, params, time_grid(cfg), corrections_of(cfg), cfg.threads);
  const TimeAxis tx = time_axis(cfg, params);

  std::string text;
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "axis_name,axis_value," << tx.column() << ",concurrence\n";
    for (std::size_t i = 0; i < grid.axis_values.size(); ++i)
      for (std::size_t k = 0; k < grid.times.size(); ++k)
        os << grid.axis_name << ',' << num(grid.axis_values[i]) << ',' << num(tx(grid.times[k])) << ','
           << num(grid.concurrence[i][k]) << '\n';
    text = os.str();
  } else {
    json j = config_json(cfg, spec);
    j["axis_name"] = grid.axis_name;
    j["axis_values"] = grid.axis_values;
    std::vector<double> times;
    for (double t : grid.times) times.push_back(tx(t));
    j[tx.column()] = times;
    j["concurrence"] = grid.concurrence;
    text = j.dump(1) + "\n";
  }
  write_output(cfg.out, text);
  return ok;
}

const char* branch_name(analysis::ZeroBranch b) {
  switch (b) {
    case analysis::ZeroBranch::excited_01: return "excited_01";
    case analysis::ZeroBranch::excited_10: return "excited_10";
    default: return "unclassified";
  }
}

int cmd_events(const Config& cfg) {
  check_common(cfg);
  const auto spec = make_spec(cfg);
  const ReservoirParams params(cfg.gamma, cfg.omega);
  const auto corr = corrections_of(cfg);
  const auto traj =
      solutions::propagate(std::make_shared<const solutions::Evolution>(spec, params, corr), time_grid(cfg));
  analysis::EventOptions opt;
  opt.zero_tol = cfg.zero_tol;
  const auto ev = analysis::detect_events(traj, opt);
  const TimeAxis tx = time_axis(cfg, params);

  std::vector<std::string> notes;
  json periods = json::array();
  std::size_t isolated = 0;
  for (const auto& p : ev.dark_periods) {
    periods.push_back({tx(p.start), tx(p.end)});
    if (p.degenerate()) ++isolated;
  }
  if (isolated > 0)
    notes.push_back(fmt::format("{} isolated zero(s) reported as [t, t]; concurrence touches zero without a dark period",
                                isolated));
  if (!ev.dark_periods.empty() && !ev.dark_periods.back().degenerate() &&
      ev.dark_periods.back().end >= traj.times.back())
    notes.push_back("last dark period is still open at the end of the time grid");
  if (tx.raw) notes.push_back("times are raw: scaled time divided by gamma0");

  if (const auto* psi = std::get_if<EwlPsi>(&spec)) {
    const double derived = (1.0 - psi->r) / 4.0;
    notes.push_back(fmt::format(
        "ewl-psi: stationary concurrence equals the constant sub-radiant population (1-r)/4 = {}; "
        "the value r/4 = {} sometimes quoted for this family does not match that population",
        num(derived), num(psi->r / 4.0)));
  }

  const XState s0 = construct_initial(spec);
  if (s0.d <= 1e-10 && std::abs(s0.w) <= 1e-10) {
    const auto report = analysis::zero_condition_check(traj, opt);
    if (report.entries.empty()) {
      notes.push_back("single-excitation state: concurrence never reaches zero on this grid");
    } else {
      for (const auto& e : report.entries)
        notes.push_back(fmt::format(
            "zero condition at {}: rho_pp={:.6g} rho_mm={:.6g} |rho_pm|={:.6g} branch={} k={:.6g}", num(tx(e.time)),
            e.rho_pp, e.rho_mm, e.abs_rho_pm, branch_name(e.branch), e.k));
      notes.push_back(report.all_equal() ? "zero condition rho_pp = rho_mm = |rho_pm| holds at every zero"
                                         : "zero condition rho_pp = rho_mm = |rho_pm| fails at some zero");
    }
  }

  json j;
  j["dark_periods"] = periods;
  j["birth_time"] = ev.birth_time ? json(tx(*ev.birth_time)) : json(nullptr);
  j["revivals"] = ev.revivals;
  j["stationary_concurrence"] = analysis::stationary_concurrence(spec, params, corr);
  j["notes"] = notes;
  write_output(cfg.out, j.dump(2) + "\n");
  return ok;
}

int cmd_verify(const Config& cfg) {
  if (!(cfg.gamma > 0.0) || !(cfg.omega > 0.0)) throw ConfigError("gamma and omega must be positive");
  const ReservoirParams params(cfg.gamma, cfg.omega);
  const auto corr = corrections_of(cfg);
  using audit::Family;

  const std::array<std::pair<const char*, bool>, 4> listed = {{
      {"1 sub-radiant population (1-r)/4 in rho_mm", corr.psi_subradiant_population},
      {"2 factor s in the rho_af denominator", corr.psi_af_denominator},
      {"3 alp read as alpha^2", corr.psi_alp_as_alpha_squared},
      {"4 phase e^{i theta} on rho_af", corr.psi_af_phase},
  }};
  std::cout << "ewl-psi corrections:\n";
  for (const auto& [name, on] : listed) std::cout << fmt::format("  {}: {}\n", name, on ? "applied" : "disabled");

  std::vector<audit::Check> checks = audit::initial_value_audit(params, corr);
  const auto times = solutions::linear_times(20.0, 200);
  for (Family f : {Family::phi, Family::psi}) {
    checks.push_back(audit::trace_audit(f, params, corr, times));
    checks.push_back(audit::subradiant_audit(f, params, corr, times));
    checks.push_back(audit::final_value_audit(f, params, corr));
  }
  checks.push_back(audit::dual_inversion_audit(params, corr, audit::dual_inversion_times(), audit::Grid{}));
  if (cfg.transform_corpus)
    for (auto& c : audit::transform_corpus()) checks.push_back(std::move(c));

  bool all = true;
  json report = json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    std::cout << fmt::format("{} {}: {:.3g} (tol {:.0e}){}\n", c.pass ? "PASS" : "FAIL", c.name, c.value,
                             c.tolerance, c.detail.empty() ? "" : "  " + c.detail);
    report.push_back({{"name", c.name}, {"pass", c.pass}, {"value", c.value}, {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  }
  std::cout << (all ? "all audits passed\n" : "audit failures present\n");
  if (!cfg.out.empty()) write_output(cfg.out, json{{"checks", report}, {"pass", all}}.dump(2) + "\n");
  return all ? ok : audit_failure;
}

void add_state_flags(Flags& f) {
  f.add("state", &Config::state, "bell-phi|bell-psi|ewl-phi|ewl-psi|werner|factorized-mixed|raw-x")
      ->check(CLI::IsMember({"bell-phi", "bell-psi", "ewl-phi", "ewl-psi", "werner", "factorized-mixed", "raw-x"}));
  f.add("r", &Config::r, "mixing weight of EWL and Werner states");
  f.add("alpha2", &Config::alpha2, "alpha^2");
  f.add("theta", &Config::theta, "relative phase in radians");
  f.add("theta-pi", &Config::theta_pi, "read theta in units of pi");
  f.add("a", &Config::a, "raw-x population of |00>");
  f.add("b", &Config::b, "raw-x population of |10>");
  f.add("c", &Config::c, "raw-x population of |01>");
  f.add("d", &Config::d, "raw-x population of |11>");
  f.add("re-w", &Config::re_w, "raw-x Re <00|rho|11>");
  f.add("im-w", &Config::im_w, "raw-x Im <00|rho|11>");
  f.add("re-z", &Config::re_z, "raw-x Re <10|rho|01>");
  f.add("im-z", &Config::im_z, "raw-x Im <10|rho|01>");
}

void add_reservoir_flags(Flags& f) {
  f.add("gamma", &Config::gamma, "reservoir width (default 1)");
  f.add("omega", &Config::omega, "collective coupling (default 5)");
  f.add("no-corrections", &Config::no_corrections, "use the ewl-psi formulas without corrections 1-4");
}

void add_grid_flags(Flags& f) {
  f.add("tmax", &Config::tmax, "horizon in units of 1/gamma0 (default 20)");
  f.add("steps", &Config::steps, "number of time intervals (default 2000)");
  f.add("time-unit", &Config::time_unit, "scaled|raw")->check(CLI::IsMember({"scaled", "raw"}));
  f.add("zero-tol", &Config::zero_tol, "concurrence treated as zero (default 1e-6)");
  f.add("out", &Config::out, "output path (stdout if absent)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit X-state dynamics in a common Lorentzian reservoir"};
  app.require_subcommand(1);

  Config parsed;
  std::string config_path;

  auto* simulate = app.add_subcommand("simulate", "write a trajectory with measures");
  auto* sweep = app.add_subcommand("sweep", "concurrence over a one-parameter family of states");
  auto* events = app.add_subcommand("events", "dark periods, sudden birth, revivals and stationary value (JSON)");
  auto* verify = app.add_subcommand("verify", "audit the closed-form solutions");

  Flags fs(simulate, parsed), fw(sweep, parsed), fe(events, parsed), fv(verify, parsed);
  for (Flags* f : {&fs, &fw, &fe}) {
    add_state_flags(*f);
    add_reservoir_flags(*f);
    add_grid_flags(*f);
  }
  for (Flags* f : {&fs, &fw}) f->add("format", &Config::format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  fw.add("axis", &Config::axis, "r|alpha2|theta")->check(CLI::IsMember({"r", "alpha2", "theta"}));
  fw.add("values", &Config::values, "explicit axis values");
  fw.add("from", &Config::from, "first axis value of an even range");
  fw.add("to", &Config::to, "last axis value of an even range");
  fw.add("count", &Config::count, "number of axis values in the range (default 11)");
  fw.add("threads", &Config::threads, "worker threads (0 = hardware concurrency)");
  add_reservoir_flags(fv);
  fv.add("transform-corpus", &Config::transform_corpus, "also invert the standard transform pairs");
  fv.add("out", &Config::out, "write the audit report as JSON");
  for (auto* sub : {simulate, sweep, events, verify})
    sub->add_option("--config", config_path, "JSON file with flag names as keys; flags override it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : invalid_config;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(fs.resolve(config_path));
    if (sweep->parsed()) return cmd_sweep(fw.resolve(config_path));
    if (events->parsed()) return cmd_events(fe.resolve(config_path));
    return cmd_verify(fv.resolve(config_path));
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return invalid_config;
  } catch (const DomainError& e) {
    std::cerr << "error: invalid " << e.what() << '\n';
    return invalid_config;
  } catch (const ResolutionError& e) {
    std::cerr << "error: " << e.what() << " (increase --steps)\n";
    return invalid_config;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return internal_error;
  }
}
