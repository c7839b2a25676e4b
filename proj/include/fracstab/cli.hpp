#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fracstab/errors.hpp"
#include "fracstab/fdesolver.hpp"
#include "fracstab/mlf.hpp"
#include "fracstab/spectral.hpp"
#include "fracstab/stabilizer.hpp"

namespace fracstab::cli {

/// 15 significant digits, the fixed CSV/stdout formatting.
inline std::string g15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

/// Full round-trip precision, used by --dump-config.
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RunConfig {
  // [system]
  std::string family = "sine1d";  // sine1d | sine2d | custom
  double shift = std::numbers::pi * std::numbers::pi;
  int truncation = 64;
  std::string table;  // mode table path for family = custom
  // [state]
  std::vector<double> y0_poly = {0.0, 0.0, -1.0, 1.0};  // x^2 (x - 1)
  std::string y0_samples;  // two-column sample file, overrides y0_poly
  // [grid]
  double t_max = 20.0;
  double step = 0.1;
  bool geometric_early = true;
  std::vector<double> snapshots = {0.9, 2.0, 6.0, 15.0};
  // [run]
  std::vector<double> q = {0.9};
  double epsilon = 5e-3;
  // [feedback]
  double gain = -std::numbers::pi;      // D = gain * I
  double L_scale = std::numbers::pi;    // L = L_scale * I
  std::string support = "all";          // all | unstable_only
  int l = 1;                            // unstable mode count for unstable_only

  std::string output_dir = ".";

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_list(const std::string& v,
                                      const std::string& key) {
  std::vector<double> out;
  std::istringstream ss(v);
  double x;
  while (ss >> x) out.push_back(x);
  if (!ss.eof()) throw ConfigError("config: bad number list for " + key);
  return out;
}

inline double parse_num(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for " + key);
  }
  if (trim(v.substr(pos)) != "")
    throw ConfigError("config: trailing junk for " + key);
  return x;
}

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: bad boolean for " + key);
}

}  // namespace detail

/// Sectioned key/value text config; '#' starts a comment.
inline RunConfig parse_config(std::istream& in) {
  RunConfig cfg;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = section + "." + detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key == "system.family") cfg.family = val;
    else if (key == "system.shift") cfg.shift = detail::parse_num(val, key);
    else if (key == "system.truncation")
      cfg.truncation = static_cast<int>(detail::parse_num(val, key));
    else if (key == "system.table") cfg.table = val;
    else if (key == "state.y0_poly") cfg.y0_poly = detail::parse_list(val, key);
    else if (key == "state.y0_samples") cfg.y0_samples = val;
    else if (key == "grid.t_max") cfg.t_max = detail::parse_num(val, key);
    else if (key == "grid.step") cfg.step = detail::parse_num(val, key);
    else if (key == "grid.geometric_early")
      cfg.geometric_early = detail::parse_bool(val, key);
    else if (key == "grid.snapshots") cfg.snapshots = detail::parse_list(val, key);
    else if (key == "run.q") cfg.q = detail::parse_list(val, key);
    else if (key == "run.epsilon") cfg.epsilon = detail::parse_num(val, key);
    else if (key == "feedback.gain") cfg.gain = detail::parse_num(val, key);
    else if (key == "feedback.L_scale") cfg.L_scale = detail::parse_num(val, key);
    else if (key == "feedback.support") cfg.support = val;
    else if (key == "feedback.l")
      cfg.l = static_cast<int>(detail::parse_num(val, key));
    else
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": unknown key " + key);
  }
  if (cfg.family != "sine1d" && cfg.family != "sine2d" &&
      cfg.family != "custom")
    throw ConfigError("config: unknown family " + cfg.family);
  if (cfg.truncation < 1) throw ConfigError("config: truncation must be >= 1");
  for (double qv : cfg.q)
    if (!(qv > 0.0) || qv > 1.0)
      throw ConfigError("config: q values must lie in (0,1]");
  if (cfg.support != "all" && cfg.support != "unstable_only")
    throw ConfigError("config: unknown feedback support " + cfg.support);
  return cfg;
}

inline void dump_config(const RunConfig& cfg, std::ostream& out) {
  out << "[system]\n"
      << "family = " << cfg.family << "\n"
      << "shift = " << g17(cfg.shift) << "\n"
      << "truncation = " << cfg.truncation << "\n";
  if (!cfg.table.empty()) out << "table = " << cfg.table << "\n";
  out << "\n[state]\n" << "y0_poly =";
  for (double c : cfg.y0_poly) out << " " << g17(c);
  out << "\n";
  if (!cfg.y0_samples.empty()) out << "y0_samples = " << cfg.y0_samples << "\n";
  out << "\n[grid]\n"
      << "t_max = " << g17(cfg.t_max) << "\n"
      << "step = " << g17(cfg.step) << "\n"
      << "geometric_early = " << (cfg.geometric_early ? "true" : "false")
      << "\n"
      << "snapshots =";
  for (double s : cfg.snapshots) out << " " << g17(s);
  out << "\n\n[run]\n" << "q =";
  for (double qv : cfg.q) out << " " << g17(qv);
  out << "\n" << "epsilon = " << g17(cfg.epsilon) << "\n";
  out << "\n[feedback]\n"
      << "gain = " << g17(cfg.gain) << "\n"
      << "L_scale = " << g17(cfg.L_scale) << "\n"
      << "support = " << cfg.support << "\n"
      << "l = " << cfg.l << "\n";
}

namespace detail {

inline spectral::SpectralSystem build_system(const RunConfig& cfg) {
  if (cfg.family == "sine1d")
    return spectral::build_sine_1d(cfg.shift, cfg.truncation);
  if (cfg.family == "sine2d") return spectral::build_sine_2d(cfg.truncation);
  if (cfg.table.empty())
    throw ConfigError("family = custom requires system.table");
  return spectral::load_custom_table(cfg.table);
}

inline spectral::StateCoefficients project_state(
    const RunConfig& cfg, const spectral::SpectralSystem& sys) {
  if (!cfg.y0_samples.empty()) {
    std::ifstream in(cfg.y0_samples);
    if (!in) throw ConfigError("cannot open " + cfg.y0_samples);
    spectral::SampledState s;
    double x, y;
    while (in >> x >> y) {
      s.x.push_back(x);
      s.y.push_back(y);
    }
    return spectral::project_initial_state(sys, s);
  }
  return spectral::project_initial_state(sys,
                                         spectral::Polynomial{cfg.y0_poly});
}

inline spectral::FeedbackLaw feedback(const RunConfig& cfg,
                                      std::size_t n_modes) {
  if (cfg.support == "unstable_only")
    return spectral::FeedbackLaw::unstable_only(
        std::vector<double>(static_cast<std::size_t>(cfg.l), cfg.gain),
        n_modes, cfg.L_scale);
  return spectral::FeedbackLaw::uniform(cfg.gain, n_modes, cfg.L_scale);
}

inline std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  const auto path = std::filesystem::path(cfg.output_dir) / name;
  std::ofstream out(path, std::ios::binary);  // binary: LF line endings
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

inline const char* kind_name(spectral::VerdictKind k) {
  switch (k) {
    case spectral::VerdictKind::MittagLefflerStable:
      return "MittagLefflerStable";
    case spectral::VerdictKind::StronglyStable:
      return "StronglyStable";
    default:
      return "CriteriaNotSatisfied";
  }
}

}  // namespace detail

/// `mlf eval`: E_q(z) or E_{q,alpha}(z) printed to 15 significant digits.
inline int cmd_mlf(double q, bool has_alpha, double alpha, double z,
                   std::ostream& out = std::cout) {
  try {
    const double v = has_alpha ? mlf::ml2(q, alpha, z) : mlf::ml1(q, z);
    out << g15(v) << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "mlf eval: " << e.what() << "\n";
    return 1;
  }
}

/// `classify`: omega sets and the Theorem 1/2 verdict for the closed loop
/// when feedback gains are nonzero, the open loop otherwise.
/// Exit code 0 for stable verdicts, 2 for CriteriaNotSatisfied.
inline int cmd_classify(const RunConfig& cfg, std::ostream& out = std::cout) {
  spectral::SpectralSystem sys = detail::build_system(cfg);
  if (cfg.gain != 0.0 && cfg.L_scale != 0.0)
    sys = spectral::closed_loop(sys, detail::feedback(cfg, sys.modes.size()));
  const auto part = spectral::partition_spectrum(sys);
  const auto v = spectral::classify_stability(sys);
  out << "omega1:";
  for (double lam : part.omega1) out << " " << g15(lam);
  out << (part.omega1.empty() ? " (empty)\n" : "\n");
  out << "omega2: " << part.omega2.size() << " eigenvalues";
  if (!part.omega2.empty()) out << ", sup = " << g15(part.omega2.front());
  out << "\n";
  if (!part.gradient_null.empty())
    out << "gradient_null: " << part.gradient_null.size() << " eigenvalues\n";
  out << "verdict: " << detail::kind_name(v.kind);
  if (v.kind == spectral::VerdictKind::MittagLefflerStable)
    out << " xi=" << g15(v.xi) << " C=" << g15(v.C) << " b=" << g15(v.b);
  if (v.has_witness) out << " witness=" << g15(v.witness);
  out << "\n";
  return v.kind == spectral::VerdictKind::CriteriaNotSatisfied ? 2 : 0;
}

/// `simulate`: closed-loop run at the first configured q; writes norms.csv,
/// field_t<T>.csv per snapshot, and report.txt.
inline int cmd_simulate(const RunConfig& cfg) {
  const spectral::SpectralSystem sys = detail::build_system(cfg);
  if (sys.family != spectral::Family::Sine1D)
    throw ConfigError("simulate requires a sine1d system");
  const auto c0 = detail::project_state(cfg, sys);
  const auto fb = detail::feedback(cfg, sys.modes.size());
  const double q = cfg.q.front();
  const auto grid =
      fdesolver::make_time_grid(cfg.t_max, cfg.step, cfg.geometric_early);
  const auto rep =
      stabilizer::run_algorithm(sys, fb, c0, q, cfg.epsilon, grid);

  auto norms = detail::open_out(cfg, "norms.csv");
  norms << "t,state_norm,gradient_norm\n";
  for (std::size_t i = 0; i < grid.size(); ++i)
    norms << g15(grid[i]) << "," << g15(rep.state_norms[i]) << ","
          << g15(rep.gradient_norms[i]) << "\n";

  const spectral::SpectralSystem cl = spectral::closed_loop(sys, fb);
  std::vector<double> xs(101);
  for (int i = 0; i <= 100; ++i) xs[i] = i / 100.0;
  for (double T : cfg.snapshots) {
    const auto tr = fdesolver::evolve_homogeneous(cl, c0, q, {T});
    const auto y = fdesolver::sample_field(cl, tr.coeffs[0], xs);
    const auto gy = fdesolver::sample_gradient_field(cl, tr.coeffs[0], xs);
    char name[48];
    std::snprintf(name, sizeof name, "field_t%g.csv", T);
    auto f = detail::open_out(cfg, name);
    f << "x,y,grad_y\n";
    for (int i = 0; i <= 100; ++i)
      f << g15(xs[i]) << "," << g15(y[i]) << "," << g15(gy[i]) << "\n";
  }

  auto report = detail::open_out(cfg, "report.txt");
  report << "q = " << g15(q) << "\n"
         << "epsilon = " << g15(rep.epsilon) << "\n"
         << "terminated = " << (rep.terminated ? "true" : "false") << "\n";
  if (rep.terminated) report << "t_hit = " << g15(rep.t_hit) << "\n";
  report << "final_gradient_norm = " << g15(rep.final_gradient_norm) << "\n"
         << "verdict = " << detail::kind_name(rep.verdict.kind) << "\n";
  return 0;
}

/// `table1`: gradient error at t = t_max per configured q; writes table1.csv
/// and prints the monotonicity check.
inline int cmd_table1(const RunConfig& cfg, std::ostream& out = std::cout) {
  if (cfg.q.empty()) throw ConfigError("table1 requires a nonempty q list");
  stabilizer::ExperimentSpec spec;
  spec.q_list = cfg.q;
  spec.horizon = cfg.t_max;
  spec.epsilon = cfg.epsilon;
  spec.truncation = cfg.truncation;
  spec.shift = cfg.shift;
  spec.y0_poly = cfg.y0_poly;
  spec.gain = cfg.gain;
  spec.L_scale = cfg.L_scale;
  const auto rows = stabilizer::table1_experiment(spec);
  auto csv = detail::open_out(cfg, "table1.csv");
  csv << "q,gradient_error,paper_value_if_known\n";
  for (const auto& r : rows) {
    csv << g15(r.q) << "," << g15(r.gradient_error) << ",";
    if (r.has_paper_value) csv << g15(r.paper_value);
    csv << "\n";
  }
  bool monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    monotone = monotone && rows[i].gradient_error < rows[i - 1].gradient_error;
  out << "monotonicity check: " << (monotone ? "PASS" : "FAIL") << "\n";
  return 0;
}

}  // namespace fracstab::cli
