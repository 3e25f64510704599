// Command-line front-end: scenario configs in, CSV/JSON artifacts out.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "holeburn/afc.hpp"
#include "holeburn/config.hpp"
#include "holeburn/csvio.hpp"
#include "holeburn/errors.hpp"
#include "holeburn/fitkit.hpp"
#include "holeburn/levels.hpp"
#include "holeburn/pumpdyn.hpp"
#include "holeburn/relaxation.hpp"
#include "holeburn/spectra.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace holeburn;

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_config = true) {
  auto* c = cmd->add_option("--config", opts.config_path, "Scenario config file (JSON)");
  if (needs_config) c->required();
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--seed", opts.seed, "Random seed override")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--format", opts.format, "Report format")
      ->check(CLI::IsMember({"csv", "json"}));
}

fs::path prepare_out(const CommonOpts& opts) {
  fs::path dir(opts.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir.string());
  return dir;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    const Scenario& sc) {
  json m;
  m["command"] = command;
  m["config_hash"] = sc.config_hash;
  m["version"] = kVersion;
  m["seed"] = sc.seed;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw IoError("cannot write manifest in " + dir.string());
  out << m.dump(2) << "\n";
}

std::uint64_t effective_seed(const CommonOpts& opts, const Scenario& sc) {
  return opts.seed_set ? opts.seed : sc.seed;
}

json fit_to_json(const BiexpFit& fit, const std::vector<DecayCurve>& curves) {
  json out;
  out["T_fast_s"] = fit.T_fast_s;
  out["T_slow_s"] = fit.T_slow_s;
  out["residual_norm"] = fit.residual_norm;
  out["objective"] = fit.objective;
  out["T_fast_sigma"] = std::sqrt(std::max(0.0, fit.time_constant_covariance(0, 0)));
  out["T_slow_sigma"] = std::sqrt(std::max(0.0, fit.time_constant_covariance(1, 1)));
  out["flags"] = fit.flags;
  json per_curve = json::array();
  for (std::size_t i = 0; i < fit.amplitudes.size(); ++i) {
    json c;
    c["d_f"] = fit.amplitudes[i][0];
    c["d_s"] = fit.amplitudes[i][1];
    c["x_f"] = fit.fractions[i][0];
    c["x_s"] = fit.fractions[i][1];
    if (i < curves.size() && curves[i].meta.burn_duration_s)
      c["burn_duration_s"] = *curves[i].meta.burn_duration_s;
    per_curve.push_back(c);
  }
  out["curves"] = per_curve;
  return out;
}

// ---- subcommand bodies -------------------------------------------------

int run_levels(const CommonOpts& opts) {
  const Scenario sc = load_scenario(opts.config_path);
  const fs::path dir = prepare_out(opts);
  const auto lv = enumerate_levels(sc.material, sc.field);
  CsvTable t;
  t.columns = {"m_S", "m_I", "energy_GHz"};
  t.metadata["B_tesla"] = format_double(sc.field.B_tesla);
  t.metadata["T_kelvin"] = format_double(sc.field.T_kelvin);
  for (const auto& l : lv) t.rows.push_back({l.m_S, l.m_I, l.energy_GHz});
  write_csv(dir / "levels.csv", t);
  write_manifest(dir, "levels", sc);
  return kExitOk;
}

int run_simulate_decay(const CommonOpts& opts) {
  const Scenario sc = load_scenario(opts.config_path);
  if (!sc.pump) throw ConfigError("simulate-decay requires a 'pump' section");
  if (!sc.rates) throw ConfigError("simulate-decay requires a 'rates' section");
  const fs::path dir = prepare_out(opts);

  const auto lv = enumerate_levels(sc.material, sc.field);
  const GroundRates rates = sc.rates->resolve(sc.material, sc.field);
  const RateMatrix gen = build_generator(lv, rates, sc.field);

  BranchingTable br;
  br.epsilon = sc.pump->branching_epsilon;
  br.validate();

  PumpSchedule sched;
  sched.pump_rate = sc.pump->pump_rate;
  sched.delay_grid_s = sc.pump->delays.build();
  int pumped = -1;
  for (std::size_t i = 0; i < lv.size(); ++i)
    if (lv[i].m_S < 0.0 && std::abs(lv[i].m_I - sc.pump->pumped_m_I) < 1e-9)
      pumped = int(i);
  if (pumped < 0) throw ConfigError("pump.pumped_m_I does not match any level");
  sched.pumped_levels = {pumped};
  sched.burn_duration_s = sc.pump->burn_durations_s.empty()
                              ? 0.0
                              : sc.pump->burn_durations_s.front();

  std::mt19937_64 rng(effective_seed(opts, sc));
  std::vector<DecayCurve> curves;
  for (double burn : sc.pump->burn_durations_s) {
    PumpSchedule s2 = sched;
    s2.burn_duration_s = burn;
    const Eigen::VectorXd pops =
        simulate_burn(gen, lv, sc.material, br, s2, sc.field);
    DecayCurve curve = hole_decay(pops, gen, lv, s2, sc.field);
    if (sc.pump->noise && sc.pump->noise->sigma_rel > 0.0) {
      std::normal_distribution<double> noise(0.0, sc.pump->noise->sigma_rel);
      for (auto& p : curve.points)
        p.amplitude = std::max(0.0, p.amplitude * (1.0 + noise(rng)));
    }
    curves.push_back(std::move(curve));
  }

  for (std::size_t i = 0; i < curves.size(); ++i) {
    std::ostringstream name;
    name << "decay_" << format_double(sc.pump->burn_durations_s[i]) << "s.csv";
    write_decay_curve(dir / name.str(), curves[i]);
  }

  const BiexpFit fit = fit_biexp_global(curves);
  {
    std::ofstream out(dir / "fit_report.json");
    if (!out) throw IoError("cannot write fit_report.json");
    out << fit_to_json(fit, curves).dump(2) << "\n";
  }
  CsvTable amp;
  amp.columns = {"burn_duration_s", "x_f", "x_s"};
  for (std::size_t i = 0; i < curves.size(); ++i)
    amp.rows.push_back({sc.pump->burn_durations_s[i], fit.fractions[i][0],
                        fit.fractions[i][1]});
  write_csv(dir / "amplitudes.csv", amp);
  write_manifest(dir, "simulate-decay", sc);
  return kExitOk;
}

int run_field_scan(const CommonOpts& opts) {
  const Scenario sc = load_scenario(opts.config_path);
  if (!sc.slr) throw ConfigError("field-scan requires an 'slr' section");
  const fs::path dir = prepare_out(opts);

  FieldScanModel model;
  model.slr = *sc.slr;
  if (sc.flipflop) model.ff = *sc.flipflop;
  model.sys = sc.material;

  const FieldScanConfig fsc = sc.field_scan.value_or(FieldScanConfig{});
  CsvTable t;
  t.columns = {"B_tesla", "T_fast_s", "T_slow_s", "slr_rate_per_s",
               "flipflop_rate_per_s", "extrapolated"};
  std::vector<std::pair<double, double>> slow_window;
  for (int i = 0; i < fsc.points; ++i) {
    const double f = double(i) / (fsc.points - 1);
    const double B = fsc.B_min_tesla *
                     std::pow(fsc.B_max_tesla / fsc.B_min_tesla, f);
    FieldPoint fp{B, sc.field.T_kelvin};
    const Lifetimes lt = predict_lifetimes(model, fp);
    t.rows.push_back({B, lt.T_fast_s, lt.T_slow_s, lt.slr_rate,
                      lt.flipflop_rate, lt.extrapolated ? 1.0 : 0.0});
    if (fsc.powerlaw_B_min && fsc.powerlaw_B_max && B >= *fsc.powerlaw_B_min &&
        B <= *fsc.powerlaw_B_max)
      slow_window.emplace_back(B, lt.T_slow_s);
  }
  write_csv(dir / "field_scan.csv", t);

  if (slow_window.size() >= 3) {
    const PowerLawFit pf = fit_power_law(slow_window);
    json out;
    out["exponent"] = pf.exponent;
    out["prefactor"] = pf.prefactor;
    out["exponent_sigma"] = pf.exponent_sigma;
    std::ofstream f(dir / "powerlaw_fit.json");
    if (!f) throw IoError("cannot write powerlaw_fit.json");
    f << out.dump(2) << "\n";
  }
  write_manifest(dir, "field-scan", sc);
  return kExitOk;
}

CombSpec comb_from_config(const AfcConfig& a) {
  CombSpec spec;
  spec.d = a.d;
  spec.d0 = a.d0_ratio * a.d;
  spec.finesse = a.finesse.value_or(optimal_finesse(a.d));
  spec.delta_hz = a.delta_hz;
  spec.bandwidth_hz = a.bandwidth_hz;
  return spec;
}

int run_afc(const CommonOpts& opts, const std::string& sub) {
  const Scenario sc = load_scenario(opts.config_path);
  if (!sc.afc) throw ConfigError("afc commands require an 'afc' section");
  const fs::path dir = prepare_out(opts);
  const AfcConfig& a = *sc.afc;

  if (sub == "report") {
    const CombSpec spec = comb_from_config(a);
    const EfficiencyReport r = afc_efficiency(spec);
    json out;
    out["d"] = spec.d;
    out["d0"] = spec.d0;
    out["finesse"] = spec.finesse;
    out["d_tilde"] = r.d_tilde;
    out["eta"] = r.eta;
    out["factor_absorption"] = r.factor_absorption;
    out["factor_dephasing"] = r.factor_dephasing;
    out["factor_background"] = r.factor_background;
    if (spec.delta_hz > 0.0) out["echo_delay_s"] = spec.echo_delay_s();
    std::ofstream f(dir / "afc_report.json");
    if (!f) throw IoError("cannot write afc_report.json");
    f << out.dump(2) << "\n";
  } else if (sub == "curve") {
    std::vector<double> ratios = a.band_d0_ratios;
    if (ratios.empty()) ratios = {a.d0_ratio};
    std::vector<double> grid;
    for (int i = 0; i < a.d_points; ++i)
      grid.push_back(a.d_min + (a.d_max - a.d_min) * double(i) / (a.d_points - 1));
    for (double r : ratios) {
      const auto curve = efficiency_curve(r, grid);
      CsvTable t;
      t.columns = {"d", "F_opt", "eta", "factor_absorption", "factor_dephasing",
                   "factor_background"};
      t.metadata["d0_ratio"] = format_double(r);
      if (r == 0.0) t.metadata["label"] = "perfect memory";
      for (const auto& p : curve)
        t.rows.push_back({p.d, p.finesse_opt, p.eta, p.report.factor_absorption,
                          p.report.factor_dephasing, p.report.factor_background});
      std::ostringstream name;
      name << "efficiency_curve_d0r_" << format_double(r) << ".csv";
      write_csv(dir / name.str(), t);
    }
  } else if (sub == "max") {
    const MaxEfficiencyResult m = max_efficiency(a.d0_ratio, a.d_min, a.d_max);
    json out;
    out["d0_ratio"] = a.d0_ratio;
    out["d_star"] = m.d_star;
    out["finesse_star"] = m.finesse_star;
    out["eta_star"] = m.eta_star;
    std::ofstream f(dir / "afc_max.json");
    if (!f) throw IoError("cannot write afc_max.json");
    f << out.dump(2) << "\n";
  } else {  // comb
    const CombSpec spec = comb_from_config(a);
    if (spec.delta_hz <= 0.0) throw ConfigError("afc comb requires delta_hz > 0");
    const double bw = spec.bandwidth_hz > 0.0 ? spec.bandwidth_hz
                                              : 10.0 * spec.delta_hz;
    const auto grid = linspace(-bw / 2.0, bw / 2.0,
                               std::size_t(std::max(1001.0, 40.0 * bw / spec.delta_hz)));
    const auto od = comb_profile(spec, grid);
    CsvTable t;
    t.columns = {"freq_Hz", "optical_depth"};
    t.metadata["echo_delay_s"] = format_double(spec.echo_delay_s());
    t.metadata["mean_depth"] = format_double(spec.mean_depth());
    for (std::size_t i = 0; i < grid.size(); ++i) t.rows.push_back({grid[i], od[i]});
    write_csv(dir / "comb_profile.csv", t);
  }
  write_manifest(dir, "afc " + sub, sc);
  return kExitOk;
}

int run_spectrum(const CommonOpts& opts) {
  const Scenario sc = load_scenario(opts.config_path);
  if (!sc.spectrum) throw ConfigError("spectrum requires a 'spectrum' section");
  const fs::path dir = prepare_out(opts);
  const SpectrumConfig& cfg = *sc.spectrum;

  const auto grid = linspace(-cfg.span_hz / 2.0, cfg.span_hz / 2.0,
                             std::size_t(cfg.points));
  Spectrum s = inhomogeneous_profile(cfg.peak_d, cfg.fwhm_hz, grid);
  if (cfg.apply_zeeman_split) {
    const double split_hz =
        zeeman_splitting_GHz(sc.material.g_factor, sc.field.B_tesla) * 1e9;
    s = split_profile(s, split_hz);
  }
  auto to_feature = [](const HoleFeatureConfig& h) {
    HoleFeature f;
    f.center_hz = h.center_hz;
    f.depth = h.depth;
    f.width_hz = h.width_hz;
    f.shape = h.shape == "gaussian" ? HoleShape::Gaussian : HoleShape::Lorentzian;
    return f;
  };
  if (cfg.hole) {
    std::vector<HoleFeature> side;
    for (const auto& sh : cfg.side_holes) side.push_back(to_feature(sh));
    s = hole_spectrum(s, to_feature(*cfg.hole), side);
    if (s.clipped)
      std::cerr << "warning: hole depth clipped at zero optical depth\n";
  }
  if (cfg.embed_comb) {
    if (!sc.afc) throw ConfigError("spectrum.embed_comb requires an 'afc' section");
    s = comb_transmission(s, comb_from_config(*sc.afc));
  }

  CsvTable t;
  t.columns = {"freq_Hz", "optical_depth"};
  t.metadata["peak_alpha_per_cm"] =
      format_double(s.peak_alpha_per_cm(cfg.length_cm));
  for (std::size_t i = 0; i < s.freq_hz.size(); ++i)
    t.rows.push_back({s.freq_hz[i], s.optical_depth[i]});
  write_csv(dir / "spectrum.csv", t);
  write_manifest(dir, "spectrum", sc);
  return kExitOk;
}

int run_fit_biexp(const std::vector<std::string>& files, const std::string& out_dir,
                  bool allow_mixed) {
  if (files.empty()) throw ConfigError("fit biexp: no input files");
  std::vector<DecayCurve> curves;
  for (const auto& f : files) curves.push_back(read_decay_curve(f));

  if (!allow_mixed) {
    for (std::size_t i = 1; i < curves.size(); ++i) {
      const auto& a = curves[0].meta;
      const auto& b = curves[i].meta;
      const bool same_B = a.B_tesla.value_or(-1) == b.B_tesla.value_or(-1);
      const bool same_T = a.T_kelvin.value_or(-1) == b.T_kelvin.value_or(-1);
      if (!same_B || !same_T)
        throw ConfigError("mixed curve metadata (field/temperature) across " +
                          files[0] + " and " + files[i] +
                          "; pass --allow-mixed to fit anyway");
    }
  }

  const BiexpFit fit = fit_biexp_global(curves);
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(dir / "fit_report.json");
  if (!out) throw IoError("cannot write fit_report.json");
  out << fit_to_json(fit, curves).dump(2) << "\n";
  return kExitOk;
}

int run_fit_powerlaw(const std::vector<std::string>& files, const std::string& out_dir) {
  if (files.size() != 1) throw ConfigError("fit powerlaw expects one CSV file");
  const CsvTable t = read_csv(files[0]);
  if (t.columns.size() < 2)
    throw IoError(files[0] + ": expected two columns (B, T)");
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : t.rows) pts.emplace_back(row[0], row[1]);
  const PowerLawFit fit = fit_power_law(pts);
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  json out;
  out["exponent"] = fit.exponent;
  out["prefactor"] = fit.prefactor;
  out["exponent_sigma"] = fit.exponent_sigma;
  std::ofstream f(dir / "powerlaw_fit.json");
  if (!f) throw IoError("cannot write powerlaw_fit.json");
  f << out.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral hole burning, hyperfine relaxation and AFC memory toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonOpts levels_opts, decay_opts, scan_opts, afc_opts, spectrum_opts;
  auto* cmd_levels = app.add_subcommand("levels", "Hyperfine level table");
  add_common(cmd_levels, levels_opts);
  auto* cmd_decay =
      app.add_subcommand("simulate-decay", "Burn/probe hole-decay simulation + fit");
  add_common(cmd_decay, decay_opts);
  auto* cmd_scan = app.add_subcommand("field-scan", "Lifetimes vs magnetic field");
  add_common(cmd_scan, scan_opts);
  auto* cmd_afc = app.add_subcommand("afc", "AFC efficiency tools");
  cmd_afc->require_subcommand(1);
  std::string afc_sub;
  for (const char* name : {"report", "curve", "max", "comb"}) {
    auto* s = cmd_afc->add_subcommand(name);
    add_common(s, afc_opts);
    s->callback([&afc_sub, name] { afc_sub = name; });
  }
  auto* cmd_spectrum = app.add_subcommand("spectrum", "Absorption spectrum synthesis");
  add_common(cmd_spectrum, spectrum_opts);

  auto* cmd_fit = app.add_subcommand("fit", "Fit measured data files");
  cmd_fit->require_subcommand(1);
  std::vector<std::string> fit_files;
  std::string fit_out = ".";
  bool allow_mixed = false;
  auto* fit_biexp = cmd_fit->add_subcommand("biexp", "Global bi-exponential fit");
  fit_biexp->add_option("files", fit_files, "Decay-curve CSV files")->required();
  fit_biexp->add_option("--out", fit_out, "Output directory");
  fit_biexp->add_flag("--allow-mixed", allow_mixed,
                      "Fit curves with differing field/temperature metadata");
  auto* fit_pl = cmd_fit->add_subcommand("powerlaw", "Log-log power-law fit");
  fit_pl->add_option("files", fit_files, "CSV file with (B, T) columns")->required();
  fit_pl->add_option("--out", fit_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_levels->parsed()) return run_levels(levels_opts);
    if (cmd_decay->parsed()) return run_simulate_decay(decay_opts);
    if (cmd_scan->parsed()) return run_field_scan(scan_opts);
    if (cmd_afc->parsed()) return run_afc(afc_opts, afc_sub);
    if (cmd_spectrum->parsed()) return run_spectrum(spectrum_opts);
    if (cmd_fit->parsed()) {
      if (fit_biexp->parsed()) return run_fit_biexp(fit_files, fit_out, allow_mixed);
      return run_fit_powerlaw(fit_files, fit_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
