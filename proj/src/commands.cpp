#include "riskclt/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>

#include "riskclt/asymptotics.hpp"
#include "riskclt/io.hpp"
#include "riskclt/montecarlo.hpp"
#include "riskclt/risk.hpp"
#include "riskclt/sweep.hpp"

namespace riskclt::cli {

using Json = nlohmann::json;

namespace {

EntryDistribution make_dist(const std::string& name, double shape, double df) {
  if (name != "normal" && name != "gamma" && name != "student-t") {
    throw UsageError("unknown distribution: " + name);
  }
  return EntryDistribution::from_name(name, shape, df);
}

BetaKind parse_beta(const std::string& name) {
  if (name == "fixed") return BetaKind::fixed;
  if (name == "gaussian") return BetaKind::gaussian;
  throw UsageError("--beta must be fixed or gaussian");
}

BetaMode make_beta(BetaKind kind, double r) {
  return kind == BetaKind::fixed ? BetaMode::fixed(r) : BetaMode::gaussian(r);
}

Json manifest(const std::string& subcommand, std::uint64_t seed, Json config,
              const std::vector<Artifact>& outputs) {
  Json names = Json::array();
  for (const auto& a : outputs) names.push_back(a.name);
  names.push_back("manifest.json");
  return Json{{"subcommand", subcommand},
              {"artifact_version", kArtifactVersion},
              {"master_seed", seed},
              {"config", std::move(config)},
              {"outputs", std::move(names)}};
}

void finish(std::vector<Artifact>& out, const std::string& subcommand,
            std::uint64_t seed, Json config) {
  out.push_back({"manifest.json",
                 io::dump_json(manifest(subcommand, seed, std::move(config), out))});
}

struct ResolvedClt {
  ExperimentConfig cfg;
  Json config;
};

ResolvedClt resolve_clt(const CltOptions& o) {
  Theorem theorem;
  try {
    theorem = theorem_from_string(o.theorem);
  } catch (const std::invalid_argument&) {
    throw UsageError("--theorem must be one of t1..t5");
  }
  const bool under = is_underparametrized(theorem);
  if (o.regime && *o.regime != (under ? "under" : "over")) {
    throw UsageError("--regime " + *o.regime + " conflicts with --theorem " + o.theorem);
  }
  if (o.p < 1) throw UsageError("--p must be >= 1");
  if (o.c.has_value() == o.n.has_value()) {
    throw UsageError("exactly one of --c and --n is required");
  }
  std::size_t n;
  double c;
  if (o.c) {
    if (!(*o.c > 0.0)) throw UsageError("--c must be positive");
    n = static_cast<std::size_t>(std::llround(static_cast<double>(o.p) / *o.c));
    c = *o.c;
  } else {
    n = *o.n;
    c = static_cast<double>(o.p) / static_cast<double>(n);
  }
  if (n < 1) throw UsageError("resolved n must be >= 1");
  if (o.reps < 1 || o.reps > 100000) throw UsageError("--reps must lie in [1, 100000]");
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  if (o.variant != "practical" && o.variant != "limiting") {
    throw UsageError("--variant must be practical or limiting");
  }
  const std::string beta = o.beta.value_or(theorem == Theorem::t3 ? "fixed" : "gaussian");

  ResolvedClt res;
  ExperimentConfig& cfg = res.cfg;
  cfg.model.n = static_cast<Eigen::Index>(n);
  cfg.model.p = static_cast<Eigen::Index>(o.p);
  cfg.model.sigma = o.sigma;
  cfg.model.dist = make_dist(o.dist, o.gamma_shape, o.t_df);
  cfg.model.beta = make_beta(parse_beta(beta), o.r);
  cfg.theorem = theorem;
  cfg.limit_ratio = c;
  cfg.reps = o.reps;
  cfg.master_seed = o.seed;
  cfg.alpha = o.alpha;
  cfg.variant = o.variant == "practical" ? ParamVariant::practical : ParamVariant::limiting;
  cfg.literal_risk_given_x = o.literal_rx;
  cfg.bins = o.bins;
  cfg.workers = o.workers;

  res.config = to_json(o);
  res.config["n"] = n;
  res.config["c"] = c;
  res.config["c_n"] = static_cast<double>(o.p) / static_cast<double>(n);
  res.config["beta"] = beta;
  res.config["ratio_from"] = o.c ? "c" : "n";
  res.config["nu4"] = cfg.model.dist.nu4();
  return res;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) && !j.at(key).is_null() ? j.at(key).get<T>() : fallback;
}

}  // namespace

Json to_json(const CltOptions& o) {
  Json j{{"theorem", o.theorem}, {"p", o.p},         {"sigma", o.sigma},
         {"r", o.r},             {"dist", o.dist},   {"gamma_shape", o.gamma_shape},
         {"t_df", o.t_df},       {"reps", o.reps},   {"alpha", o.alpha},
         {"seed", o.seed},       {"variant", o.variant},
         {"literal_rx", o.literal_rx},               {"bins", o.bins}};
  if (o.regime) j["regime"] = *o.regime;
  if (o.c) j["c"] = *o.c;
  if (o.n) j["n"] = *o.n;
  if (o.beta) j["beta"] = *o.beta;
  return j;
}

Json to_json(const BandOptions& o) {
  return Json{{"p", o.p},
              {"n_min", o.n_min},
              {"n_max", o.n_max.value_or(2 * o.p)},
              {"sigma", o.sigma},
              {"r", o.r},
              {"alpha", o.alpha},
              {"risk", o.risk},
              {"beta", o.beta},
              {"dist", o.dist},
              {"gamma_shape", o.gamma_shape},
              {"t_df", o.t_df},
              {"grid_lo", o.grid_lo},
              {"grid_hi", o.grid_hi},
              {"grid_steps", o.grid_steps},
              {"seed", o.seed},
              {"mc_reps", o.mc_reps}};
}

Json to_json(const MpOptions& o) { return Json{{"c", o.c}, {"steps", o.steps}}; }

Json to_json(const RiskOptions& o) {
  return Json{{"n", o.n},
              {"p", o.p},
              {"sigma", o.sigma},
              {"r", o.r},
              {"dist", o.dist},
              {"gamma_shape", o.gamma_shape},
              {"t_df", o.t_df},
              {"beta", o.beta},
              {"seed", o.seed},
              {"oracle", o.oracle},
              {"oracle_noise", o.oracle_noise}};
}

std::vector<Artifact> cmd_clt(const CltOptions& o) {
  ResolvedClt res = resolve_clt(o);
  const ExperimentResult result = run_experiment(res.cfg);
  Json summary = io::summary_json(result);
  summary["model"] = {{"n", res.cfg.model.n},
                      {"p", res.cfg.model.p},
                      {"dist", res.cfg.model.dist.name()},
                      {"nu4", res.cfg.model.dist.nu4()}};
  std::vector<Artifact> out{{"stats.csv", io::stats_csv(result.stats)},
                            {"hist.csv", io::histogram_csv(result.hist)},
                            {"summary.json", io::dump_json(summary)}};
  finish(out, "clt", o.seed, res.config);
  return out;
}

std::vector<Artifact> cmd_band(const BandOptions& o) {
  if (o.p < 1) throw UsageError("--p must be >= 1");
  const std::size_t n_max = o.n_max.value_or(2 * o.p);
  if (o.n_min < 1 || o.n_min > n_max) throw UsageError("empty n range");
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  if (o.risk != "rx" && o.risk != "rxb") throw UsageError("--risk must be rx or rxb");
  if (o.grid_steps < 2 || !(o.grid_lo < o.grid_hi)) {
    throw UsageError("risk grid needs grid-lo < grid-hi and at least two steps");
  }
  const EntryDistribution dist = make_dist(o.dist, o.gamma_shape, o.t_df);
  BandModel model;
  model.sigma = o.sigma;
  model.r = o.r;
  model.nu4 = dist.nu4();
  model.beta = parse_beta(o.beta);
  model.risk = o.risk == "rx" ? RiskType::given_x : RiskType::given_x_beta;

  std::vector<std::size_t> ns;
  for (std::size_t n = o.n_min; n <= n_max; ++n) ns.push_back(n);
  const DescentBand band = double_descent_band(o.p, ns, model, o.alpha);
  const auto pairs = detect_more_data_hurt(band);

  std::vector<double> grid(o.grid_steps);
  for (std::size_t i = 0; i < o.grid_steps; ++i) {
    grid[i] = o.grid_lo + (o.grid_hi - o.grid_lo) * static_cast<double>(i) /
                              static_cast<double>(o.grid_steps - 1);
  }
  const Matrix density = risk_density_surface(band, grid);

  std::vector<Artifact> out{{"band.csv", io::band_csv(band)},
                            {"pairs.csv", io::pairs_csv(pairs)},
                            {"density.csv", io::density_surface_csv(band, grid, density)}};

  if (o.mc_reps > 0) {
    std::string mc = "n,mc_mean,mc_lower,mc_upper,cover_rate\n";
    for (const auto& row : band.rows) {
      if (!row.valid) continue;
      ExperimentConfig cfg;
      cfg.model.n = static_cast<Eigen::Index>(row.n);
      cfg.model.p = static_cast<Eigen::Index>(o.p);
      cfg.model.sigma = o.sigma;
      cfg.model.dist = dist;
      cfg.model.beta = make_beta(model.beta, o.r);
      cfg.theorem = row.theorem;
      cfg.reps = o.mc_reps;
      cfg.master_seed = o.seed;
      cfg.alpha = o.alpha;
      cfg.workers = o.workers;
      const ExperimentResult res = run_experiment(cfg);
      std::vector<double> sorted = res.risks;
      std::sort(sorted.begin(), sorted.end());
      double mean = 0.0;
      for (double v : sorted) mean += v;
      mean /= static_cast<double>(sorted.size());
      mc += std::to_string(row.n) + "," + io::format_double(mean) + "," +
            io::format_double(quantile_sorted(sorted, o.alpha / 2.0)) + "," +
            io::format_double(quantile_sorted(sorted, 1.0 - o.alpha / 2.0)) + "," +
            io::format_double(res.cover_rate) + "\n";
    }
    out.push_back({"band_mc.csv", mc});
  }
  Json config = to_json(o);
  config["nu4"] = model.nu4;
  finish(out, "band", o.seed, config);
  return out;
}

std::vector<Artifact> cmd_mp(const MpOptions& o) {
  if (!(o.c > 0.0) || !std::isfinite(o.c)) throw UsageError("--c must be positive");
  if (o.steps < 1) throw UsageError("--steps must be >= 1");
  std::vector<Artifact> out{{"density.csv", io::mp_density_csv(o.c, o.steps)}};
  finish(out, "mp", 0, to_json(o));
  return out;
}

std::vector<Artifact> cmd_risk(const RiskOptions& o) {
  if (o.n < 1 || o.p < 1) throw UsageError("--n and --p must be >= 1");
  if (!(o.sigma >= 0.0)) throw UsageError("--sigma must be >= 0");
  const EntryDistribution dist = make_dist(o.dist, o.gamma_shape, o.t_df);
  const BetaMode beta_mode = make_beta(parse_beta(o.beta), o.r);
  const auto n = static_cast<Eigen::Index>(o.n);
  const auto p = static_cast<Eigen::Index>(o.p);
  const SigmaSpec sigma_spec = SigmaSpec::identity(p);

  RngStream design_stream = make_stream(o.seed, 0, StreamTag::design);
  const DesignMatrix design(sample_entries(n, p, dist, design_stream));
  RngStream beta_stream = make_stream(o.seed, 0, StreamTag::beta);
  const Vector beta = sample_beta(beta_mode, p, beta_stream);
  const RiskReport report = risk_report(design, sigma_spec, o.sigma, beta_mode, beta);

  Json j{{"n", o.n},
         {"p", o.p},
         {"rank", design.rank()},
         {"ill_conditioned", report.ill_conditioned},
         {"bias_given_x", report.bias_given_x},
         {"bias_given_x_beta", *report.bias_given_x_beta},
         {"variance", report.variance},
         {"risk_given_x", report.risk_given_x},
         {"risk_given_x_beta", *report.risk_given_x_beta}};
  if (o.oracle > 0) {
    RngStream oracle_stream = make_stream(o.seed, 0, StreamTag::test_points);
    const OracleEstimate est = mc_risk_oracle(design, sigma_spec, o.sigma, beta, o.oracle,
                                              oracle_stream, o.oracle_noise, dist);
    j["oracle"] = {{"value", est.value},
                   {"std_error", est.std_error},
                   {"n_test", est.n_test},
                   {"n_noise", est.n_noise}};
  }
  std::vector<Artifact> out{{"risk.json", io::dump_json(j)}};
  finish(out, "risk", o.seed, to_json(o));
  return out;
}

std::vector<Artifact> replay(const Json& m) {
  const std::string sub = m.at("subcommand").get<std::string>();
  const Json& c = m.at("config");
  if (sub == "clt") {
    CltOptions o;
    o.theorem = c.at("theorem").get<std::string>();
    o.p = c.at("p").get<std::size_t>();
    if (c.at("ratio_from").get<std::string>() == "c") {
      o.c = c.at("c").get<double>();
    } else {
      o.n = c.at("n").get<std::size_t>();
    }
    o.sigma = c.at("sigma").get<double>();
    o.r = c.at("r").get<double>();
    o.dist = c.at("dist").get<std::string>();
    o.gamma_shape = c.at("gamma_shape").get<double>();
    o.t_df = c.at("t_df").get<double>();
    o.beta = c.at("beta").get<std::string>();
    o.reps = c.at("reps").get<std::size_t>();
    o.alpha = c.at("alpha").get<double>();
    o.seed = c.at("seed").get<std::uint64_t>();
    o.variant = c.at("variant").get<std::string>();
    o.literal_rx = c.at("literal_rx").get<bool>();
    o.bins = c.at("bins").get<std::size_t>();
    if (c.contains("regime")) o.regime = c.at("regime").get<std::string>();
    return cmd_clt(o);
  }
  if (sub == "band") {
    BandOptions o;
    o.p = c.at("p").get<std::size_t>();
    o.n_min = c.at("n_min").get<std::size_t>();
    o.n_max = c.at("n_max").get<std::size_t>();
    o.sigma = c.at("sigma").get<double>();
    o.r = c.at("r").get<double>();
    o.alpha = c.at("alpha").get<double>();
    o.risk = c.at("risk").get<std::string>();
    o.beta = c.at("beta").get<std::string>();
    o.dist = c.at("dist").get<std::string>();
    o.gamma_shape = c.at("gamma_shape").get<double>();
    o.t_df = c.at("t_df").get<double>();
    o.grid_lo = c.at("grid_lo").get<double>();
    o.grid_hi = c.at("grid_hi").get<double>();
    o.grid_steps = c.at("grid_steps").get<std::size_t>();
    o.seed = c.at("seed").get<std::uint64_t>();
    o.mc_reps = get_or<std::size_t>(c, "mc_reps", 0);
    return cmd_band(o);
  }
  if (sub == "mp") {
    MpOptions o;
    o.c = c.at("c").get<double>();
    o.steps = c.at("steps").get<std::size_t>();
    return cmd_mp(o);
  }
  if (sub == "risk") {
    RiskOptions o;
    o.n = c.at("n").get<std::size_t>();
    o.p = c.at("p").get<std::size_t>();
    o.sigma = c.at("sigma").get<double>();
    o.r = c.at("r").get<double>();
    o.dist = c.at("dist").get<std::string>();
    o.gamma_shape = c.at("gamma_shape").get<double>();
    o.t_df = c.at("t_df").get<double>();
    o.beta = c.at("beta").get<std::string>();
    o.seed = c.at("seed").get<std::uint64_t>();
    o.oracle = c.at("oracle").get<std::size_t>();
    o.oracle_noise = c.at("oracle_noise").get<std::size_t>();
    return cmd_risk(o);
  }
  throw UsageError("manifest has unknown subcommand: " + sub);
}

void write_artifacts(const std::filesystem::path& dir,
                     const std::vector<Artifact>& artifacts) {
  std::filesystem::create_directories(dir);
  for (const auto& a : artifacts) io::write_file_atomic(dir / a.name, a.content);
}

}  // namespace riskclt::cli

namespace riskclt::cli {

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("RISKCLT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("RISKCLT_SEED must be a non-negative integer");
    }
  }
  return 1;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Finite-sample risk and CLT intervals for min-norm least squares", "riskclt"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;

  CltOptions clt;
  auto* clt_cmd = app.add_subcommand("clt", "Monte Carlo coverage experiment for one theorem");
  clt_cmd->add_option("--theorem", clt.theorem, "t1..t5")
      ->check(CLI::IsMember({"t1", "t2", "t3", "t4", "t5"}));
  clt_cmd->add_option("--regime", clt.regime, "under or over")
      ->check(CLI::IsMember({"under", "over"}));
  clt_cmd->add_option("--p", clt.p, "Number of features")->required();
  auto* c_opt = clt_cmd->add_option("--c", clt.c, "Aspect ratio p/n");
  auto* n_opt = clt_cmd->add_option("--n", clt.n, "Number of samples");
  c_opt->excludes(n_opt);
  clt_cmd->add_option("--sigma", clt.sigma, "Noise level");
  clt_cmd->add_option("--r", clt.r, "Signal norm");
  clt_cmd->add_option("--dist", clt.dist, "Entry law")
      ->check(CLI::IsMember({"normal", "gamma", "student-t"}));
  clt_cmd->add_option("--gamma-shape", clt.gamma_shape, "Shape of the gamma law");
  clt_cmd->add_option("--t-df", clt.t_df, "Degrees of freedom of the t law (> 4)");
  clt_cmd->add_option("--beta", clt.beta, "fixed or gaussian")
      ->check(CLI::IsMember({"fixed", "gaussian"}));
  clt_cmd->add_option("--reps", clt.reps, "Repetitions");
  clt_cmd->add_option("--alpha", clt.alpha, "Interval level");
  clt_cmd->add_option("--variant", clt.variant, "practical or limiting parameters")
      ->check(CLI::IsMember({"practical", "limiting"}));
  clt_cmd->add_flag("--literal-rx", clt.literal_rx, "Use R_X for t5");
  clt_cmd->add_option("--bins", clt.bins, "Histogram bins");
  clt_cmd->add_option("--workers", clt.workers, "Worker threads");
  clt_cmd->add_option("--seed", seed, "Master seed");
  clt_cmd->add_option("--out", out_dir, "Output directory");

  BandOptions band;
  auto* band_cmd = app.add_subcommand("band", "Confidence band over a range of n");
  band_cmd->add_option("--p", band.p, "Number of features")->required();
  band_cmd->add_option("--n-min", band.n_min, "Smallest n");
  band_cmd->add_option("--n-max", band.n_max, "Largest n (default 2p)");
  band_cmd->add_option("--sigma", band.sigma, "Noise level");
  band_cmd->add_option("--r", band.r, "Signal norm");
  band_cmd->add_option("--alpha", band.alpha, "Band level");
  band_cmd->add_option("--risk", band.risk, "rx or rxb")->check(CLI::IsMember({"rx", "rxb"}));
  band_cmd->add_option("--beta", band.beta, "fixed or gaussian")
      ->check(CLI::IsMember({"fixed", "gaussian"}));
  band_cmd->add_option("--dist", band.dist, "Entry law")
      ->check(CLI::IsMember({"normal", "gamma", "student-t"}));
  band_cmd->add_option("--gamma-shape", band.gamma_shape, "Shape of the gamma law");
  band_cmd->add_option("--t-df", band.t_df, "Degrees of freedom of the t law (> 4)");
  band_cmd->add_option("--grid-lo", band.grid_lo, "Density grid start");
  band_cmd->add_option("--grid-hi", band.grid_hi, "Density grid end");
  band_cmd->add_option("--grid-steps", band.grid_steps, "Density grid points");
  band_cmd->add_option("--mc", band.mc_reps, "Monte Carlo repetitions per n for band_mc.csv");
  band_cmd->add_option("--workers", band.workers, "Worker threads");
  band_cmd->add_option("--seed", seed, "Master seed");
  band_cmd->add_option("--out", out_dir, "Output directory");

  MpOptions mp;
  auto* mp_cmd = app.add_subcommand("mp", "Marchenko-Pastur density table");
  mp_cmd->add_option("--c", mp.c, "Aspect ratio")->required();
  mp_cmd->add_option("--steps", mp.steps, "Grid intervals");
  mp_cmd->add_option("--out", out_dir, "Output directory");

  RiskOptions risk;
  auto* risk_cmd = app.add_subcommand("risk", "Exact risk of one draw");
  risk_cmd->add_option("--n", risk.n, "Number of samples")->required();
  risk_cmd->add_option("--p", risk.p, "Number of features")->required();
  risk_cmd->add_option("--sigma", risk.sigma, "Noise level");
  risk_cmd->add_option("--r", risk.r, "Signal norm");
  risk_cmd->add_option("--dist", risk.dist, "Entry law")
      ->check(CLI::IsMember({"normal", "gamma", "student-t"}));
  risk_cmd->add_option("--gamma-shape", risk.gamma_shape, "Shape of the gamma law");
  risk_cmd->add_option("--t-df", risk.t_df, "Degrees of freedom of the t law (> 4)");
  risk_cmd->add_option("--beta", risk.beta, "fixed or gaussian")
      ->check(CLI::IsMember({"fixed", "gaussian"}));
  risk_cmd->add_option("--oracle", risk.oracle, "Test points for the Monte Carlo oracle");
  risk_cmd->add_option("--oracle-noise", risk.oracle_noise, "Noise redraws for the oracle");
  risk_cmd->add_option("--seed", seed, "Master seed");
  risk_cmd->add_option("--out", out_dir, "Output directory");

  std::string manifest_path;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run a saved manifest.json");
  replay_cmd->add_option("--manifest", manifest_path, "Path to manifest.json")->required();
  replay_cmd->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    std::vector<Artifact> artifacts;
    const std::uint64_t s = seed ? *seed : default_seed();
    if (*clt_cmd) {
      clt.seed = s;
      artifacts = cmd_clt(clt);
    } else if (*band_cmd) {
      band.seed = s;
      artifacts = cmd_band(band);
    } else if (*mp_cmd) {
      artifacts = cmd_mp(mp);
    } else if (*risk_cmd) {
      risk.seed = s;
      artifacts = cmd_risk(risk);
    } else {
      Json m;
      try {
        m = Json::parse(io::read_file(manifest_path));
      } catch (const Json::exception& e) {
        throw UsageError(std::string("unreadable manifest: ") + e.what());
      }
      try {
        artifacts = replay(m);
      } catch (const Json::exception& e) {
        throw UsageError(std::string("incomplete manifest: ") + e.what());
      }
    }
    write_artifacts(out_dir, artifacts);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace riskclt::cli
