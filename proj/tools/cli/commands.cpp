#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "ancova/bootstrap.hpp"
#include "ancova/hypotheses.hpp"
#include "ancova/inference.hpp"
#include "ancova/model.hpp"
#include "ancova/rng.hpp"
#include "ancova/simulation.hpp"
#include "cli/config.hpp"
#include "cli/csv.hpp"
#include "cli/errors.hpp"
#include "cli/output.hpp"

namespace ancova::cli {

namespace {

struct CommonFlags {
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = auto
  std::string scale = "desk";
  double alpha = 0.05;
  std::string flavor = "hc2";
  std::string output = "tsv";
};

Flavor parse_flavor(const std::string& name) {
  if (name == "hc0") return Flavor::HC0;
  if (name == "hc2") return Flavor::HC2;
  throw ConfigError("unknown flavor '" + name + "' (expected hc0 or hc2)");
}

ErrorDistribution parse_distribution(const std::string& name) {
  if (name == "normal") return ErrorDistribution::StandardNormal;
  if (name == "lognormal") return ErrorDistribution::Lognormal;
  if (name == "double_exponential") return ErrorDistribution::DoubleExponential;
  if (name == "chisq5") return ErrorDistribution::ChiSquare5;
  throw UnknownDistribution("unknown distribution '" + name + "'");
}

VarianceScenarioKind parse_variance(const std::string& name) {
  if (name == "I") return VarianceScenarioKind::I;
  if (name == "II") return VarianceScenarioKind::II;
  if (name == "III") return VarianceScenarioKind::III;
  throw ConfigError("unknown variance_scenario '" + name + "' (expected I, II or III)");
}

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::ostringstream os;
  for (std::size_t i = 0; i < sizes.size(); ++i) os << (i ? "," : "") << sizes[i];
  return os.str();
}

// --hypothesis grammar: oneway | twoway:BxC:effect | nested:c1,c2,...:effect
struct HypothesisRequest {
  HypothesisSpec wald;       // used by the robust Wald test and the bootstrap
  HypothesisSpec f_contrast; // used by the classical F test
};

HypothesisRequest parse_hypothesis(const std::string& text, std::size_t a,
                                   std::size_t r) {
  if (text == "oneway") {
    HypothesisSpec h = equal_means_contrast(a, r);
    return HypothesisRequest{h, h};
  }
  std::vector<std::string> parts;
  std::string part;
  std::stringstream ss(text);
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.size() != 3)
    throw ConfigError("bad --hypothesis '" + text +
                      "' (expected oneway, twoway:BxC:effect or nested:c1,..:effect)");

  if (parts[0] == "twoway") {
    const auto x = parts[1].find('x');
    if (x == std::string::npos)
      throw ConfigError("bad twoway layout '" + parts[1] + "' (expected BxC)");
    const std::size_t b = std::stoul(parts[1].substr(0, x));
    const std::size_t c = std::stoul(parts[1].substr(x + 1));
    if (b * c != a)
      throw ConfigError("twoway layout " + parts[1] + " needs " +
                        std::to_string(b * c) + " groups, dataset has " +
                        std::to_string(a));
    TwowayEffect effect;
    if (parts[2] == "main_b") {
      effect = TwowayEffect::MainB;
    } else if (parts[2] == "main_c") {
      effect = TwowayEffect::MainC;
    } else if (parts[2] == "interaction") {
      effect = TwowayEffect::Interaction;
    } else {
      throw ConfigError("unknown twoway effect '" + parts[2] +
                        "' (expected main_b, main_c or interaction)");
    }
    return HypothesisRequest{twoway_projection(b, c, effect, r),
                             twoway_contrast(b, c, effect, r)};
  }

  if (parts[0] == "nested") {
    std::vector<std::size_t> c_per;
    std::stringstream cs(parts[1]);
    while (std::getline(cs, part, ',')) c_per.push_back(std::stoul(part));
    std::size_t total = 0;
    for (std::size_t ci : c_per) total += ci;
    if (total != a)
      throw ConfigError("nested layout " + parts[1] + " needs " +
                        std::to_string(total) + " groups, dataset has " +
                        std::to_string(a));
    NestedEffect effect;
    if (parts[2] == "category") {
      effect = NestedEffect::Category;
    } else if (parts[2] == "subcategory") {
      effect = NestedEffect::Subcategory;
    } else {
      throw ConfigError("unknown nested effect '" + parts[2] +
                        "' (expected category or subcategory)");
    }
    return HypothesisRequest{nested_projection(c_per.size(), c_per, effect, r),
                             nested_contrast(c_per.size(), c_per, effect, r)};
  }
  throw ConfigError("unknown hypothesis family '" + parts[0] + "'");
}

int cmd_test(const std::string& input_path, const std::string& hypothesis,
             std::size_t n_boot, const CommonFlags& flags, std::ostream& out) {
  const LoadedDataset loaded = ingest_csv(input_path);
  const Dataset& data = loaded.data;
  const FittedModel model = fit_ols(data);
  const Flavor flavor = parse_flavor(flags.flavor);
  const HypothesisRequest hyp =
      parse_hypothesis(hypothesis, data.n_groups(), data.n_covariates());

  const TestResult f = classical_f_test(model, hyp.f_contrast);
  const TestResult white = white_test(model, hyp.wald, flavor);

  BootstrapConfig cfg;
  cfg.replications = n_boot;
  cfg.flavor = flavor;
  cfg.seed = flags.seed;
  const BootstrapResult wb = wild_bootstrap_test(model, hyp.wald, cfg, flags.threads);

  TableWriter table(out, parse_output_format(flags.output),
                    {{"method", false},
                     {"flavor", false},
                     {"statistic", true},
                     {"df1", true},
                     {"df2", true},
                     {"p_value", true}});
  table.begin();
  table.row({"classical_f", "", TableWriter::number(f.statistic),
             TableWriter::integer(f.df1), TableWriter::integer(*f.df2),
             TableWriter::number(f.p_value)});
  table.row({"white_asymptotic", flags.flavor, TableWriter::number(white.statistic),
             TableWriter::integer(white.df1), "", TableWriter::number(white.p_value)});
  table.row({"wild_bootstrap", flags.flavor, TableWriter::number(wb.observed),
             TableWriter::integer(white.df1), "", TableWriter::number(wb.p_value)});
  return 0;
}

struct ScenarioRow {
  VarianceScenarioKind variance;
  std::vector<std::size_t> sizes;
  ErrorDistribution distribution;
};

std::vector<ScenarioRow> paper_table1_rows() {
  const std::vector<std::vector<std::size_t>> size_sets{{40, 40, 40, 40},
                                                        {15, 15, 15, 15},
                                                        {5, 5, 5, 5},
                                                        {5, 10, 20, 25},
                                                        {25, 20, 10, 5}};
  std::vector<ScenarioRow> rows;
  for (VarianceScenarioKind var : {VarianceScenarioKind::I, VarianceScenarioKind::II,
                                   VarianceScenarioKind::III}) {
    for (const auto& sizes : size_sets) {
      for (ErrorDistribution dist :
           {ErrorDistribution::StandardNormal, ErrorDistribution::Lognormal,
            ErrorDistribution::DoubleExponential}) {
        rows.push_back({var, sizes, dist});
      }
    }
  }
  return rows;
}

void scale_defaults(const std::string& scale, std::size_t& n_sim, std::size_t& n_boot) {
  if (scale == "desk") {
    n_sim = 2000;
    n_boot = 1000;
  } else if (scale == "paper") {
    n_sim = 5000;
    n_boot = 5000;
  } else {
    throw ConfigError("unknown --scale '" + scale + "' (expected desk or paper)");
  }
}

int cmd_simulate(const std::string& config_path, const CommonFlags& flags,
                 std::ostream& out) {
  Config config = Config::from_file(config_path);

  std::size_t default_sim = 0, default_boot = 0;
  scale_defaults(flags.scale, default_sim, default_boot);

  SimulationScenario base;
  base.n_sim = config.take_u64("n_sim").value_or(default_sim);
  base.n_boot = config.take_u64("n_boot").value_or(default_boot);
  base.alpha = config.take_double("alpha").value_or(flags.alpha);
  base.seed = config.take_u64("seed").value_or(flags.seed);
  base.flavor = parse_flavor(config.take("flavor").value_or(flags.flavor));
  if (const auto coeffs = config.take_double_list("coefficients")) {
    base.coefficients = Vector(*coeffs);
  }

  std::vector<ScenarioRow> rows;
  const auto preset = config.take("preset");
  if (preset) {
    if (*preset != "paper_table1")
      throw ConfigError("unknown preset '" + *preset + "'");
    rows = paper_table1_rows();
    config.finish();
  } else {
    ScenarioRow row;
    const auto sizes = config.take_size_list("group_sizes");
    if (!sizes) throw ConfigError(config_path + ": missing key 'group_sizes'");
    row.sizes = *sizes;
    const auto dist = config.take("distribution");
    if (!dist) throw ConfigError(config_path + ": missing key 'distribution'");
    row.distribution = parse_distribution(*dist);
    const auto var = config.take("variance_scenario");
    if (!var) throw ConfigError(config_path + ": missing key 'variance_scenario'");
    row.variance = parse_variance(*var);
    config.finish();
    rows.push_back(std::move(row));
  }

  TableWriter table(out, parse_output_format(flags.output),
                    {{"variance", false},
                     {"group_sizes", false},
                     {"distribution", false},
                     {"flavor", false},
                     {"n_sim", true},
                     {"n_boot", true},
                     {"alpha", true},
                     {"seed", true},
                     {"f_rate", true},
                     {"f_se", true},
                     {"white_rate", true},
                     {"white_se", true},
                     {"wb_rate", true},
                     {"wb_se", true}});
  table.begin();

  const SplitRng seed_root = SplitRng::from(base.seed);
  for (std::size_t idx = 0; idx < rows.size(); ++idx) {
    const ScenarioRow& row = rows[idx];
    SimulationScenario scenario = base;
    scenario.group_sizes = row.sizes;
    scenario.distribution = row.distribution;
    scenario.variances.kind = row.variance;
    scenario.mu = Vector(row.sizes.size());
    // Each table row gets its own derived seed; single rows keep the base
    // seed so that a row rerun in isolation is reproducible.
    scenario.seed = rows.size() == 1 ? base.seed : seed_root.split(idx).stream_key();

    const SimulationReport report = run_type1_study(scenario, flags.threads);
    table.row({to_string(row.variance), join_sizes(row.sizes),
               to_string(row.distribution), to_string(scenario.flavor),
               TableWriter::integer(scenario.n_sim),
               TableWriter::integer(scenario.n_boot),
               TableWriter::number(scenario.alpha),
               TableWriter::integer(scenario.seed),
               TableWriter::number(report.rejection_rate.f),
               TableWriter::number(report.monte_carlo_se.f),
               TableWriter::number(report.rejection_rate.white),
               TableWriter::number(report.monte_carlo_se.white),
               TableWriter::number(report.rejection_rate.wb),
               TableWriter::number(report.monte_carlo_se.wb)});
  }
  return 0;
}

int cmd_power(const std::string& config_path, const CommonFlags& flags,
              std::ostream& out) {
  Config config = Config::from_file(config_path);

  std::size_t default_sim = 0, default_boot = 0;
  scale_defaults(flags.scale, default_sim, default_boot);

  const auto deltas = config.take_double_list("deltas");
  if (!deltas) throw ConfigError(config_path + ": missing key 'deltas'");

  SimulationScenario base;
  base.group_sizes = config.take_size_list("group_sizes").value_or(
      std::vector<std::size_t>{15, 15});
  base.distribution =
      parse_distribution(config.take("distribution").value_or("normal"));
  base.variances.kind = parse_variance(config.take("variance_scenario").value_or("I"));
  base.n_sim = config.take_u64("n_sim").value_or(default_sim);
  base.n_boot = config.take_u64("n_boot").value_or(default_boot);
  base.alpha = config.take_double("alpha").value_or(flags.alpha);
  base.seed = config.take_u64("seed").value_or(flags.seed);
  base.flavor = parse_flavor(config.take("flavor").value_or(flags.flavor));
  if (const auto coeffs = config.take_double_list("coefficients")) {
    base.coefficients = Vector(*coeffs);
  }
  config.finish();

  const auto curve = run_power_study(*deltas, base, flags.threads);

  TableWriter table(out, parse_output_format(flags.output),
                    {{"delta", true},
                     {"f_power", true},
                     {"f_se", true},
                     {"wb_power", true},
                     {"wb_se", true}});
  table.begin();
  for (const PowerPoint& p : curve) {
    table.row({TableWriter::number(p.delta), TableWriter::number(p.power_f),
               TableWriter::number(p.se_f), TableWriter::number(p.power_wb),
               TableWriter::number(p.se_wb)});
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heteroskedasticity-robust ANCOVA tests with a wild bootstrap"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonFlags flags;
  app.add_option("--seed", flags.seed, "Master RNG seed")->capture_default_str();
  app.add_option("--threads", flags.threads, "Worker threads (0 = auto)")
      ->capture_default_str();
  app.add_option("--scale", flags.scale, "Simulation scale: desk or paper")
      ->capture_default_str();
  app.add_option("--alpha", flags.alpha, "Nominal test level")->capture_default_str();
  app.add_option("--flavor", flags.flavor, "Covariance weighting: hc0 or hc2")
      ->capture_default_str();
  app.add_option("--output", flags.output, "Output format: tsv, csv or jsonl")
      ->capture_default_str();

  std::string input_path, config_path, hypothesis = "oneway";
  std::size_t n_boot = 1000;

  CLI::App* test = app.add_subcommand("test", "Run the tests on a CSV dataset");
  test->add_option("--input", input_path, "Input CSV file")->required();
  test->add_option("--hypothesis", hypothesis,
                   "oneway | twoway:BxC:effect | nested:c1,c2,..:effect")
      ->capture_default_str();
  test->add_option("--boot", n_boot, "Bootstrap replications")->capture_default_str();

  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo type I error study");
  simulate->add_option("--config", config_path, "Scenario config file")->required();

  CLI::App* power = app.add_subcommand("power", "Monte Carlo power study");
  power->add_option("--config", config_path, "Power config file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (test->parsed()) return cmd_test(input_path, hypothesis, n_boot, flags, out);
    if (simulate->parsed()) return cmd_simulate(config_path, flags, out);
    return cmd_power(config_path, flags, out);
  } catch (const SingularMatrix& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const RankDeficient& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const LeverageOne& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const SingularWaldCore& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace ancova::cli
