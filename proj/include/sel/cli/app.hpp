#pragma once

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "sel/cli/pnm.hpp"
#include "sel/core/csv.hpp"
#include "sel/estimate/strength.hpp"
#include "sel/explain/importance.hpp"
#include "sel/explain/partial_dependence.hpp"
#include "sel/extract/color_histogram.hpp"
#include "sel/extract/ewma.hpp"
#include "sel/extract/moments.hpp"
#include "sel/extract/quantiles.hpp"
#include "sel/extract/tfidf.hpp"
#include "sel/learn/serialize.hpp"
#include "sel/simbench/benchmark.hpp"

namespace sel::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

inline std::size_t default_threads() {
  return std::max<unsigned>(1, std::thread::hardware_concurrency());
}

/// Column names of a dataset that start with `prefix`, in table order.
inline std::vector<std::string> prefixed_columns(const core::Dataset& ds, const std::string& prefix) {
  std::vector<std::string> out;
  for (const auto& c : ds.columns())
    if (c.name.rfind(prefix, 0) == 0 && (!ds.target() || c.name != *ds.target())) out.push_back(c.name);
  if (out.size() < 2)
    fail(ErrorCode::UsageError, "need at least 2 process columns with prefix '" + prefix + "'");
  return out;
}

/// Row r of the selected columns as a process.
inline std::vector<double> process_row(const core::Dataset& ds, const std::vector<std::string>& cols, std::size_t r) {
  std::vector<double> out;
  out.reserve(cols.size());
  for (const auto& c : cols) out.push_back(ds.values(c)[r]);
  return out;
}

inline void append_or_create(std::optional<core::Dataset>& base, std::vector<core::Column> cols) {
  if (!base) {
    base = core::Dataset(std::move(cols));
    return;
  }
  for (auto& c : cols) base->add_column(std::move(c));
}

inline std::string label(double x) {
  auto s = core::format_double(x);
  std::replace(s.begin(), s.end(), '.', '_');
  return s;
}

struct SimulateArgs {
  simbench::SimConfig cfg;
  std::uint64_t seed = 42;
  std::size_t threads = default_threads();
  std::string output = "simulation_report.csv";
  std::string plot_data = "simulation_plot_data.csv";
};

struct ExtractArgs {
  std::string input, target, output, prefix, column, corpus;
  std::vector<double> probs{0.25, 0.5, 0.75};
  std::vector<std::size_t> windows{7, 14, 21, 28};
  std::vector<std::string> images;
};

struct StrengthArgs {
  std::string matches, method = "mle", reference_date, output;
  double half_life = 500.0;
};

struct TrainArgs {
  std::string model, input, target, output;
  std::optional<double> lambda;
  std::optional<std::size_t> max_depth, min_leaf;
  std::size_t n_trees = 200, mtry = 0;
  double learning_rate = 0.1;
  std::uint64_t seed = 42;
};

struct PredictArgs {
  std::string model, input, output, target;
};

struct ExplainArgs {
  std::string method, model, input, target, feature, output;
  std::size_t shuffles = 10, grid_size = 50;
  std::uint64_t seed = 42;
};

inline void run_simulate(const SimulateArgs& a, std::ostream& out) {
  auto cfg = a.cfg;
  cfg.master_seed = a.seed;
  cfg.threads = a.threads;
  const auto report = simbench::run_benchmark(cfg);
  core::write_text(a.output, simbench::report_to_csv(report));
  core::write_text(a.plot_data, simbench::report_to_plot_csv(report));
  out << "wrote " << a.output << " and " << a.plot_data << '\n';
}

inline std::optional<core::Dataset> maybe_read(const std::string& input, const std::string& target) {
  if (input.empty()) return std::nullopt;
  return core::read_csv(input, target);
}

inline void run_extract_moments(const ExtractArgs& a) {
  auto ds = core::read_csv(a.input, a.target);
  const auto cols = prefixed_columns(ds, a.prefix);
  std::vector<double> mean, var, skew, kurt;
  for (std::size_t r = 0; r < ds.n_rows(); ++r) {
    const auto m = extract::moments(process_row(ds, cols, r));
    mean.push_back(m.mean());
    var.push_back(m.variance());
    skew.push_back(m.skewness());
    kurt.push_back(m.excess_kurtosis());
  }
  const auto L = core::SelLevel::Descriptive;
  for (auto& c : std::vector<core::Column>{{a.prefix + "_mean", mean, L}, {a.prefix + "_var", var, L},
                                           {a.prefix + "_skew", skew, L}, {a.prefix + "_kurt", kurt, L}})
    ds.add_column(std::move(c));
  core::write_csv(ds, a.output);
}

inline void run_extract_quantiles(const ExtractArgs& a) {
  auto ds = core::read_csv(a.input, a.target);
  const auto cols = prefixed_columns(ds, a.prefix);
  std::vector<std::vector<double>> q(a.probs.size());
  for (std::size_t r = 0; r < ds.n_rows(); ++r) {
    const auto row = extract::quantiles(process_row(ds, cols, r), a.probs);
    for (std::size_t k = 0; k < row.size(); ++k) q[k].push_back(row[k]);
  }
  for (std::size_t k = 0; k < a.probs.size(); ++k)
    ds.add_column({a.prefix + "_q" + label(100.0 * a.probs[k]), std::move(q[k]), core::SelLevel::Descriptive});
  core::write_csv(ds, a.output);
}

inline void run_extract_ewma(const ExtractArgs& a) {
  auto ds = core::read_csv(a.input, a.target);
  const auto xs = ds.values(a.column);
  std::vector<core::Column> added;
  for (auto w : a.windows)
    added.push_back({a.column + "_ewma" + std::to_string(w), extract::ewma(xs, extract::window_to_alpha(w)),
                     core::SelLevel::Descriptive});
  for (auto& c : added) ds.add_column(std::move(c));
  core::write_csv(ds, a.output);
}

inline void run_extract_image_moments(const ExtractArgs& a) {
  if (a.images.empty()) fail(ErrorCode::UsageError, "--images needs at least one file");
  std::vector<std::vector<extract::ColorHistogram>> hists;
  for (const auto& path : a.images) hists.push_back(extract::color_histogram(read_pnm(path)));
  const std::size_t n_channels = hists.front().size();
  for (const auto& h : hists)
    if (h.size() != n_channels) fail(ErrorCode::UnsupportedDepth, "images mix gray and color");

  std::vector<core::Column> cols;
  for (std::size_t c = 0; c < n_channels; ++c) {
    const std::string name(extract::to_string(hists.front()[c].channel));
    std::vector<double> mean, var, skew, kurt;
    for (std::size_t i = 0; i < hists.size(); ++i) {
      const auto m = extract::histogram_moments(hists[i][c]);
      if (!m.has_shape())
        fail(ErrorCode::DegenerateVariance, a.images[i] + ": " + name + " channel has a single intensity");
      mean.push_back(m.mean());
      var.push_back(m.variance());
      skew.push_back(m.skewness());
      kurt.push_back(m.excess_kurtosis());
    }
    const auto L = core::SelLevel::Descriptive;
    cols.push_back({name + "_mean", mean, L});
    cols.push_back({name + "_var", var, L});
    cols.push_back({name + "_skew", skew, L});
    cols.push_back({name + "_kurt", kurt, L});
  }
  auto base = maybe_read(a.input, a.target);
  append_or_create(base, std::move(cols));
  core::write_csv(*base, a.output);
}

inline void run_extract_tfidf(const ExtractArgs& a) {
  std::vector<extract::Document> corpus;
  for (const auto& line : core::read_lines(a.corpus)) corpus.push_back(extract::tokenize(line));
  const auto m = extract::tfidf(corpus);
  std::vector<core::Column> cols;
  for (std::size_t j = 0; j < m.vocabulary.size(); ++j) {
    if (m.vocabulary[j].find(',') != std::string::npos)
      fail(ErrorCode::ParseError, "token '" + m.vocabulary[j] + "' contains a comma");
    std::vector<double> col;
    for (const auto& row : m.rows) col.push_back(row[j]);
    cols.push_back({"tfidf_" + m.vocabulary[j], std::move(col), core::SelLevel::Descriptive});
  }
  auto base = maybe_read(a.input, a.target);
  append_or_create(base, std::move(cols));
  core::write_csv(*base, a.output);
}

inline void run_strength(const StrengthArgs& a, std::ostream& out) {
  const auto matches = estimate::read_matches_csv(a.matches);
  if (matches.empty()) fail(ErrorCode::EmptyInput, "no matches in " + a.matches);
  std::string text;
  if (a.method == "mean") {
    std::ostringstream os;
    os << "team,strength\n";
    for (const auto& team : estimate::team_names(matches))
      os << team << ',' << core::format_double(estimate::mean_goals_strength(matches, team)) << '\n';
    text = os.str();
  } else {
    estimate::Date reference = matches.front().date;
    for (const auto& m : matches) reference = std::max(reference, m.date);
    if (!a.reference_date.empty()) reference = estimate::Date::parse(a.reference_date);
    text = estimate::strengths_to_csv(estimate::fit_strengths(matches, reference, a.half_life));
  }
  if (a.output.empty()) out << text;
  else core::write_text(a.output, text);
}

inline void run_train(const TrainArgs& a) {
  const auto ds = core::read_csv(a.input, a.target);
  const std::size_t p = ds.feature_names().size();
  learn::AnyModel model;
  if (a.model == "lasso") {
    if (!a.lambda) fail(ErrorCode::UsageError, "--lambda is required for --model lasso");
    model = learn::fit_lasso(ds, *a.lambda);
  } else if (a.model == "tree") {
    model = learn::fit_tree(ds, a.max_depth.value_or(3), a.min_leaf.value_or(1));
  } else if (a.model == "forest") {
    const std::size_t mtry = a.mtry == 0 ? learn::default_mtry(p) : a.mtry;
    model = learn::fit_forest(ds, a.n_trees, mtry, a.max_depth.value_or(20), a.seed, {a.min_leaf.value_or(5), true});
  } else {
    model = learn::fit_gbt(ds, a.n_trees, a.max_depth.value_or(3), a.learning_rate, a.seed, {a.min_leaf.value_or(1)});
  }
  learn::save_model(model, a.output);
}

inline void run_predict(const PredictArgs& a) {
  const auto model = learn::load_model(a.model);
  const auto ds = core::read_csv(a.input, a.target);
  core::write_csv(core::Dataset({{"prediction", learn::predict(model, ds), core::SelLevel::Raw}}), a.output);
}

inline void run_explain(const ExplainArgs& a) {
  const auto model = learn::load_model(a.model);
  const auto ds = core::read_csv(a.input, a.target);
  if (a.method == "permutation") {
    if (a.target.empty()) fail(ErrorCode::UsageError, "--target is required for --method permutation");
    core::write_text(a.output, explain::importance_to_csv(explain::permutation_importance(model, ds, a.shuffles, a.seed)));
  } else {
    if (a.feature.empty()) fail(ErrorCode::UsageError, "--feature is required for --method pdp");
    core::write_text(a.output, explain::pdp_to_csv(explain::partial_dependence(model, ds, a.feature, a.grid_size)));
  }
}

/// Expands `--config <file>`: each `key=value` line of the file becomes
/// `--key=value` unless `--key` already appears on the command line.
inline std::vector<std::string> expand_config(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::vector<std::string> kept;
  std::optional<std::string> config;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) fail(ErrorCode::UsageError, "--config needs a file");
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (!config) return kept;
  if (!std::filesystem::exists(*config)) fail(ErrorCode::UsageError, "config file '" + *config + "' not found");
  for (const auto& raw : core::read_lines(*config)) {
    const auto line = core::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::UsageError, "config line without '=': " + std::string(line));
    std::string key(core::trim(line.substr(0, eq)));
    const std::string value(core::trim(line.substr(eq + 1)));
    if (key.rfind("--", 0) != 0) key = "--" + key;
    const bool given = std::any_of(kept.begin(), kept.end(), [&](const std::string& a) {
      return a == key || a.rfind(key + "=", 0) == 0;
    });
    if (!given) kept.push_back(key + "=" + value);
  }
  return kept;
}

}  // namespace detail

/// Parses `argv`, runs one subcommand and returns the process exit status:
/// 0 on success, 1 on a domain error, 2 on a usage error.
inline int dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Statistically enhanced feature extraction and SEL benchmark tools", "selkit"};
  app.require_subcommand(1);

  detail::SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo comparison of baseline vs SEL features");
  simulate->add_option("--n", sim.cfg.n, "individuals per instance")->capture_default_str()->check(CLI::Range(10, 100000000));
  simulate->add_option("--m", sim.cfg.m, "process length")->capture_default_str()->check(CLI::Range(10, 100000000));
  simulate->add_option("--reps", sim.cfg.reps, "replications per p")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--p-values", sim.cfg.p_values, "numbers of observed covariates")->delimiter(',')->capture_default_str();
  simulate->add_option("--seed", sim.seed, "master seed")->capture_default_str();
  simulate->add_option("--threads", sim.threads, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--beta-low", sim.cfg.beta_range.first)->capture_default_str();
  simulate->add_option("--beta-high", sim.cfg.beta_range.second)->capture_default_str();
  simulate->add_option("--beta-mu-low", sim.cfg.beta_mu_range.first)->capture_default_str();
  simulate->add_option("--beta-mu-high", sim.cfg.beta_mu_range.second)->capture_default_str();
  simulate->add_option("--cauchy-scale", sim.cfg.cauchy_scale)->capture_default_str();
  simulate->add_option("--train-fraction", sim.cfg.train_fraction)->capture_default_str();
  simulate->add_option("--n-trees", sim.cfg.learner.n_trees)->capture_default_str();
  simulate->add_option("--max-depth", sim.cfg.learner.max_depth)->capture_default_str();
  simulate->add_option("--learning-rate", sim.cfg.learner.learning_rate)->capture_default_str();
  simulate->add_option("--output", sim.output, "long-format report CSV")->capture_default_str();
  simulate->add_option("--plot-data", sim.plot_data, "wide plot-data CSV")->capture_default_str();

  detail::ExtractArgs ex;
  auto* extract_cmd = app.add_subcommand("extract", "Append SEL 2 feature columns");
  extract_cmd->require_subcommand(1);
  auto add_table_io = [&](CLI::App* sub, bool input_required) {
    auto* in = sub->add_option("--input", ex.input, "input dataset CSV");
    if (input_required) in->required();
    sub->add_option("--target", ex.target, "target column of the input");
    sub->add_option("--output", ex.output, "output CSV")->required();
  };
  auto* ex_moments = extract_cmd->add_subcommand("moments", "mean, variance, skewness, excess kurtosis per row");
  add_table_io(ex_moments, true);
  ex_moments->add_option("--process-prefix", ex.prefix, "columns forming each row's process")->required();
  auto* ex_quant = extract_cmd->add_subcommand("quantiles", "linear-interpolation quantiles per row");
  add_table_io(ex_quant, true);
  ex_quant->add_option("--process-prefix", ex.prefix)->required();
  ex_quant->add_option("--probs", ex.probs)->delimiter(',')->capture_default_str();
  auto* ex_ewma = extract_cmd->add_subcommand("ewma", "EWMA paths of a time-ordered column");
  add_table_io(ex_ewma, true);
  ex_ewma->add_option("--column", ex.column)->required();
  ex_ewma->add_option("--windows", ex.windows, "window lengths, alpha = 2/(w+1)")->delimiter(',')->capture_default_str();
  auto* ex_image = extract_cmd->add_subcommand("image-moments", "histogram moments of PGM/PPM images");
  add_table_io(ex_image, false);
  ex_image->add_option("--images", ex.images, "image files, one output row each")->required();
  auto* ex_tfidf = extract_cmd->add_subcommand("tfidf", "unigram TF-IDF, one document per line");
  add_table_io(ex_tfidf, false);
  ex_tfidf->add_option("--corpus", ex.corpus)->required();

  detail::StrengthArgs st;
  auto* strength = app.add_subcommand("strength", "Team strengths from match results");
  strength->add_option("--matches", st.matches, "date,home_team,away_team,home_goals,away_goals CSV")->required();
  strength->add_option("--method", st.method)->check(CLI::IsMember({"mle", "mean"}))->capture_default_str();
  strength->add_option("--half-life", st.half_life, "recency half-life in days")->check(CLI::PositiveNumber)->capture_default_str();
  strength->add_option("--reference-date", st.reference_date, "YYYY-MM-DD, default latest match");
  strength->add_option("--output", st.output, "output CSV (stdout if omitted)");

  detail::TrainArgs tr;
  auto* train = app.add_subcommand("train", "Fit and serialise a model");
  train->add_option("--model", tr.model)->check(CLI::IsMember({"lasso", "tree", "forest", "gbt"}))->required();
  train->add_option("--input", tr.input)->required();
  train->add_option("--target", tr.target)->required();
  train->add_option("--output", tr.output, "model JSON")->required();
  train->add_option("--lambda", tr.lambda, "L1 penalty (lasso)");
  train->add_option("--max-depth", tr.max_depth, "default 3 (tree, gbt) or 20 (forest)");
  train->add_option("--min-leaf", tr.min_leaf, "default 1 (tree, gbt) or 5 (forest)");
  train->add_option("--n-trees", tr.n_trees)->capture_default_str();
  train->add_option("--mtry", tr.mtry, "features per split, 0 = ceil(p/3)")->capture_default_str();
  train->add_option("--learning-rate", tr.learning_rate)->capture_default_str();
  train->add_option("--seed", tr.seed)->capture_default_str();

  detail::PredictArgs pr;
  auto* predict = app.add_subcommand("predict", "Apply a serialised model");
  predict->add_option("--model", pr.model)->required();
  predict->add_option("--input", pr.input)->required();
  predict->add_option("--target", pr.target, "target column to ignore, if present");
  predict->add_option("--output", pr.output)->required();

  detail::ExplainArgs xp;
  auto* explain_cmd = app.add_subcommand("explain", "Permutation importance or partial dependence");
  explain_cmd->add_option("--method", xp.method)->check(CLI::IsMember({"permutation", "pdp"}))->required();
  explain_cmd->add_option("--model", xp.model)->required();
  explain_cmd->add_option("--input", xp.input)->required();
  explain_cmd->add_option("--target", xp.target);
  explain_cmd->add_option("--feature", xp.feature, "feature for pdp");
  explain_cmd->add_option("--shuffles", xp.shuffles)->capture_default_str()->check(CLI::PositiveNumber);
  explain_cmd->add_option("--grid-size", xp.grid_size)->capture_default_str()->check(CLI::Range(2, 100000));
  explain_cmd->add_option("--seed", xp.seed)->capture_default_str();
  explain_cmd->add_option("--output", xp.output)->required();

  for (auto* sub : {simulate, ex_moments, ex_quant, ex_ewma, ex_image, ex_tfidf, strength, train, predict, explain_cmd})
    sub->add_option("--config", "flat key=value file; command-line flags take precedence");

  try {
    auto args = detail::expand_config(argc, argv);
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const Error& e) {
    err << "selkit: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "selkit: usage error: " << msg << '\n';
    return kExitUsage;
  }

  try {
    if (*simulate) detail::run_simulate(sim, out);
    else if (*ex_moments) detail::run_extract_moments(ex);
    else if (*ex_quant) detail::run_extract_quantiles(ex);
    else if (*ex_ewma) detail::run_extract_ewma(ex);
    else if (*ex_image) detail::run_extract_image_moments(ex);
    else if (*ex_tfidf) detail::run_extract_tfidf(ex);
    else if (*strength) detail::run_strength(st, out);
    else if (*train) detail::run_train(tr);
    else if (*predict) detail::run_predict(pr);
    else if (*explain_cmd) detail::run_explain(xp);
  } catch (const Error& e) {
    err << "selkit: " << e.what() << '\n';
    return e.code() == ErrorCode::UsageError ? kExitUsage : kExitDomain;
  } catch (const std::exception& e) {
    err << "selkit: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace sel::cli
