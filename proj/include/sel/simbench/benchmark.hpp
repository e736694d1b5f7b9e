#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sel/core/csv.hpp"
#include "sel/core/split.hpp"
#include "sel/extract/quantiles.hpp"
#include "sel/learn/gbt.hpp"
#include "sel/learn/predict.hpp"
#include "sel/simbench/instance.hpp"

namespace sel::simbench {

struct RepRmse {
  double baseline = 0.0;
  double moments = 0.0;
  double mle = 0.0;

  double of(ModelKind k) const noexcept {
    switch (k) {
      case ModelKind::Baseline: return baseline;
      case ModelKind::SelMoments: return moments;
      case ModelKind::SelMle: return mle;
    }
    return baseline;
  }
};

inline learn::GbtModel fit_learner(const core::Dataset& train, const LearnerConfig& cfg, std::uint64_t seed) {
  return learn::fit_gbt(train, cfg.n_trees, cfg.max_depth, cfg.learning_rate, seed, {cfg.min_leaf});
}

/// Trains the three competing models on identical rows and returns their
/// held-out RMSEs.
inline RepRmse run_rep(const SimInstance& inst, const core::SplitSpec& split, const LearnerConfig& learner) {
  const auto sel = extract_sel_features(inst);
  const auto parts = core::partition_rows(inst.n(), split);
  RepRmse out;
  for (auto kind : kAllModels) {
    const auto ds = instance_dataset(inst, sel, kind);
    const auto train = ds.take_rows(parts.train);
    const auto test = ds.take_rows(parts.test);
    const auto model = fit_learner(train, learner, split.shuffle_seed);
    const double err = learn::rmse(test.target_values(), learn::predict(model, test));
    (kind == ModelKind::Baseline ? out.baseline : kind == ModelKind::SelMoments ? out.moments : out.mle) = err;
  }
  return out;
}

struct ReportRow {
  std::size_t p = 0;
  ModelKind model = ModelKind::Baseline;
  double mean_ratio = 100.0;
  double p5 = 100.0;
  double p95 = 100.0;
};

struct BenchmarkReport {
  std::vector<ReportRow> rows;  // ordered by p, then Baseline, SelMoments, SelMle

  const ReportRow& row(std::size_t p, ModelKind model) const {
    for (const auto& r : rows)
      if (r.p == p && r.model == model) return r;
    fail(ErrorCode::InvalidArgument, "no report row for p=" + std::to_string(p));
  }
};

/// Stream index for replication `rep` at the p_index-th p value.
constexpr std::uint64_t rep_stream(std::size_t p_index, std::size_t rep) noexcept {
  return (static_cast<std::uint64_t>(p_index) << 32) | static_cast<std::uint64_t>(rep);
}

inline ReportRow summarize(std::size_t p, ModelKind model, std::vector<double> ratios) {
  std::sort(ratios.begin(), ratios.end());
  double sum = 0.0;
  for (double r : ratios) sum += r;
  return {p, model, sum / static_cast<double>(ratios.size()), extract::sorted_quantile(ratios, 0.05),
          extract::sorted_quantile(ratios, 0.95)};
}

/// Per-rep RMSEs for every (p, rep) pair, indexed [p_index][rep]. Work is
/// spread over `cfg.threads` workers; each rep owns its stream, so results
/// do not depend on scheduling.
inline std::vector<std::vector<RepRmse>> run_reps(const SimConfig& cfg) {
  cfg.validate();
  const std::size_t total = cfg.p_values.size() * cfg.reps;
  std::vector<std::vector<RepRmse>> results(cfg.p_values.size(), std::vector<RepRmse>(cfg.reps));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      const std::size_t pi = task / cfg.reps, rep = task % cfg.reps;
      try {
        core::RngStream rng(cfg.master_seed, rep_stream(pi, rep));
        const auto inst = generate_instance(cfg, cfg.p_values[pi], rng);
        const core::SplitSpec split{cfg.train_fraction, rng.next_u64()};
        results[pi][rep] = run_rep(inst, split, cfg.learner);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(total);
      }
    }
  };

  const std::size_t n_threads = std::max<std::size_t>(1, std::min(cfg.threads, total));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

inline BenchmarkReport summarize_reps(const SimConfig& cfg, const std::vector<std::vector<RepRmse>>& results) {
  BenchmarkReport report;
  for (std::size_t pi = 0; pi < cfg.p_values.size(); ++pi) {
    for (auto kind : kAllModels) {
      std::vector<double> ratios;
      ratios.reserve(results[pi].size());
      for (const auto& r : results[pi]) ratios.push_back(kind == ModelKind::Baseline ? 100.0 : 100.0 * r.of(kind) / r.baseline);
      report.rows.push_back(summarize(cfg.p_values[pi], kind, std::move(ratios)));
    }
  }
  return report;
}

inline BenchmarkReport run_benchmark(const SimConfig& cfg) { return summarize_reps(cfg, run_reps(cfg)); }

/// Long format: one row per (p, model).
inline std::string report_to_csv(const BenchmarkReport& report) {
  std::ostringstream os;
  os << "n_cols,model,mean_ratio,p5,p95\n";
  for (const auto& r : report.rows)
    os << r.p << ',' << to_string(r.model) << ',' << core::format_double(r.mean_ratio) << ','
       << core::format_double(r.p5) << ',' << core::format_double(r.p95) << '\n';
  return os.str();
}

/// Wide plot-data format, one row per p.
inline std::string report_to_plot_csv(const BenchmarkReport& report) {
  std::ostringstream os;
  os << "n_cols,sel_mean,sel_p5,sel_p95,moments_mean,moments_p5,moments_p95,vanilla\n";
  std::vector<std::size_t> ps;
  for (const auto& r : report.rows)
    if (std::find(ps.begin(), ps.end(), r.p) == ps.end()) ps.push_back(r.p);
  for (auto p : ps) {
    const auto& mle = report.row(p, ModelKind::SelMle);
    const auto& mom = report.row(p, ModelKind::SelMoments);
    const auto& base = report.row(p, ModelKind::Baseline);
    os << p << ',' << core::format_double(mle.mean_ratio) << ',' << core::format_double(mle.p5) << ','
       << core::format_double(mle.p95) << ',' << core::format_double(mom.mean_ratio) << ','
       << core::format_double(mom.p5) << ',' << core::format_double(mom.p95) << ','
       << core::format_double(base.mean_ratio) << '\n';
  }
  return os.str();
}

}  // namespace sel::simbench
