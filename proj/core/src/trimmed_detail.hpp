#pragma once

// Internal machinery shared by the full-model and mixture-of-regressions
// fits: concentration step from a log-density matrix, the EM loop with
// component redraws, and the multi-start driver. Not installed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "cwrm/density.hpp"
#include "cwrm/em.hpp"
#include "cwrm/parallel.hpp"
#include "cwrm/rng.hpp"
#include "cwrm/types.hpp"

namespace cwrm::detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Retain the h rows with the largest mixture log-density; ties prefer the
// smaller row index.
inline std::vector<int> select_retained(const VectorXd& log_mix, int h) {
  const int n = static_cast<int>(log_mix.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (log_mix[a] != log_mix[b]) return log_mix[a] > log_mix[b];
    return a < b;
  });
  std::vector<int> z(n, 0);
  for (int j = 0; j < h; ++j) z[order[j]] = 1;
  return z;
}

struct ConcentrationResult {
  Responsibilities resp;
  VectorXd log_mix;
};

// E-step + concentration from a component log-density matrix: row-wise
// log-sum-exp gives the ranking, posteriors fill only the retained rows.
inline ConcentrationResult concentrate(const MatrixXd& logs, int h) {
  const int n = static_cast<int>(logs.rows());
  const int g_count = static_cast<int>(logs.cols());
  VectorXd log_mix(n);
  std::vector<double> row(g_count);
  for (int i = 0; i < n; ++i) {
    for (int g = 0; g < g_count; ++g) row[g] = logs(i, g);
    log_mix[i] = log_sum_exp(std::span<const double>(row.data(), g_count));
  }
  ConcentrationResult out;
  out.resp.z = select_retained(log_mix, h);
  out.resp.tau = MatrixXd::Zero(n, g_count);
  for (int i = 0; i < n; ++i) {
    if (out.resp.z[i] == 0) continue;
    if (log_mix[i] == kNegInf) {
      throw Error(ErrorCode::DegenerateDensity,
                  "a retained observation has zero mixture density");
    }
    double total = 0.0;
    for (int g = 0; g < g_count; ++g) {
      const double p = std::exp(logs(i, g) - log_mix[i]);
      out.resp.tau(i, g) = p;
      total += p;
    }
    out.resp.tau.row(i) /= total;
  }
  out.log_mix = std::move(log_mix);
  return out;
}

inline double objective_from(const VectorXd& log_mix,
                             const std::vector<int>& z) {
  double total = 0.0;
  for (int i = 0; i < log_mix.size(); ++i) {
    if (z[i]) total += log_mix[i];
  }
  return total;
}

// One trimmed EM run. Model supplies the parameter type and the four
// model-specific pieces:
//   Params init(RngStream&)
//   MatrixXd log_matrix(const Params&)
//   Params m_step(const Responsibilities&)      may throw EmptyComponentError
//   void redraw(Params&, const std::vector<int>& components, RngStream&)
//   void fill_stats(const Params&, IterationStats&)
// Any other Error from these marks the start as failed (-inf objective)
// rather than escaping.
template <class Model>
typename Model::Fit run_trimmed_em(const Model& model, const Dataset& dataset,
                                   const FitConfig& config, RngStream& rng,
                                   StartTrace* trace) {
  using Fit = typename Model::Fit;
  const int h = retained_count(dataset.n(), config.alpha);

  Fit fit;
  fit.objective = kNegInf;
  fit.converged = false;
  fit.n_iter = 0;

  auto record = [&](const typename Model::Params& params, double objective,
                    bool redrew) {
    if (!trace) return;
    IterationStats stats;
    stats.objective = objective;
    stats.redrew = redrew;
    model.fill_stats(params, stats);
    trace->iterations.push_back(stats);
  };

  try {
    typename Model::Params params = model.init(rng);
    ConcentrationResult ec = concentrate(model.log_matrix(params), h);
    double objective = objective_from(ec.log_mix, ec.resp.z);
    record(params, objective, false);

    std::vector<int> redraw_counts(config.n_groups, 0);
    int iter = 0;
    bool converged = false;
    while (iter < config.max_iter) {
      ++iter;
      bool redrew = false;
      typename Model::Params next;
      try {
        next = model.m_step(ec.resp);
      } catch (const EmptyComponentError& empty) {
        for (int g : empty.components()) {
          if (++redraw_counts[g] > 5) {
            throw Error(ErrorCode::EmptyComponent,
                        "component could not be repopulated");
          }
        }
        next = params;
        model.redraw(next, empty.components(), rng);
        redrew = true;
      }
      ConcentrationResult next_ec = concentrate(model.log_matrix(next), h);
      const double next_objective =
          objective_from(next_ec.log_mix, next_ec.resp.z);
      record(next, next_objective, redrew);
      if (!redrew) {
        converged = std::abs(next_objective - objective) /
                        (1.0 + std::abs(objective)) <
                    config.rel_tol;
      }
      params = std::move(next);
      ec = std::move(next_ec);
      objective = next_objective;
      if (converged) break;
    }

    fit.params = std::move(params);
    fit.resp = std::move(ec.resp);
    fit.labels = map_classify(fit.resp);
    fit.objective = objective;
    fit.n_iter = iter;
    fit.converged = converged;
    return fit;
  } catch (const Error&) {
    if (trace) trace->failed = true;
    fit.objective = kNegInf;
    return fit;
  }
}

// Multi-start driver: per-start streams derived from (seed, start index),
// execution over a worker pool, deterministic best-of reduction.
template <class Model>
typename Model::Fit multi_start_em(const Model& model, const Dataset& dataset,
                                   const FitConfig& config,
                                   FitDiagnostics* diagnostics,
                                   int n_threads) {
  using Fit = typename Model::Fit;
  const int n_starts = config.n_starts;
  std::vector<Fit> fits(n_starts);
  if (diagnostics) {
    diagnostics->starts.assign(n_starts, StartTrace{});
  }
  const int workers = resolve_thread_count(n_threads, n_starts);
  parallel_for(n_starts, workers, [&](int s) {
    StartTrace* trace = nullptr;
    if (diagnostics) {
      trace = &diagnostics->starts[s];
      trace->start_index = s;
    }
    RngStream rng(config.seed, static_cast<std::uint64_t>(s));
    fits[s] = run_trimmed_em(model, dataset, config, rng, trace);
    fits[s].start_index = s;
  });

  int best = -1;
  for (int s = 0; s < n_starts; ++s) {
    if (fits[s].objective == kNegInf) continue;
    if (best < 0 || fits[s].objective > fits[best].objective) best = s;
  }
  if (best < 0) {
    throw Error(ErrorCode::AllStartsFailed,
                "no start produced a finite objective");
  }
  return std::move(fits[best]);
}

}  // namespace cwrm::detail
