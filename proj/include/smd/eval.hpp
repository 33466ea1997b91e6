#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "smd/corpus.hpp"
#include "smd/matching.hpp"
#include "smd/weighting.hpp"

namespace smd {

struct EvalReport {
  double recall = 0;
  std::size_t found = 0;
  std::size_t total = 0;
};

/// Fraction of gold pairs present in the predicted alignment.
EvalReport recall(const Alignment& predicted, const GoldSet& gold);

/// Kendall tau-b between two score vectors over the same items (x[k] and
/// y[k] belong to item k). Ties reduce the denominator; NaN when either
/// ranking is entirely tied.
double kendall_tau(std::span<const double> x, std::span<const double> y);

/// Kendall tau-b between two distance-scored rankings of the same document
/// pairs; items are matched by (src_id, tgt_id).
double kendall_tau(std::span<const ScoredPair> ranking_a,
                   std::span<const ScoredPair> ranking_b);

/// Mean absolute error.
double mae(std::span<const double> approx, std::span<const double> exact);

struct ApproxReport {
  double tau_greedy = 0;
  double tau_relaxed = 0;
  double mae_greedy = 0;
  double mae_relaxed = 0;
  double runtime_exact_s = 0;
  double runtime_greedy_s = 0;
  double runtime_relaxed_s = 0;

  // Per-pair distances, index-aligned with `pairs`.
  std::vector<ScoredPair> pairs;
  std::vector<double> exact;
  std::vector<double> greedy;
  std::vector<double> relaxed;
};

/// Scores every candidate pair of each domain with the exact, relaxed and
/// greedy solvers and compares the approximations against exact. Runtimes
/// are mean wall-clock seconds per pair (cost matrix + solve), averaged
/// over `repetitions` single-threaded runs.
ApproxReport compare_approximations(std::span<const DomainCorpus> domains,
                                    WeightingScheme scheme, int repetitions = 3);
ApproxReport compare_approximations(const DomainCorpus& domain, WeightingScheme scheme,
                                    int repetitions = 3);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const ApproxReport& report);

}  // namespace smd
