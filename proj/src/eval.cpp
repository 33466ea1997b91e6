#include "smd/eval.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "smd/errors.hpp"

namespace smd {

EvalReport recall(const Alignment& predicted, const GoldSet& gold) {
  if (gold.empty()) throw InputError("recall: gold set is empty");
  GoldSet found;
  for (const auto& p : predicted.pairs) {
    GoldPair key{p.src_id, p.tgt_id};
    if (gold.count(key)) found.insert(std::move(key));
  }
  EvalReport report;
  report.found = found.size();
  report.total = gold.size();
  report.recall = double(report.found) / double(report.total);
  return report;
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("kendall_tau: rankings differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw InputError("kendall_tau: need at least 2 items");

  long long concordant = 0;
  long long discordant = 0;
  long long ties_x = 0;
  long long ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0) ++ties_x;
      if (dy == 0.0) ++ties_y;
      if (dx == 0.0 || dy == 0.0) continue;
      if ((dx > 0) == (dy > 0))
        ++concordant;
      else
        ++discordant;
    }
  }
  const double total = double(n) * double(n - 1) / 2.0;
  const double denom = std::sqrt((total - double(ties_x)) * (total - double(ties_y)));
  if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return double(concordant - discordant) / denom;
}

double kendall_tau(std::span<const ScoredPair> ranking_a,
                   std::span<const ScoredPair> ranking_b) {
  if (ranking_a.size() != ranking_b.size())
    throw InputError("kendall_tau: rankings cover different item sets");
  std::map<GoldPair, double> b_scores;
  for (const auto& p : ranking_b) {
    if (!b_scores.emplace(GoldPair{p.src_id, p.tgt_id}, p.distance).second)
      throw InputError("kendall_tau: duplicate item (" + p.src_id + ", " + p.tgt_id + ")");
  }
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : ranking_a) {
    auto it = b_scores.find({p.src_id, p.tgt_id});
    if (it == b_scores.end())
      throw InputError("kendall_tau: item (" + p.src_id + ", " + p.tgt_id +
                       ") missing from second ranking");
    x.push_back(p.distance);
    y.push_back(it->second);
  }
  return kendall_tau(x, y);
}

double mae(std::span<const double> approx, std::span<const double> exact) {
  if (approx.size() != exact.size()) throw InputError("mae: length mismatch");
  if (approx.empty()) throw InputError("mae: empty input");
  double total = 0;
  for (std::size_t k = 0; k < approx.size(); ++k) total += std::abs(approx[k] - exact[k]);
  return total / double(approx.size());
}

ApproxReport compare_approximations(std::span<const DomainCorpus> domains,
                                    WeightingScheme scheme, int repetitions) {
  using clock = std::chrono::steady_clock;
  if (repetitions < 1) throw InputError("compare_approximations: repetitions must be >= 1");

  ApproxReport report;
  double seconds[3] = {0, 0, 0};
  const Solver solvers[3] = {Solver::Exact, Solver::Greedy, Solver::RelaxedMax};
  std::vector<double>* outputs[3] = {&report.exact, &report.greedy, &report.relaxed};

  for (const auto& domain : domains) {
    const ScorerConfig config{Scorer::SMD, Solver::Exact, scheme};
    const DomainScorer scorer(domain, config);
    for (std::size_t s = 0; s < scorer.source_count(); ++s) {
      for (std::size_t t = 0; t < scorer.target_count(); ++t) {
        report.pairs.push_back(
            {domain.source_docs[s].doc_id, domain.target_docs[t].doc_id, 0.0});
        for (int m = 0; m < 3; ++m) {
          double value = 0;
          const auto start = clock::now();
          for (int r = 0; r < repetitions; ++r) value = scorer.smd(s, t, solvers[m]);
          seconds[m] += std::chrono::duration<double>(clock::now() - start).count();
          outputs[m]->push_back(value);
        }
        report.pairs.back().distance = report.exact.back();
      }
    }
  }
  if (report.pairs.size() < 2)
    throw InputError("compare_approximations: need at least 2 candidate pairs");

  report.tau_greedy = kendall_tau(report.greedy, report.exact);
  report.tau_relaxed = kendall_tau(report.relaxed, report.exact);
  report.mae_greedy = mae(report.greedy, report.exact);
  report.mae_relaxed = mae(report.relaxed, report.exact);
  const double runs = double(report.pairs.size()) * repetitions;
  report.runtime_exact_s = seconds[0] / runs;
  report.runtime_greedy_s = seconds[1] / runs;
  report.runtime_relaxed_s = seconds[2] / runs;
  return report;
}

ApproxReport compare_approximations(const DomainCorpus& domain, WeightingScheme scheme,
                                    int repetitions) {
  return compare_approximations(std::span<const DomainCorpus>(&domain, 1), scheme,
                                repetitions);
}

nlohmann::json to_json(const EvalReport& report) {
  return {{"recall", report.recall}};
}

nlohmann::json to_json(const ApproxReport& report) {
  return {{"tau_greedy", report.tau_greedy},
          {"tau_relaxed", report.tau_relaxed},
          {"mae_greedy", report.mae_greedy},
          {"mae_relaxed", report.mae_relaxed},
          {"runtime_exact_s", report.runtime_exact_s},
          {"runtime_greedy_s", report.runtime_greedy_s},
          {"runtime_relaxed_s", report.runtime_relaxed_s}};
}

}  // namespace smd
