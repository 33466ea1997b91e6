#include <doctest.h>

#include <random>

#include "smd/errors.hpp"
#include "smd/eval.hpp"
#include "smd/synthetic.hpp"
#include "smd/transport.hpp"
#include "test_util.hpp"

using namespace smd;
using doctest::Approx;

namespace {

Alignment align_of(std::vector<std::pair<std::string, std::string>> pairs) {
  Alignment a;
  for (auto& [s, t] : pairs) a.pairs.push_back({s, t, 0.0});
  return a;
}

// Brute-force tau-b: enumerate every item pair.
double tau_by_enumeration(const std::vector<double>& x, const std::vector<double>& y) {
  double c = 0, d = 0, tx = 0, ty = 0, n0 = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      ++n0;
      const double s = (x[i] - x[j]) * (y[i] - y[j]);
      if (x[i] == x[j]) ++tx;
      if (y[i] == y[j]) ++ty;
      if (s > 0) ++c;
      if (s < 0) ++d;
    }
  return (c - d) / std::sqrt((n0 - tx) * (n0 - ty));
}

}  // namespace

TEST_CASE("recall") {
  const GoldSet gold{{"a", "1"}, {"b", "2"}, {"c", "3"}, {"d", "4"}};
  CHECK(recall(align_of({{"a", "1"}, {"b", "2"}, {"c", "3"}, {"d", "4"}, {"e", "5"}}), gold)
            .recall == 1.0);
  const auto partial = recall(align_of({{"a", "1"}, {"b", "2"}, {"c", "3"}, {"d", "9"}}), gold);
  CHECK(partial.recall == 0.75);
  CHECK(partial.found == 3);
  CHECK(partial.total == 4);
  CHECK(recall(align_of({{"x", "y"}}), gold).recall == 0.0);
  CHECK_THROWS_AS(recall(align_of({{"a", "1"}}), GoldSet{}), InputError);
}

TEST_CASE("property: recall is monotone in correct pairs") {
  const GoldSet gold{{"a", "1"}, {"b", "2"}, {"c", "3"}};
  Alignment a = align_of({{"x", "9"}});
  double last = recall(a, gold).recall;
  for (const auto& [s, t] : gold) {
    a.pairs.push_back({s, t, 0});
    const double now = recall(a, gold).recall;
    CHECK(now >= last);
    last = now;
  }
  CHECK(last == 1.0);
}

TEST_CASE("kendall_tau") {
  const std::vector<double> r{1, 2, 3, 4, 5};
  const std::vector<double> rev{5, 4, 3, 2, 1};
  CHECK(kendall_tau(r, r) == 1.0);
  CHECK(kendall_tau(r, rev) == -1.0);
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> swapped{1, 3, 2, 4};
  CHECK(kendall_tau(a, swapped) == Approx(1.0 - 2.0 / 6.0));
  CHECK(tau_by_enumeration(a, swapped) == Approx(4.0 / 6.0));

  CHECK_THROWS_AS(kendall_tau(a, r), InputError);
  CHECK_THROWS_AS(kendall_tau(std::vector<double>{1}, std::vector<double>{1}), InputError);
  CHECK(std::isnan(kendall_tau(std::vector<double>{2, 2}, std::vector<double>{1, 3})));
}

TEST_CASE("kendall_tau over scored pairs matches items by id") {
  const std::vector<ScoredPair> a{{"s1", "t1", 0.1}, {"s1", "t2", 0.2}, {"s2", "t1", 0.3}};
  const std::vector<ScoredPair> b{{"s2", "t1", 3.0}, {"s1", "t1", 1.0}, {"s1", "t2", 2.0}};
  CHECK(kendall_tau(a, b) == 1.0);
  const std::vector<ScoredPair> other{{"s2", "t1", 3.0}, {"s1", "t1", 1.0}, {"s9", "t2", 2.0}};
  CHECK_THROWS_AS(kendall_tau(a, other), InputError);
  CHECK_THROWS_AS(kendall_tau(a, std::span(b).first(2)), InputError);
}

TEST_CASE("property: kendall_tau agrees with enumeration, is symmetric, handles ties") {
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> level(0, 5);
  std::uniform_int_distribution<int> len(2, 30);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = len(rng);
    std::vector<double> x(n), y(n);
    for (int k = 0; k < n; ++k) {
      x[k] = level(rng);
      y[k] = level(rng);
    }
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) x[0] += 1;
    if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) y[0] += 1;
    const double tau = kendall_tau(x, y);
    CHECK(tau == Approx(tau_by_enumeration(x, y)));
    CHECK(tau == Approx(kendall_tau(y, x)));
    CHECK(tau >= -1.0);
    CHECK(tau <= 1.0);
  }
}

TEST_CASE("mae") {
  const std::vector<double> x{1.0, 2.0};
  CHECK(mae(x, x) == 0.0);
  CHECK(mae(x, std::vector<double>{2.0, 2.0}) == 0.5);
  // Greedy 4.0 against exact 3.0 on the worked 1-d transport instance.
  const CostMatrix cost = (Eigen::MatrixXd(2, 2) << 5, 7, 1, 1).finished();
  const Eigen::VectorXd half = Eigen::VectorXd::Constant(2, 0.5);
  const std::vector<double> greedy{greedy_smd(cost, half, half).distance};
  const std::vector<double> exact{exact_smd(cost, half, half).distance};
  CHECK(mae(greedy, exact) == Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(mae(x, std::vector<double>{1.0}), InputError);
}

TEST_CASE("compare_approximations") {
  SUBCASE("greedy equals exact on every pair") {
    // Every document is a single sentence, so all solvers coincide.
    auto emb = std::make_shared<EmbeddingMatrix>(4, 2);
    *emb << 0, 0, 1, 0, 3, 0, 0, 7;
    DomainCorpus d;
    d.domain_id = "dom";
    d.embeddings = emb;
    d.source_docs = {smd::testing::make_doc("a", {"a"}, {0}),
                     smd::testing::make_doc("b", {"b"}, {1})};
    d.target_docs = {smd::testing::make_doc("c", {"c"}, {2}),
                     smd::testing::make_doc("e", {"e"}, {3})};
    const auto r = compare_approximations(d, WeightingScheme::Uniform, 1);
    CHECK(r.tau_greedy == 1.0);
    CHECK(r.mae_greedy == 0.0);
    CHECK(r.pairs.size() == 4);
  }
  SUBCASE("worked 2x2 instance contributes greedy error 1.0") {
    auto emb = std::make_shared<EmbeddingMatrix>(4, 1);
    *emb << 0, 6, 5, 7;
    DomainCorpus d;
    d.domain_id = "dom";
    d.embeddings = emb;
    d.source_docs = {smd::testing::make_doc("src", {"a", "b"}, {0, 1})};
    d.target_docs = {smd::testing::make_doc("tgt", {"c", "d"}, {2, 3}),
                     smd::testing::make_doc("tgt2", {"e"}, {3})};
    const auto r = compare_approximations(d, WeightingScheme::Uniform, 1);
    REQUIRE(r.pairs.size() == 2);
    CHECK(r.greedy[0] - r.exact[0] == Approx(1.0).epsilon(1e-12));
    CHECK(r.relaxed[0] == 3.0);
    CHECK(r.mae_greedy == Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("relaxed never exceeds exact on synthetic domains") {
    SynthSpec spec;
    spec.n_domains = 2;
    spec.docs_per_side = 4;
    spec.min_sentences = 3;
    spec.max_sentences = 8;
    spec.noise_sigma = 0.3;
    const auto synth = generate_synthetic(spec);
    for (auto scheme : {WeightingScheme::Uniform, WeightingScheme::SLIDF}) {
      const auto r = compare_approximations(synth.domains, scheme, 1);
      REQUIRE(r.pairs.size() == 32);
      for (std::size_t k = 0; k < r.pairs.size(); ++k) {
        CHECK(r.relaxed[k] <= r.exact[k] + 1e-7);
        CHECK(r.exact[k] <= r.greedy[k] + 1e-7);
      }
      CHECK(r.runtime_exact_s > 0.0);
      const auto j = to_json(r);
      for (const char* key : {"tau_greedy", "tau_relaxed", "mae_greedy", "mae_relaxed",
                              "runtime_exact_s", "runtime_greedy_s", "runtime_relaxed_s"})
        CHECK(j.contains(key));
    }
  }
}

TEST_CASE("report JSON") {
  EvalReport e;
  e.recall = 0.5;
  CHECK(to_json(e).dump() == R"({"recall":0.5})");
}
