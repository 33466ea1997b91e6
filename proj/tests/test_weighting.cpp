#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "smd/errors.hpp"
#include "smd/weighting.hpp"
#include "test_util.hpp"

using namespace smd;
using doctest::Approx;

namespace {

SentenceVocabulary vocab_of(std::vector<int> counts, std::vector<int> tokens = {}) {
  SentenceVocabulary v;
  for (std::size_t i = 0; i < counts.size(); ++i)
    v.entries.push_back({"s" + std::to_string(i), Eigen::Index(i), counts[i],
                         tokens.empty() ? 1 : tokens[i]});
  return v;
}

DomainIdf idf_of(long docs, std::vector<long> dfs) {
  DomainIdf idf;
  idf.doc_count = docs;
  for (std::size_t i = 0; i < dfs.size(); ++i) idf.df["s" + std::to_string(i)] = dfs[i];
  return idf;
}

void check_weights(const MassDistribution& w, std::vector<double> expected, double eps = 1e-12) {
  REQUIRE(w.size() == Eigen::Index(expected.size()));
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(w[Eigen::Index(i)] == Approx(expected[i]).epsilon(eps));
}

}  // namespace

TEST_CASE("uniform_weights") {
  check_weights(uniform_weights(vocab_of({1, 1, 1, 1})), {0.25, 0.25, 0.25, 0.25});
  check_weights(uniform_weights(vocab_of({2, 1, 1})), {0.5, 0.25, 0.25});
  check_weights(uniform_weights(vocab_of({3})), {1.0});
  CHECK_THROWS_AS(uniform_weights(SentenceVocabulary{}), InputError);
}

TEST_CASE("sl_weights") {
  check_weights(sl_weights(vocab_of({1, 1}, {3, 1})), {0.75, 0.25});
  check_weights(sl_weights(vocab_of({1, 1}, {5, 5})), {0.5, 0.5});
  check_weights(sl_weights(vocab_of({2, 1}, {2, 3})), {4.0 / 7.0, 3.0 / 7.0});
  CHECK_THROWS_AS(sl_weights(SentenceVocabulary{}), InputError);
}

TEST_CASE("idf_weights") {
  check_weights(idf_weights(vocab_of({1, 1}), idf_of(4, {2, 2})), {0.5, 0.5});
  // 1 / (2 + ln 4) and (1 + ln 4) / (2 + ln 4), computed independently.
  check_weights(idf_weights(vocab_of({1, 1}), idf_of(4, {4, 1})),
                {0.2953080545748206, 0.7046919454251794});
  check_weights(idf_weights(vocab_of({1}), idf_of(1, {1})), {1.0});

  SUBCASE("sentence missing from the domain statistics") {
    CHECK_THROWS_AS(idf_weights(vocab_of({1, 1}), idf_of(4, {2})), InputError);
  }
}

TEST_CASE("slidf_weights") {
  check_weights(slidf_weights(vocab_of({1, 1}, {4, 4}), idf_of(5, {2, 2})), {0.5, 0.5});
  check_weights(slidf_weights(vocab_of({1, 1}, {3, 1}), idf_of(6, {3, 3})), {0.75, 0.25});
  // raw [0.75 * 1, 0.25 * (1 + ln 4)], normalized; computed independently.
  check_weights(slidf_weights(vocab_of({1, 1}, {3, 1}), idf_of(4, {4, 1})),
                {0.5569691886234482, 0.44303081137655176});
}

TEST_CASE("weights dispatch needs idf for idf schemes") {
  const auto v = vocab_of({1, 2});
  CHECK(weights(v, WeightingScheme::Uniform) == uniform_weights(v));
  CHECK_THROWS_AS(weights(v, WeightingScheme::IDF), InputError);
  CHECK_THROWS_AS(weights(v, WeightingScheme::SLIDF), InputError);
}

TEST_CASE("scheme names round-trip") {
  for (auto s : {WeightingScheme::Uniform, WeightingScheme::SL, WeightingScheme::IDF,
                 WeightingScheme::SLIDF})
    CHECK(parse_scheme(to_string(s)) == s);
  CHECK_FALSE(parse_scheme("tfidf").has_value());
}

TEST_CASE("build_domain_idf counts document membership over both sides") {
  DomainCorpus d;
  d.source_docs.push_back(smd::testing::make_doc("a", {"s", "dup", "dup"}, {0, 1, 1}));
  d.source_docs.push_back(smd::testing::make_doc("b", {"s"}, {0}));
  d.source_docs.push_back(smd::testing::make_doc("c", {"x"}, {2}));
  d.target_docs.push_back(smd::testing::make_doc("t", {"y"}, {3}));
  const auto idf = build_domain_idf(d);
  CHECK(idf.doc_count == 4);
  CHECK(idf.df.at("s") == 2);
  CHECK(idf.df.at("dup") == 1);
  CHECK(idf.idf("dup") == Approx(1.0 + std::log(4.0)));
  for (const auto& [text, df] : idf.df) {
    CHECK(df >= 1);
    CHECK(df <= idf.doc_count);
  }
}

TEST_CASE("property: every scheme yields a distribution") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> size(1, 30);
  std::uniform_int_distribution<long> df(1, 50);
  for (int trial = 0; trial < 300; ++trial) {
    const auto v = smd::testing::random_vocab(rng, size(rng));
    DomainIdf idf;
    idf.doc_count = 50;
    for (const auto& e : v.entries) idf.df[e.text] = df(rng);
    for (auto scheme : {WeightingScheme::Uniform, WeightingScheme::SL, WeightingScheme::IDF,
                        WeightingScheme::SLIDF}) {
      const auto w = weights(v, scheme, &idf);
      CHECK((w.array() >= 0).all());
      CHECK(std::abs(w.sum() - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("property: uniform weights follow a permutation of the vocabulary") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    auto v = smd::testing::random_vocab(rng, 12);
    const auto w = uniform_weights(v);
    std::vector<int> perm(v.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    SentenceVocabulary shuffled;
    for (int p : perm) shuffled.entries.push_back(v.entries[p]);
    const auto ws = uniform_weights(shuffled);
    for (std::size_t k = 0; k < perm.size(); ++k) CHECK(ws[Eigen::Index(k)] == w[perm[k]]);
  }
}

TEST_CASE("property: raw idf is at least 1 and strictly decreasing in df") {
  DomainIdf idf;
  idf.doc_count = 20;
  for (long df = 1; df <= 20; ++df) idf.df["s" + std::to_string(df)] = df;
  double previous = std::numeric_limits<double>::infinity();
  for (long df = 1; df <= 20; ++df) {
    const double value = idf.idf("s" + std::to_string(df));
    CHECK(value >= 1.0);
    CHECK(value < previous);
    previous = value;
  }
}
