#pragma once

#include <random>

#include <Eigen/Core>

#include "smd/transport.hpp"
#include "smd/weighting.hpp"
#include "test_util.hpp"

namespace smd::testing {

struct Instance {
  Eigen::MatrixXd src_points;
  Eigen::MatrixXd tgt_points;
  Eigen::MatrixXd cost;
  Eigen::VectorXd a;
  Eigen::VectorXd b;
};

inline Eigen::MatrixXd gaussian_points(std::mt19937_64& rng, int rows, int dim) {
  std::normal_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd p(rows, dim);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < dim; ++k) p(i, k) = unit(rng);
  return p;
}

/// Weights for a random vocabulary of `size` sentences under `scheme`,
/// with document frequencies drawn from a 40-document domain.
inline Eigen::VectorXd random_mass(std::mt19937_64& rng, int size, WeightingScheme scheme) {
  const SentenceVocabulary vocab = random_vocab(rng, size);
  DomainIdf idf;
  idf.doc_count = 40;
  std::uniform_int_distribution<long> df(1, 40);
  for (const auto& e : vocab.entries) idf.df[e.text] = df(rng);
  return weights(vocab, scheme, &idf);
}

/// Random instance with 1..max_side sentences per side and dims in [2, 64].
inline Instance random_instance(std::mt19937_64& rng, int max_side, WeightingScheme scheme) {
  std::uniform_int_distribution<int> side(1, max_side);
  std::uniform_int_distribution<int> dim(2, 64);
  const int n = side(rng);
  const int m = side(rng);
  const int d = dim(rng);
  Instance inst;
  inst.src_points = gaussian_points(rng, n, d);
  inst.tgt_points = gaussian_points(rng, m, d);
  inst.cost = pairwise_euclidean(inst.src_points, inst.tgt_points);
  inst.a = random_mass(rng, n, scheme);
  inst.b = random_mass(rng, m, scheme);
  return inst;
}

/// Masses k_i / sum(k) with small integer k_i.
inline Eigen::VectorXd rational_mass(std::mt19937_64& rng, int size) {
  std::uniform_int_distribution<int> k(1, 6);
  Eigen::VectorXd w(size);
  for (int i = 0; i < size; ++i) w[i] = k(rng);
  return w / w.sum();
}

}  // namespace smd::testing
