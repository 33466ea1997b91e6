#pragma once

// Independent reference solvers used only by the test suites.

#include <span>
#include <vector>

#include <Eigen/Core>

#include "smd/matching.hpp"

namespace smd::oracle {

/// Optimal transport cost by enumerating every basic feasible solution
/// (spanning trees of the bipartite support graph). At most 4x4.
double oracle_smd(const Eigen::MatrixXd& cost, const Eigen::VectorXd& a,
                  const Eigen::VectorXd& b);

/// Minimum-total-distance injective assignment (Kuhn-Munkres). Pairs must
/// form a complete bipartite candidate set; at most 64 documents per side.
Alignment hungarian_oracle(std::span<const ScoredPair> pairs);

/// Minimum total over all injective assignments by permutation search.
/// Small instances only (<= 8 per side).
double brute_force_assignment(const Eigen::MatrixXd& cost);

}  // namespace smd::oracle
