#pragma once

// Earth mover's distance between two weighted sentence sets: an exact
// solver, a relaxed lower bound and a greedy upper bound. All solvers take
// a non-negative cost matrix (rows = source sentences, cols = target
// sentences) and two mass vectors of matching length with equal totals.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "smd/corpus.hpp"
#include "smd/errors.hpp"

namespace smd {

enum class Solver { Exact, RelaxedMax, Greedy };

std::string_view to_string(Solver solver);
std::optional<Solver> parse_solver(std::string_view name);

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Pairwise Euclidean distances between two sets of ground vectors.
using CostMatrix = DenseMatrix<double>;

template <typename Scalar>
struct SmdResult {
  Scalar distance = 0;
  /// Feasible flow matrix; set by the exact and greedy solvers only.
  std::optional<DenseMatrix<Scalar>> plan;
  Solver solver = Solver::Exact;
  /// One-sided relaxed distances (source->target, target->source). Only
  /// meaningful for Solver::RelaxedMax.
  Scalar forward = 0;
  Scalar backward = 0;
};

/// Euclidean distance between every row of `x` and every row of `y`,
/// evaluated in `Scalar` precision. Identical rows give exactly zero.
template <typename Scalar = double, typename DerivedX, typename DerivedY>
DenseMatrix<Scalar> pairwise_euclidean(const Eigen::MatrixBase<DerivedX>& x,
                                       const Eigen::MatrixBase<DerivedY>& y) {
  if (x.cols() != y.cols())
    throw InputError("embedding dimension mismatch: " + std::to_string(x.cols()) + " vs " +
                     std::to_string(y.cols()));
  const DenseMatrix<Scalar> xs = x.template cast<Scalar>();
  const DenseMatrix<Scalar> ys = y.template cast<Scalar>();
  DenseMatrix<Scalar> out(xs.rows(), ys.rows());
  for (Eigen::Index j = 0; j < ys.rows(); ++j)
    for (Eigen::Index i = 0; i < xs.rows(); ++i)
      out(i, j) = (xs.row(i) - ys.row(j)).norm();
  return out;
}

/// Gathers the embedding row of every vocabulary entry into a dense matrix.
Eigen::MatrixXd gather_rows(const SentenceVocabulary& vocab, const EmbeddingMatrix& emb);

CostMatrix cost_matrix(const SentenceVocabulary& src_vocab,
                       const SentenceVocabulary& tgt_vocab, const EmbeddingMatrix& emb);

namespace detail {

constexpr double kFeasibilityTol = 1e-6;
constexpr double kGreedyResidualTol = 1e-6;

template <typename DerivedC, typename DerivedA, typename DerivedB>
void check_problem(const Eigen::MatrixBase<DerivedC>& cost,
                   const Eigen::MatrixBase<DerivedA>& a,
                   const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() == 0 || b.size() == 0) throw InputError("empty mass distribution");
  if (cost.rows() != a.size() || cost.cols() != b.size())
    throw InputError("cost matrix is " + std::to_string(cost.rows()) + "x" +
                     std::to_string(cost.cols()) + " but masses have sizes " +
                     std::to_string(a.size()) + " and " + std::to_string(b.size()));
  if (!cost.allFinite() || (cost.array() < 0).any())
    throw InputError("cost matrix must be finite and non-negative");
  if (!a.allFinite() || !b.allFinite() || (a.array() < 0).any() || (b.array() < 0).any())
    throw InputError("masses must be finite and non-negative");
  const double gap = std::abs(double(a.sum()) - double(b.sum()));
  if (gap > kFeasibilityTol)
    throw InputError("infeasible marginals: mass totals differ by " + std::to_string(gap));
}

}  // namespace detail

/// Optimal transport cost by successive shortest augmenting paths on the
/// bipartite residual network (Dijkstra with node potentials).
template <typename DerivedC, typename DerivedA, typename DerivedB>
SmdResult<typename DerivedC::Scalar> exact_smd(const Eigen::MatrixBase<DerivedC>& cost,
                                               const Eigen::MatrixBase<DerivedA>& a,
                                               const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedC::Scalar;
  using Eigen::Index;
  detail::check_problem(cost, a, b);

  const Index n = cost.rows();
  const Index m = cost.cols();
  const Index nodes = n + m;
  const Scalar tol = Scalar(1e-15);
  const Scalar inf = std::numeric_limits<Scalar>::infinity();

  DenseMatrix<Scalar> flow = DenseMatrix<Scalar>::Zero(n, m);
  DenseVector<Scalar> supply = a.template cast<Scalar>();
  DenseVector<Scalar> demand = b.template cast<Scalar>();

  // Nodes [0, n) are sources, [n, n + m) targets.
  std::vector<Scalar> potential(nodes, Scalar(0));
  std::vector<Scalar> dist(nodes);
  std::vector<Index> parent(nodes);
  std::vector<char> settled(nodes);

  while ((supply.array() > tol).any() && (demand.array() > tol).any()) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(parent.begin(), parent.end(), Index(-1));
    std::fill(settled.begin(), settled.end(), 0);
    for (Index i = 0; i < n; ++i)
      if (supply[i] > tol) dist[i] = Scalar(0);

    for (Index step = 0; step < nodes; ++step) {
      Index u = -1;
      for (Index v = 0; v < nodes; ++v)
        if (!settled[v] && dist[v] < inf && (u < 0 || dist[v] < dist[u])) u = v;
      if (u < 0) break;
      settled[u] = 1;

      if (u < n) {
        for (Index j = 0; j < m; ++j) {
          const Index v = n + j;
          if (settled[v]) continue;
          const Scalar rc = std::max(Scalar(0), cost(u, j) + potential[u] - potential[v]);
          if (dist[u] + rc < dist[v]) {
            dist[v] = dist[u] + rc;
            parent[v] = u;
          }
        }
      } else {
        const Index j = u - n;
        for (Index i = 0; i < n; ++i) {
          if (settled[i] || flow(i, j) <= Scalar(0)) continue;
          const Scalar rc = std::max(Scalar(0), -cost(i, j) + potential[u] - potential[i]);
          if (dist[u] + rc < dist[i]) {
            dist[i] = dist[u] + rc;
            parent[i] = u;
          }
        }
      }
    }

    // Sink side: the cheapest target that still has demand.
    Index sink = -1;
    for (Index j = 0; j < m; ++j) {
      const Index v = n + j;
      if (demand[j] <= tol || dist[v] == inf) continue;
      if (sink < 0 || dist[v] + potential[v] < dist[n + sink] + potential[n + sink]) sink = j;
    }
    if (sink < 0) throw InvariantError("exact_smd: no augmenting path");

    for (Index v = 0; v < nodes; ++v)
      if (dist[v] < inf) potential[v] += dist[v];

    Scalar delta = demand[sink];
    Index v = n + sink;
    while (true) {
      const Index src = parent[v];
      if (v >= n) {
        v = src;
        continue;
      }
      if (src < 0) {
        delta = std::min(delta, supply[v]);
        break;
      }
      delta = std::min(delta, flow(v, src - n));
      v = src;
    }

    v = n + sink;
    Index origin = -1;
    while (true) {
      const Index src = parent[v];
      if (v >= n) {
        flow(src, v - n) += delta;
        v = src;
        continue;
      }
      if (src < 0) {
        origin = v;
        break;
      }
      Scalar& f = flow(v, src - n);
      f -= delta;
      if (f <= tol) f = Scalar(0);
      v = src;
    }
    supply[origin] -= delta;
    demand[sink] -= delta;
  }

  SmdResult<Scalar> result;
  result.solver = Solver::Exact;
  result.distance = std::max(Scalar(0), flow.cwiseProduct(cost.derived()).sum());
  result.plan = std::move(flow);
  return result;
}

/// Lower bound: each side's mass goes to its nearest counterpart with the
/// opposite marginal dropped; the larger of the two directions is returned.
template <typename DerivedC, typename DerivedA, typename DerivedB>
SmdResult<typename DerivedC::Scalar> relaxed_smd(const Eigen::MatrixBase<DerivedC>& cost,
                                                 const Eigen::MatrixBase<DerivedA>& a,
                                                 const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedC::Scalar;
  detail::check_problem(cost, a, b);

  SmdResult<Scalar> result;
  result.solver = Solver::RelaxedMax;
  result.forward =
      (a.template cast<Scalar>().array() * cost.rowwise().minCoeff().array()).sum();
  result.backward = (b.template cast<Scalar>().array() *
                     cost.colwise().minCoeff().transpose().array())
                        .sum();
  result.distance = std::max(result.forward, result.backward);
  return result;
}

/// Upper bound: visits (source, target) pairs by ascending cost, ties by
/// (source index, target index), and moves as much mass as both still hold.
template <typename DerivedC, typename DerivedA, typename DerivedB>
SmdResult<typename DerivedC::Scalar> greedy_smd(const Eigen::MatrixBase<DerivedC>& cost,
                                                const Eigen::MatrixBase<DerivedA>& a,
                                                const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedC::Scalar;
  using Eigen::Index;
  detail::check_problem(cost, a, b);

  const Index n = cost.rows();
  const Index m = cost.cols();
  std::vector<Index> order(static_cast<std::size_t>(n * m));
  std::iota(order.begin(), order.end(), Index(0));
  // Row-major pair index, so ties fall back to (i, j) order.
  auto at = [&](Index k) { return cost(k / m, k % m); };
  std::sort(order.begin(), order.end(), [&](Index p, Index q) {
    const Scalar cp = at(p);
    const Scalar cq = at(q);
    return cp < cq || (cp == cq && p < q);
  });

  DenseVector<Scalar> supply = a.template cast<Scalar>();
  DenseVector<Scalar> demand = b.template cast<Scalar>();
  DenseMatrix<Scalar> plan = DenseMatrix<Scalar>::Zero(n, m);
  Scalar distance = 0;
  for (Index k : order) {
    const Index i = k / m;
    const Index j = k % m;
    const Scalar moved = std::min(supply[i], demand[j]);
    if (moved <= Scalar(0)) continue;
    supply[i] -= moved;
    demand[j] -= moved;
    plan(i, j) += moved;
    distance += cost(i, j) * moved;
  }

  const double residual = std::max(double(supply.maxCoeff()), double(demand.maxCoeff()));
  if (residual > detail::kGreedyResidualTol)
    throw InvariantError("greedy_smd: residual mass " + std::to_string(residual) +
                         " after exhausting all pairs");

  SmdResult<Scalar> result;
  result.solver = Solver::Greedy;
  result.distance = distance;
  result.plan = std::move(plan);
  return result;
}

template <typename DerivedC, typename DerivedA, typename DerivedB>
SmdResult<typename DerivedC::Scalar> solve_smd(Solver solver,
                                               const Eigen::MatrixBase<DerivedC>& cost,
                                               const Eigen::MatrixBase<DerivedA>& a,
                                               const Eigen::MatrixBase<DerivedB>& b) {
  switch (solver) {
    case Solver::Exact: return exact_smd(cost, a, b);
    case Solver::RelaxedMax: return relaxed_smd(cost, a, b);
    case Solver::Greedy: return greedy_smd(cost, a, b);
  }
  throw InvariantError("unknown solver");
}

}  // namespace smd
