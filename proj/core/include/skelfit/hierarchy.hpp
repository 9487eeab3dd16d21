/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "skelfit/capture.hpp"
#include "skelfit/joint_solver.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace skelfit
{

/// Parent of every body. The root maps to the world (std::nullopt).
///
/// Construction rejects maps with zero or several roots, out-of-range
/// parents and cycles.
class ParentMap
{
public:
  ParentMap() = default;
  explicit ParentMap(std::vector<std::optional<std::size_t>> parents);

  std::size_t size() const noexcept { return m_parents.size(); }
  std::size_t root() const noexcept { return m_root; }
  std::optional<std::size_t> parent(std::size_t body) const { return m_parents.at(body); }
  const std::vector<std::optional<std::size_t>>& parents() const noexcept { return m_parents; }

  /// Root first; every body appears after its parent. Siblings in index order.
  std::vector<std::size_t> topological_order() const;

  /// Undirected edges as (min, max), sorted.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  bool operator==(const ParentMap& other) const = default;

private:
  std::vector<std::optional<std::size_t>> m_parents;
  std::size_t m_root = 0;
};

/// "body,parent" CSV; the root row carries parent -1.
ParentMap read_parent_map_csv(std::istream& input);
ParentMap load_parent_map(const std::filesystem::path& path);
void write_parent_map_csv(std::ostream& output, const ParentMap& map);

/// Symmetric table of pairwise joint-fit errors (meters).
///
/// Fits are kept for i < j with i as parent and j as child. Entries that were
/// never set read as NaN.
class FitMatrix
{
public:
  explicit FitMatrix(std::size_t body_count);

  /// Table from raw weights, row-major m x m; only the upper triangle is read.
  static FitMatrix from_epsilons(std::size_t body_count, const std::vector<double>& row_major);

  std::size_t body_count() const noexcept { return m_body_count; }

  void set(std::size_t i, std::size_t j, double epsilon);
  void set_fit(JointFit fit);

  double epsilon(std::size_t i, std::size_t j) const;
  bool has(std::size_t i, std::size_t j) const;
  const JointFit* fit(std::size_t i, std::size_t j) const;

  bool is_complete() const;

private:
  std::size_t index(std::size_t i, std::size_t j) const;

  std::size_t m_body_count;
  std::vector<double> m_epsilon;
  std::vector<std::optional<JointFit>> m_fits;
};

struct SweepOptions
{
  double rank_tol = kDefaultRankTolerance;
  std::size_t threads = 0; // 0: hardware concurrency
  bool keep_fits = false;  // keep residual timelines for every pair
};

/// Solves all m(m-1)/2 unordered pairs. The result does not depend on thread count.
FitMatrix build_fit_matrix(const CaptureSession& session, const SweepOptions& options = {});

/// "body_i,body_j,epsilon_m" rows for i < j.
void write_fit_matrix_csv(std::ostream& output, const FitMatrix& fits);

struct WeightedEdge
{
  std::size_t i = 0;
  std::size_t j = 0;
  double epsilon = 0.0;
};

struct HierarchyResult
{
  ParentMap parent;
  std::vector<std::pair<std::size_t, std::size_t>> tree_edges; // (min, max), sorted
  double total_epsilon = 0.0;
  std::vector<WeightedEdge> unused_low_error_edges;
};

inline constexpr double kDefaultLoopFactor = 2.0;

struct InferOptions
{
  std::optional<std::size_t> root; // defaults to body 0
  double loop_factor = kDefaultLoopFactor;
};

/// Minimum spanning tree over the fit errors (Kruskal, union-find). Equal
/// weights are broken by the lexicographically smaller (min, max) pair.
/// Throws Error{IncompleteMatrix} when any pair is missing or not finite.
HierarchyResult infer_hierarchy(const FitMatrix& fits, const InferOptions& options = {});

/// Sum of the edge weights, accumulated in sorted edge order.
double tree_weight(const FitMatrix& fits, std::vector<std::pair<std::size_t, std::size_t>> edges);

/// Disjoint-set forest with path halving and union by size.
class UnionFind
{
public:
  explicit UnionFind(std::size_t count);

  std::size_t find(std::size_t element);
  /// Returns false when both elements were already in the same set.
  bool unite(std::size_t a, std::size_t b);

private:
  std::vector<std::size_t> m_parent;
  std::vector<std::size_t> m_size;
};

} // namespace skelfit
