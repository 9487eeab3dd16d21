/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

// Independent reference computations used by the tests. Nothing here calls
// into the solver, hierarchy or synth code paths it is used to check.

#pragma once

#include "skelfit/capture.hpp"
#include "skelfit/transform.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace skelfit::testing
{

/// Rotation from a normalized Gaussian quaternion (different method from the library).
inline Mat3 gaussian_rotation(std::mt19937_64& rng)
{
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  return q.normalized().toRotationMatrix();
}

inline Vec3 gaussian_vector(std::mt19937_64& rng, double sigma = 1.0)
{
  std::normal_distribution<double> g(0.0, sigma);
  return {g(rng), g(rng), g(rng)};
}

inline Transform random_rigid(std::mt19937_64& rng)
{
  return {gaussian_rotation(rng), gaussian_vector(rng)};
}

/// Well-conditioned general invertible transform: rotation * diag(0.5..2) * rotation.
inline Transform random_affine(std::mt19937_64& rng)
{
  std::uniform_real_distribution<double> s(0.5, 2.0);
  const Mat3 d = Vec3(s(rng), s(rng), s(rng)).asDiagonal();
  return {gaussian_rotation(rng) * d * gaussian_rotation(rng), gaussian_vector(rng)};
}

/// Two-body articulated motion written out by hand: parent placement random,
/// child placement derived from x_parent = R (x_child - c) + l.
inline CaptureSession articulated_pair(const Vec3& c, const Vec3& l, const std::vector<Mat3>& joint_rotations,
                                       std::mt19937_64& rng)
{
  BodyTrack parent{0, std::nullopt, {}};
  BodyTrack child{1, std::nullopt, {}};
  for (const Mat3& rel : joint_rotations)
  {
    const Transform p = random_rigid(rng);
    Transform ch;
    ch.linear = p.linear * rel;
    ch.translation = p.linear * l + p.translation - ch.linear * c;
    parent.frames.push_back(p);
    child.frames.push_back(ch);
  }
  return CaptureSession({parent, child});
}

inline std::vector<Mat3> random_rotations(std::size_t count, std::mt19937_64& rng)
{
  std::vector<Mat3> out;
  for (std::size_t k = 0; k < count; ++k)
    out.push_back(gaussian_rotation(rng));
  return out;
}

inline double angle_between_lines(const Vec3& a, const Vec3& b)
{
  const double cosine = std::abs(a.normalized().dot(b.normalized()));
  return std::acos(std::min(1.0, cosine));
}

inline double point_line_distance(const Vec3& point, const Vec3& on_line, const Vec3& direction)
{
  const Vec3 d = direction.normalized();
  const Vec3 offset = point - on_line;
  return (offset - d * d.dot(offset)).norm();
}

/// Calls visit(edges) for every labelled spanning tree on m nodes, decoded
/// from all m^(m-2) Pruefer sequences.
inline void for_each_spanning_tree(std::size_t m,
                                   const std::function<void(const std::vector<std::pair<std::size_t, std::size_t>>&)>& visit)
{
  if (m < 2)
    return;
  if (m == 2)
  {
    visit({{0, 1}});
    return;
  }
  std::vector<std::size_t> sequence(m - 2, 0);
  while (true)
  {
    std::vector<std::size_t> degree(m, 1);
    for (std::size_t v : sequence)
      ++degree[v];
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t v : sequence)
    {
      for (std::size_t leaf = 0; leaf < m; ++leaf)
      {
        if (degree[leaf] == 1)
        {
          edges.emplace_back(std::min(leaf, v), std::max(leaf, v));
          --degree[leaf];
          --degree[v];
          break;
        }
      }
    }
    std::vector<std::size_t> last;
    for (std::size_t v = 0; v < m; ++v)
      if (degree[v] == 1)
        last.push_back(v);
    edges.emplace_back(last[0], last[1]);
    std::sort(edges.begin(), edges.end());
    visit(edges);

    std::size_t pos = 0;
    while (pos < sequence.size() && ++sequence[pos] == m)
      sequence[pos++] = 0;
    if (pos == sequence.size())
      break;
  }
}

/// Exhaustive minimum over all spanning trees of sum(weight(i, j)), summed in
/// sorted edge order. Also reports how many trees were visited.
inline std::pair<double, std::size_t> brute_force_mst(std::size_t m,
                                                      const std::function<double(std::size_t, std::size_t)>& weight)
{
  double best = std::numeric_limits<double>::infinity();
  std::size_t trees = 0;
  for_each_spanning_tree(m, [&](const auto& edges) {
    ++trees;
    double total = 0.0;
    for (const auto& [i, j] : edges)
      total += weight(i, j);
    best = std::min(best, total);
  });
  return {best, trees};
}

} // namespace skelfit::testing
