/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "skelfit/capture.hpp"
#include "skelfit/transform.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace skelfit
{

enum class JointClass
{
  Spherical,
  Hinge,
  Rigid,
};

std::string_view to_string(JointClass classification);
std::optional<JointClass> joint_class_from_string(std::string_view text);

using Vec6 = Eigen::Matrix<double, 6, 1>;

inline constexpr double kDefaultRankTolerance = 1e-5;

/// Stacked constraint system for one body pair: one 3x6 block row per frame.
///
/// Block k of the matrix is [R_child(k) | -R_parent(k)] and block k of the
/// right-hand side is -(t_child(k) - t_parent(k)), so a perfect joint u = [c; l]
/// satisfies R_child c + t_child = R_parent l + t_parent in every frame.
struct JointSystem
{
  Eigen::MatrixXd matrix; // 3n x 6
  Eigen::VectorXd rhs;    // 3n
};

JointSystem assemble_system(const CaptureSession& session, std::size_t child, std::size_t parent);

/// Fit of a fixed joint between a child (outboard) and parent (inboard) body.
struct JointFit
{
  std::size_t child = 0;
  std::size_t parent = 0;
  Vec3 c = Vec3::Zero(); // joint in the child frame, meters
  Vec3 l = Vec3::Zero(); // joint in the parent frame, meters
  std::array<double, 6> singular_values{};
  std::vector<double> residual_per_frame; // meters
  double epsilon = 0.0;                   // RMS of residual_per_frame
  JointClass classification = JointClass::Spherical;
  std::size_t deficient_count = 0;
  std::optional<Vec3> hinge_axis_child;
  std::optional<Vec3> hinge_axis_parent;

  Vec6 u() const
  {
    Vec6 stacked;
    stacked << c, l;
    return stacked;
  }
};

struct RankClass
{
  JointClass classification;
  std::size_t deficient_count;
};

/// Counts singular values below rank_tol * sigma_max. Throws Error{AllZero}
/// when the largest singular value is zero.
RankClass classify_rank(const std::array<double, 6>& singular_values, double rank_tol);

/// Minimum-norm least-squares joint fit via SVD of the stacked system.
///
/// Directions whose singular value falls below rank_tol * sigma_max are
/// dropped from the solve, which selects the solution closest to the origin
/// of both body frames. For a single deficient direction the null-space
/// vector of V is split into its child-frame half (first three components)
/// and parent-frame half and each is returned normalized as the hinge axis.
JointFit solve_joint(const CaptureSession& session, std::size_t child, std::size_t parent,
                     double rank_tol = kDefaultRankTolerance);

/// Same as solve_joint on an already assembled system.
JointFit solve_system(const JointSystem& system, std::size_t child, std::size_t parent,
                      double rank_tol = kDefaultRankTolerance);

/// Per-frame gap between the two images of the joint, ||Q_k u - d_k||.
std::vector<double> joint_residuals(const JointSystem& system, const Vec6& u);

} // namespace skelfit
