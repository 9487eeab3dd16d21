/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <Eigen/Core>

namespace skelfit
{

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Affine placement of a body: x_world = linear * x_body + translation.
///
/// The linear part is any invertible 3x3 matrix. Sensor data is normally a
/// rotation, but noisy hardware can report slightly non-orthonormal matrices
/// and those are accepted as-is. Translations are in meters.
struct Transform
{
  Mat3 linear = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static Transform identity() { return {}; }
  static Transform translation_only(const Vec3& t) { return {Mat3::Identity(), t}; }
};

// |det R| must exceed this fraction of ||R||_F^3.
inline constexpr double kSingularDeterminantRatio = 1e-12;

// Orthonormality tolerance used when input claims to carry rotations.
inline constexpr double kOrthonormalWarnTolerance = 1e-3;

Vec3 apply(const Transform& transform, const Vec3& point);

/// Throws Error{SingularRotation} when the linear part is (numerically) singular.
Transform invert(const Transform& transform);

/// compose(a, b) applies b first, then a.
Transform compose(const Transform& a, const Transform& b);

/// Placement of body i expressed in body j's frame, from both world placements.
Transform relative(const Transform& world_i, const Transform& world_j);

bool is_invertible(const Mat3& linear);

/// max |R^T R - I| entry; zero for an exact rotation.
double orthonormality_error(const Mat3& linear);

bool is_orthonormal(const Mat3& linear, double tolerance = 1e-6);

/// Nearest proper rotation in the Frobenius sense (polar decomposition).
Mat3 nearest_rotation(const Mat3& linear);

Mat3 axis_angle(const Vec3& axis, double angle);

double max_abs_difference(const Transform& a, const Transform& b);

} // namespace skelfit
