/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/transform.hpp"

#include "skelfit/error.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace skelfit
{

Vec3 apply(const Transform& transform, const Vec3& point)
{
  return transform.linear * point + transform.translation;
}

bool is_invertible(const Mat3& linear)
{
  const double norm = linear.norm();
  if (!std::isfinite(norm) || norm == 0.0)
    return false;
  return std::abs(linear.determinant()) > kSingularDeterminantRatio * norm * norm * norm;
}

Transform invert(const Transform& transform)
{
  if (!is_invertible(transform.linear))
    throw Error(ErrorKind::SingularRotation, "linear part is not invertible");

  Transform inverse;
  inverse.linear = transform.linear.inverse();
  inverse.translation = inverse.linear * (-transform.translation);
  return inverse;
}

Transform compose(const Transform& a, const Transform& b)
{
  return {a.linear * b.linear, a.linear * b.translation + a.translation};
}

Transform relative(const Transform& world_i, const Transform& world_j)
{
  return compose(invert(world_j), world_i);
}

double orthonormality_error(const Mat3& linear)
{
  return (linear.transpose() * linear - Mat3::Identity()).cwiseAbs().maxCoeff();
}

bool is_orthonormal(const Mat3& linear, double tolerance)
{
  return orthonormality_error(linear) <= tolerance && linear.determinant() > 0.0;
}

Mat3 nearest_rotation(const Mat3& linear)
{
  Eigen::JacobiSVD<Mat3> svd(linear, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 correction = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0)
    correction(2, 2) = -1.0;
  return svd.matrixU() * correction * svd.matrixV().transpose();
}

Mat3 axis_angle(const Vec3& axis, double angle)
{
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

double max_abs_difference(const Transform& a, const Transform& b)
{
  return std::max((a.linear - b.linear).cwiseAbs().maxCoeff(),
                  (a.translation - b.translation).cwiseAbs().maxCoeff());
}

} // namespace skelfit
