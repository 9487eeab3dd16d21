/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/joint_solver.hpp"

#include "skelfit/error.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace skelfit
{

std::string_view to_string(JointClass classification)
{
  switch (classification)
  {
    case JointClass::Spherical:
      return "spherical";
    case JointClass::Hinge:
      return "hinge";
    case JointClass::Rigid:
      return "rigid";
  }
  return "spherical";
}

std::optional<JointClass> joint_class_from_string(std::string_view text)
{
  if (text == "spherical")
    return JointClass::Spherical;
  if (text == "hinge")
    return JointClass::Hinge;
  if (text == "rigid")
    return JointClass::Rigid;
  return std::nullopt;
}

JointSystem assemble_system(const CaptureSession& session, std::size_t child, std::size_t parent)
{
  const std::size_t m = session.body_count();
  if (child >= m || parent >= m)
    throw Error(ErrorKind::InvalidSpec, "body index out of range (child " + std::to_string(child) +
                                          ", parent " + std::to_string(parent) + ", " +
                                          std::to_string(m) + " bodies)");
  if (child == parent)
    throw Error(ErrorKind::InvalidSpec, "child and parent must differ").at_body(child);

  const std::size_t n = session.frame_count();
  const auto rows = static_cast<Eigen::Index>(3 * n);

  JointSystem system{Eigen::MatrixXd(rows, 6), Eigen::VectorXd(rows)};
  for (std::size_t k = 0; k < n; ++k)
  {
    const Transform& outboard = session.world(child, k);
    const Transform& inboard = session.world(parent, k);
    const auto row = static_cast<Eigen::Index>(3 * k);
    system.matrix.block<3, 3>(row, 0) = outboard.linear;
    system.matrix.block<3, 3>(row, 3) = -inboard.linear;
    system.rhs.segment<3>(row) = -(outboard.translation - inboard.translation);
  }
  return system;
}

RankClass classify_rank(const std::array<double, 6>& singular_values, double rank_tol)
{
  const double largest = singular_values[0];
  if (!(largest > 0.0))
    throw Error(ErrorKind::AllZero, "largest singular value is zero");

  std::size_t deficient = 0;
  for (double sigma : singular_values)
    if (sigma < rank_tol * largest)
      ++deficient;

  if (deficient == 0)
    return {JointClass::Spherical, 0};
  if (deficient == 1)
    return {JointClass::Hinge, 1};
  return {JointClass::Rigid, deficient};
}

std::vector<double> joint_residuals(const JointSystem& system, const Vec6& u)
{
  const Eigen::VectorXd gap = system.matrix * u - system.rhs;
  const auto n = gap.size() / 3;
  std::vector<double> residuals(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k)
    residuals[static_cast<std::size_t>(k)] = gap.segment<3>(3 * k).norm();
  return residuals;
}

JointFit solve_system(const JointSystem& system, std::size_t child, std::size_t parent, double rank_tol)
{
  if (!(rank_tol > 0.0 && rank_tol < 1.0))
    throw Error(ErrorKind::InvalidSpec, "rank tolerance must lie in (0, 1)");
  if (system.matrix.cols() != 6 || system.matrix.rows() != system.rhs.size() ||
      system.matrix.rows() % 3 != 0)
    throw Error(ErrorKind::InvalidSpec, "system must be 3n x 6 with a matching right-hand side");

  const auto frames = static_cast<std::size_t>(system.matrix.rows() / 3);
  if (frames < 2)
    throw Error(ErrorKind::DegenerateInput,
                "need at least 2 frames to fit a joint, got " + std::to_string(frames));

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(system.matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();

  JointFit fit;
  fit.child = child;
  fit.parent = parent;
  for (std::size_t i = 0; i < 6; ++i)
    fit.singular_values[i] = sigma(static_cast<Eigen::Index>(i));

  const RankClass rank = classify_rank(fit.singular_values, rank_tol);
  fit.classification = rank.classification;
  fit.deficient_count = rank.deficient_count;

  // Minimum-norm solution: skip the directions treated as null.
  const Eigen::VectorXd projected = svd.matrixU().transpose() * system.rhs;
  Vec6 u = Vec6::Zero();
  const auto kept = static_cast<Eigen::Index>(6 - rank.deficient_count);
  for (Eigen::Index i = 0; i < kept; ++i)
    u += svd.matrixV().col(i) * (projected(i) / sigma(i));

  fit.c = u.head<3>();
  fit.l = u.tail<3>();

  fit.residual_per_frame = joint_residuals(system, u);
  double sum_sq = 0.0;
  for (double r : fit.residual_per_frame)
    sum_sq += r * r;
  fit.epsilon = std::sqrt(sum_sq / static_cast<double>(frames));

  if (rank.classification == JointClass::Hinge)
  {
    const Vec6 null_direction = svd.matrixV().col(5);
    Vec3 axis_child = null_direction.head<3>().normalized();
    Vec3 axis_parent = null_direction.tail<3>().normalized();

    // Sign is arbitrary in the SVD; fix it so the dominant child component is positive.
    Eigen::Index dominant = 0;
    axis_child.cwiseAbs().maxCoeff(&dominant);
    if (axis_child(dominant) < 0.0)
    {
      axis_child = -axis_child;
      axis_parent = -axis_parent;
    }
    fit.hinge_axis_child = axis_child;
    fit.hinge_axis_parent = axis_parent;
  }

  return fit;
}

JointFit solve_joint(const CaptureSession& session, std::size_t child, std::size_t parent, double rank_tol)
{
  if (session.frame_count() < 2)
    throw Error(ErrorKind::DegenerateInput, "need at least 2 frames to fit a joint, got " +
                                              std::to_string(session.frame_count()));
  return solve_system(assemble_system(session, child, parent), child, parent, rank_tol);
}

} // namespace skelfit
