/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "skelfit/capture.hpp"
#include "skelfit/hierarchy.hpp"
#include "skelfit/joint_solver.hpp"
#include "skelfit/transform.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace skelfit
{

/// One body of a fitted skeleton together with its inboard joint.
///
/// For the root, parent is empty and the joint fields are placeholders
/// (zero vectors, zero error, spherical).
struct BodyModel
{
  std::size_t id = 0;
  std::optional<std::string> label;
  std::optional<std::size_t> parent;
  Vec3 c = Vec3::Zero(); // joint in this body's frame
  Vec3 l = Vec3::Zero(); // joint in the parent's frame
  double epsilon = 0.0;
  JointClass classification = JointClass::Spherical;
  std::optional<Vec3> axis_child;
  std::optional<Vec3> axis_parent;
};

struct SkeletonModel
{
  std::size_t root = 0;
  std::vector<BodyModel> bodies; // indexed by body id

  /// Throws Error{InvalidSpec} when ids, parents or the root are inconsistent.
  ParentMap parent_map() const;
};

struct FitOptions
{
  double rank_tol = kDefaultRankTolerance;
  std::optional<std::size_t> root;
  std::size_t threads = 0;
  double loop_factor = kDefaultLoopFactor;
};

struct SkeletonFit
{
  SkeletonModel model;
  std::optional<HierarchyResult> hierarchy; // present when it was inferred
  std::vector<JointFit> joints;             // one per non-root body, in body order
};

/// Fits every joint of the given hierarchy, or infers the hierarchy first
/// when none is supplied. A supplied hierarchy is re-rooted when
/// options.root names a different body.
SkeletonFit fit_skeleton(const CaptureSession& session, const std::optional<ParentMap>& hierarchy,
                         const FitOptions& options = {});

ParentMap reroot(const ParentMap& map, std::size_t root);

/// Distance between two joints sharing a body frame. Joints are named by
/// their child (outboard) body. Throws Error{NotAdjacent} otherwise.
double limb_length(const SkeletonModel& model, std::size_t joint_a, std::size_t joint_b);

struct LimbLength
{
  std::size_t joint_a = 0;
  std::size_t joint_b = 0;
  std::size_t shared_body = 0;
  double length_m = 0.0;
};

/// Every joint pair that shares a body, ordered by (shared body, joint_a, joint_b).
std::vector<LimbLength> limb_table(const SkeletonModel& model);

/// Per body, the rotation of that body relative to its parent in each frame.
/// The root entry is ignored.
using JointRotations = std::vector<std::vector<Mat3>>;

/// World placements, indexed [body][frame], of the articulated model driven by
/// root placements and joint rotations. Each joint's two images coincide.
std::vector<std::vector<Transform>> forward_kinematics(const SkeletonModel& model,
                                                       std::span<const Transform> root_world,
                                                       const JointRotations& rotations);

struct ReconstructOptions
{
  bool orthonormalize = false; // project relative rotations onto SO(3)
};

/// Replays the session through the model: relative rotations are taken from
/// the data, the root keeps its raw placement, and all joints stay closed.
/// Session bodies not in the model pass through unchanged.
CaptureSession reconstruct(const SkeletonModel& model, const CaptureSession& session,
                           const ReconstructOptions& options = {});

/// gaps[body][frame] = distance between the joint as seen from the body and
/// from its parent. Empty rows for the root and for bodies outside the model.
std::vector<std::vector<double>> joint_gaps(const SkeletonModel& model, const CaptureSession& session);
double max_joint_gap(const SkeletonModel& model, const CaptureSession& session);

std::string skeleton_to_json(const SkeletonModel& model);
SkeletonModel skeleton_from_json(const std::string& text);
void save_skeleton(const std::filesystem::path& path, const SkeletonModel& model);
SkeletonModel load_skeleton(const std::filesystem::path& path);

} // namespace skelfit
