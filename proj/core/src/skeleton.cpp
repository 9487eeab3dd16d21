/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/skeleton.hpp"

#include "skelfit/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <queue>
#include <string>

namespace skelfit
{

ParentMap SkeletonModel::parent_map() const
{
  std::vector<std::optional<std::size_t>> parents(bodies.size());
  for (std::size_t i = 0; i < bodies.size(); ++i)
  {
    if (bodies[i].id != i)
      throw Error(ErrorKind::InvalidSpec, "skeleton body ids must be 0..m-1 in order").at_body(i);
    parents[i] = bodies[i].parent;
  }
  ParentMap map(std::move(parents));
  if (map.root() != root)
    throw Error(ErrorKind::InvalidSpec, "skeleton root " + std::to_string(root) +
                                          " does not match the parentless body " +
                                          std::to_string(map.root()));
  return map;
}

ParentMap reroot(const ParentMap& map, std::size_t root)
{
  const std::size_t m = map.size();
  if (root >= m)
    throw Error(ErrorKind::InvalidSpec, "root " + std::to_string(root) + " out of range").at_body(root);

  std::vector<std::vector<std::size_t>> adjacency(m);
  for (const auto& [a, b] : map.edges())
  {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  std::vector<std::optional<std::size_t>> parents(m);
  std::vector<bool> visited(m, false);
  std::queue<std::size_t> pending;
  pending.push(root);
  visited[root] = true;
  while (!pending.empty())
  {
    const std::size_t body = pending.front();
    pending.pop();
    for (std::size_t next : adjacency[body])
    {
      if (visited[next])
        continue;
      visited[next] = true;
      parents[next] = body;
      pending.push(next);
    }
  }
  return ParentMap(std::move(parents));
}

SkeletonFit fit_skeleton(const CaptureSession& session, const std::optional<ParentMap>& hierarchy,
                         const FitOptions& options)
{
  const std::size_t m = session.body_count();
  if (m < 2)
    throw Error(ErrorKind::DegenerateInput, "need at least 2 bodies to fit a skeleton");

  SkeletonFit result;
  ParentMap topology;
  if (hierarchy)
  {
    if (hierarchy->size() != m)
      throw Error(ErrorKind::ModelMismatch, "hierarchy covers " + std::to_string(hierarchy->size()) +
                                              " bodies but the session has " + std::to_string(m));
    topology = options.root ? reroot(*hierarchy, *options.root) : *hierarchy;
  }
  else
  {
    const FitMatrix fits = build_fit_matrix(session, {options.rank_tol, options.threads, false});
    result.hierarchy = infer_hierarchy(fits, {options.root, options.loop_factor});
    topology = result.hierarchy->parent;
  }

  result.model.root = topology.root();
  result.model.bodies.resize(m);
  for (std::size_t i = 0; i < m; ++i)
  {
    BodyModel& body = result.model.bodies[i];
    body.id = i;
    body.label = session.body(i).label;
    body.parent = topology.parent(i);
    if (!body.parent)
      continue;

    JointFit fit = solve_joint(session, i, *body.parent, options.rank_tol);
    body.c = fit.c;
    body.l = fit.l;
    body.epsilon = fit.epsilon;
    body.classification = fit.classification;
    body.axis_child = fit.hinge_axis_child;
    body.axis_parent = fit.hinge_axis_parent;
    result.joints.push_back(std::move(fit));
  }
  return result;
}

namespace
{

// Location of the joint named by its child body, expressed in the frame of body.
std::optional<Vec3> joint_in_frame(const SkeletonModel& model, std::size_t joint, std::size_t body)
{
  const BodyModel& child = model.bodies.at(joint);
  if (!child.parent)
    return std::nullopt;
  if (body == joint)
    return child.c;
  if (body == *child.parent)
    return child.l;
  return std::nullopt;
}

} // namespace

double limb_length(const SkeletonModel& model, std::size_t joint_a, std::size_t joint_b)
{
  const std::size_t m = model.bodies.size();
  if (joint_a >= m || joint_b >= m)
    throw Error(ErrorKind::NotAdjacent, "joint index out of range");
  if (joint_a == joint_b)
    throw Error(ErrorKind::NotAdjacent, "a limb needs two distinct joints");

  const BodyModel& a = model.bodies[joint_a];
  const BodyModel& b = model.bodies[joint_b];
  if (!a.parent || !b.parent)
    throw Error(ErrorKind::NotAdjacent, "the root body has no inboard joint");

  for (std::size_t frame : {joint_a, *a.parent})
  {
    const auto pa = joint_in_frame(model, joint_a, frame);
    const auto pb = joint_in_frame(model, joint_b, frame);
    if (pa && pb)
      return (*pa - *pb).norm();
  }
  throw Error(ErrorKind::NotAdjacent, "joints " + std::to_string(joint_a) + " and " +
                                        std::to_string(joint_b) + " share no body");
}

std::vector<LimbLength> limb_table(const SkeletonModel& model)
{
  const std::size_t m = model.bodies.size();
  std::vector<LimbLength> table;
  for (std::size_t body = 0; body < m; ++body)
  {
    // Joints touching this body: its own inboard joint and its children's.
    std::vector<std::size_t> joints;
    if (model.bodies[body].parent)
      joints.push_back(body);
    for (std::size_t i = 0; i < m; ++i)
      if (model.bodies[i].parent == body)
        joints.push_back(i);
    std::sort(joints.begin(), joints.end());

    for (std::size_t x = 0; x < joints.size(); ++x)
      for (std::size_t y = x + 1; y < joints.size(); ++y)
      {
        const Vec3 pa = *joint_in_frame(model, joints[x], body);
        const Vec3 pb = *joint_in_frame(model, joints[y], body);
        table.push_back({joints[x], joints[y], body, (pa - pb).norm()});
      }
  }
  return table;
}

std::vector<std::vector<Transform>> forward_kinematics(const SkeletonModel& model,
                                                       std::span<const Transform> root_world,
                                                       const JointRotations& rotations)
{
  const ParentMap topology = model.parent_map();
  const std::size_t m = model.bodies.size();
  const std::size_t n = root_world.size();

  for (std::size_t i = 0; i < m; ++i)
  {
    if (!model.bodies[i].parent)
      continue;
    if (i >= rotations.size() || rotations[i].size() != n)
      throw Error(ErrorKind::MissingRotation, "body " + std::to_string(i) + " needs " +
                                                std::to_string(n) + " joint rotations")
        .at_body(i);
  }

  std::vector<std::vector<Transform>> world(m, std::vector<Transform>(n));
  for (std::size_t body : topology.topological_order())
  {
    const BodyModel& node = model.bodies[body];
    if (!node.parent)
    {
      std::copy(root_world.begin(), root_world.end(), world[body].begin());
      continue;
    }
    const std::vector<Transform>& inboard = world[*node.parent];
    for (std::size_t k = 0; k < n; ++k)
    {
      const Mat3& joint_rotation = rotations[body][k];
      const Transform& parent_world = inboard[k];
      // x_parent = R (x_child - c) + l
      world[body][k].linear = parent_world.linear * joint_rotation;
      world[body][k].translation =
        parent_world.linear * (node.l - joint_rotation * node.c) + parent_world.translation;
    }
  }
  return world;
}

CaptureSession reconstruct(const SkeletonModel& model, const CaptureSession& session,
                           const ReconstructOptions& options)
{
  const ParentMap topology = model.parent_map();
  const std::size_t k_bodies = model.bodies.size();
  const std::size_t n = session.frame_count();
  if (k_bodies > session.body_count())
    throw Error(ErrorKind::ModelMismatch, "skeleton has " + std::to_string(k_bodies) +
                                            " bodies but the session only " +
                                            std::to_string(session.body_count()));

  JointRotations rotations(k_bodies);
  for (std::size_t i = 0; i < k_bodies; ++i)
  {
    const auto parent = topology.parent(i);
    if (!parent)
      continue;
    rotations[i].resize(n);
    for (std::size_t k = 0; k < n; ++k)
    {
      Mat3 rel = session.world(*parent, k).linear.inverse() * session.world(i, k).linear;
      rotations[i][k] = options.orthonormalize ? nearest_rotation(rel) : rel;
    }
  }

  const std::vector<Transform>& root_frames = session.body(topology.root()).frames;
  auto world = forward_kinematics(model, root_frames, rotations);

  std::vector<BodyTrack> tracks(session.bodies().begin(), session.bodies().end());
  for (std::size_t i = 0; i < k_bodies; ++i)
    tracks[i].frames = std::move(world[i]);
  return CaptureSession(std::move(tracks), session.info());
}

std::vector<std::vector<double>> joint_gaps(const SkeletonModel& model, const CaptureSession& session)
{
  const ParentMap topology = model.parent_map();
  if (model.bodies.size() > session.body_count())
    throw Error(ErrorKind::ModelMismatch, "skeleton has more bodies than the session");

  std::vector<std::vector<double>> gaps(session.body_count());
  for (std::size_t i = 0; i < model.bodies.size(); ++i)
  {
    const BodyModel& body = model.bodies[i];
    if (!body.parent)
      continue;
    gaps[i].resize(session.frame_count());
    for (std::size_t k = 0; k < session.frame_count(); ++k)
      gaps[i][k] = (apply(session.world(i, k), body.c) - apply(session.world(*body.parent, k), body.l)).norm();
  }
  return gaps;
}

double max_joint_gap(const SkeletonModel& model, const CaptureSession& session)
{
  double worst = 0.0;
  for (const auto& row : joint_gaps(model, session))
    for (double gap : row)
      worst = std::max(worst, gap);
  return worst;
}

} // namespace skelfit
