/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/synth.hpp"

#include "skelfit/error.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace skelfit
{

namespace
{

constexpr std::uint64_t kMotionStream = 0x6d6f74696f6eULL;
constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream)
{
  std::seed_seq sequence{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                         static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(sequence);
}

Error invalid(const std::string& what)
{
  return Error(ErrorKind::InvalidSpec, what);
}

Mat3 perturbation(std::mt19937_64& engine, double sigma_r)
{
  if (sigma_r <= 0.0)
    return Mat3::Identity();
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec3 axis;
  do
  {
    axis = Vec3(gauss(engine), gauss(engine), gauss(engine));
  } while (axis.norm() < 1e-12);
  const double angle = std::abs(gauss(engine) * sigma_r);
  return axis_angle(axis, angle);
}

} // namespace

Mat3 uniform_rotation(std::mt19937_64& engine, double max_angle)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u1 = unit(engine);
  const double u2 = unit(engine);
  const double u3 = unit(engine);
  const double two_pi = 2.0 * std::numbers::pi;
  Eigen::Quaterniond q(std::sqrt(u1) * std::cos(two_pi * u3), std::sqrt(1.0 - u1) * std::sin(two_pi * u2),
                       std::sqrt(1.0 - u1) * std::cos(two_pi * u2), std::sqrt(u1) * std::sin(two_pi * u3));
  if (max_angle >= std::numbers::pi)
    return q.normalized().toRotationMatrix();

  Eigen::AngleAxisd aa(q.normalized());
  double angle = aa.angle();
  if (angle > std::numbers::pi)
    angle = 2.0 * std::numbers::pi - angle;
  const double scaled = angle * max_angle / std::numbers::pi;
  return Eigen::AngleAxisd(scaled, aa.axis()).toRotationMatrix();
}

void check_spec(const SynthSpec& spec)
{
  const std::size_t m = spec.bodies.size();
  if (m == 0)
    throw invalid("spec has no bodies");
  if (spec.frame_count == 0)
    throw invalid("frame_count must be positive");
  if (!(spec.noise.sigma_t >= 0.0) || !(spec.noise.sigma_r >= 0.0))
    throw invalid("noise standard deviations must be non-negative");
  if (!(spec.output_scale > 0.0) || !std::isfinite(spec.output_scale))
    throw invalid("output_scale must be positive");
  if (!(spec.root.position_extent >= 0.0))
    throw invalid("root position_extent must be non-negative");
  if (!is_invertible(spec.root.placement.linear))
    throw invalid("root placement is singular");

  std::vector<std::optional<std::size_t>> parents;
  for (const SynthBody& body : spec.bodies)
    parents.push_back(body.parent);
  try
  {
    ParentMap map(parents);
  }
  catch (const Error& error)
  {
    throw invalid(error.what());
  }

  for (std::size_t i = 0; i < m; ++i)
  {
    const Excitation& e = spec.bodies[i].excitation;
    if (!spec.bodies[i].parent)
      continue;
    if (!is_orthonormal(e.rest, 1e-9))
      throw invalid("body " + std::to_string(i) + ": rest rotation is not a rotation");
    switch (e.kind)
    {
      case ExcitationKind::Spherical:
        if (!(e.cone_rad > 0.0))
          throw invalid("body " + std::to_string(i) + ": spherical cone must be positive");
        break;
      case ExcitationKind::Hinge:
        if (!(e.axis.norm() > 0.0) || !(e.range_rad > 0.0))
          throw invalid("body " + std::to_string(i) + ": hinge needs a non-zero axis and range");
        break;
      case ExcitationKind::Fixed:
        break;
      case ExcitationKind::Scripted:
        if (e.script.size() != spec.frame_count)
          throw invalid("body " + std::to_string(i) + ": script needs one rotation per frame");
        for (const Mat3& r : e.script)
          if (!is_invertible(r))
            throw invalid("body " + std::to_string(i) + ": scripted rotation is singular");
        break;
    }
  }
}

SynthResult generate(const SynthSpec& spec)
{
  check_spec(spec);

  const std::size_t m = spec.bodies.size();
  const std::size_t n = spec.frame_count;

  SkeletonModel truth;
  truth.bodies.resize(m);
  for (std::size_t i = 0; i < m; ++i)
  {
    const SynthBody& source = spec.bodies[i];
    BodyModel& body = truth.bodies[i];
    body.id = i;
    body.label = source.label;
    body.parent = source.parent;
    if (!source.parent)
    {
      truth.root = i;
      continue;
    }
    body.c = source.c;
    body.l = source.l;
    switch (source.excitation.kind)
    {
      case ExcitationKind::Hinge:
        body.classification = JointClass::Hinge;
        body.axis_child = source.excitation.axis.normalized();
        body.axis_parent = source.excitation.rest * *body.axis_child;
        break;
      case ExcitationKind::Fixed:
        body.classification = JointClass::Rigid;
        break;
      case ExcitationKind::Spherical:
      case ExcitationKind::Scripted:
        body.classification = JointClass::Spherical;
        break;
    }
  }

  std::mt19937_64 motion = make_engine(spec.seed, kMotionStream);
  std::uniform_real_distribution<double> box(-spec.root.position_extent, spec.root.position_extent);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  std::vector<Transform> root_world(n);
  JointRotations rotations(m);
  for (std::size_t i = 0; i < m; ++i)
    if (spec.bodies[i].parent)
      rotations[i].resize(n);

  for (std::size_t k = 0; k < n; ++k)
  {
    if (spec.root.motion == RootMotion::Random)
    {
      root_world[k].linear = uniform_rotation(motion);
      root_world[k].translation = Vec3(box(motion), box(motion), box(motion));
    }
    else
    {
      root_world[k] = spec.root.placement;
    }

    for (std::size_t i = 0; i < m; ++i)
    {
      const SynthBody& body = spec.bodies[i];
      if (!body.parent)
        continue;
      const Excitation& e = body.excitation;
      Mat3 joint_motion = Mat3::Identity();
      switch (e.kind)
      {
        case ExcitationKind::Spherical:
          joint_motion = uniform_rotation(motion, e.cone_rad);
          break;
        case ExcitationKind::Hinge:
          joint_motion = axis_angle(e.axis, e.range_rad * unit(motion));
          break;
        case ExcitationKind::Fixed:
          break;
        case ExcitationKind::Scripted:
          joint_motion = e.script[k];
          break;
      }
      rotations[i][k] = e.rest * joint_motion;
    }
  }

  std::vector<std::vector<Transform>> world = forward_kinematics(truth, root_world, rotations);

  std::mt19937_64 noise = make_engine(spec.seed, kNoiseStream);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<BodyTrack> tracks(m);
  for (std::size_t i = 0; i < m; ++i)
  {
    tracks[i].id = i;
    tracks[i].label = spec.bodies[i].label;
  }
  for (std::size_t k = 0; k < n; ++k)
  {
    for (std::size_t i = 0; i < m; ++i)
    {
      Transform sample = world[i][k];
      if (spec.noise.sigma_t > 0.0)
        sample.translation += spec.noise.sigma_t * Vec3(gauss(noise), gauss(noise), gauss(noise));
      if (spec.noise.sigma_r > 0.0)
        sample.linear = perturbation(noise, spec.noise.sigma_r) * sample.linear;
      sample.translation *= spec.output_scale;
      tracks[i].frames.push_back(sample);
    }
  }

  SessionInfo info;
  return {CaptureSession(std::move(tracks), info), std::move(truth), std::move(root_world),
          std::move(rotations)};
}

} // namespace skelfit
