/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/synth.hpp"

#include <cmath>

namespace skelfit
{

namespace
{

SynthBody root_body(std::string label)
{
  SynthBody body;
  body.label = std::move(label);
  return body;
}

SynthBody spherical(std::string label, std::size_t parent, const Vec3& l, const Vec3& c, double cone_rad)
{
  SynthBody body;
  body.label = std::move(label);
  body.parent = parent;
  body.l = l;
  body.c = c;
  body.excitation.kind = ExcitationKind::Spherical;
  body.excitation.cone_rad = cone_rad;
  return body;
}

// Linkage measurements, meters.
constexpr double kNeckLeftShoulder = 0.390;
constexpr double kNeckRightShoulder = 0.397;
constexpr double kBetweenShoulders = 0.343;
constexpr double kRightUpperArm = 0.286;
constexpr double kLeftUpperArm = 0.314;

} // namespace

SynthSpec two_body_spec(const Vec3& c, const Vec3& l, std::size_t frames)
{
  SynthSpec spec;
  spec.frame_count = frames;
  spec.bodies.push_back(root_body("parent"));
  spec.bodies.push_back(spherical("child", 0, l, c, 3.141592653589793));
  return spec;
}

SynthSpec hinge_pair_spec(const Vec3& axis_child, const Vec3& c, const Vec3& l, std::size_t frames)
{
  SynthSpec spec;
  spec.frame_count = frames;
  spec.bodies.push_back(root_body("parent"));
  SynthBody child;
  child.label = "child";
  child.parent = 0;
  child.c = c;
  child.l = l;
  child.excitation.kind = ExcitationKind::Hinge;
  child.excitation.axis = axis_child.normalized();
  child.excitation.range_rad = 1.5;
  child.excitation.rest = axis_angle(Vec3(1.0, 2.0, 3.0), 0.7);
  spec.bodies.push_back(child);
  return spec;
}

SynthSpec rigid_pair_spec(double distance_m, std::size_t frames)
{
  SynthSpec spec;
  spec.frame_count = frames;
  spec.bodies.push_back(root_body("sensor_a"));
  SynthBody other;
  other.label = "sensor_b";
  other.parent = 0;
  other.c = Vec3::Zero();
  other.l = Vec3(distance_m, 0.0, 0.0);
  other.excitation.kind = ExcitationKind::Fixed;
  other.excitation.rest = axis_angle(Vec3(0.0, 1.0, 1.0), 0.4);
  spec.bodies.push_back(other);
  return spec;
}

SynthSpec wooden_linkage_spec(std::size_t frames)
{
  // Shoulders on the x axis of the chest, neck placed to honour both
  // neck-shoulder distances; everything offset from the chest sensor.
  const double half = 0.5 * kBetweenShoulders;
  const double neck_x =
    (kNeckLeftShoulder * kNeckLeftShoulder - kNeckRightShoulder * kNeckRightShoulder) / (4.0 * half);
  const double neck_y = std::sqrt(kNeckLeftShoulder * kNeckLeftShoulder - (neck_x + half) * (neck_x + half));
  const Vec3 sensor_offset(0.01, -0.20, 0.06);
  const Vec3 left_shoulder = Vec3(-half, 0.0, 0.0) + sensor_offset;
  const Vec3 right_shoulder = Vec3(half, 0.0, 0.0) + sensor_offset;
  const Vec3 neck = Vec3(neck_x, neck_y, 0.0) + sensor_offset;

  const double cone = 1.2;
  SynthSpec spec;
  spec.frame_count = frames;
  spec.bodies.push_back(root_body("chest"));
  spec.bodies.push_back(spherical("head", 0, neck, Vec3(0.0, -0.12, 0.03), cone));
  spec.bodies.push_back(
    spherical("left_upper_arm", 0, left_shoulder, Vec3(-0.5 * kLeftUpperArm, 0.0, 0.03), cone));
  spec.bodies.push_back(
    spherical("right_upper_arm", 0, right_shoulder, Vec3(-0.5 * kRightUpperArm, 0.0, 0.03), cone));
  spec.bodies.push_back(spherical("left_forearm", 2, Vec3(0.5 * kLeftUpperArm, 0.0, 0.03),
                                  Vec3(-0.12, 0.01, 0.025), cone));
  spec.bodies.push_back(spherical("right_forearm", 3, Vec3(0.5 * kRightUpperArm, 0.0, 0.03),
                                  Vec3(-0.12, 0.01, 0.025), cone));
  return spec;
}

std::vector<NamedLimb> wooden_linkage_limbs()
{
  return {
    {"neck-left_shoulder", 1, 2, kNeckLeftShoulder},
    {"neck-right_shoulder", 1, 3, kNeckRightShoulder},
    {"between_shoulders", 2, 3, kBetweenShoulders},
    {"right_upper_arm", 3, 5, kRightUpperArm},
    {"left_upper_arm", 2, 4, kLeftUpperArm},
  };
}

SynthSpec humanoid16_spec(std::size_t frames)
{
  const double cone = 1.0;
  SynthSpec spec;
  spec.frame_count = frames;
  auto& b = spec.bodies;
  b.push_back(root_body("pelvis"));
  b.push_back(spherical("abdomen", 0, {0.0, 0.08, -0.03}, {0.0, -0.10, 0.04}, cone));
  b.push_back(spherical("chest", 1, {0.0, 0.10, 0.04}, {0.0, -0.15, 0.05}, cone));
  b.push_back(spherical("head", 2, {0.0, 0.20, 0.02}, {0.0, -0.10, 0.0}, cone));
  b.push_back(spherical("left_upper_arm", 2, {-0.18, 0.15, 0.0}, {0.0, 0.14, 0.03}, cone));
  b.push_back(spherical("left_forearm", 4, {0.0, -0.14, 0.03}, {0.0, 0.12, 0.02}, cone));
  b.push_back(spherical("left_hand", 5, {0.0, -0.13, 0.02}, {0.0, 0.05, 0.01}, cone));
  b.push_back(spherical("right_upper_arm", 2, {0.18, 0.15, 0.0}, {0.0, 0.15, 0.03}, cone));
  b.push_back(spherical("right_forearm", 7, {0.0, -0.15, 0.03}, {0.0, 0.12, 0.02}, cone));
  b.push_back(spherical("right_hand", 8, {0.0, -0.12, 0.02}, {0.0, 0.05, 0.01}, cone));
  b.push_back(spherical("left_thigh", 0, {-0.09, -0.05, 0.0}, {0.0, 0.21, 0.05}, cone));
  b.push_back(spherical("left_shin", 10, {0.0, -0.22, 0.05}, {0.0, 0.20, 0.04}, cone));
  b.push_back(spherical("left_foot", 11, {0.0, -0.22, 0.04}, {0.0, 0.03, -0.06}, cone));
  b.push_back(spherical("right_thigh", 0, {0.09, -0.05, 0.0}, {0.0, 0.21, 0.05}, cone));
  b.push_back(spherical("right_shin", 13, {0.0, -0.23, 0.05}, {0.0, 0.20, 0.04}, cone));
  b.push_back(spherical("right_foot", 14, {0.0, -0.21, 0.04}, {0.0, 0.03, -0.06}, cone));
  return spec;
}

std::vector<std::string> preset_names()
{
  return {"two-body", "hinge-pair", "rigid-pair", "linkage", "humanoid16"};
}

std::optional<SynthSpec> preset(const std::string& name, std::size_t frames)
{
  if (name == "two-body")
    return two_body_spec(Vec3(0.10, 0.02, -0.05), Vec3(0.30, 0.0, 0.0), frames);
  if (name == "hinge-pair")
    return hinge_pair_spec(Vec3(0.0, 1.0, 0.0), Vec3(0.05, -0.02, 0.1), Vec3(0.2, 0.03, 0.0), frames);
  if (name == "rigid-pair")
    return rigid_pair_spec(0.565, frames);
  if (name == "linkage")
    return wooden_linkage_spec(frames);
  if (name == "humanoid16")
    return humanoid16_spec(frames);
  return std::nullopt;
}

} // namespace skelfit
