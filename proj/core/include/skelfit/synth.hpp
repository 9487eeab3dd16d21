/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "skelfit/capture.hpp"
#include "skelfit/skeleton.hpp"
#include "skelfit/transform.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace skelfit
{

enum class ExcitationKind
{
  Spherical, // random rotation per frame, angle limited by cone_rad
  Hinge,     // rotation about a fixed child-frame axis
  Fixed,     // no relative motion (rigid coupling)
  Scripted,  // explicit relative rotation per frame
};

/// Relative rotation program of one joint. The joint rotation in frame k is
/// rest * motion(k), mapping child coordinates into parent coordinates.
struct Excitation
{
  ExcitationKind kind = ExcitationKind::Spherical;
  double cone_rad = 3.141592653589793;
  Vec3 axis = Vec3::UnitZ();
  double range_rad = 3.141592653589793;
  Mat3 rest = Mat3::Identity();
  std::vector<Mat3> script;
};

struct SynthBody
{
  std::optional<std::string> label;
  std::optional<std::size_t> parent;
  Vec3 c = Vec3::Zero(); // joint in this body's frame
  Vec3 l = Vec3::Zero(); // joint in the parent's frame
  Excitation excitation;
};

enum class RootMotion
{
  Random, // uniform rotation, translation uniform in a cube
  Static,
};

struct RootSpec
{
  RootMotion motion = RootMotion::Random;
  double position_extent = 1.0; // half-width of the cube, meters
  Transform placement;          // used when static
};

struct NoiseSpec
{
  double sigma_t = 0.0; // meters, per translation axis
  double sigma_r = 0.0; // radians, angle of a random-axis perturbation
};

struct SynthSpec
{
  std::vector<SynthBody> bodies; // index = body id; exactly one has no parent
  std::size_t frame_count = 100;
  RootSpec root;
  NoiseSpec noise;
  std::uint64_t seed = 1;
  double output_scale = 1.0; // multiplies emitted translations (unit distortion)
};

struct SynthResult
{
  CaptureSession session;
  SkeletonModel truth;
  std::vector<Transform> root_world; // noiseless
  JointRotations rotations;          // noiseless relative rotations
};

/// Forward kinematics of the spec, then noise, then output_scale.
/// Deterministic for a fixed spec and seed. Throws Error{InvalidSpec}.
SynthResult generate(const SynthSpec& spec);

void check_spec(const SynthSpec& spec);

/// Uniformly distributed rotation (Shoemake) with its angle rescaled from
/// [0, pi] into [0, max_angle].
Mat3 uniform_rotation(std::mt19937_64& engine, double max_angle = 3.141592653589793);

// Bundled figures.
SynthSpec two_body_spec(const Vec3& c, const Vec3& l, std::size_t frames);
SynthSpec hinge_pair_spec(const Vec3& axis_child, const Vec3& c, const Vec3& l, std::size_t frames);
SynthSpec rigid_pair_spec(double distance_m, std::size_t frames);
SynthSpec wooden_linkage_spec(std::size_t frames);
SynthSpec humanoid16_spec(std::size_t frames);

std::vector<std::string> preset_names();
std::optional<SynthSpec> preset(const std::string& name, std::size_t frames);

/// Named joint-to-joint distances of the linkage (meters), paired with the
/// child-body indices of the two joints.
struct NamedLimb
{
  std::string name;
  std::size_t joint_a;
  std::size_t joint_b;
  double length_m;
};
std::vector<NamedLimb> wooden_linkage_limbs();

std::string spec_to_json(const SynthSpec& spec);
SynthSpec spec_from_json(const std::string& text);
SynthSpec load_spec(const std::filesystem::path& path);
void save_spec(const std::filesystem::path& path, const SynthSpec& spec);

struct PairCalibration
{
  std::vector<double> distances; // per frame, input units
  double mean = 0.0;             // input units
  double std_dev = 0.0;          // sample standard deviation, input units
  double scale = 1.0;            // known_distance / mean, or 1
  double scaled_mean_m = 0.0;
  double scaled_std_m = 0.0;
};

/// Distance between two sensor origins over time. Throws Error{LengthMismatch}.
PairCalibration calibrate_pair(const BodyTrack& track_a, const BodyTrack& track_b,
                               std::optional<double> known_distance = std::nullopt);

} // namespace skelfit
