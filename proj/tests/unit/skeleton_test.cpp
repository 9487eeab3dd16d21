/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/error.hpp"
#include "skelfit/residuals.hpp"
#include "skelfit/skeleton.hpp"
#include "skelfit/synth.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace skelfit;
namespace oracle = skelfit::testing;

namespace
{

SkeletonModel two_body_model(const Vec3& c, const Vec3& l)
{
  SkeletonModel model;
  model.root = 0;
  model.bodies.resize(2);
  model.bodies[0].id = 0;
  model.bodies[1].id = 1;
  model.bodies[1].parent = 0;
  model.bodies[1].c = c;
  model.bodies[1].l = l;
  return model;
}

double max_model_difference(const SkeletonModel& a, const SkeletonModel& b)
{
  double worst = 0.0;
  for (std::size_t i = 0; i < a.bodies.size(); ++i)
  {
    worst = std::max(worst, (a.bodies[i].c - b.bodies[i].c).norm());
    worst = std::max(worst, (a.bodies[i].l - b.bodies[i].l).norm());
  }
  return worst;
}

double max_session_difference(const CaptureSession& a, const CaptureSession& b)
{
  double worst = 0.0;
  for (std::size_t i = 0; i < a.body_count(); ++i)
    for (std::size_t k = 0; k < a.frame_count(); ++k)
      worst = std::max(worst, max_abs_difference(a.world(i, k), b.world(i, k)));
  return worst;
}

SynthSpec noisy(SynthSpec spec, double sigma_t, double sigma_r, std::uint64_t seed)
{
  spec.noise = {sigma_t, sigma_r};
  spec.seed = seed;
  return spec;
}

} // namespace

TEST(FitSkeleton, TwoBodyMatchesGenerator)
{
  const SynthResult synth = generate(two_body_spec({0.1, 0.02, -0.05}, {0.3, 0, 0}, 100));
  const SkeletonFit fit = fit_skeleton(synth.session, std::nullopt, {1e-8});
  ASSERT_EQ(fit.joints.size(), 1u);
  EXPECT_LE(max_model_difference(fit.model, synth.truth), 1e-9);
  EXPECT_EQ(fit.model.bodies[1].parent, 0u);
  EXPECT_EQ(fit.model.bodies[1].label, "child");
}

TEST(FitSkeleton, SuppliedAndInferredHierarchiesAgree)
{
  const SynthResult synth = generate(wooden_linkage_spec(200));
  const SkeletonFit inferred = fit_skeleton(synth.session, std::nullopt, {1e-8});
  const SkeletonFit supplied = fit_skeleton(synth.session, synth.truth.parent_map(), {1e-8});
  ASSERT_TRUE(inferred.hierarchy.has_value());
  EXPECT_FALSE(supplied.hierarchy.has_value());
  EXPECT_LE(max_model_difference(inferred.model, supplied.model), 1e-12);
  EXPECT_EQ(inferred.model.parent_map(), supplied.model.parent_map());
}

TEST(FitSkeleton, SixteenBodiesGiveFifteenJoints)
{
  const SynthResult synth = generate(humanoid16_spec(120));
  const SkeletonFit fit = fit_skeleton(synth.session, std::nullopt, {1e-8});
  EXPECT_EQ(fit.joints.size(), 15u);
  EXPECT_EQ(fit.model.parent_map(), synth.truth.parent_map());
}

TEST(FitSkeleton, HierarchySizeMismatch)
{
  const SynthResult synth = generate(two_body_spec({0.1, 0, 0}, {0, 0.1, 0}, 20));
  EXPECT_THROW(fit_skeleton(synth.session, ParentMap({std::nullopt, 0, 0})), Error);
}

TEST(LimbLength, SameBodyJoints)
{
  // Body 1 carries its inboard joint at c = 0 and body 2's joint at l = (0.39, 0, 0).
  SkeletonModel model;
  model.root = 0;
  model.bodies.resize(3);
  for (std::size_t i = 0; i < 3; ++i)
    model.bodies[i].id = i;
  model.bodies[1].parent = 0;
  model.bodies[1].c = Vec3::Zero();
  model.bodies[2].parent = 1;
  model.bodies[2].l = Vec3(0.39, 0, 0);
  EXPECT_DOUBLE_EQ(limb_length(model, 1, 2), 0.39);
  EXPECT_DOUBLE_EQ(limb_length(model, 2, 1), 0.39);

  try
  {
    limb_length(model, 0, 2);
    FAIL();
  }
  catch (const Error& error)
  {
    EXPECT_EQ(error.kind(), ErrorKind::NotAdjacent);
  }
}

TEST(LimbLength, NonAdjacentJoints)
{
  const SynthResult synth = generate(wooden_linkage_spec(10));
  // Head joint and left elbow share no body.
  EXPECT_THROW(limb_length(synth.truth, 1, 4), Error);
}

TEST(LimbLength, LinkageTruthMatchesMeasuredTable)
{
  const SynthResult synth = generate(wooden_linkage_spec(10));
  for (const NamedLimb& limb : wooden_linkage_limbs())
    EXPECT_NEAR(limb_length(synth.truth, limb.joint_a, limb.joint_b), limb.length_m, 1e-12) << limb.name;
  EXPECT_EQ(limb_table(synth.truth).size(), 5u);
}

TEST(LimbLength, NoisyLinkageWithinOnePointTwoCentimetres)
{
  const SynthResult synth = generate(noisy(wooden_linkage_spec(2000), 0.007, 0.01, 3));
  const SkeletonFit fit = fit_skeleton(synth.session, std::nullopt);
  EXPECT_EQ(fit.model.parent_map(), synth.truth.parent_map());
  for (const NamedLimb& limb : wooden_linkage_limbs())
    EXPECT_NEAR(limb_length(fit.model, limb.joint_a, limb.joint_b), limb.length_m, 0.012) << limb.name;
}

TEST(LimbLength, InvariantUnderRerooting)
{
  const SynthResult synth = generate(noisy(wooden_linkage_spec(400), 0.003, 0.0, 4));
  const ParentMap topology = synth.truth.parent_map();
  const SkeletonFit base = fit_skeleton(synth.session, topology);
  const SkeletonFit rerooted = fit_skeleton(synth.session, topology, {kDefaultRankTolerance, 4});
  EXPECT_EQ(rerooted.model.root, 4u);
  // Joint ids change when the tree flips, so compare by the joint's two bodies.
  const auto key = [](const SkeletonModel& model, std::size_t joint) {
    const std::size_t p = *model.bodies[joint].parent;
    return std::make_pair(std::min(joint, p), std::max(joint, p));
  };
  const auto limb_key = [&](const SkeletonModel& model, const LimbLength& limb) {
    const auto a = key(model, limb.joint_a);
    const auto b = key(model, limb.joint_b);
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  };
  for (const LimbLength& a : limb_table(base.model))
  {
    const auto ka = limb_key(base.model, a);
    bool found = false;
    for (const LimbLength& b : limb_table(rerooted.model))
    {
      if (limb_key(rerooted.model, b) != ka)
        continue;
      found = true;
      EXPECT_NEAR(a.length_m, b.length_m, 1e-12);
    }
    EXPECT_TRUE(found);
  }
}

TEST(ForwardKinematics, IdentityRotationsAccumulateOffsets)
{
  SkeletonModel model;
  model.root = 0;
  model.bodies.resize(3);
  for (std::size_t i = 0; i < 3; ++i)
    model.bodies[i].id = i;
  model.bodies[1] = {1, std::nullopt, 0, Vec3(0.1, 0, 0), Vec3(0.5, 0, 0)};
  model.bodies[2] = {2, std::nullopt, 1, Vec3(0, 0.2, 0), Vec3(0.3, 0.1, 0)};

  const std::vector<Transform> root(1);
  const JointRotations rotations{{}, {Mat3::Identity()}, {Mat3::Identity()}};
  const auto world = forward_kinematics(model, root, rotations);
  EXPECT_LE((world[1][0].translation - Vec3(0.4, 0, 0)).norm(), 1e-15);
  EXPECT_LE((world[2][0].translation - Vec3(0.7, -0.1, 0)).norm(), 1e-15);
}

TEST(ForwardKinematics, HalfTurnAboutJoint)
{
  const SkeletonModel model = two_body_model({0.1, 0, 0}, {0.5, 0, 0});
  const std::vector<Transform> root(1);
  const JointRotations rotations{{}, {axis_angle(Vec3::UnitZ(), std::numbers::pi)}};
  const auto world = forward_kinematics(model, root, rotations);
  // Child origin sits 0.1 beyond the joint on the far side: (0.5 + 0.1, 0, 0).
  EXPECT_LE((world[1][0].translation - Vec3(0.6, 0, 0)).norm(), 1e-15);
  EXPECT_LE((apply(world[1][0], {0.1, 0, 0}) - Vec3(0.5, 0, 0)).norm(), 1e-15);
  EXPECT_LE((apply(world[1][0], {0.2, 0, 0}) - Vec3(0.4, 0, 0)).norm(), 1e-15);
}

TEST(ForwardKinematics, JointsCoincideAndSolverInvertsIt)
{
  std::mt19937_64 rng(12);
  const SynthResult synth = generate(humanoid16_spec(80));
  const auto world = forward_kinematics(synth.truth, synth.root_world, synth.rotations);
  for (const BodyModel& body : synth.truth.bodies)
  {
    if (!body.parent)
      continue;
    for (std::size_t k = 0; k < 80; ++k)
      EXPECT_LE((apply(world[body.id][k], body.c) - apply(world[*body.parent][k], body.l)).norm(), 1e-12);

    const JointFit fit = solve_joint(synth.session, body.id, *body.parent, 1e-8);
    EXPECT_LE((fit.c - body.c).norm(), 1e-9);
    EXPECT_LE((fit.l - body.l).norm(), 1e-9);
  }
}

TEST(ForwardKinematics, MissingRotation)
{
  const SkeletonModel model = two_body_model({0.1, 0, 0}, {0.5, 0, 0});
  const std::vector<Transform> root(3);
  const JointRotations rotations{{}, {Mat3::Identity()}};
  try
  {
    forward_kinematics(model, root, rotations);
    FAIL();
  }
  catch (const Error& error)
  {
    EXPECT_EQ(error.kind(), ErrorKind::MissingRotation);
  }
}

TEST(Reconstruct, NoiselessInputIsUnchanged)
{
  const SynthResult synth = generate(wooden_linkage_spec(100));
  const CaptureSession rebuilt = reconstruct(synth.truth, synth.session);
  EXPECT_LE(max_session_difference(rebuilt, synth.session), 1e-9);
}

TEST(Reconstruct, GapBeforeEqualsResidualsAndClosesAfter)
{
  const SynthResult synth = generate(noisy(wooden_linkage_spec(300), 0.007, 0.01, 9));
  const SkeletonFit fit = fit_skeleton(synth.session, synth.truth.parent_map());

  const auto before = joint_gaps(fit.model, synth.session);
  for (const JointFit& joint : fit.joints)
  {
    ASSERT_EQ(before[joint.child].size(), joint.residual_per_frame.size());
    for (std::size_t k = 0; k < joint.residual_per_frame.size(); ++k)
      EXPECT_NEAR(before[joint.child][k], joint.residual_per_frame[k], 1e-12);
  }

  const CaptureSession rebuilt = reconstruct(fit.model, synth.session);
  EXPECT_LT(max_joint_gap(fit.model, rebuilt), 1e-12);

  const CaptureSession twice = reconstruct(fit.model, rebuilt);
  EXPECT_LE(max_session_difference(twice, rebuilt), 1e-12);

  // The root keeps its raw placement.
  for (std::size_t k = 0; k < 300; ++k)
    EXPECT_EQ(max_abs_difference(rebuilt.world(0, k), synth.session.world(0, k)), 0.0);
}

TEST(Reconstruct, OrthonormalizeOption)
{
  const SynthResult synth = generate(noisy(two_body_spec({0.1, 0, 0}, {0, 0.2, 0}, 50), 0.0, 0.0, 1));
  std::vector<BodyTrack> tracks(synth.session.bodies().begin(), synth.session.bodies().end());
  tracks[1].frames[3].linear *= 1.01;
  const CaptureSession skewed(tracks);
  const CaptureSession raw = reconstruct(synth.truth, skewed);
  const CaptureSession cleaned = reconstruct(synth.truth, skewed, {true});
  EXPECT_FALSE(is_orthonormal(raw.world(1, 3).linear, 1e-6));
  EXPECT_TRUE(is_orthonormal(cleaned.world(1, 3).linear, 1e-9));
}

TEST(Reconstruct, ModelLargerThanSession)
{
  const SynthResult small = generate(two_body_spec({0.1, 0, 0}, {0, 0.2, 0}, 5));
  const SynthResult big = generate(wooden_linkage_spec(5));
  EXPECT_THROW(reconstruct(big.truth, small.session), Error);
}

TEST(SkeletonJson, RoundTripAndSchema)
{
  const SynthResult synth = generate(hinge_pair_spec({0, 1, 0}, {0.05, 0, 0.1}, {0.2, 0, 0}, 60));
  SkeletonFit fit = fit_skeleton(synth.session, std::nullopt, {1e-8});
  const std::string text = skeleton_to_json(fit.model);
  for (const char* key : {"\"root\"", "\"bodies\"", "\"id\"", "\"label\"", "\"parent\"", "\"c\"", "\"l\"",
                          "\"epsilon_m\"", "\"classification\"", "\"axis_child\"", "\"axis_parent\""})
    EXPECT_NE(text.find(key), std::string::npos) << key;
  EXPECT_NE(text.find("\"hinge\""), std::string::npos);

  const SkeletonModel loaded = skeleton_from_json(text);
  ASSERT_EQ(loaded.bodies.size(), fit.model.bodies.size());
  EXPECT_EQ(loaded.root, fit.model.root);
  for (std::size_t i = 0; i < loaded.bodies.size(); ++i)
  {
    EXPECT_TRUE(loaded.bodies[i].c == fit.model.bodies[i].c);
    EXPECT_TRUE(loaded.bodies[i].l == fit.model.bodies[i].l);
    EXPECT_EQ(loaded.bodies[i].epsilon, fit.model.bodies[i].epsilon);
    EXPECT_EQ(loaded.bodies[i].classification, fit.model.bodies[i].classification);
    EXPECT_EQ(loaded.bodies[i].parent, fit.model.bodies[i].parent);
    EXPECT_EQ(loaded.bodies[i].axis_child.has_value(), fit.model.bodies[i].axis_child.has_value());
  }
  EXPECT_EQ(skeleton_to_json(loaded), text);
}

TEST(SkeletonJson, RejectsMalformedDocuments)
{
  EXPECT_THROW(skeleton_from_json("{"), Error);
  EXPECT_THROW(skeleton_from_json(R"({"root": 0})"), Error);
  EXPECT_THROW(skeleton_from_json(
                 R"({"root":0,"bodies":[{"id":0,"label":null,"parent":null,"c":[0,0,0],"l":[0,0,0],)"
                 R"("epsilon_m":0,"classification":"wobbly","axis_child":null,"axis_parent":null}]})"),
               Error);
  EXPECT_THROW(skeleton_from_json(
                 R"({"root":0,"bodies":[{"id":0,"label":null,"parent":null,"c":[0,0],"l":[0,0,0],)"
                 R"("epsilon_m":0,"classification":"rigid","axis_child":null,"axis_parent":null}]})"),
               Error);
}
