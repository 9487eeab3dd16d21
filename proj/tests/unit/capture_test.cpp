/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/capture.hpp"
#include "skelfit/error.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <string>

using namespace skelfit;

namespace
{

std::string row(std::size_t frame, std::size_t body, double tx = 0.0, double ty = 0.0, double tz = 0.0)
{
  std::ostringstream out;
  out << frame << ',' << body << ",1,0,0,0,1,0,0,0,1," << tx << ',' << ty << ',' << tz << '\n';
  return out.str();
}

std::string header()
{
  return std::string(kTransformStreamHeader) + "\n";
}

CaptureSession parse(const std::string& text, LoadOptions options = {})
{
  std::istringstream in(text);
  return read_session_csv(in, options);
}

Error parse_failure(const std::string& text)
{
  try
  {
    parse(text);
  }
  catch (const Error& error)
  {
    return error;
  }
  ADD_FAILURE() << "expected a parse failure";
  return Error(ErrorKind::Io, "unreachable");
}

} // namespace

TEST(CaptureLoad, WellFormedTwoBodiesThreeFrames)
{
  std::string text = header();
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t b = 0; b < 2; ++b)
      text += row(k, b, static_cast<double>(k), static_cast<double>(b), 0.5);
  const CaptureSession session = parse(text);
  EXPECT_EQ(session.body_count(), 2u);
  EXPECT_EQ(session.frame_count(), 3u);
  EXPECT_EQ(session.world(1, 2).translation, Vec3(2.0, 1.0, 0.5));
}

TEST(CaptureLoad, UnsortedRowsAndCrlf)
{
  std::string text = std::string(kTransformStreamHeader) + "\r\n";
  for (std::size_t k = 3; k-- > 0;)
    for (std::size_t b = 2; b-- > 0;)
    {
      std::string r = row(k, b, static_cast<double>(10 * k + b));
      r.insert(r.size() - 1, "\r");
      text += r;
    }
  const CaptureSession session = parse(text);
  EXPECT_EQ(session.frame_count(), 3u);
  EXPECT_EQ(session.world(0, 2).translation.x(), 20.0);
  EXPECT_EQ(session.world(1, 1).translation.x(), 11.0);
}

TEST(CaptureLoad, MissingCellNamesFrameAndBody)
{
  std::string text = header();
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t b = 0; b < 2; ++b)
      if (!(k == 1 && b == 0))
        text += row(k, b);
  const Error error = parse_failure(text);
  EXPECT_EQ(error.kind(), ErrorKind::MissingCell);
  EXPECT_EQ(error.frame(), 1u);
  EXPECT_EQ(error.body(), 0u);
}

TEST(CaptureLoad, DuplicateCell)
{
  const Error error = parse_failure(header() + row(0, 0) + row(0, 1) + row(0, 1));
  EXPECT_EQ(error.kind(), ErrorKind::DuplicateCell);
  EXPECT_EQ(error.row(), 4u);
}

TEST(CaptureLoad, MalformedRows)
{
  EXPECT_EQ(parse_failure("frame,body\n" + row(0, 0)).kind(), ErrorKind::Parse);
  EXPECT_EQ(parse_failure("").kind(), ErrorKind::Parse);
  EXPECT_EQ(parse_failure(header()).kind(), ErrorKind::Parse);

  const Error short_row = parse_failure(header() + row(0, 0) + "1,0,1,0,0\n");
  EXPECT_EQ(short_row.kind(), ErrorKind::Parse);
  EXPECT_EQ(short_row.row(), 3u);

  EXPECT_EQ(parse_failure(header() + "0,0,1,0,0,0,1,0,0,0,1,abc,0,0\n").kind(), ErrorKind::Parse);
  EXPECT_EQ(parse_failure(header() + "0,-1,1,0,0,0,1,0,0,0,1,0,0,0\n").kind(), ErrorKind::Parse);
  EXPECT_EQ(parse_failure(header() + "0,0,1,0,0,0,1,0,0,0,1,nan,0,0\n").kind(), ErrorKind::Parse);
}

TEST(CaptureLoad, SingularRotationReportsRow)
{
  const Error error = parse_failure(header() + row(0, 0) + "0,1,1,0,0,0,1,0,0,0,0,0,0,0\n");
  EXPECT_EQ(error.kind(), ErrorKind::SingularRotation);
  EXPECT_EQ(error.row(), 3u);
}

TEST(CaptureLoad, UnitScaleConvertsCentimetres)
{
  const std::string text = header() + row(0, 0) + row(0, 1, 56.5) + row(1, 0) + row(1, 1, 56.5);
  LoadOptions options;
  options.unit_scale = 0.01;
  const CaptureSession session = parse(text, options);
  EXPECT_NEAR(session.world(1, 0).translation.x(), 0.565, 1e-15);
  EXPECT_EQ(session.info().unit_scale, 0.01);

  const CaptureSession unscaled = parse(text);
  EXPECT_EQ(unscaled.world(1, 0).translation.x(), 56.5);
}

TEST(CaptureLoad, WriteThenLoadIsBitExact)
{
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> exponent(-300.0, 300.0);
  for (int trial = 0; trial < 20; ++trial)
  {
    std::vector<BodyTrack> tracks(3);
    for (std::size_t b = 0; b < 3; ++b)
    {
      tracks[b].id = b;
      for (int k = 0; k < 7; ++k)
      {
        Transform t = skelfit::testing::random_affine(rng);
        t.translation.x() = std::pow(10.0, exponent(rng)) * (trial % 2 ? -1.0 : 1.0);
        tracks[b].frames.push_back(t);
      }
    }
    const CaptureSession original(tracks);
    std::ostringstream out;
    write_session_csv(out, original);
    const CaptureSession loaded = parse(out.str());
    ASSERT_EQ(loaded.body_count(), original.body_count());
    ASSERT_EQ(loaded.frame_count(), original.frame_count());
    for (std::size_t b = 0; b < 3; ++b)
      for (std::size_t k = 0; k < 7; ++k)
      {
        EXPECT_TRUE(loaded.world(b, k).linear == original.world(b, k).linear);
        EXPECT_TRUE(loaded.world(b, k).translation == original.world(b, k).translation);
      }
  }
}

TEST(CaptureLoad, MissingFileIsIoError)
{
  try
  {
    load_session("/nonexistent/skelfit/session.csv");
    FAIL();
  }
  catch (const Error& error)
  {
    EXPECT_EQ(error.kind(), ErrorKind::Io);
  }
}

TEST(CaptureLabels, SidecarLabels)
{
  std::istringstream in("body,label\n1,forearm\r\n0,upper arm\n");
  const auto labels = read_labels_csv(in);
  ASSERT_EQ(labels.size(), 2u);
  EXPECT_EQ(labels[0], "upper arm");
  EXPECT_EQ(labels[1], "forearm");

  const CaptureSession session = parse(header() + row(0, 0) + row(0, 1)).with_labels(labels);
  EXPECT_EQ(session.body(1).label, "forearm");
}

TEST(CaptureSessionModel, ConstructorRejectsInconsistentTracks)
{
  BodyTrack a{0, std::nullopt, {Transform{}, Transform{}}};
  BodyTrack b{1, std::nullopt, {Transform{}}};
  EXPECT_THROW(CaptureSession({a, b}), Error);
  BodyTrack gap{2, std::nullopt, {Transform{}, Transform{}}};
  EXPECT_THROW(CaptureSession({a, gap}), Error);
}

namespace
{

CaptureSession clean_session(std::size_t frames)
{
  std::mt19937_64 rng(1);
  std::vector<BodyTrack> tracks(2);
  for (std::size_t b = 0; b < 2; ++b)
  {
    tracks[b].id = b;
    for (std::size_t k = 0; k < frames; ++k)
      tracks[b].frames.push_back(skelfit::testing::random_rigid(rng));
  }
  return CaptureSession(tracks);
}

} // namespace

TEST(CaptureValidate, CleanSessionHasNoWarnings)
{
  EXPECT_TRUE(validate(clean_session(40)).empty());
}

TEST(CaptureValidate, ScaledRotationWarnsWithBodyAndFrame)
{
  const CaptureSession clean = clean_session(40);
  std::vector<BodyTrack> tracks(clean.bodies().begin(), clean.bodies().end());
  tracks[1].frames[17].linear *= 1.1;
  const auto warnings = validate(CaptureSession(tracks));
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_EQ(warnings[0].kind, WarningKind::NonOrthonormal);
  EXPECT_EQ(warnings[0].body, 1u);
  EXPECT_EQ(warnings[0].frame, 17u);
  EXPECT_NE(warnings[0].message.find("body 1 frame 17"), std::string::npos);

  SessionInfo general;
  general.claims_orthonormal = false;
  EXPECT_TRUE(validate(CaptureSession(tracks, general)).empty());
}

TEST(CaptureValidate, ShortSessionAdvisory)
{
  const auto warnings = validate(clean_session(5));
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_EQ(warnings[0].kind, WarningKind::ShortSession);
  EXPECT_TRUE(validate(clean_session(30)).empty());
  EXPECT_EQ(validate(clean_session(29)).size(), 1u);
}
