/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "skelfit/transform.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace skelfit
{

/// World placements of one tracked body, one entry per frame.
struct BodyTrack
{
  std::size_t id = 0;
  std::optional<std::string> label;
  std::vector<Transform> frames;
};

struct SessionInfo
{
  std::optional<double> sample_interval; // seconds per frame; metadata only
  double unit_scale = 1.0;               // already applied to translations
  bool claims_orthonormal = true;        // input is expected to carry rotations
};

/// m body tracks sampled at n synchronized frames.
///
/// Immutable once constructed. Construction checks that body ids run 0..m-1,
/// that every track has the same frame count and that every linear part is
/// invertible.
class CaptureSession
{
public:
  explicit CaptureSession(std::vector<BodyTrack> bodies, SessionInfo info = {});

  std::size_t body_count() const noexcept { return m_bodies.size(); }
  std::size_t frame_count() const noexcept { return m_frame_count; }

  const BodyTrack& body(std::size_t index) const { return m_bodies.at(index); }
  std::span<const BodyTrack> bodies() const noexcept { return m_bodies; }

  const Transform& world(std::size_t body, std::size_t frame) const
  {
    return m_bodies[body].frames[frame];
  }

  const SessionInfo& info() const noexcept { return m_info; }

  /// Copy with labels replaced; entries beyond body_count() are ignored.
  CaptureSession with_labels(const std::vector<std::optional<std::string>>& labels) const;

private:
  std::vector<BodyTrack> m_bodies;
  std::size_t m_frame_count = 0;
  SessionInfo m_info;
};

struct LoadOptions
{
  double unit_scale = 1.0;
  bool orthonormal_check = true;
  std::optional<double> sample_interval;
};

inline constexpr std::string_view kTransformStreamHeader =
  "frame,body,r00,r01,r02,r10,r11,r12,r20,r21,r22,tx,ty,tz";

/// Parses the transform-stream CSV. Translations are multiplied by
/// options.unit_scale. Errors carry the 1-based line number where known.
CaptureSession read_session_csv(std::istream& input, const LoadOptions& options = {});
CaptureSession load_session(const std::filesystem::path& path, const LoadOptions& options = {});

/// Rows are written frame-major with shortest round-trip number formatting.
void write_session_csv(std::ostream& output, const CaptureSession& session);
void save_session(const std::filesystem::path& path, const CaptureSession& session);

/// Sidecar "body,label" CSV. Returned vector is indexed by body id.
std::vector<std::optional<std::string>> read_labels_csv(std::istream& input);
std::vector<std::optional<std::string>> load_labels(const std::filesystem::path& path);

enum class WarningKind
{
  NonOrthonormal,
  ShortSession,
};

struct Warning
{
  WarningKind kind;
  std::string message;
  std::optional<std::size_t> body;
  std::optional<std::size_t> frame;
};

struct ValidateOptions
{
  std::size_t min_frames = 30;
  double orthonormal_tolerance = kOrthonormalWarnTolerance;
};

std::vector<Warning> validate(const CaptureSession& session, const ValidateOptions& options = {});

} // namespace skelfit
