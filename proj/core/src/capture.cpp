/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/capture.hpp"

#include "skelfit/error.hpp"
#include "skelfit/numeric_text.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace skelfit
{

CaptureSession::CaptureSession(std::vector<BodyTrack> bodies, SessionInfo info)
  : m_bodies(std::move(bodies)), m_info(std::move(info))
{
  if (m_bodies.empty())
    throw Error(ErrorKind::DegenerateInput, "session has no bodies");

  m_frame_count = m_bodies.front().frames.size();
  if (m_frame_count == 0)
    throw Error(ErrorKind::DegenerateInput, "session has no frames");

  for (std::size_t i = 0; i < m_bodies.size(); ++i)
  {
    const BodyTrack& track = m_bodies[i];
    if (track.id != i)
      throw Error(ErrorKind::InvalidSpec, "body ids must be 0..m-1 in order; found " +
                                            std::to_string(track.id) + " at position " +
                                            std::to_string(i))
        .at_body(i);
    if (track.frames.size() != m_frame_count)
      throw Error(ErrorKind::MissingCell, "body " + std::to_string(i) + " has " +
                                            std::to_string(track.frames.size()) +
                                            " frames, expected " + std::to_string(m_frame_count))
        .at_body(i)
        .at_frame(std::min(track.frames.size(), m_frame_count));
    for (std::size_t k = 0; k < m_frame_count; ++k)
    {
      if (!is_invertible(track.frames[k].linear) || !track.frames[k].translation.allFinite())
        throw Error(ErrorKind::SingularRotation, "body " + std::to_string(i) + " frame " +
                                                   std::to_string(k) +
                                                   " has a singular linear part")
          .at_body(i)
          .at_frame(k);
    }
  }
}

CaptureSession CaptureSession::with_labels(const std::vector<std::optional<std::string>>& labels) const
{
  std::vector<BodyTrack> tracks = m_bodies;
  for (std::size_t i = 0; i < tracks.size(); ++i)
    tracks[i].label = i < labels.size() ? labels[i] : std::nullopt;
  return CaptureSession(std::move(tracks), m_info);
}

namespace
{

struct Cell
{
  std::size_t frame;
  std::size_t body;
  std::size_t line;
  Transform transform;
};

Error parse_error(std::size_t line, const std::string& what)
{
  Error error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
  error.at_row(line);
  return error;
}

Cell parse_row(std::string_view text, std::size_t line, double unit_scale)
{
  const auto fields = split_csv_line(text);
  if (fields.size() != 14)
    throw parse_error(line, "expected 14 fields, found " + std::to_string(fields.size()));

  const auto frame = parse_index(fields[0]);
  const auto body = parse_index(fields[1]);
  if (!frame || !body)
    throw parse_error(line, "frame and body must be non-negative integers");

  std::array<double, 12> values{};
  for (std::size_t f = 0; f < values.size(); ++f)
  {
    const auto value = parse_double(fields[f + 2]);
    if (!value)
      throw parse_error(line, "field " + std::to_string(f + 3) + " is not a finite number");
    values[f] = *value;
  }

  Cell cell{*frame, *body, line, {}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      cell.transform.linear(r, c) = values[static_cast<std::size_t>(3 * r + c)];
  cell.transform.translation = Vec3(values[9], values[10], values[11]) * unit_scale;

  if (!is_invertible(cell.transform.linear))
    throw Error(ErrorKind::SingularRotation, "line " + std::to_string(line) + ": singular linear part")
      .at_row(line)
      .at_frame(cell.frame)
      .at_body(cell.body);
  return cell;
}

std::ifstream open_input(const std::filesystem::path& path)
{
  std::ifstream input(path, std::ios::binary);
  if (!input)
    throw Error(ErrorKind::Io, "cannot open " + path.string());
  return input;
}

} // namespace

CaptureSession read_session_csv(std::istream& input, const LoadOptions& options)
{
  std::string line;
  if (!std::getline(input, line))
    throw parse_error(1, "empty input");

  std::string_view header = strip_cr(line);
  if (header.size() >= 3 && header.substr(0, 3) == "\xEF\xBB\xBF")
    header.remove_prefix(3);
  if (header != kTransformStreamHeader)
    throw parse_error(1, "unexpected header");

  std::vector<Cell> cells;
  std::size_t line_number = 1;
  std::size_t max_frame = 0;
  std::size_t max_body = 0;
  while (std::getline(input, line))
  {
    ++line_number;
    const std::string_view text = strip_cr(line);
    if (text.empty())
      continue;
    Cell cell = parse_row(text, line_number, options.unit_scale);
    max_frame = std::max(max_frame, cell.frame);
    max_body = std::max(max_body, cell.body);
    cells.push_back(std::move(cell));
  }
  if (cells.empty())
    throw parse_error(line_number, "no data rows");

  const std::size_t frame_count = max_frame + 1;
  const std::size_t body_count = max_body + 1;

  std::vector<std::vector<std::size_t>> seen(body_count, std::vector<std::size_t>(frame_count, 0));
  std::vector<BodyTrack> tracks(body_count);
  for (std::size_t i = 0; i < body_count; ++i)
  {
    tracks[i].id = i;
    tracks[i].frames.resize(frame_count);
  }
  for (const Cell& cell : cells)
  {
    std::size_t& slot = seen[cell.body][cell.frame];
    if (slot != 0)
      throw Error(ErrorKind::DuplicateCell, "line " + std::to_string(cell.line) + ": frame " +
                                              std::to_string(cell.frame) + " body " +
                                              std::to_string(cell.body) +
                                              " already given on line " + std::to_string(slot))
        .at_row(cell.line)
        .at_frame(cell.frame)
        .at_body(cell.body);
    slot = cell.line;
    tracks[cell.body].frames[cell.frame] = cell.transform;
  }

  for (std::size_t k = 0; k < frame_count; ++k)
    for (std::size_t i = 0; i < body_count; ++i)
      if (seen[i][k] == 0)
        throw Error(ErrorKind::MissingCell,
                    "no row for frame " + std::to_string(k) + " body " + std::to_string(i))
          .at_frame(k)
          .at_body(i);

  SessionInfo info;
  info.unit_scale = options.unit_scale;
  info.claims_orthonormal = options.orthonormal_check;
  info.sample_interval = options.sample_interval;
  return CaptureSession(std::move(tracks), info);
}

CaptureSession load_session(const std::filesystem::path& path, const LoadOptions& options)
{
  std::ifstream input = open_input(path);
  return read_session_csv(input, options);
}

void write_session_csv(std::ostream& output, const CaptureSession& session)
{
  output << kTransformStreamHeader << '\n';
  std::string row;
  for (std::size_t k = 0; k < session.frame_count(); ++k)
  {
    for (std::size_t i = 0; i < session.body_count(); ++i)
    {
      const Transform& t = session.world(i, k);
      row.clear();
      row += std::to_string(k);
      row += ',';
      row += std::to_string(i);
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
        {
          row += ',';
          row += format_shortest(t.linear(r, c));
        }
      for (int c = 0; c < 3; ++c)
      {
        row += ',';
        row += format_shortest(t.translation(c));
      }
      row += '\n';
      output << row;
    }
  }
}

void save_session(const std::filesystem::path& path, const CaptureSession& session)
{
  std::ofstream output(path, std::ios::binary);
  if (!output)
    throw Error(ErrorKind::Io, "cannot write " + path.string());
  write_session_csv(output, session);
  if (!output)
    throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::vector<std::optional<std::string>> read_labels_csv(std::istream& input)
{
  std::string line;
  if (!std::getline(input, line) || strip_cr(line) != "body,label")
    throw parse_error(1, "labels file must start with header body,label");

  std::vector<std::optional<std::string>> labels;
  std::size_t line_number = 1;
  while (std::getline(input, line))
  {
    ++line_number;
    const std::string_view text = strip_cr(line);
    if (text.empty())
      continue;
    const std::size_t comma = text.find(',');
    if (comma == std::string_view::npos)
      throw parse_error(line_number, "expected body,label");
    const auto body = parse_index(text.substr(0, comma));
    if (!body)
      throw parse_error(line_number, "body must be a non-negative integer");
    if (labels.size() <= *body)
      labels.resize(*body + 1);
    if (labels[*body])
      throw Error(ErrorKind::DuplicateCell, "line " + std::to_string(line_number) +
                                              ": duplicate label for body " +
                                              std::to_string(*body))
        .at_row(line_number)
        .at_body(*body);
    labels[*body] = std::string(text.substr(comma + 1));
  }
  return labels;
}

std::vector<std::optional<std::string>> load_labels(const std::filesystem::path& path)
{
  std::ifstream input = open_input(path);
  return read_labels_csv(input);
}

std::vector<Warning> validate(const CaptureSession& session, const ValidateOptions& options)
{
  std::vector<Warning> warnings;

  if (session.info().claims_orthonormal)
  {
    for (const BodyTrack& track : session.bodies())
    {
      for (std::size_t k = 0; k < track.frames.size(); ++k)
      {
        const Mat3& linear = track.frames[k].linear;
        if (is_orthonormal(linear, options.orthonormal_tolerance))
          continue;
        std::ostringstream message;
        message << "body " << track.id << " frame " << k
                << ": linear part is not orthonormal (max |R^T R - I| = "
                << format_significant(orthonormality_error(linear)) << ")";
        warnings.push_back({WarningKind::NonOrthonormal, message.str(), track.id, k});
      }
    }
  }

  if (session.frame_count() < options.min_frames)
  {
    warnings.push_back({WarningKind::ShortSession,
                        "only " + std::to_string(session.frame_count()) +
                          " frames; insufficient motion for a reliable fit (advisory threshold " +
                          std::to_string(options.min_frames) + ")",
                        std::nullopt, std::nullopt});
  }

  return warnings;
}

} // namespace skelfit
