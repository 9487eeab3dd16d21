/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/error.hpp"

namespace skelfit
{

std::string_view to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::SingularRotation:
      return "SingularRotation";
    case ErrorKind::Parse:
      return "ParseError";
    case ErrorKind::MissingCell:
      return "MissingCell";
    case ErrorKind::DuplicateCell:
      return "DuplicateCell";
    case ErrorKind::DegenerateInput:
      return "DegenerateInput";
    case ErrorKind::AllZero:
      return "AllZero";
    case ErrorKind::IncompleteMatrix:
      return "IncompleteMatrix";
    case ErrorKind::NotAdjacent:
      return "NotAdjacent";
    case ErrorKind::MissingRotation:
      return "MissingRotation";
    case ErrorKind::InvalidSpec:
      return "InvalidSpec";
    case ErrorKind::LengthMismatch:
      return "LengthMismatch";
    case ErrorKind::ModelMismatch:
      return "ModelMismatch";
    case ErrorKind::Io:
      return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
  : std::runtime_error(std::string(to_string(kind)) + ": " + message), m_kind(kind)
{
}

Error& Error::at_row(std::size_t row)
{
  m_row = row;
  return *this;
}

Error& Error::at_frame(std::size_t frame)
{
  m_frame = frame;
  return *this;
}

Error& Error::at_body(std::size_t body)
{
  m_body = body;
  return *this;
}

} // namespace skelfit
