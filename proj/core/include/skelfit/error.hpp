/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace skelfit
{

enum class ErrorKind
{
  SingularRotation,
  Parse,
  MissingCell,
  DuplicateCell,
  DegenerateInput,
  AllZero,
  IncompleteMatrix,
  NotAdjacent,
  MissingRotation,
  InvalidSpec,
  LengthMismatch,
  ModelMismatch,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Base of every error raised by the library. Location fields are filled in
// when the failure can be pinned to an input row, frame or body.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return m_kind; }

  std::optional<std::size_t> row() const noexcept { return m_row; }
  std::optional<std::size_t> frame() const noexcept { return m_frame; }
  std::optional<std::size_t> body() const noexcept { return m_body; }

  Error& at_row(std::size_t row);
  Error& at_frame(std::size_t frame);
  Error& at_body(std::size_t body);

private:
  ErrorKind m_kind;
  std::optional<std::size_t> m_row;
  std::optional<std::size_t> m_frame;
  std::optional<std::size_t> m_body;
};

} // namespace skelfit
