/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "skelfit/error.hpp"
#include "skelfit/transform.hpp"

#include <json.hpp>

#include <string>

namespace skelfit::detail
{

inline nlohmann::json vec3_json(const Vec3& v)
{
  return nlohmann::json::array({v.x(), v.y(), v.z()});
}

inline Error json_error(const std::string& what)
{
  return Error(ErrorKind::Parse, what);
}

inline Vec3 vec3_from_json(const nlohmann::json& value, const std::string& field)
{
  if (!value.is_array() || value.size() != 3)
    throw json_error("'" + field + "' must be an array of 3 numbers");
  Vec3 out;
  for (int i = 0; i < 3; ++i)
  {
    if (!value[static_cast<std::size_t>(i)].is_number())
      throw json_error("'" + field + "' must be an array of 3 numbers");
    out(i) = value[static_cast<std::size_t>(i)].get<double>();
  }
  return out;
}

inline const nlohmann::json& require(const nlohmann::json& object, const char* key)
{
  if (!object.is_object() || !object.contains(key))
    throw json_error(std::string("missing field '") + key + "'");
  return object.at(key);
}

} // namespace skelfit::detail
