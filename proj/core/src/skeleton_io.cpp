/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/skeleton.hpp"

#include "json_util.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace skelfit
{

using nlohmann::json;
using detail::json_error;
using detail::require;
using detail::vec3_from_json;
using detail::vec3_json;

std::string skeleton_to_json(const SkeletonModel& model)
{
  json bodies = json::array();
  for (const BodyModel& body : model.bodies)
  {
    json entry;
    entry["id"] = body.id;
    entry["label"] = body.label ? json(*body.label) : json(nullptr);
    entry["parent"] = body.parent ? json(*body.parent) : json(nullptr);
    entry["c"] = vec3_json(body.c);
    entry["l"] = vec3_json(body.l);
    entry["epsilon_m"] = body.epsilon;
    entry["classification"] = std::string(to_string(body.classification));
    entry["axis_child"] = body.axis_child ? vec3_json(*body.axis_child) : json(nullptr);
    entry["axis_parent"] = body.axis_parent ? vec3_json(*body.axis_parent) : json(nullptr);
    bodies.push_back(std::move(entry));
  }
  json document;
  document["root"] = model.root;
  document["bodies"] = std::move(bodies);
  return document.dump(2) + "\n";
}

SkeletonModel skeleton_from_json(const std::string& text)
{
  json document;
  try
  {
    document = json::parse(text);
  }
  catch (const json::parse_error& error)
  {
    throw json_error(std::string("skeleton JSON: ") + error.what());
  }

  SkeletonModel model;
  const json& root = require(document, "root");
  if (!root.is_number_unsigned())
    throw json_error("'root' must be a non-negative integer");
  model.root = root.get<std::size_t>();

  const json& bodies = require(document, "bodies");
  if (!bodies.is_array())
    throw json_error("'bodies' must be an array");

  for (const json& entry : bodies)
  {
    BodyModel body;
    const json& id = require(entry, "id");
    if (!id.is_number_unsigned())
      throw json_error("'id' must be a non-negative integer");
    body.id = id.get<std::size_t>();

    const json& label = require(entry, "label");
    if (label.is_string())
      body.label = label.get<std::string>();
    else if (!label.is_null())
      throw json_error("'label' must be a string or null");

    const json& parent = require(entry, "parent");
    if (parent.is_number_unsigned())
      body.parent = parent.get<std::size_t>();
    else if (!parent.is_null())
      throw json_error("'parent' must be a non-negative integer or null");

    body.c = vec3_from_json(require(entry, "c"), "c");
    body.l = vec3_from_json(require(entry, "l"), "l");

    const json& epsilon = require(entry, "epsilon_m");
    if (!epsilon.is_number())
      throw json_error("'epsilon_m' must be a number");
    body.epsilon = epsilon.get<double>();

    const json& classification = require(entry, "classification");
    const auto parsed = classification.is_string()
                          ? joint_class_from_string(classification.get<std::string>())
                          : std::nullopt;
    if (!parsed)
      throw json_error("'classification' must be spherical, hinge or rigid");
    body.classification = *parsed;

    for (const char* key : {"axis_child", "axis_parent"})
    {
      const json& axis = require(entry, key);
      if (axis.is_null())
        continue;
      (std::string(key) == "axis_child" ? body.axis_child : body.axis_parent) = vec3_from_json(axis, key);
    }
    model.bodies.push_back(std::move(body));
  }

  std::sort(model.bodies.begin(), model.bodies.end(),
            [](const BodyModel& a, const BodyModel& b) { return a.id < b.id; });
  model.parent_map();
  return model;
}

void save_skeleton(const std::filesystem::path& path, const SkeletonModel& model)
{
  std::ofstream output(path, std::ios::binary);
  if (!output)
    throw Error(ErrorKind::Io, "cannot write " + path.string());
  output << skeleton_to_json(model);
  if (!output)
    throw Error(ErrorKind::Io, "write failed for " + path.string());
}

SkeletonModel load_skeleton(const std::filesystem::path& path)
{
  std::ifstream input(path, std::ios::binary);
  if (!input)
    throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << input.rdbuf();
  return skeleton_from_json(buffer.str());
}

} // namespace skelfit
