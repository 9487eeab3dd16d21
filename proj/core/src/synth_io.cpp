/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/synth.hpp"

#include "json_util.hpp"

#include <fstream>
#include <sstream>

namespace skelfit
{

using nlohmann::json;
using detail::json_error;
using detail::require;
using detail::vec3_from_json;
using detail::vec3_json;

namespace
{

json mat3_json(const Mat3& m)
{
  json out = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      out.push_back(m(r, c));
  return out;
}

Mat3 mat3_from_json(const json& value, const std::string& field)
{
  if (!value.is_array() || value.size() != 9)
    throw json_error("'" + field + "' must be 9 numbers in row-major order");
  Mat3 m;
  for (std::size_t i = 0; i < 9; ++i)
  {
    if (!value[i].is_number())
      throw json_error("'" + field + "' must be 9 numbers in row-major order");
    m(static_cast<int>(i / 3), static_cast<int>(i % 3)) = value[i].get<double>();
  }
  return m;
}

double number(const json& object, const char* key, double fallback)
{
  if (!object.contains(key))
    return fallback;
  if (!object.at(key).is_number())
    throw json_error(std::string("'") + key + "' must be a number");
  return object.at(key).get<double>();
}

std::string_view kind_name(ExcitationKind kind)
{
  switch (kind)
  {
    case ExcitationKind::Spherical:
      return "spherical";
    case ExcitationKind::Hinge:
      return "hinge";
    case ExcitationKind::Fixed:
      return "fixed";
    case ExcitationKind::Scripted:
      return "scripted";
  }
  return "spherical";
}

} // namespace

std::string spec_to_json(const SynthSpec& spec)
{
  json doc;
  doc["frame_count"] = spec.frame_count;
  doc["seed"] = spec.seed;
  doc["output_scale"] = spec.output_scale;
  doc["noise"] = {{"sigma_t", spec.noise.sigma_t}, {"sigma_r", spec.noise.sigma_r}};

  json root;
  if (spec.root.motion == RootMotion::Random)
  {
    root["motion"] = "random";
    root["position_extent"] = spec.root.position_extent;
  }
  else
  {
    root["motion"] = "static";
    root["rotation"] = mat3_json(spec.root.placement.linear);
    root["translation"] = vec3_json(spec.root.placement.translation);
  }
  doc["root"] = root;

  json bodies = json::array();
  for (const SynthBody& body : spec.bodies)
  {
    json entry;
    entry["label"] = body.label ? json(*body.label) : json(nullptr);
    entry["parent"] = body.parent ? json(*body.parent) : json(nullptr);
    if (body.parent)
    {
      entry["c"] = vec3_json(body.c);
      entry["l"] = vec3_json(body.l);
      const Excitation& e = body.excitation;
      json excitation;
      excitation["kind"] = std::string(kind_name(e.kind));
      excitation["rest"] = mat3_json(e.rest);
      if (e.kind == ExcitationKind::Spherical)
        excitation["cone_rad"] = e.cone_rad;
      if (e.kind == ExcitationKind::Hinge)
      {
        excitation["axis"] = vec3_json(e.axis);
        excitation["range_rad"] = e.range_rad;
      }
      if (e.kind == ExcitationKind::Scripted)
      {
        json script = json::array();
        for (const Mat3& r : e.script)
          script.push_back(mat3_json(r));
        excitation["rotations"] = script;
      }
      entry["excitation"] = excitation;
    }
    bodies.push_back(entry);
  }
  doc["bodies"] = bodies;
  return doc.dump(2) + "\n";
}

SynthSpec spec_from_json(const std::string& text)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (const json::parse_error& error)
  {
    throw json_error(std::string("synth spec JSON: ") + error.what());
  }
  if (!doc.is_object())
    throw json_error("synth spec must be a JSON object");

  SynthSpec spec;
  const json& frames = require(doc, "frame_count");
  if (!frames.is_number_unsigned())
    throw json_error("'frame_count' must be a positive integer");
  spec.frame_count = frames.get<std::size_t>();
  if (doc.contains("seed"))
  {
    if (!doc["seed"].is_number_unsigned())
      throw json_error("'seed' must be a non-negative integer");
    spec.seed = doc["seed"].get<std::uint64_t>();
  }
  spec.output_scale = number(doc, "output_scale", 1.0);
  if (doc.contains("noise"))
  {
    spec.noise.sigma_t = number(doc["noise"], "sigma_t", 0.0);
    spec.noise.sigma_r = number(doc["noise"], "sigma_r", 0.0);
  }
  if (doc.contains("root"))
  {
    const json& root = doc["root"];
    const std::string motion = root.value("motion", "random");
    if (motion == "random")
    {
      spec.root.motion = RootMotion::Random;
      spec.root.position_extent = number(root, "position_extent", 1.0);
    }
    else if (motion == "static")
    {
      spec.root.motion = RootMotion::Static;
      if (root.contains("rotation"))
        spec.root.placement.linear = mat3_from_json(root["rotation"], "rotation");
      if (root.contains("translation"))
        spec.root.placement.translation = vec3_from_json(root["translation"], "translation");
    }
    else
    {
      throw json_error("root motion must be 'random' or 'static'");
    }
  }

  const json& bodies = require(doc, "bodies");
  if (!bodies.is_array())
    throw json_error("'bodies' must be an array");
  for (const json& entry : bodies)
  {
    SynthBody body;
    if (entry.contains("label") && entry["label"].is_string())
      body.label = entry["label"].get<std::string>();
    const json& parent = require(entry, "parent");
    if (parent.is_number_unsigned())
      body.parent = parent.get<std::size_t>();
    else if (!parent.is_null())
      throw json_error("'parent' must be a non-negative integer or null");

    if (body.parent)
    {
      body.c = vec3_from_json(require(entry, "c"), "c");
      body.l = vec3_from_json(require(entry, "l"), "l");
      Excitation& e = body.excitation;
      if (entry.contains("excitation"))
      {
        const json& excitation = entry["excitation"];
        const std::string kind = excitation.value("kind", "spherical");
        if (kind == "spherical")
          e.kind = ExcitationKind::Spherical;
        else if (kind == "hinge")
          e.kind = ExcitationKind::Hinge;
        else if (kind == "fixed")
          e.kind = ExcitationKind::Fixed;
        else if (kind == "scripted")
          e.kind = ExcitationKind::Scripted;
        else
          throw json_error("unknown excitation kind '" + kind + "'");

        if (excitation.contains("rest"))
          e.rest = mat3_from_json(excitation["rest"], "rest");
        e.cone_rad = number(excitation, "cone_rad", e.cone_rad);
        e.range_rad = number(excitation, "range_rad", e.range_rad);
        if (excitation.contains("axis"))
          e.axis = vec3_from_json(excitation["axis"], "axis");
        if (excitation.contains("rotations"))
        {
          for (const json& r : excitation["rotations"])
            e.script.push_back(mat3_from_json(r, "rotations"));
        }
      }
    }
    spec.bodies.push_back(std::move(body));
  }

  check_spec(spec);
  return spec;
}

SynthSpec load_spec(const std::filesystem::path& path)
{
  std::ifstream input(path, std::ios::binary);
  if (!input)
    throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << input.rdbuf();
  return spec_from_json(buffer.str());
}

void save_spec(const std::filesystem::path& path, const SynthSpec& spec)
{
  std::ofstream output(path, std::ios::binary);
  if (!output)
    throw Error(ErrorKind::Io, "cannot write " + path.string());
  output << spec_to_json(spec);
  if (!output)
    throw Error(ErrorKind::Io, "write failed for " + path.string());
}

} // namespace skelfit
