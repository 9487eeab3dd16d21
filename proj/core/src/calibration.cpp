/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/error.hpp"
#include "skelfit/synth.hpp"

#include <cmath>
#include <string>

namespace skelfit
{

PairCalibration calibrate_pair(const BodyTrack& track_a, const BodyTrack& track_b,
                               std::optional<double> known_distance)
{
  if (track_a.frames.size() != track_b.frames.size())
    throw Error(ErrorKind::LengthMismatch, "tracks have " + std::to_string(track_a.frames.size()) +
                                             " and " + std::to_string(track_b.frames.size()) +
                                             " frames");
  if (track_a.frames.empty())
    throw Error(ErrorKind::DegenerateInput, "tracks are empty");
  if (known_distance && !(*known_distance > 0.0))
    throw Error(ErrorKind::InvalidSpec, "known distance must be positive");

  PairCalibration result;
  const std::size_t n = track_a.frames.size();
  result.distances.resize(n);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k)
  {
    result.distances[k] = (track_a.frames[k].translation - track_b.frames[k].translation).norm();
    sum += result.distances[k];
  }
  result.mean = sum / static_cast<double>(n);

  double sum_sq = 0.0;
  for (double d : result.distances)
    sum_sq += (d - result.mean) * (d - result.mean);
  result.std_dev = n > 1 ? std::sqrt(sum_sq / static_cast<double>(n - 1)) : 0.0;

  if (known_distance)
  {
    if (!(result.mean > 0.0))
      throw Error(ErrorKind::DegenerateInput, "sensors coincide; cannot derive a scale");
    result.scale = *known_distance / result.mean;
  }
  result.scaled_mean_m = result.mean * result.scale;
  result.scaled_std_m = result.std_dev * result.scale;
  return result;
}

} // namespace skelfit
