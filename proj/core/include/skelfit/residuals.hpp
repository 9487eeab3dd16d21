/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include "skelfit/joint_solver.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace skelfit
{

struct ResidualStats
{
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double rms = 0.0;
  double median = 0.0;
  double skewness = 0.0; // third standardized moment; 0 when the spread is zero
};

struct HistogramBin
{
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

struct ResidualTimeline
{
  std::vector<double> residual_m; // indexed by frame
  ResidualStats stats;
};

ResidualStats summarize(std::span<const double> values);

/// Fixed-width bins starting at floor(min / width) * width and covering max.
/// Bin k holds values in [lo, hi); the last bin also holds values equal to its hi.
std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width);

ResidualTimeline residual_timeline(const JointFit& fit);

/// "frame,residual_m" rows with round-trip number formatting.
void write_residual_csv(std::ostream& output, std::span<const double> residual_m);

/// "bin_lo,bin_hi,count" rows.
void write_histogram_csv(std::ostream& output, std::span<const HistogramBin> bins);

} // namespace skelfit
