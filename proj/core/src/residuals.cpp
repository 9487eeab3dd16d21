/*
 *  Copyright (C) 2026 The skelfit Authors
 *
 *  SPDX-License-Identifier: Apache-2.0
 */

#include "skelfit/residuals.hpp"

#include "skelfit/error.hpp"
#include "skelfit/numeric_text.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace skelfit
{

ResidualStats summarize(std::span<const double> values)
{
  ResidualStats stats;
  if (values.empty())
    return stats;

  const auto n = static_cast<double>(values.size());
  stats.min = *std::min_element(values.begin(), values.end());
  stats.max = *std::max_element(values.begin(), values.end());

  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : values)
  {
    sum += v;
    sum_sq += v * v;
  }
  stats.mean = sum / n;
  stats.rms = std::sqrt(sum_sq / n);

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  stats.median = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : values)
  {
    const double d = v - stats.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  stats.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return stats;
}

std::vector<HistogramBin> histogram(std::span<const double> values, double bin_width)
{
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw Error(ErrorKind::InvalidSpec, "histogram bin width must be positive");
  if (values.empty())
    return {};

  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double origin = std::floor(*lo_it / bin_width) * bin_width;
  const auto bin_count =
    std::max<std::size_t>(1, static_cast<std::size_t>(std::floor((*hi_it - origin) / bin_width)) + 1);

  std::vector<HistogramBin> bins(bin_count);
  for (std::size_t b = 0; b < bin_count; ++b)
  {
    bins[b].lo = origin + static_cast<double>(b) * bin_width;
    bins[b].hi = origin + static_cast<double>(b + 1) * bin_width;
  }
  for (double v : values)
  {
    auto b = static_cast<std::size_t>(std::floor((v - origin) / bin_width));
    b = std::min(b, bin_count - 1);
    ++bins[b].count;
  }
  return bins;
}

ResidualTimeline residual_timeline(const JointFit& fit)
{
  return {fit.residual_per_frame, summarize(fit.residual_per_frame)};
}

void write_residual_csv(std::ostream& output, std::span<const double> residual_m)
{
  output << "frame,residual_m\n";
  for (std::size_t k = 0; k < residual_m.size(); ++k)
    output << k << ',' << format_shortest(residual_m[k]) << '\n';
}

void write_histogram_csv(std::ostream& output, std::span<const HistogramBin> bins)
{
  output << "bin_lo,bin_hi,count\n";
  for (const HistogramBin& bin : bins)
    output << format_shortest(bin.lo) << ',' << format_shortest(bin.hi) << ',' << bin.count << '\n';
}

} // namespace skelfit
