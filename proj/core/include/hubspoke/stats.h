#ifndef HUBSPOKE_STATS_H_
#define HUBSPOKE_STATS_H_

#include <cstdint>
#include <span>
#include <string_view>

namespace hubspoke {

struct Interval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

double mean(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);

// Student-t interval for the mean. A single value gives a zero-width
// interval.
Interval t_interval(std::span<const double> xs, double level = 0.95);

// Percentile bootstrap interval for the mean.
Interval bootstrap_interval(std::span<const double> xs, int resamples, double level,
                            std::uint64_t seed);

// Stable 64-bit stream seed for (seed, stage, index).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage, std::uint64_t index);

}  // namespace hubspoke

#endif  // HUBSPOKE_STATS_H_
