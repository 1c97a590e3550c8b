#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "cotforge/records.hpp"

namespace cotforge {

enum class ShortfallPolicy { kRedistribute, kTruncate, kFail };

ShortfallPolicy shortfall_policy_from_string(std::string_view s);
std::string to_string(ShortfallPolicy p);

// Integer quotas for n draws against target probabilities: floor each
// n*p, then hand the remaining seats to the largest fractional remainders
// (ties broken by label order easy, l1..l5).
std::array<std::size_t, kLevelCount> largest_remainder_quotas(
    std::size_t n, const std::array<double, kLevelCount>& probs);

// Unbiased bounded draw on the standardized mt19937_64 stream; identical
// output on every platform, unlike std::uniform_int_distribution.
std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t bound);

// Draws a distribution-matched sample without replacement. Per-label quotas
// come from largest-remainder apportionment; within a label bucket selection
// is uniform under the seeded generator. When a bucket cannot fill its
// quota the shortfall policy decides: redistribute moves the excess to the
// remaining buckets proportionally (repeated to fixpoint), truncate returns
// fewer than n, fail throws.
std::vector<GradedQuestion> sample(const std::vector<GradedQuestion>& db,
                                   const DifficultyDistribution& dist, std::size_t n,
                                   std::uint64_t seed, ShortfallPolicy policy);

// L1 distance between the sample's empirical label distribution and the
// target.
double check_fit(const std::vector<GradedQuestion>& samples,
                 const DifficultyDistribution& dist);

}  // namespace cotforge
