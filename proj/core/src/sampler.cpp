#include "cotforge/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cotforge/errors.hpp"

namespace cotforge {

ShortfallPolicy shortfall_policy_from_string(std::string_view s) {
  if (s == "redistribute") return ShortfallPolicy::kRedistribute;
  if (s == "truncate") return ShortfallPolicy::kTruncate;
  if (s == "fail") return ShortfallPolicy::kFail;
  throw ValidationError("unknown shortfall policy \"" + std::string(s) + "\"");
}

std::string to_string(ShortfallPolicy p) {
  switch (p) {
    case ShortfallPolicy::kRedistribute: return "redistribute";
    case ShortfallPolicy::kTruncate: return "truncate";
    case ShortfallPolicy::kFail: return "fail";
  }
  return "redistribute";
}

namespace {

// largest-remainder over arbitrary non-negative weights (need not sum to 1)
std::array<std::size_t, kLevelCount> apportion(std::size_t n,
                                               const std::array<double, kLevelCount>& weights,
                                               const std::array<bool, kLevelCount>& open) {
  double total = 0.0;
  for (std::size_t i = 0; i < kLevelCount; ++i) {
    if (open[i]) total += weights[i];
  }
  std::array<double, kLevelCount> share{};
  if (total > 0.0) {
    for (std::size_t i = 0; i < kLevelCount; ++i) {
      if (open[i]) share[i] = weights[i] / total;
    }
  } else {
    // all open buckets carry zero target mass: spread uniformly
    std::size_t open_count = 0;
    for (bool o : open) open_count += o ? 1 : 0;
    if (open_count == 0) return {};
    for (std::size_t i = 0; i < kLevelCount; ++i) {
      if (open[i]) share[i] = 1.0 / static_cast<double>(open_count);
    }
  }

  std::array<std::size_t, kLevelCount> quota{};
  std::array<double, kLevelCount> remainder{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < kLevelCount; ++i) {
    double exact = static_cast<double>(n) * share[i];
    quota[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(quota[i]);
    assigned += quota[i];
  }
  std::array<std::size_t, kLevelCount> order{0, 1, 2, 3, 4, 5};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t k = 0; assigned < n && k < kLevelCount; ++k) {
    std::size_t i = order[k];
    if (!open[i]) continue;
    quota[i] += 1;
    ++assigned;
  }
  // floating error can leave seats unassigned; hand them out in label order
  for (std::size_t i = 0; assigned < n && i < kLevelCount; ++i) {
    if (!open[i]) continue;
    quota[i] += 1;
    ++assigned;
  }
  return quota;
}

}  // namespace

std::array<std::size_t, kLevelCount> largest_remainder_quotas(
    std::size_t n, const std::array<double, kLevelCount>& probs) {
  std::array<bool, kLevelCount> open;
  open.fill(true);
  return apportion(n, probs, open);
}

std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw ContractError("bounded_uniform: bound must be > 0");
  // rejection sampling over the top of the range keeps the draw unbiased
  std::uint64_t threshold = (-bound) % bound;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

std::vector<GradedQuestion> sample(const std::vector<GradedQuestion>& db,
                                   const DifficultyDistribution& dist, std::size_t n,
                                   std::uint64_t seed, ShortfallPolicy policy) {
  if (n < 1) throw ValidationError("sample size n must be >= 1");
  if (db.empty()) throw ValidationError("cannot sample from an empty database");
  validate(dist);

  if (n > db.size() && policy != ShortfallPolicy::kTruncate) {
    throw ValidationError("requested " + std::to_string(n) + " samples from a database of " +
                          std::to_string(db.size()) + " (policy " + to_string(policy) + ")");
  }

  std::array<std::vector<std::size_t>, kLevelCount> buckets;
  for (std::size_t i = 0; i < db.size(); ++i) {
    buckets[static_cast<std::size_t>(db[i].difficulty.label)].push_back(i);
  }

  std::array<std::size_t, kLevelCount> avail{};
  for (std::size_t i = 0; i < kLevelCount; ++i) avail[i] = buckets[i].size();

  std::array<std::size_t, kLevelCount> quota = largest_remainder_quotas(n, dist.probs);

  std::array<bool, kLevelCount> open{};
  std::size_t shortfall = 0;
  for (std::size_t i = 0; i < kLevelCount; ++i) {
    if (quota[i] > avail[i]) {
      shortfall += quota[i] - avail[i];
      quota[i] = avail[i];
    }
    open[i] = quota[i] < avail[i];
  }

  if (shortfall > 0) {
    switch (policy) {
      case ShortfallPolicy::kFail:
        throw ValidationError("bucket supply cannot satisfy the target quotas (short by " +
                              std::to_string(shortfall) + ")");
      case ShortfallPolicy::kTruncate:
        break;  // keep the clamped quotas
      case ShortfallPolicy::kRedistribute: {
        while (shortfall > 0) {
          bool any_open = false;
          for (bool o : open) any_open |= o;
          if (!any_open) break;  // supply exhausted entirely
          auto extra = apportion(shortfall, dist.probs, open);
          shortfall = 0;
          for (std::size_t i = 0; i < kLevelCount; ++i) {
            quota[i] += extra[i];
            if (quota[i] > avail[i]) {
              shortfall += quota[i] - avail[i];
              quota[i] = avail[i];
            }
            open[i] = quota[i] < avail[i];
          }
        }
        break;
      }
    }
  }

  // one shared stream, buckets visited in label order: fully reproducible
  std::mt19937_64 rng(seed);
  std::vector<GradedQuestion> out;
  out.reserve(std::accumulate(quota.begin(), quota.end(), std::size_t{0}));
  for (std::size_t l = 0; l < kLevelCount; ++l) {
    std::vector<std::size_t>& pool = buckets[l];
    for (std::size_t k = 0; k < quota[l]; ++k) {
      std::size_t j = k + static_cast<std::size_t>(bounded_uniform(rng, pool.size() - k));
      std::swap(pool[k], pool[j]);
      out.push_back(db[pool[k]]);
    }
  }
  return out;
}

double check_fit(const std::vector<GradedQuestion>& samples,
                 const DifficultyDistribution& dist) {
  if (samples.empty()) throw ValidationError("check_fit requires a nonempty sample");
  std::array<double, kLevelCount> empirical{};
  for (const GradedQuestion& g : samples) {
    empirical[static_cast<std::size_t>(g.difficulty.label)] += 1.0;
  }
  double distance = 0.0;
  for (std::size_t i = 0; i < kLevelCount; ++i) {
    distance += std::abs(empirical[i] / static_cast<double>(samples.size()) - dist.probs[i]);
  }
  return distance;
}

}  // namespace cotforge
