#include "metatomo/errors.hpp"
#include "metatomo/simulator.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace metatomo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based bit generator: output k is a hash of (key, k), so each
// tuple owns an independent, reproducible stream.
class CounterEngine {
 public:
  using result_type = std::uint64_t;
  explicit CounterEngine(std::uint64_t key) : key_(key) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return splitmix64(key_ ^ splitmix64(counter_++)); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t tuple_key(std::uint64_t seed, const PortTuple& ports) {
  std::uint64_t key = splitmix64(seed);
  for (int a : ports) key = splitmix64(key ^ static_cast<std::uint64_t>(a));
  return key;
}

}  // namespace

CorrelationSet sample_counts(const CorrelationSet& expected, double shots, std::uint64_t seed) {
  if (expected.units() != CorrelationUnits::Expected) {
    throw InvalidArgument("sampling needs expected values, not counts");
  }
  if (!(shots > 0.0) || !std::isfinite(shots)) throw InvalidArgument("shot scale must be positive");
  CorrelationSet out(expected.n_photons(), CorrelationUnits::Counts);
  for (const auto& [ports, value] : expected.entries()) {
    const double mean = shots * value;
    if (mean == 0.0) {
      out.set(ports, 0.0);
      continue;
    }
    CounterEngine engine(tuple_key(seed, ports));
    std::poisson_distribution<long long> poisson(mean);
    out.set(ports, static_cast<double>(poisson(engine)));
  }
  return out;
}

}  // namespace metatomo
