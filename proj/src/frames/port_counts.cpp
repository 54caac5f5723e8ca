#include "metatomo/errors.hpp"
#include "metatomo/frames.hpp"

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace metatomo {

namespace {

using BigInt = boost::multiprecision::cpp_int;

// M! / (M - N)!
BigInt falling_factorial(int m, int n) {
  BigInt out = 1;
  for (int k = 0; k < n; ++k) out *= (m - k);
  return out;
}

BigInt binomial(int m, int n) {
  BigInt out = 1;
  for (int k = 1; k <= n; ++k) out = out * (m - n + k) / k;
  return out;
}

BigInt four_pow(int n) { return BigInt(1) << (2 * n); }

void require_photons(int n_photons) {
  if (n_photons < 1) throw InvalidArgument("photon number must be >= 1, got " + std::to_string(n_photons));
}

}  // namespace

int min_ports(int n_photons, DetectionScheme scheme) {
  require_photons(n_photons);
  if (scheme == DetectionScheme::Indistinguishable) return n_photons + 3;
  const BigInt target = four_pow(n_photons);
  for (int m = n_photons;; ++m) {
    if (falling_factorial(m, n_photons) >= target) return m;
  }
}

int max_photons(int ports, DetectionScheme scheme) {
  if (ports < 1) throw InvalidArgument("port count must be >= 1");
  int best = 0;
  // min_ports is nondecreasing in N and >= N, so N > ports never fits.
  for (int n = 1; n <= ports; ++n) {
    if (min_ports(n, scheme) <= ports) best = n;
  }
  return best;
}

std::uint64_t correlation_element_count(int ports, int n_photons, DetectionScheme scheme) {
  require_photons(n_photons);
  if (n_photons > ports) {
    throw InvalidArgument("cannot choose " + std::to_string(n_photons) + " distinct ports out of " +
                          std::to_string(ports));
  }
  const BigInt count = scheme == DetectionScheme::Indistinguishable ? binomial(ports, n_photons)
                                                                     : falling_factorial(ports, n_photons);
  if (count > BigInt(std::numeric_limits<std::uint64_t>::max())) {
    throw InvalidArgument("correlation element count exceeds 64 bits");
  }
  return count.convert_to<std::uint64_t>();
}

}  // namespace metatomo
