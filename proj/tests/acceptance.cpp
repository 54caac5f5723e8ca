// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include "metatomo/frames.hpp"
#include "metatomo/metagrating.hpp"
#include "metatomo/reconstruction.hpp"
#include "metatomo/simulator.hpp"
#include "support.hpp"

using namespace metatomo;
using testing_support::Gen;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

double near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Outcome criterion1() {
  Outcome o;
  const TransferMatrix t = six_port_metasurface();
  const CorrelationSet c = correlation_tensor(t, cross_polarized_pair(0.58), 2);
  const CorrelationSet d = correlation_tensor(t, cross_polarized_pair(0.0), 2);
  o.require(near(c.at({0, 5}), 0.8737, 5e-4), fmt::format("C(1,6)={:.5f}", c.at({0, 5})));
  o.require(near(c.at({0, 4}), 1.2505, 5e-4), fmt::format("C(1,5)={:.5f}", c.at({0, 4})));
  o.require(near(d.at({0, 5}), 1.4511, 5e-4), fmt::format("C'(1,6)={:.5f}", d.at({0, 5})));
  o.require(near(d.at({0, 4}), 1.0256, 5e-4), fmt::format("C'(1,5)={:.5f}", d.at({0, 4})));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const TransferMatrix t = six_port_metasurface();
  const SourceModel source{0.58, 1.0};
  const std::vector<double> delays{0.0, 40.0};
  auto change = [&](int a, int b) {
    const auto p = hom_scan(t, {a, b}, source, delays);
    return 100.0 * (p[0].expected - p[1].expected) / p[1].expected;
  };
  const double dip = change(0, 5);
  const double peak = change(0, 4);
  o.require(near(dip, -39.79, 0.05), fmt::format("dip (1,6)={:.3f}%", dip));
  o.require(near(peak, 21.93, 0.05), fmt::format("peak (1,5)={:+.3f}%", peak));
  return o;
}

Outcome criterion3() {
  Outcome o;
  const DensityMatrix rho = cross_polarized_pair(0.58);
  o.require(near(purity(rho), 0.6682, 1e-4), fmt::format("purity={:.6f}", purity(rho)));
  o.require(near(concurrence(rho), 0.58, 1e-6), fmt::format("concurrence={:.8f}", concurrence(rho)));
  const double mixed = purity(DensityMatrix::maximally_mixed(2));
  o.require(near(mixed, 0.25, 1e-12), fmt::format("mixed purity={:.15f}", mixed));
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (int m : {6, 8, 12, 20}) {
    const double k = condition_number(instrument_matrix(platonic_frame(m)));
    o.require(near(k, std::sqrt(3.0), 1e-9), fmt::format("kappa({})={:.12f}", m, k));
  }
  const ConditionSummary s = condition_summary(six_port_metasurface());
  auto in_band = [](double k) { return std::abs(k - 2.08) <= 0.15 && k >= std::sqrt(3.0); };
  o.require(in_band(s.raw) || in_band(s.port_normalized) || in_band(s.pair_normalized),
            fmt::format("published kappa raw={:.3f} port-normalized={:.3f} pair-normalized={:.3f}", s.raw,
                        s.port_normalized, s.pair_normalized));
  return o;
}

Outcome criterion5() {
  Outcome o;
  bool indist = true;
  for (int n = 1; n <= 17; ++n) indist = indist && min_ports(n, DetectionScheme::Indistinguishable) == n + 3;
  o.require(indist, "min_ports(N, indist) = N+3 for N=1..17");
  const int expected[][2] = {{6, 3}, {8, 7}, {12, 12}, {20, 20}};
  for (const auto& [m, n] : expected) {
    const int got = max_photons(m, DetectionScheme::Distinguishable);
    o.require(got == n, fmt::format("M={} -> N={} (expected {})", m, got, n));
  }
  const auto count = correlation_element_count(6, 2, DetectionScheme::Indistinguishable);
  o.require(count == 15, fmt::format("count(6,2)={}", count));
  return o;
}

Outcome criterion6() {
  Outcome o;
  const PairAngles pairs[] = {{kPi / 4, kPi / 2}, {kPi / 6, 1.0}, {0.4, 2.0}};
  double worst_eff = 1.0;
  double worst_power = 0.0;
  for (const auto& pair : pairs) {
    for (int m : {8, 10, 14, 20}) {
      const GratingDesign d = synthesize_grating(pair, m);
      const auto psi = diffraction_spectrum(d, pair.states().state);
      const auto orth = diffraction_spectrum(d, pair.states().orthogonal);
      worst_eff = std::min({worst_eff, order_efficiency(psi, -1), order_efficiency(orth, 1)});
      for (const auto* s : {&psi, &orth}) {
        double total = 0.0;
        for (const auto& ord : *s) total += ord.efficiency;
        worst_power = std::max(worst_power, std::abs(total - 1.0));
      }
    }
  }
  o.require(worst_eff >= 1.0 - 1e-9, fmt::format("min efficiency={:.12f}", worst_eff));
  o.require(worst_power <= 1e-12, fmt::format("max power defect={:.2e}", worst_power));
  return o;
}

Outcome criterion7() {
  Outcome o;
  InterleaveGeometry g;
  const InterleaveCapacity c = interleave_capacity(g);
  o.require(c.x_limit == 312, fmt::format("x-limit={}", c.x_limit));
  o.require(c.y_limit == 4, fmt::format("y-limit={}", c.y_limit));
  g.vertical_repeats = 50;
  g.aperture_y_mm = 5.0;
  const long y = interleave_capacity(g).y_limit;
  o.require(y == 20, fmt::format("y-limit(Qi1=50, Ly=5mm)={}", y));
  return o;
}

Outcome criterion8() {
  Outcome o;
  const TransferMatrix t = six_port_metasurface();
  Gen g(8);
  for (int n : {1, 2}) {
    double worst_lin = 1.0;
    double worst_mle = 1.0;
    for (int i = 0; i < 50; ++i) {
      const DensityMatrix rho = g.symmetric_state(n, i % 5 == 0 ? 1 : 0);
      const CorrelationSet c = correlation_tensor(t, rho, n);
      worst_lin = std::min(worst_lin, fidelity(linear_reconstruct(t, c).rho, rho));
      worst_mle = std::min(worst_mle, fidelity(mle_reconstruct(t, c).rho, rho));
    }
    o.require(worst_lin >= 0.9999, fmt::format("N={} linear min F={:.8f}", n, worst_lin));
    o.require(worst_mle >= 0.9999, fmt::format("N={} MLE min F={:.8f}", n, worst_mle));
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  const TransferMatrix t = six_port_metasurface();
  const double target[] = {0.0, 0.99, 0.95};
  for (int n : {1, 2}) {
    double sum = 0.0;
    int runs = 0;
    int failures = 0;
    for (int k = 0; k < 16; ++k) {
      const DensityMatrix rho = qwp_state(kPi * k / 16.0, n);
      const CorrelationSet exp = correlation_tensor(t, rho, n);
      for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const CorrelationSet counts = sample_counts(exp, 2000.0 / exp.total(), seed * 7919 + static_cast<std::uint64_t>(k));
        const ReconstructionReport rep = mle_reconstruct(t, counts);
        if (!rep.converged) ++failures;
        sum += fidelity(rep.rho, rho);
        ++runs;
      }
    }
    const double mean = sum / runs;
    o.require(mean >= target[n], fmt::format("N={} mean F={:.5f} over {} runs ({} unconverged)", n, mean, runs, failures));
  }
  return o;
}

// Compact re-run of the module invariants, 100 random cases each.
Outcome criterion10() {
  Outcome o;
  Gen g(10);
  constexpr int kCases = 100;

  int bad = 0;
  for (int i = 0; i < kCases; ++i) {
    if (meta_atom_matrix(g.uniform(-kPi, kPi), g.uniform(-kPi, kPi), g.uniform(-kPi, kPi)).unitarity_defect() > 1e-12)
      ++bad;
  }
  o.require(bad == 0, fmt::format("unitarity {}/{}", kCases - bad, kCases));

  auto gap = [](const CorrelationSet& a, const CorrelationSet& b, double f) {
    double peak = 0.0;
    double d = 0.0;
    for (const auto& [p, v] : a.entries()) {
      peak = std::max(peak, std::abs(v * f));
      d = std::max(d, std::abs(v * f - b.at(p)));
    }
    return d / peak;
  };

  bad = 0;
  for (int i = 0; i < kCases; ++i) {
    const int n = 1 + i % 3;
    const TransferMatrix t = g.transfer(n + 3);
    Eigen::MatrixX2cd rows = t.rows();
    for (Eigen::Index a = 0; a < rows.rows(); ++a) rows.row(a) *= std::polar(1.0, g.uniform(-kPi, kPi));
    const DensityMatrix rho = g.symmetric_state(n);
    if (gap(correlation_tensor(t, rho, n), correlation_tensor(TransferMatrix(rows), rho, n), 1.0) > 1e-12) ++bad;
  }
  o.require(bad == 0, fmt::format("gauge invariance {}/{}", kCases - bad, kCases));

  bad = 0;
  for (int i = 0; i < kCases; ++i) {
    const int n = 1 + i % 3;
    const TransferMatrix t = g.transfer(n + 3);
    const double xi = g.uniform(0.05, 3.0);
    const DensityMatrix rho = g.symmetric_state(n);
    if (gap(correlation_tensor(t, rho, n), correlation_tensor(t.scaled(xi), rho, n), std::pow(xi, 2 * n)) > 1e-12) ++bad;
  }
  o.require(bad == 0, fmt::format("|xi|^2N scaling {}/{}", kCases - bad, kCases));

  bad = 0;
  for (int i = 0; i < kCases; ++i) {
    const int n = 2 + i % 2;
    const TransferMatrix t = g.transfer(6);
    const DensityMatrix rho = g.symmetric_state(n);
    std::vector<int> ports(6);
    std::iota(ports.begin(), ports.end(), 0);
    std::shuffle(ports.begin(), ports.end(), std::mt19937_64(g.bits()));
    ports.resize(static_cast<std::size_t>(n));
    std::vector<int> sorted = ports;
    std::sort(sorted.begin(), sorted.end());
    const double a = coincidence(t, rho, ports);
    const double b = coincidence(t, rho, sorted);
    if (std::abs(a - b) > 1e-12 * std::abs(b)) ++bad;
  }
  o.require(bad == 0, fmt::format("permutation symmetry {}/{}", kCases - bad, kCases));

  bad = 0;
  const TransferMatrix pub = six_port_metasurface();
  for (int i = 0; i < kCases; ++i) {
    const int n = 1 + i % 2;
    const CorrelationSet counts =
        sample_counts(correlation_tensor(pub, g.symmetric_state(n, g.integer(1, 3)), n), 300.0, g.bits());
    const ReconstructionReport rep = mle_reconstruct(pub, counts);
    bool ok = rep.converged && rep.rho.is_physical();
    for (std::size_t k = 1; k < rep.log_likelihood_trace.size(); ++k)
      ok = ok && rep.log_likelihood_trace[k] >= rep.log_likelihood_trace[k - 1] - 1e-9;
    if (!ok) ++bad;
  }
  o.require(bad == 0, fmt::format("likelihood monotonicity {}/{}", kCases - bad, kCases));

  bad = 0;
  for (int i = 0; i < kCases; ++i) {
    const CorrelationSet exp = correlation_tensor(pub, g.symmetric_state(2), 2);
    const std::uint64_t seed = g.bits();
    const CorrelationSet a = sample_counts(exp, 500.0, seed);
    const CorrelationSet b = sample_counts(exp, 500.0, seed);
    bool same = a.entries() == b.entries();
    if (i % 10 == 0) same = same && mle_reconstruct(pub, a).rho.matrix() == mle_reconstruct(pub, b).rho.matrix();
    if (!same) ++bad;
  }
  o.require(bad == 0, fmt::format("seeded determinism {}/{}", kCases - bad, kCases));
  return o;
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::err);
  struct Criterion {
    int id;
    std::function<Outcome()> run;
    double budget_s;
  };
  const std::vector<Criterion> criteria{
      {1, criterion1, 1.0},  {2, criterion2, 1.0},   {3, criterion3, 0.0}, {4, criterion4, 0.0},
      {5, criterion5, 0.0},  {6, criterion6, 1.0},   {7, criterion7, 0.0}, {8, criterion8, 60.0},
      {9, criterion9, 600.0}, {10, criterion10, 0.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0) o.require(secs < c.budget_s, fmt::format("runtime {:.3f}s < {}s", secs, c.budget_s));
    if (!o.pass) ++failed;
    std::printf("criterion %d: %s (%.3fs) %s\n", c.id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
