#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "metatomo/errors.hpp"
#include "metatomo/frames.hpp"
#include "metatomo/simulator.hpp"
#include "support.hpp"

using namespace metatomo;
using testing_support::Gen;

TEST_SUITE("port probabilities") {
  TEST_CASE("identity transfer") {
    Eigen::MatrixX2cd rows(2, 2);
    rows << 1, 0, 0, 1;
    const auto p = port_probabilities(TransferMatrix(rows), DensityMatrix::projector(JonesVector::horizontal()));
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(0.0));
  }

  TEST_CASE("isotropic state gives half the row power") {
    const TransferMatrix t = six_port_metasurface();
    const auto p = port_probabilities(t, DensityMatrix::maximally_mixed(1));
    for (int a = 0; a < 6; ++a) CHECK(p[static_cast<std::size_t>(a)] == doctest::Approx(t.row(a).squaredNorm() / 2));
  }

  TEST_CASE("QWP sweep agrees with the instrument-matrix path") {
    const TransferMatrix t = six_port_metasurface();
    const Eigen::MatrixX4d a = instrument_matrix(t).entries();
    for (int k = 0; k < 36; ++k) {
      const DensityMatrix rho = qwp_state(k * kPi / 36, 1);
      const Eigen::VectorXd via_a = a * stokes_from_density(rho).as_vector();
      const auto p = port_probabilities(t, rho);
      for (int i = 0; i < 6; ++i) CHECK(std::abs(p[static_cast<std::size_t>(i)] - via_a(i)) < 1e-12);
    }
  }

  TEST_CASE("rejects multiphoton states") {
    CHECK_THROWS_AS(port_probabilities(six_port_metasurface(), DensityMatrix::maximally_mixed(2)), InvalidArgument);
  }
}

TEST_SUITE("correlations") {
  TEST_CASE("tuples") {
    const auto t = increasing_tuples(6, 2);
    CHECK(t.size() == 15);
    CHECK(t.front() == PortTuple{0, 1});
    CHECK(t.back() == PortTuple{4, 5});
    CHECK(increasing_tuples(7, 3).size() == 35);
    CHECK_THROWS_AS(increasing_tuples(2, 3), InvalidArgument);
  }

  TEST_CASE("correlation set validation") {
    CorrelationSet c(2, CorrelationUnits::Counts);
    CHECK_THROWS_AS(c.set({1}, 1.0), InvalidArgument);
    CHECK_THROWS_AS(c.set({2, 1}, 1.0), InvalidArgument);
    CHECK_THROWS_AS(c.set({1, 1}, 1.0), InvalidArgument);
    CHECK_THROWS_AS(c.set({-1, 1}, 1.0), InvalidArgument);
    CHECK_THROWS_AS(c.set({0, 1}, -1.0), InvalidArgument);
    c.set({0, 3}, 4.0);
    CHECK(c.at({0, 3}) == 4.0);
    CHECK(c.port_span() == 4);
    CHECK_THROWS_AS(c.at({0, 2}), InvalidArgument);
  }

  TEST_CASE("published matrix and the pair state") {
    const TransferMatrix t = six_port_metasurface();
    const CorrelationSet c = correlation_tensor(t, cross_polarized_pair(0.58), 2);
    const CorrelationSet c0 = correlation_tensor(t, cross_polarized_pair(0.0), 2);
    CHECK(c.size() == 15);
    CHECK(c.at({0, 5}) == doctest::Approx(0.8737).epsilon(5e-4 / 0.8737));
    CHECK(c.at({0, 4}) == doctest::Approx(1.2505).epsilon(5e-4 / 1.2505));
    CHECK(c0.at({0, 5}) == doctest::Approx(1.4511).epsilon(5e-4 / 1.4511));
    CHECK(c0.at({0, 4}) == doctest::Approx(1.0256).epsilon(5e-4 / 1.0256));
  }

  TEST_CASE("two orthonormal rows and a symmetric pure state") {
    Eigen::MatrixX2cd rows(2, 2);
    rows << 1, 0, 0, 1;
    const TransferMatrix t(rows);
    const DensityMatrix rho = DensityMatrix::pure(Eigen::Vector4cd(0, 1, 1, 0));
    const double v = correlation_tensor(t, rho, 2).at({0, 1});
    CHECK(v == doctest::Approx(testing_support::coincidence_by_orderings(t, rho.matrix(), {0, 1})));
    CHECK(v == doctest::Approx(1.0));
  }

  TEST_CASE("N! factor matches the sum over orderings") {
    Gen g(3);
    for (int i = 0; i < 100; ++i) {
      const int n = 1 + i % 3;
      const TransferMatrix t = g.transfer(n + 3);
      const DensityMatrix rho = g.symmetric_state(n);
      for (const auto& tuple : increasing_tuples(n + 3, n)) {
        CHECK(coincidence(t, rho, tuple) ==
              doctest::Approx(testing_support::coincidence_by_orderings(t, rho.matrix(), tuple)).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("errors") {
    const TransferMatrix t = six_port_metasurface();
    CHECK_THROWS_AS(correlation_tensor(t, cross_polarized_pair(0.5), 3), DimensionMismatch);
    const int bad[] = {0, 0};
    CHECK_THROWS_AS(coincidence(t, cross_polarized_pair(0.5), bad), InvalidArgument);
    const int one[] = {0};
    CHECK_THROWS_AS(coincidence(t, cross_polarized_pair(0.5), one), DimensionMismatch);
    Eigen::MatrixX2cd two = Eigen::MatrixX2cd::Identity(2, 2);
    CHECK_THROWS_AS(correlation_tensor(TransferMatrix(two), DensityMatrix::maximally_mixed(3), 3),
                    DimensionMismatch);
  }

  TEST_CASE("asymmetric states still produce correlations") {
    const DensityMatrix hv = DensityMatrix::pure(Eigen::Vector4cd(0, 1, 0, 0));
    CHECK_FALSE(symmetric_support_check(hv).symmetric);
    const CorrelationSet c = correlation_tensor(six_port_metasurface(), hv, 2);
    CHECK(c.size() == 15);
  }

  TEST_CASE("normalization") {
    const CorrelationSet c = correlation_tensor(six_port_metasurface(), cross_polarized_pair(0.58), 2, {true});
    CHECK(c.total() == doctest::Approx(1.0));
    Eigen::MatrixX2cd rows(2, 2);
    rows << 1, 0, 0, 1;
    // |HH> never leaves through two different ports of an H/V splitter
    CHECK_THROWS_AS(correlation_tensor(TransferMatrix(rows), DensityMatrix::pure(Eigen::Vector4cd(1, 0, 0, 0)), 2,
                                       {true}),
                    InvalidArgument);
  }
}

TEST_SUITE("HOM") {
  TEST_CASE("dip and peak on the published matrix") {
    const TransferMatrix t = six_port_metasurface();
    const HomContrast dip = hom_contrast(t, {0, 5}, 0.58);
    const HomContrast peak = hom_contrast(t, {0, 4}, 0.58);
    CHECK(-dip.relative_change() == doctest::Approx(0.3979).epsilon(5e-4 / 0.3979));
    CHECK(peak.relative_change() == doctest::Approx(0.2193).epsilon(5e-4 / 0.2193));
  }

  TEST_CASE("scan endpoints and center") {
    const TransferMatrix t = six_port_metasurface();
    const SourceModel src{0.58, 2.0};
    const std::vector<double> delays{-16.0, 0.0, 16.0};
    const auto scan = hom_scan(t, {0, 5}, src, delays);
    const double far = correlation_tensor(t, cross_polarized_pair(0.0), 2).at({0, 5});
    const double mid = correlation_tensor(t, cross_polarized_pair(0.58), 2).at({0, 5});
    CHECK(std::abs(scan[0].expected - far) < 1e-6);
    CHECK(std::abs(scan[2].expected - far) < 1e-6);
    CHECK(std::abs(scan[1].expected - mid) < 1e-12);
  }

  TEST_CASE("zero overlap is flat") {
    const TransferMatrix t = six_port_metasurface();
    std::vector<double> delays;
    for (int i = -20; i <= 20; ++i) delays.push_back(0.4 * i);
    const auto scan = hom_scan(t, {1, 3}, SourceModel{0.0, 1.0}, delays);
    for (const auto& p : scan) CHECK(std::abs(p.expected - scan.front().expected) < 1e-12);
  }

  TEST_CASE("port order does not matter") {
    const TransferMatrix t = six_port_metasurface();
    const double d[] = {0.3};
    CHECK(hom_scan(t, {4, 0}, SourceModel{}, d)[0].expected == hom_scan(t, {0, 4}, SourceModel{}, d)[0].expected);
  }

  TEST_CASE("errors") {
    const TransferMatrix t = six_port_metasurface();
    const double d[] = {0.0};
    CHECK_THROWS_AS(hom_scan(t, {2, 2}, SourceModel{}, d), InvalidArgument);
    CHECK_THROWS_AS(hom_scan(t, {0, 6}, SourceModel{}, d), InvalidArgument);
    CHECK_THROWS_AS(hom_scan(t, {0, 1}, SourceModel{1.5, 1.0}, d), InvalidArgument);
    CHECK_THROWS_AS(hom_scan(t, {0, 1}, SourceModel{0.5, 0.0}, d), InvalidArgument);
  }
}

TEST_SUITE("quarter-wave-plate states") {
  TEST_CASE("zero angle") {
    CHECK((qwp_state(0.0, 1).matrix() - DensityMatrix::projector(JonesVector::vertical()).matrix()).norm() < 1e-15);
    CHECK((qwp_state(0.0, 2).matrix() - cross_polarized_pair(0.58).matrix()).norm() < 1e-15);
  }

  TEST_CASE("two-photon state at 37.5 degrees is complex and trace preserving") {
    const DensityMatrix rho = qwp_state(37.5 * kPi / 180.0, 2);
    CHECK(rho.trace() == doctest::Approx(1.0));
    CHECK(rho.matrix().imag().cwiseAbs().maxCoeff() > 0.05);
    // direct conjugation oracle
    const double th = 37.5 * kPi / 180.0;
    const double c = std::cos(th), s = std::sin(th);
    Eigen::Matrix2cd r;
    r << c, -s, s, c;
    Eigen::Matrix2cd ret = Eigen::Matrix2cd::Zero();
    ret(0, 0) = 1.0;
    ret(1, 1) = Complex(0.0, 1.0);
    const Eigen::Matrix2cd q = r * ret * r.transpose();
    const Eigen::Matrix4cd qq = Eigen::kroneckerProduct(q, q);
    const Eigen::Matrix4cd expected = qq * cross_polarized_pair(0.58).matrix() * qq.adjoint();
    CHECK((rho.matrix() - expected).norm() < 1e-14);
  }

  TEST_CASE("custom bases and limits") {
    const DensityMatrix rho = qwp_state(kPi / 4, JonesVector::horizontal());
    // a QWP at 45 degrees turns H into a circular state
    CHECK(std::abs(std::abs(stokes_from_density(rho).s3) - 0.5) < 1e-12);
    CHECK_THROWS_AS(qwp_state(0.1, 3), InvalidArgument);
    CHECK(quarter_wave_plate(0.4).is_unitary());
  }
}

TEST_SUITE("sampling") {
  TEST_CASE("zero expectations give zero counts") {
    CorrelationSet e(2, CorrelationUnits::Expected);
    e.set({0, 1}, 0.0);
    e.set({0, 2}, 1.0);
    const CorrelationSet c = sample_counts(e, 100.0, 1);
    CHECK(c.at({0, 1}) == 0.0);
    CHECK(c.units() == CorrelationUnits::Counts);
  }

  TEST_CASE("fixed seed reproduces the draw") {
    const CorrelationSet e = correlation_tensor(six_port_metasurface(), cross_polarized_pair(0.58), 2);
    const CorrelationSet a = sample_counts(e, 1000.0, 42);
    const CorrelationSet b = sample_counts(e, 1000.0, 42);
    CHECK(a.entries() == b.entries());
    const CorrelationSet c = sample_counts(e, 1000.0, 43);
    CHECK(a.entries() != c.entries());
  }

  TEST_CASE("large shot scale converges within Poisson bounds") {
    const CorrelationSet e = correlation_tensor(six_port_metasurface(), cross_polarized_pair(0.58), 2);
    const double shots = 1e8;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const CorrelationSet c = sample_counts(e, shots, seed);
      for (const auto& [ports, mean] : e.entries()) {
        const double lambda = shots * mean;
        CHECK(std::abs(c.at(ports) - lambda) < 5.0 * std::sqrt(lambda));
      }
    }
  }

  TEST_CASE("sample mean and variance agree with Poisson") {
    CorrelationSet e(1, CorrelationUnits::Expected);
    for (int a = 0; a < 50; ++a) e.set({a}, 1.0);
    double sum = 0.0, sq = 0.0;
    int count = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const CorrelationSet draw = sample_counts(e, 20.0, seed);
      for (const auto& [p, v] : draw.entries()) {
        sum += v;
        sq += v * v;
        ++count;
      }
    }
    const double mean = sum / count;
    const double var = sq / count - mean * mean;
    CHECK(mean == doctest::Approx(20.0).epsilon(0.03));
    CHECK(var == doctest::Approx(20.0).epsilon(0.15));
  }

  TEST_CASE("errors") {
    CorrelationSet counts(1, CorrelationUnits::Counts);
    counts.set({0}, 3.0);
    CHECK_THROWS_AS(sample_counts(counts, 1.0, 0), InvalidArgument);
    CorrelationSet e(1, CorrelationUnits::Expected);
    CHECK_THROWS_AS(sample_counts(e, 0.0, 0), InvalidArgument);
  }
}
