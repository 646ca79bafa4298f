#include <catch2/catch_amalgamated.hpp>

#include <scale_smooth/gaussian.hpp>

using namespace scale_smooth;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("normal density values") {
    CHECK_THAT(gaussian_pdf(0.0), WithinRel(0.39894228040143268, 1e-14));
    CHECK_THAT(gaussian_pdf(1.0), WithinRel(0.24197072451914337, 1e-14));
    CHECK_THAT(gaussian_pdf(-2.0), WithinRel(0.053990966513188063, 1e-14));
    CHECK(gaussian_pdf(-2.0) == gaussian_pdf(2.0));
}

TEST_CASE("normal CDF values") {
    CHECK(gaussian_cdf(0.0) == 0.5);
    CHECK_THAT(gaussian_cdf(-1.0), WithinRel(0.15865525393145705, 1e-13));
    CHECK_THAT(gaussian_cdf(8.0), WithinAbs(1.0, 1e-15));
    CHECK(gaussian_cdf(-40.0) >= 0.0);
}

TEST_CASE("normal CDF is monotone") {
    double previous = 0.0;
    for (int i = -400; i <= 80; ++i) {
        const double value = gaussian_cdf(0.1 * i);
        CHECK(value >= previous);
        CHECK(value <= 1.0);
        previous = value;
    }
}

TEST_CASE("log CDF deep tail") {
    // High-precision references for log Phi(z), frozen from the asymptotic
    // tail series evaluated in extended precision.
    CHECK_THAT(log_gaussian_cdf(-10.0), WithinRel(-53.231285150512471, 1e-13));
    CHECK_THAT(log_gaussian_cdf(-20.0), WithinRel(-203.91715537109726, 1e-13));
    CHECK_THAT(log_gaussian_cdf(-40.0), WithinRel(-804.60844201375379, 1e-13));
    CHECK(std::isfinite(log_gaussian_cdf(-300.0)));
    CHECK_THAT(log_gaussian_cdf(0.0), WithinRel(std::log(0.5), 1e-15));
}

TEST_CASE("both branches agree with high-precision references near the switch") {
    // -35.5 goes through erfc, -36.5 through the tail series.
    CHECK_THAT(log_gaussian_cdf(-35.5), WithinRel(-634.61426315508839, 1e-13));
    CHECK_THAT(log_gaussian_cdf(-36.5), WithinRel(-670.64200000031370, 1e-13));
}
