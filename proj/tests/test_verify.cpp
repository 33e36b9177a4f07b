/*
   Copyright 2026 The sg-glow Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#include <cmath>

#include "doctest.h"
#include "sg/verify.hpp"

using namespace sg;

TEST_CASE("Cauchy determinant identity")
{
    CHECK(check_cauchy_determinant(1, 1, 100) == 0.0);
    for (int n = 2; n <= 6; ++n) {
        CHECK(check_cauchy_determinant(n, 100 + n, 1000) <= 1e-10);
    }
    // Near-coincident points: only finiteness is asserted.
    CHECK(std::isfinite(check_cauchy_determinant(4, 7, 50, 1e-3)));
}

TEST_CASE("determinant bound")
{
    const BoundCheck one = check_determinant_bound_stats(1, 0.5, 1, 50);
    CHECK(one.holds());
    CHECK(one.max_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(check_determinant_bound(4, 0.5, 3, 200));
    for (double p : {0.3, 0.7}) {
        CHECK(check_determinant_bound(3, p, 5, 200));
    }
    CHECK(determinant_bound_prefactor(4, 0.49) == 1.0);
    CHECK(determinant_bound_prefactor(4, 0.51) == doctest::Approx(std::pow(24.0, 0.02)));
}

TEST_CASE("Young exponents")
{
    const YoungExponents y = young_exponents(2 * pi);
    CHECK(y.q == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(y.p == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    CHECK(y.r == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
    for (double b : {0.3, 1.0, 2 * pi, 3 * pi, 12.0}) {
        const YoungExponents e = young_exponents(b);
        CHECK(1 / e.p + 1 / e.q + 1 / e.r == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(e.p >= 1.0);
        CHECK(e.q >= 1.0);
        CHECK(e.r >= 1.0);
    }
    CHECK(theta_norm_q(2 * pi, 1.0) == doctest::Approx(8 * pi / 3).epsilon(1e-14));
    for (double b : {1.0, 2 * pi, 3 * pi}) {
        CHECK(theta_norm_q_quadrature(b, 1.0) ==
              doctest::Approx(theta_norm_q(b, 1.0)).epsilon(1e-8));
    }
    CHECK(theta_norm_q_quadrature(2 * pi, 2.0) ==
          doctest::Approx(theta_norm_q(2 * pi, 2.0)).epsilon(1e-8));
}

TEST_CASE("neutrality exponent")
{
    const std::vector<double> lambdas{1e-1, 1e-2, 1e-3, 1e-4};
    auto slope = [&](const ChargeConfiguration &c, double b2) {
        return fit_neutrality_exponent(c, {0.0, 1e-3, 1.0, b2}, lambdas).coefficients[1];
    };
    const ChargeConfiguration neutral{{Vec2(0, 0), Vec2(1, 0)}, {1, -1}};
    const ChargeConfiguration ppm{{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}, {1, 1, -1}};
    const ChargeConfiguration pp{{Vec2(0, 0), Vec2(1, 0.5)}, {1, 1}};
    CHECK(std::abs(slope(neutral, 2 * pi)) <= 1e-6);
    CHECK(slope(ppm, 2 * pi) == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(slope(pp, pi) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(fit_neutrality_exponent(pp, {0.0, 1e-3, 1.0, pi}, {1e-1, 1e-2, 1e-3}),
                    ConfigError);
}

TEST_CASE("Euclidean log divergence")
{
    const std::vector<double> eps{1e-2, 3e-3, 1e-3, 3e-4, 1e-4};
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    CHECK(fit_log_divergence_euclid(f, 1.0, eps).coefficients[1] ==
          doctest::Approx(-pi).epsilon(1e-2));
    // A difference of Gaussians vanishing at the origin.
    const SmearingFunction g0{{{1.0, Vec2::Zero(), 1.0}, {-1.0, Vec2::Zero(), 2.0}}};
    CHECK(std::abs(fit_log_divergence_euclid(g0, 1.0, eps).coefficients[1]) <= 1e-3);
}

TEST_CASE("Minkowski counterterm removes the log divergence")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    const ChargeConfiguration c{{Vec2(0.0, 0.5), Vec2(0.0, -0.5)}, {1, -1}};
    const StatePartW W{};
    const auto ladder = std::vector<double>{1e-1, 3e-2, 1e-2, 3e-3};
    const FitReport off = fit_log_divergence_mink(f, c, 2 * pi, 1.0, W, ladder, false);
    const FitReport on = fit_log_divergence_mink(f, c, 2 * pi, 1.0, W, ladder, true);
    const double b_off = std::hypot(off.coefficients[1], off.coefficients[3]);
    const double b_on = std::hypot(on.coefficients[1], on.coefficients[3]);
    CHECK(b_off > 0.1);
    CHECK(b_on <= 0.01 * b_off);
}

TEST_CASE("fit_line")
{
    const FitReport r = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
    CHECK(r.coefficients[0] == doctest::Approx(1.0));
    CHECK(r.coefficients[1] == doctest::Approx(2.0));
    CHECK(r.residual_rms < 1e-14);
}

TEST_CASE("free theory conservation residual")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    const PlateauCutoff g0{0.0, Vec2::Zero(), 8.0, 1.0};
    for (bool corrected : {false, true}) {
        const VectorEstimate r =
            conservation_residual_euclid(f, g0, 2 * pi, 1.0, 2, corrected, {2000, 1, 1});
        CHECK(r.value.norm() == 0.0);
    }
}

TEST_CASE("check report layout")
{
    const std::string s = check_report("x", "{\"a\":1}", "1", "2", 0.5, false);
    CHECK(s.find("\"check\"") != std::string::npos);
    CHECK(s.find("\"pass\":false") != std::string::npos);
}
