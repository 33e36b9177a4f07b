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
#include <functional>

#include "doctest.h"
#include "sg/renorm.hpp"

using namespace sg;

namespace {

// Composite Simpson in s = ln r over [ln r0, ln r1].
double radial_log_simpson(const std::function<double(double)> &f, double r0, double r1,
                          int n = 400000)
{
    const double a = std::log(r0), b = std::log(r1), h = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double r = std::exp(a + i * h);
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * f(r) * r;
    }
    return s * h / 3.0;
}

const SmearingFunction unit = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);

} // namespace

TEST_CASE("u_reg_smeared of a unit gaussian")
{
    const Tensor2 u1 = u_reg_smeared(unit, 1.0, 1.0);
    CHECK(std::abs(u1(0, 1)) < 1e-10);
    const double eps = 0.1;
    const Tensor2 u = u_reg_smeared(unit, eps, 1.0);
    const double trace = radial_log_simpson(
        [&](double r) {
            const double d = r * r + eps * eps;
            return 2.0 * pi * r * r * r / (d * d) * std::exp(-r * r);
        },
        1e-9, 9.0);
    CHECK(u.trace() == doctest::Approx(trace).epsilon(1e-8));
    CHECK(u(0, 0) == doctest::Approx(u(1, 1)).epsilon(1e-9));
    CHECK_THROWS_AS(u_reg_smeared(unit, 0.0, 1.0), DomainError);
}

TEST_CASE("u_ren_smeared of a unit gaussian")
{
    const Tensor2 u = u_ren_smeared(unit, 1.0);
    CHECK(std::abs(u(0, 1)) < 1e-10);
    // Radial oracle: for f = exp(-r^2) the bracket averages to (2 r^2 - 4) f
    // on the diagonal.
    const double diag = radial_log_simpson(
        [](double r) {
            return -0.25 * std::log(r * r) * (2 * r * r - 4) * std::exp(-r * r) * 2 * pi * r;
        },
        1e-12, 9.0);
    CHECK(u(0, 0) == doctest::Approx(diag).epsilon(1e-8));
    CHECK(u(1, 1) == doctest::Approx(diag).epsilon(1e-8));
}

TEST_CASE("u_div closed form")
{
    const Tensor2 d = u_div(unit, 0.01, 1.0);
    CHECK(d(0, 0) == doctest::Approx(-pi * std::log(0.01)).epsilon(1e-12));
    CHECK(d(0, 0) == doctest::Approx(14.4676).epsilon(1e-5));
    CHECK(d(0, 1) == 0.0);
    const auto off = SmearingFunction::gaussian(1.0, Vec2(30.0, 0.0), 1.0);
    CHECK(u_div(off, 0.01, 1.0).norm() == 0.0);
    CHECK(u_div(unit, 0.5, 2.0).norm() == 0.0);
}

TEST_CASE("regulated = renormalised + divergent + o(1)")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2(0.2, -0.1), 0.8);
    const Tensor2 ren = u_ren_smeared(f, 1.0);
    double prev = 1e300;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const Tensor2 r = u_reg_smeared(f, eps, 1.0) - ren - u_div(f, eps, 1.0);
        const double m = r.cwiseAbs().maxCoeff();
        CHECK(m < prev);
        prev = m;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("URenTable matches direct evaluation")
{
    SmearingFunction f{{{1.0, Vec2(0.0, 0.0), 1.0}, {-0.4, Vec2(0.8, 0.3), 2.5}}};
    const URenTable tab(f, 1.0, 6.0);
    for (const Vec2 &a : {Vec2(0.0, 0.0), Vec2(0.5, -0.7), Vec2(2.3, 1.1), Vec2(8.0, 0.0)}) {
        const Tensor2 d = u_ren_shifted(a, f, 1.0);
        CHECK((tab(a) - d).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, d.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("u_ren_shifted at the origin is u_ren_smeared")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.5);
    CHECK((u_ren_shifted(Vec2::Zero(), f, 1.0) - u_ren_smeared(f, 1.0)).norm() < 1e-8);
}

TEST_CASE("hmuhnu_ren_smeared away from the support")
{
    // With f vanishing near x the renormalisation is invisible: the smeared
    // value equals the direct product, and it falls off like distance^-2.
    const Vec2 x(0.0, 0.0);
    const auto far = SmearingFunction::gaussian(1.0, Vec2(12.0, 3.0), 1.0);
    const auto farther = SmearingFunction::gaussian(1.0, Vec2(24.0, 6.0), 1.0);
    const Tensor2c r = hmuhnu_ren_smeared(far, x, 1.0, 0.05);
    const Tensor2c d = hmuhnu_direct_smeared(far, x, x, 0.05);
    CHECK((r - d).cwiseAbs().maxCoeff() <= 1e-6 * d.cwiseAbs().maxCoeff());
    const Tensor2c r2 = hmuhnu_ren_smeared(farther, x, 1.0, 0.05);
    const double ratio = r.cwiseAbs().maxCoeff() / r2.cwiseAbs().maxCoeff();
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("H^F is a fundamental solution")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    for (const Vec2 &y : {Vec2(0.0, 0.0), Vec2(0.3, 0.1), Vec2(-0.2, 0.5)}) {
        const cplx v = fundamental_solution_smeared(f, y, 1.0, 1e-4);
        CHECK(std::abs(v - value(f, y)) <= 1e-3);
    }
}

TEST_CASE("counterterm constants")
{
    const cplx c = counterterm_c(2 * pi, 1.0, 0.05);
    CHECK(c.real() == 0.0);
    CHECK(c.imag() == doctest::Approx(0.5 * std::log(0.1)).epsilon(1e-14));
    CHECK(c.imag() == doctest::Approx(-1.15129).epsilon(1e-5));
    CHECK(std::abs(counterterm_c(2 * pi, 1.0, 0.5)) == 0.0);
    CHECK(std::abs(counterterm_c(1e-12, 1.0, 0.05)) < 1e-12);
    CHECK(cons_redef_c(2 * pi) == cplx(0.0, -0.125));
    CHECK(cons_redef_c(pi).imag() == doctest::Approx(-1.0 / 16.0));
    CHECK(std::abs(cons_redef_c(0.0)) == 0.0);
}

TEST_CASE("ladder fit recovers exact coefficients")
{
    const std::vector<double> eps{1e-1, 3e-2, 1e-2, 3e-3};
    std::vector<cplx> vals;
    const cplx a(1.5, -0.3), b(-0.7, 0.2), c(2.0, 1.0);
    for (double e : eps) {
        vals.push_back(a + b * std::log(e) + c * e);
    }
    const LadderFit fit = fit_a_lneps_eps(eps, vals);
    CHECK(std::abs(fit.a - a) < 1e-12);
    CHECK(std::abs(fit.b - b) < 1e-12);
    CHECK(std::abs(fit.c - c) < 1e-10);
    CHECK(fit.rms < 1e-12);
    CHECK_THROWS_AS(ladder_pinv({0.1, 0.01}), ConfigError);
}
