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
#include "sg/smearing.hpp"

using namespace sg;

TEST_CASE("gaussian jet at the centre")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    const Jet j = eval_jet(f, Vec2::Zero());
    CHECK(j.value == 1.0);
    CHECK(j.grad.norm() == 0.0);
    CHECK(j.hess(0, 0) == doctest::Approx(-2.0));
    CHECK(j.hess(1, 1) == doctest::Approx(-2.0));
    CHECK(j.hess(0, 1) == 0.0);
}

TEST_CASE("smearing jet against finite differences")
{
    SmearingFunction f{{{1.3, Vec2(0.2, -0.4), 0.7}, {-0.5, Vec2(-1.0, 0.5), 2.0}}};
    const Vec2 x(0.3, 0.1);
    const double h = 1e-5;
    const Jet3 j = eval_jet3(f, x);
    CHECK(j.value == doctest::Approx(value(f, x)));
    for (int k = 0; k < 2; ++k) {
        Vec2 e = Vec2::Zero();
        e[k] = h;
        const Jet jp = eval_jet(f, x + e);
        const Jet jm = eval_jet(f, x - e);
        CHECK(j.grad[k] == doctest::Approx((value(f, x + e) - value(f, x - e)) / (2 * h)).epsilon(1e-8));
        for (int i = 0; i < 2; ++i) {
            CHECK(j.hess(i, k) ==
                  doctest::Approx((jp.grad[i] - jm.grad[i]) / (2 * h)).epsilon(1e-7));
            for (int l = 0; l < 2; ++l) {
                CHECK(j.third[k](i, l) ==
                      doctest::Approx((jp.hess(i, l) - jm.hess(i, l)) / (2 * h)).epsilon(1e-6));
            }
        }
    }
    CHECK((gradient(f, x) - j.grad).norm() < 1e-14);
}

TEST_CASE("plateau cutoff regions")
{
    const PlateauCutoff g{0.3, Vec2::Zero(), 5.0, 1.0};
    const Jet in = eval_jet(g, Vec2::Zero());
    CHECK(in.value == 0.3);
    CHECK(in.grad.norm() == 0.0);
    CHECK(value(g, Vec2(6.5, 0.0)) == 0.0);
    CHECK(value(g, Vec2(0.0, -6.5)) == 0.0);
    // Monotone through the transition band.
    double prev = 0.3;
    for (double r = 5.0; r <= 6.0; r += 0.05) {
        const double v = value(g, Vec2(r, 0.0));
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
}

TEST_CASE("plateau gradient against finite differences")
{
    const PlateauCutoff g{0.7, Vec2(1.0, 2.0), 2.0, 1.5};
    const Vec2 x(3.1, 2.9);
    const double h = 1e-6;
    const Jet j = eval_jet(g, x);
    for (int k = 0; k < 2; ++k) {
        Vec2 e = Vec2::Zero();
        e[k] = h;
        CHECK(j.grad[k] == doctest::Approx((value(g, x + e) - value(g, x - e)) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("constant_on_support")
{
    const auto f0 = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    CHECK(constant_on_support(PlateauCutoff{1.0, Vec2::Zero(), 8.0, 1.0}, f0, 1e-12));
    CHECK_FALSE(constant_on_support(PlateauCutoff{1.0, Vec2::Zero(), 1.0, 1.0}, f0, 1e-12));
    const auto f10 = SmearingFunction::gaussian(1.0, Vec2(10.0, 0.0), 1.0);
    CHECK_FALSE(constant_on_support(PlateauCutoff{1.0, Vec2::Zero(), 8.0, 1.0}, f10, 1e-12));
}

TEST_CASE("support radius of a unit gaussian")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    const double R = support_radius(f, 1e-12);
    CHECK(R == doctest::Approx(std::sqrt(-std::log(1e-12))).epsilon(1e-6));
    CHECK(value(f, Vec2(R, 0.0)) <= 1e-12 * (1 + 1e-9));
}

TEST_CASE("integrals and centroid")
{
    SmearingFunction f{{{2.0, Vec2(1.0, 0.0), 0.5}, {1.0, Vec2(-2.0, 3.0), 4.0}}};
    CHECK(integral(f) == doctest::Approx(2.0 * pi / 0.5 + pi / 4.0));
    const Vec2 c = centroid(f);
    CHECK(c[0] == doctest::Approx((2.0 * 1.0 + 1.0 * -2.0) / 3.0));
    CHECK(c[1] == doctest::Approx(1.0));
}

TEST_CASE("plateau mass against radial quadrature")
{
    const PlateauCutoff g{0.4, Vec2(0.5, 0.5), 3.0, 1.0};
    double s = 0.0;
    const int n = 200000;
    const double rmax = 4.0, h = rmax / n;
    for (int i = 0; i < n; ++i) {
        const double r = (i + 0.5) * h;
        s += 2.0 * pi * r * value(g, Vec2(0.5 + r, 0.5)) * h;
    }
    CHECK(plateau_mass(g) == doctest::Approx(s).epsilon(1e-7));
}

TEST_CASE("validation")
{
    CHECK_THROWS_AS(SmearingFunction::gaussian(1.0, Vec2::Zero(), -1.0).validate(), ConfigError);
    CHECK_THROWS_AS((PlateauCutoff{1.0, Vec2::Zero(), 1.0, 0.0}.validate()), ConfigError);
}
