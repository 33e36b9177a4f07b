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
#include <random>

#include "doctest.h"
#include "sg/covariance.hpp"

using namespace sg;

namespace {

RegulatorParams reg(double Lambda, double eps)
{
    RegulatorParams r;
    r.Lambda = Lambda;
    r.eps = eps;
    return r;
}

} // namespace

TEST_CASE("euclid_cov closed form")
{
    CHECK(euclid_cov(Vec2(1, 0), Vec2(0, 0), reg(1, 0)) == doctest::Approx(0.0));
    CHECK(euclid_cov(Vec2(0.3, 0.4), Vec2(0.3, 0.4), reg(1, 1)) == doctest::Approx(0.0));
    CHECK(euclid_cov(Vec2(0, 1), Vec2(0, 0), reg(2, 0)) ==
          doctest::Approx(-std::log(4.0) / (4 * pi)).epsilon(1e-12));
}

TEST_CASE("massive_cov")
{
    CHECK(massive_cov(Vec2(1, 0), Vec2(0, 0), 1.0) ==
          doctest::Approx(std::cyl_bessel_k(0.0, 1.0) / (2 * pi)).epsilon(1e-12));
    CHECK(massive_cov(Vec2(1, 0), Vec2(0, 0), 1.0) == doctest::Approx(0.0670081).epsilon(1e-6));
    CHECK(massive_cov(Vec2(0, 1), Vec2(0, 0), 10.0) == doctest::Approx(2.830e-6).epsilon(1e-3));
    const double m = 1e-6;
    const double lim = -std::log(m * m * std::exp(2 * euler_gamma) / 4.0) / (4 * pi);
    CHECK(std::abs(massive_cov(Vec2(1, 0), Vec2(0, 0), m) - lim) < 1e-5);
}

TEST_CASE("lightcone coordinates")
{
    auto a = lightcone(Vec2(1, 0), Vec2(0, 0));
    CHECK(a.u == 1.0);
    CHECK(a.v == 1.0);
    auto b = lightcone(Vec2(0, 1), Vec2(0, 0));
    CHECK(b.u == -1.0);
    CHECK(b.v == 1.0);
    auto c = lightcone(Vec2(0.7, 0.2), Vec2(0.7, 0.2));
    CHECK(c.u == 0.0);
    CHECK(c.v == 0.0);
}

TEST_CASE("hadamard_feynman boundary values")
{
    const cplx sp = hadamard_feynman(Vec2(0, 1), Vec2(0, 0), 1.0, 0.0);
    CHECK(std::abs(sp) < 1e-15);
    const cplx tl = hadamard_feynman(Vec2(1, 0), Vec2(0, 0), 1.0, 0.0);
    CHECK(tl.real() == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(std::abs(tl.imag()) < 1e-15);
}

TEST_CASE("hadamard_feynman is symmetric")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-3, 3);
    for (int i = 0; i < 200; ++i) {
        const Vec2 x(d(rng), d(rng)), y(d(rng), d(rng));
        const double eps = 0.01 + std::abs(d(rng));
        CHECK(hadamard_feynman(x, y, 1.3, eps) == hadamard_feynman(y, x, 1.3, eps));
    }
}

TEST_CASE("hadamard_feynman tends to the boundary value")
{
    const Vec2 x(0.4, 1.1), y(-0.3, 0.2);
    const cplx b = hadamard_feynman(x, y, 1.0, 0.0);
    CHECK(std::abs(hadamard_feynman(x, y, 1.0, 1e-7) - b) < 1e-6);
    const Vec2 t(2.0, 0.5);
    CHECK(std::abs(hadamard_feynman(t, y, 1.0, 1e-7) - hadamard_feynman(t, y, 1.0, 0.0)) < 1e-6);
}

TEST_CASE("h_mu values")
{
    // x - y = (z0, z1) with u = z0 - z1, v = z0 + z1.
    auto at = [](double u, double v) { return Vec2(0.5 * (u + v), 0.5 * (v - u)); };
    auto [hu, hv] = h_mu(at(2.0, 1.0), Vec2::Zero(), 0.0);
    CHECK(hu.real() == doctest::Approx(0.5));
    CHECK(hu.imag() == 0.0);
    CHECK(hv.real() == doctest::Approx(1.0));
    auto [hu2, hv2] = h_mu(at(1.0, -3.0), Vec2::Zero(), 0.0);
    CHECK(hu2.real() == doctest::Approx(1.0));
    CHECK(hu2.imag() == 0.0);
    CHECK(hv2.real() == doctest::Approx(-1.0 / 3.0));
    // On u + v = 0 both prescriptions agree.
    auto [hu3, hv3] = h_mu(at(1.0, -1.0), Vec2::Zero(), 0.0);
    CHECK(hu3 == cplx(1.0, 0.0));
    CHECK(hv3 == cplx(-1.0, 0.0));
    CHECK_THROWS_AS(h_mu(at(0.0, 2.0), Vec2::Zero(), 0.0), DomainError);
}

TEST_CASE("h_mu against finite differences of hadamard_feynman")
{
    const double eps = 0.1, h = 1e-5;
    const cplx I(0.0, 1.0);
    for (const Vec2 &x : {Vec2(0.3, 1.2), Vec2(1.5, 0.2), Vec2(-0.8, 0.4)}) {
        const Vec2 y(0.1, -0.2);
        const cplx d0 = (hadamard_feynman(x + Vec2(h, 0), y, 1, eps) -
                         hadamard_feynman(x - Vec2(h, 0), y, 1, eps)) / (2 * h);
        const cplx d1 = (hadamard_feynman(x + Vec2(0, h), y, 1, eps) -
                         hadamard_feynman(x - Vec2(0, h), y, 1, eps)) / (2 * h);
        const cplx du = 0.5 * (d0 - d1), dv = 0.5 * (d0 + d1);
        auto [hu, hv] = h_mu(x, y, eps);
        CHECK(std::abs(hu - (-4.0 * pi * I * du)) <= 1e-6 * std::abs(hu));
        CHECK(std::abs(hv - (-4.0 * pi * I * dv)) <= 1e-6 * std::abs(hv));
    }
}

TEST_CASE("mink_twopoint")
{
    const StatePartW zero{};
    CHECK(std::abs(mink_twopoint(Vec2(1, 2), Vec2(1, 2), reg(1, 1), zero)) < 1e-15);
    RegulatorParams r = reg(1, 1e-9);
    // Antisymmetric part vanishes at spacelike separation.
    const Vec2 x(0.2, 1.5), y(0.0, 0.0);
    CHECK(std::abs(mink_twopoint(x, y, r, zero) - mink_twopoint(y, x, r, zero)) < 1e-8);
    // Inside the forward cone it is Delta(x, 0) = -1/2.
    const Vec2 t(1.0, 0.0);
    const cplx diff = mink_twopoint(t, y, r, zero) - mink_twopoint(y, t, r, zero);
    CHECK(diff.real() == doctest::Approx(-0.5).epsilon(1e-8));
    CHECK(std::abs(diff.imag()) < 1e-8);
}

TEST_CASE("state part W")
{
    const StatePartW W = StatePartW::default_modes();
    W.validate();
    const Vec2 x(0.3, -0.2), y(1.1, 0.4);
    CHECK(W(x, y) == doctest::Approx(W(y, x)));
    const double h = 1e-6;
    const Vec2 g = W.grad1(x, y);
    CHECK(g[0] == doctest::Approx((W(x + Vec2(h, 0), y) - W(x - Vec2(h, 0), y)) / (2 * h)).epsilon(1e-6));
    CHECK(g[1] == doctest::Approx((W(x + Vec2(0, h), y) - W(x - Vec2(0, h), y)) / (2 * h)).epsilon(1e-6));
    // Positivity of the quadratic form on random configurations.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-4, 4);
    for (int t = 0; t < 100; ++t) {
        std::vector<Vec2> xs, ys;
        for (int k = 0; k < 3; ++k) {
            xs.emplace_back(d(rng), d(rng));
            ys.emplace_back(d(rng), d(rng));
        }
        CHECK(w_quadratic_form(W, xs, ys) >= -1e-12);
    }
    StatePartW bad{{{0.5, Vec2(1.0, 0.3)}}};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
