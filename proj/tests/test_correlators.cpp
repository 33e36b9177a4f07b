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
#include "sg/correlators.hpp"

using namespace sg;

namespace {

RegulatorParams reg(double beta2, double Lambda = 0.0, double eps = 0.0)
{
    RegulatorParams r;
    r.beta2 = beta2;
    r.Lambda = Lambda;
    r.eps = eps;
    return r;
}

ChargeConfiguration pair_at(const Vec2 &a, const Vec2 &b) { return {{a, b}, {1, -1}}; }

} // namespace

TEST_CASE("euclid_vertex_corr values")
{
    CHECK(euclid_vertex_corr({}, reg(2 * pi), true).value == 1.0);
    const auto c = pair_at(Vec2(0, 0), Vec2(2, 0));
    CHECK(euclid_vertex_corr(c, reg(2 * pi), true).value == doctest::Approx(0.5).epsilon(1e-14));
    const auto single = ChargeConfiguration{{Vec2(0, 0)}, {1}};
    const auto r = euclid_vertex_corr(single, reg(2 * pi), true);
    CHECK(r.value == 0.0);
    CHECK(r.neutrality_class == 1);
}

TEST_CASE("charge conjugation")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-2, 2);
    for (int t = 0; t < 50; ++t) {
        ChargeConfiguration c{{}, {1, 1, -1, -1}};
        for (int k = 0; k < 4; ++k) {
            c.points.emplace_back(d(rng), d(rng));
        }
        ChargeConfiguration cc = c;
        for (auto &s : cc.charges) {
            s = -s;
        }
        const double a = euclid_vertex_corr(c, reg(3.0), true).value;
        CHECK(euclid_vertex_corr(cc, reg(3.0), true).value == doctest::Approx(a).epsilon(1e-14));
    }
}

TEST_CASE("regulated vertex approaches the physical limit")
{
    ChargeConfiguration c{{Vec2(0, 0), Vec2(1, 0.5), Vec2(-0.7, 1.2), Vec2(0.3, -1)}, {1, -1, 1, -1}};
    const double phys = euclid_vertex_corr(c, reg(2.0), true).value;
    const double r = euclid_vertex_corr(c, reg(2.0, 1e-3, 1e-6), false).value;
    CHECK(r == doctest::Approx(phys).epsilon(1e-5));
    CHECK_THROWS_AS(euclid_vertex_corr(c, reg(2.0), false), DomainError);
}

TEST_CASE("euclid_O_corr_smeared trivial cases")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    CHECK(euclid_O_corr_smeared(f, {}, 2 * pi, 1.0).norm() == 0.0);
    const ChargeConfiguration c{{Vec2(1, 0), Vec2(-1, 0)}, {1, 1}};
    CHECK(euclid_O_corr_smeared(f, c, 2 * pi, 1.0).norm() == 0.0);
}

TEST_CASE("euclid_cross_fast matches cubature")
{
    SmearingFunction f{{{1.0, Vec2(0, 0), 1.0}, {0.5, Vec2(0.6, -0.4), 2.0}}};
    for (const auto &[a, b] : {std::pair{Vec2(0.3, 0.2), Vec2(-0.5, 0.1)},
                               std::pair{Vec2(2.0, 0.0), Vec2(0.0, 0.0)},
                               std::pair{Vec2(0.1, 0.9), Vec2(0.15, 0.85)}}) {
        const Tensor2 slow = euclid_cross_smeared(f, a, b);
        const Tensor2 fast = euclid_cross_fast(f, a, b);
        CHECK((slow - fast).cwiseAbs().maxCoeff() <= 1e-8 * slow.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("euclid_O_corr_smeared against the regulated correlator")
{
    // Subtract the local divergence -pi ln(mu eps) f(x_k) from each diagonal
    // and extrapolate eps -> 0 with a + c eps^2 ln eps + d eps^2.
    const auto f = SmearingFunction::gaussian(1.0, Vec2(0.1, 0.0), 1.0);
    const auto c = pair_at(Vec2(0.4, 0.3), Vec2(-0.5, -0.2));
    const double beta2 = 2 * pi;
    const std::vector<double> eps{1e-2, 1e-3, 1e-4};
    Eigen::Matrix3d X;
    std::array<Tensor2, 3> vals;
    const double pref = -beta2 / (4 * pi * pi) * std::exp(euclid_log_pairprod(c, 0.5, 1.0));
    for (int i = 0; i < 3; ++i) {
        const double e = eps[i];
        X.row(i) << 1.0, e * e * std::log(e), e * e;
        double div = 0.0;
        for (const Vec2 &x : c.points) {
            div += -pi * std::log(e) * value(f, x);
        }
        vals[i] = euclid_O_corr_eps(f, c, reg(beta2, 0.0, e)) - pref * div * Tensor2::Identity();
    }
    const Eigen::Matrix3d Xi = X.inverse();
    Tensor2 lim = Tensor2::Zero();
    for (int i = 0; i < 3; ++i) {
        lim += Xi(0, i) * vals[i];
    }
    const Tensor2 O = euclid_O_corr_smeared(f, c, beta2, 1.0);
    CHECK((O - lim).cwiseAbs().maxCoeff() <= 1e-5 * O.cwiseAbs().maxCoeff());
}

TEST_CASE("euclid_T_corr_smeared")
{
    CHECK(quantum_coupling(2 * pi) == doctest::Approx(0.75));
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    const auto c = pair_at(Vec2(0.5, 0.0), Vec2(-0.5, 0.2));
    const double beta2 = 2 * pi, g = 0.3;
    const Tensor2 T = euclid_T_corr_smeared(f, c, beta2, 1.0, g, false);
    const Tensor2 Th = euclid_T_corr_smeared(f, c, beta2, 1.0, g, true);
    // Both share the traceless O-part; only the trace carries the coupling.
    const double V = euclid_vertex_smeared(f, c, 1, beta2, 1.0) +
                     euclid_vertex_smeared(f, c, -1, beta2, 1.0);
    CHECK(T.trace() == doctest::Approx(2 * g * V).epsilon(1e-12));
    CHECK(Th.trace() == doctest::Approx(2 * g * 0.75 * V).epsilon(1e-12));
    CHECK((T - Th - 0.5 * (T.trace() - Th.trace()) * Tensor2::Identity()).norm() < 1e-12);
    // beta^2 -> 0: corrected and classical coincide.
    const Tensor2 a = euclid_T_corr_smeared(f, c, 1e-9, 1.0, g, false);
    const Tensor2 b = euclid_T_corr_smeared(f, c, 1e-9, 1.0, g, true);
    CHECK((a - b).norm() <= 1e-9 * a.norm());
}

TEST_CASE("traceless part of the regulated O correlator is eps independent")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    const auto c = pair_at(Vec2(0.5, 0.0), Vec2(-0.5, 0.2));
    auto tl = [&](double e) {
        const Tensor2 O = euclid_O_corr_eps(f, c, reg(2 * pi, 0.0, e));
        return Tensor2(O - 0.5 * O.trace() * Tensor2::Identity());
    };
    // The remainder is O(eps^2 ln eps).
    const Tensor2 a = tl(1e-4), b = tl(1e-5);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-6 * a.cwiseAbs().maxCoeff());
    const Tensor2 O = euclid_O_corr_smeared(f, c, 2 * pi, 1.0);
    const Tensor2 ren = O - 0.5 * O.trace() * Tensor2::Identity();
    CHECK((ren - b).cwiseAbs().maxCoeff() <= 1e-6 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("mink_vertex_corr values")
{
    const StatePartW W0{};
    CHECK(mink_vertex_corr({}, reg(2 * pi), W0).value == cplx(1.0, 0.0));
    const auto sp = mink_vertex_corr(pair_at(Vec2(0, 0), Vec2(0, 2)), reg(2 * pi), W0);
    CHECK(sp.value.real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(std::abs(sp.value.imag()) < 1e-15);
    const auto tl = mink_vertex_corr(pair_at(Vec2(2, 0), Vec2(0, 0)), reg(2 * pi), W0);
    CHECK(std::abs(tl.value.real()) < 1e-14);
    // (-4 + i0)^(-1/2) = 0.5 e^(-i pi/2)
    CHECK(tl.value.imag() == doctest::Approx(-0.5).epsilon(1e-14));
    // Branch tracking: eps > 0 converges to the boundary value.
    const auto c = pair_at(Vec2(2, 0), Vec2(0, 0));
    const cplx L = mink_log_pairprod(c, 0.5, 1.0, 1e-8);
    CHECK(std::abs(std::exp(L) - tl.value) < 1e-6);
}

TEST_CASE("mink_O_corr_smeared trivial cases")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    const StatePartW W0{};
    RegulatorParams r = reg(2 * pi, 0.0, 0.05);
    CHECK(mink_O_corr_smeared(f, {}, r, W0, false).norm() == 0.0);
    const ChargeConfiguration c{{Vec2(0.3, 1.0), Vec2(-0.2, -1.0)}, {1, 1}};
    CHECK(mink_O_corr_smeared(f, c, r, W0, true).norm() == 0.0);
}

TEST_CASE("lightcone tensor conversion")
{
    // Signature (-, +), so that -uv > 0 is spacelike.
    Mat2 eta;
    eta << -1.0, 0.0, 0.0, 1.0;
    CHECK((to_lightcone(eta) - eta_lightcone()).norm() < 1e-15);
}
