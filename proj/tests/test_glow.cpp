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
#include "sg/glow.hpp"

using namespace sg;

namespace {

// int g(y) |x - y|^{-2p} d^2y in polar coordinates about x with t = r^{2-2p},
// Gauss-Legendre in t and the trapezoid rule in angle.
double riesz_oracle(const PlateauCutoff &g, const Vec2 &x, double p)
{
    static std::vector<double> gx, gw;
    if (gx.empty()) {
        gauss_legendre(64, gx, gw);
    }
    const double rmax = (x - g.center).norm() + g.R + g.w;
    const double e = 2.0 - 2.0 * p;
    const int nt = 96, panels = 12;
    double s = 0.0;
    for (int k = 0; k < nt; ++k) {
        const double th = 2 * pi * k / nt;
        const Vec2 dir(std::cos(th), std::sin(th));
        // Panels in r so the transition band is resolved.
        for (int j = 0; j < panels; ++j) {
            const double r0 = rmax * j / panels, r1 = rmax * (j + 1) / panels;
            const double t0 = std::pow(r0, e), t1 = std::pow(r1, e);
            for (std::size_t i = 0; i < gx.size(); ++i) {
                const double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gx[i];
                const double r = std::pow(t, 1.0 / e);
                s += 0.5 * (t1 - t0) * gw[i] * value(g, x + r * dir) / e;
            }
        }
    }
    return s * 2 * pi / nt;
}

// 2 pi int r h(r) g(r) G(r) dr for functions radial about the centre of g.
template <typename H>
double radial_oracle(const PlateauCutoff &g, double p, H &&h)
{
    std::vector<double> x, w;
    gauss_legendre(48, x, w);
    double s = 0.0;
    const double edges[] = {0.0, 0.5 * g.R, g.R, g.R + 0.5 * g.w, g.R + g.w};
    for (int k = 0; k < 4; ++k) {
        const double a = edges[k], b = edges[k + 1];
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = 0.5 * (a + b) + 0.5 * (b - a) * x[i];
            const Vec2 z = g.center + Vec2(r, 0.0);
            s += 0.5 * (b - a) * w[i] * 2 * pi * r * h(z) * value(g, z) * riesz_oracle(g, z, p);
        }
    }
    return s;
}

const PlateauCutoff g_small{0.3, Vec2(0.0, 0.0), 1.0, 1.0};

} // namespace

TEST_CASE("order zero terms")
{
    const McConfig mc{1000, 1, 1};
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    const SeriesTerm d = euclid_denominator_term(0, g_small, 2 * pi, 1.0, mc);
    CHECK(d.value.mean[0] == 1.0);
    CHECK(d.value.stderr_ == 0.0);
    const SeriesTerm o = euclid_numerator_term_O(0, f, g_small, 2 * pi, 1.0, mc);
    CHECK(o.value.mean.norm() == 0.0);
    const SeriesTerm md = mink_denominator_term(0, g_small, 2 * pi, 1.0, 0.1, StatePartW{}, mc);
    CHECK(md.value.mean[0] == 1.0);
    CHECK(md.value.mean[1] == 0.0);
}

TEST_CASE("estimate_K against the quadrature oracle")
{
    const double p = 0.5;
    const double K = estimate_K(g_small, 2 * pi, 1.0);
    const double ref = radial_oracle(g_small, p, [](const Vec2 &) { return 1.0; });
    CHECK(K == doctest::Approx(ref).epsilon(1e-6));
    const PlateauCutoff g2{0.6, g_small.center, g_small.R, g_small.w};
    CHECK(estimate_K(g2, 2 * pi, 1.0) == doctest::Approx(4 * K).epsilon(1e-9));
    const PlateauCutoff g0{0.0, Vec2::Zero(), 1.0, 1.0};
    CHECK(estimate_K(g0, 2 * pi, 1.0) == 0.0);
}

TEST_CASE("m = 1 denominator matches estimate_K")
{
    for (double beta2 : {pi, 2 * pi}) {
        const SeriesTerm d = euclid_denominator_term(1, g_small, beta2, 1.0, {200000, 5, 1});
        const double K = estimate_K(g_small, beta2, 1.0);
        CHECK(std::abs(d.value.mean[0] - K) <= 3 * d.value.se(0));
    }
}

TEST_CASE("m = 2 denominator is non-negative")
{
    const SeriesTerm d = euclid_denominator_term(2, g_small, 2 * pi, 1.0, {100000, 6, 1});
    CHECK(d.value.mean[0] >= -3 * d.value.se(0));
}

TEST_CASE("m = 0 vertex numerator against the quadrature oracle")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 2.0);
    const double ref = radial_oracle(g_small, 0.5, [&](const Vec2 &z) { return value(f, z); });
    const SeriesTerm v = euclid_numerator_term_vertex(0, f, g_small, 2 * pi, 1.0, {400000, 9, 1});
    CHECK(std::abs(v.value.mean[0] - ref) <= 3 * v.value.se(0));
    CHECK(std::abs(v.value.mean[1] - ref) <= 3 * v.value.se(1));
    // Charge conjugation swaps the roles of x and y.
    const double diff = v.value.mean[0] - v.value.mean[1];
    const double sd = std::sqrt(v.value.cov(0, 0) + v.value.cov(1, 1) - 2 * v.value.cov(0, 1));
    CHECK(std::abs(diff) <= 3 * sd + 1e-15);
}

TEST_CASE("vertex numerator vanishes off the support of g")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2(40.0, 0.0), 1.0);
    const SeriesTerm v = euclid_numerator_term_vertex(1, f, g_small, 2 * pi, 1.0, {20000, 2, 1});
    CHECK(std::abs(v.value.mean[0]) <= 3 * v.value.se(0) + 1e-300);
    CHECK(std::abs(v.value.mean[1]) <= 3 * v.value.se(1) + 1e-300);
}

TEST_CASE("m = 1 O numerator off-diagonal vanishes by symmetry")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    const SeriesTerm o = euclid_numerator_term_O(1, f, g_small, 2 * pi, 1.0, {100000, 4, 1});
    CHECK(std::abs(o.value.mean[1]) <= 3 * o.value.se(1));
    CHECK(std::abs(o.value.mean[0] - o.value.mean[2]) <=
          3 * std::hypot(o.value.se(0), o.value.se(2)));
}

TEST_CASE("series_majorant")
{
    const auto a = series_majorant(1.0, 1.0, 3 * pi, 3);
    CHECK(a[0] == 0.0);
    CHECK(a[3] == doctest::Approx(9.0 / std::sqrt(6.0)).epsilon(1e-12));
    CHECK(a[3] == doctest::Approx(3.6742).epsilon(1e-4));
    // Both branches give 1/n! at beta^2 = 2 pi.
    const auto b = series_majorant(1.0, 2.0, 2 * pi, 4);
    const auto c = series_majorant(1.0, 2.0, 2 * pi - 1e-12, 4);
    CHECK(b[4] == doctest::Approx(16.0 * 16.0 / 24.0).epsilon(1e-10));
    CHECK(c[4] == doctest::Approx(b[4]).epsilon(1e-10));
    CHECK_THROWS_AS(series_majorant(-1.0, 1.0, pi, 2), DomainError);
}

TEST_CASE("glow value with g = 0 is the free value")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    const PlateauCutoff g0{0.0, Vec2::Zero(), 5.0, 1.0};
    const GlowResult r = glow_value_euclid(f, g0, 2 * pi, 1.0, 2, {2000, 1, 1});
    CHECK(r.value.norm() == 0.0);
    CHECK(r.denominator == 1.0);
}

TEST_CASE("N_max = 0 stress tensor is the m = 0 vertex term")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    const McConfig mc{50000, 3, 1};
    const GlowResult r = glow_value_euclid(f, g_small, 2 * pi, 1.0, 0, mc, Observable::T);
    const SeriesTerm v = euclid_numerator_term_vertex(0, f, g_small, 2 * pi, 1.0, mc);
    const double V = v.value.mean[0] + v.value.mean[1];
    CHECK(r.value(0, 0) == doctest::Approx(V).epsilon(1e-12));
    CHECK(r.value(1, 1) == doctest::Approx(V).epsilon(1e-12));
    CHECK(r.value(0, 1) == 0.0);
    const GlowResult h = glow_value_euclid(f, g_small, 2 * pi, 1.0, 0, mc, Observable::T_hat);
    CHECK(h.value(0, 0) == doctest::Approx(0.75 * V).epsilon(1e-12));
}

TEST_CASE("partial sums settle within the majorant tail")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    const PlateauCutoff g{0.1, Vec2::Zero(), 5.0, 1.0};
    const McConfig mc{20000, 12, 1};
    const double K = estimate_K(g, 2 * pi, 1.0);
    const auto maj = series_majorant(1.0, K, 2 * pi, 3);
    for (int m = 2; m <= 3; ++m) {
        const SeriesTerm t = euclid_denominator_term(m, g, 2 * pi, 1.0, mc);
        CHECK(std::abs(t.value.mean[0]) <= maj[m] + 3 * t.value.se(0));
    }
}

TEST_CASE("term source hook")
{
    const auto f = SmearingFunction::gaussian(1.0, Vec2::Zero(), 1.0);
    int calls = 0, computed = 0;
    TermSource src = [&](Signature, Role, int, double, const std::function<SeriesTerm()> &c) {
        ++calls;
        SeriesTerm t = c();
        ++computed;
        return t;
    };
    const McConfig mc{2000, 1, 1};
    const GlowResult a = glow_value_euclid(f, g_small, 2 * pi, 1.0, 1, mc, Observable::T, src);
    const GlowResult b = glow_value_euclid(f, g_small, 2 * pi, 1.0, 1, mc, Observable::T);
    CHECK(calls == 6);
    CHECK(computed == 6);
    CHECK(a.value == b.value);
    CHECK(a.terms.size() == 6);
}

TEST_CASE("minkowski W factor is bounded by one")
{
    const PlateauCutoff g{0.5, Vec2::Zero(), 1.0, 1.0};
    const StatePartW W = StatePartW::default_modes();
    const PairSampler ps(g, 0.5, PairMetric::lightcone);
    bool ok = true;
    for (std::uint64_t i = 0; i < 2000; ++i) {
        Stream rng(3, i);
        const PairDraw d = ps.sample_pairs(rng, 2);
        ok = ok && std::exp(-pi * w_quadratic_form(W, d.xs, d.ys)) <= 1.0 + 1e-15;
    }
    CHECK(ok);
}

TEST_CASE("minkowski m = 1 denominator is finite and stable in eps")
{
    const PlateauCutoff g{0.2, Vec2::Zero(), 1.0, 1.0};
    const StatePartW W = StatePartW::default_modes();
    const McConfig mc{50000, 2, 1};
    const SeriesTerm a = mink_denominator_term(1, g, 2 * pi, 1.0, 1e-2, W, mc);
    const SeriesTerm b = mink_denominator_term(1, g, 2 * pi, 1.0, 3e-3, W, mc);
    CHECK(std::isfinite(a.value.mean[0]));
    CHECK(std::isfinite(a.value.mean[1]));
    const double d = std::hypot(a.value.mean[0] - b.value.mean[0], a.value.mean[1] - b.value.mean[1]);
    CHECK(d <= 4 * (a.value.stderr_ + b.value.stderr_) + 0.05 * std::abs(a.value.mean[0]));
}
