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

#include "sg/smearing.hpp"

#include <cmath>

#include "sg/quadrature.hpp"

namespace sg {

void SmearingFunction::validate() const
{
    if (terms.empty()) {
        throw ConfigError("gaussian_mix needs at least one term");
    }
    for (const auto &t : terms) {
        if (!(t.a > 0.0) || !std::isfinite(t.A) || !t.center.allFinite()) {
            throw ConfigError("gaussian_mix term needs finite A, center and a > 0");
        }
    }
}

void PlateauCutoff::validate() const
{
    if (!(g0 >= 0.0) || !(R > 0.0) || !(w > 0.0) || !center.allFinite()) {
        throw ConfigError("plateau needs g0 >= 0, R > 0, w > 0");
    }
}

double value(const SmearingFunction &f, const Vec2 &x)
{
    double s = 0.0;
    for (const auto &t : f.terms) {
        s += t.A * std::exp(-t.a * (x - t.center).squaredNorm());
    }
    return s;
}

Vec2 gradient(const SmearingFunction &f, const Vec2 &x)
{
    Vec2 g = Vec2::Zero();
    for (const auto &t : f.terms) {
        const Vec2 d = x - t.center;
        g += -2.0 * t.a * t.A * std::exp(-t.a * d.squaredNorm()) * d;
    }
    return g;
}

Jet eval_jet(const SmearingFunction &f, const Vec2 &x)
{
    Jet j{0.0, Vec2::Zero(), Mat2::Zero()};
    for (const auto &t : f.terms) {
        const Vec2 d = x - t.center;
        const double e = t.A * std::exp(-t.a * d.squaredNorm());
        j.value += e;
        j.grad += -2.0 * t.a * e * d;
        j.hess += e * (4.0 * t.a * t.a * d * d.transpose() - 2.0 * t.a * Mat2::Identity());
    }
    return j;
}

Jet3 eval_jet3(const SmearingFunction &f, const Vec2 &x)
{
    Jet3 j{0.0, Vec2::Zero(), Mat2::Zero(), {Mat2::Zero(), Mat2::Zero()}};
    for (const auto &t : f.terms) {
        const Vec2 d = x - t.center;
        const double a = t.a;
        const double e = t.A * std::exp(-a * d.squaredNorm());
        j.value += e;
        j.grad += -2.0 * a * e * d;
        j.hess += e * (4.0 * a * a * d * d.transpose() - 2.0 * a * Mat2::Identity());
        for (int k = 0; k < 2; ++k) {
            for (int p = 0; p < 2; ++p) {
                for (int q = 0; q < 2; ++q) {
                    const double dpq = p == q ? 1.0 : 0.0;
                    const double dpk = p == k ? 1.0 : 0.0;
                    const double dqk = q == k ? 1.0 : 0.0;
                    j.third[k](p, q) +=
                        e * (-8.0 * a * a * a * d[p] * d[q] * d[k] +
                             4.0 * a * a * (dpq * d[k] + dpk * d[q] + dqk * d[p]));
                }
            }
        }
    }
    return j;
}

namespace {

// Bump quotient s(r) and its first two radial derivatives.
struct Radial {
    double s, ds, d2s;
};

Radial plateau_profile(const PlateauCutoff &g, double r)
{
    if (r <= g.R) {
        return {1.0, 0.0, 0.0};
    }
    if (r >= g.R + g.w) {
        return {0.0, 0.0, 0.0};
    }
    const double t1 = (g.R + g.w - r) / g.w;
    const double t2 = (r - g.R) / g.w;
    // s = 1 / (1 + exp(phi)), phi = 1/t1 - 1/t2
    const double phi = 1.0 / t1 - 1.0 / t2;
    const double dphi = (1.0 / (t1 * t1) + 1.0 / (t2 * t2)) / g.w;
    const double d2phi = 2.0 * (1.0 / (t1 * t1 * t1) - 1.0 / (t2 * t2 * t2)) / (g.w * g.w);
    double s, sc;
    if (phi > 0.0) {
        const double e = std::exp(-phi);
        s = e / (1.0 + e);
        sc = 1.0 / (1.0 + e);
    } else {
        const double e = std::exp(phi);
        s = 1.0 / (1.0 + e);
        sc = e / (1.0 + e);
    }
    const double ds = -s * sc * dphi;
    const double d2s = -ds * (1.0 - 2.0 * s) * dphi - s * sc * d2phi;
    return {s, ds, d2s};
}

} // namespace

double value(const PlateauCutoff &g, const Vec2 &x)
{
    return g.g0 * plateau_profile(g, (x - g.center).norm()).s;
}

Jet eval_jet(const PlateauCutoff &g, const Vec2 &x)
{
    const Vec2 d = x - g.center;
    const double r = d.norm();
    const Radial p = plateau_profile(g, r);
    Jet j{g.g0 * p.s, Vec2::Zero(), Mat2::Zero()};
    if (p.ds == 0.0 && p.d2s == 0.0) {
        return j;
    }
    const Vec2 n = d / r;
    const Mat2 nn = n * n.transpose();
    j.grad = g.g0 * p.ds * n;
    j.hess = g.g0 * (p.d2s * nn + (p.ds / r) * (Mat2::Identity() - nn));
    return j;
}

Vec2 centroid(const SmearingFunction &f)
{
    Vec2 c = Vec2::Zero();
    double wsum = 0.0;
    for (const auto &t : f.terms) {
        c += std::abs(t.A) * t.center;
        wsum += std::abs(t.A);
    }
    if (wsum == 0.0) {
        return f.terms.front().center;
    }
    return c / wsum;
}

double support_radius(const SmearingFunction &f, double delta)
{
    const Vec2 c = centroid(f);
    const double n = static_cast<double>(f.terms.size());
    double R = 0.0;
    for (const auto &t : f.terms) {
        const double amp = std::abs(t.A) * n;
        const double off = (t.center - c).norm();
        double rho = 0.0;
        if (amp > delta) {
            rho = std::sqrt(std::log(amp / delta) / t.a);
        }
        R = std::max(R, off + rho);
    }
    return R;
}

double plateau_mass(const PlateauCutoff &g)
{
    QuadOptions opt;
    opt.rel_tol = 1e-14;
    auto ring = integrate_gk<double>(
        [&](double r) { return plateau_profile(g, r).s * r; }, g.R, g.R + g.w, opt);
    return g.g0 * (pi * g.R * g.R + 2.0 * pi * ring.value);
}

bool constant_on_support(const PlateauCutoff &g, const SmearingFunction &f, double delta)
{
    return support_radius(f, delta) + (centroid(f) - g.center).norm() <= g.R;
}

double integral(const SmearingFunction &f)
{
    double s = 0.0;
    for (const auto &t : f.terms) {
        s += t.A * pi / t.a;
    }
    return s;
}

} // namespace sg
