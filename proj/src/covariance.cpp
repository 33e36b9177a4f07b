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

#include "sg/covariance.hpp"

#include <cmath>

#include "sg/special_fn.hpp"

namespace sg {

void RegulatorParams::validate() const
{
    if (!(Lambda >= 0.0) || !(eps >= 0.0) || !(mu > 0.0)) {
        throw ConfigError("regulator needs Lambda >= 0, eps >= 0, mu > 0");
    }
    if (!(beta2 > 0.0) || !(beta2 < 4.0 * pi)) {
        throw ConfigError("beta2 must lie in (0, 4 pi)");
    }
}

void StatePartW::validate() const
{
    for (const auto &m : modes) {
        if (!(m.w >= 0.0)) {
            throw ConfigError("W mode weights must be non-negative");
        }
        if (std::abs(std::abs(m.p[0]) - std::abs(m.p[1])) > 1e-12 * (1.0 + m.p.norm())) {
            throw ConfigError("W mode momenta must be null (p0 = +-p1)");
        }
    }
}

double StatePartW::operator()(const Vec2 &x, const Vec2 &y) const
{
    double s = 0.0;
    for (const auto &m : modes) {
        s += m.w * std::cos(m.p.dot(x - y));
    }
    return s;
}

Vec2 StatePartW::grad1(const Vec2 &x, const Vec2 &y) const
{
    Vec2 g = Vec2::Zero();
    for (const auto &m : modes) {
        g -= m.w * std::sin(m.p.dot(x - y)) * m.p;
    }
    return g;
}

Mat2 StatePartW::coincidence() const
{
    Mat2 c = Mat2::Zero();
    for (const auto &m : modes) {
        c += m.w * m.p * m.p.transpose();
    }
    return c;
}

StatePartW StatePartW::default_modes()
{
    return StatePartW{{WMode{0.1, Vec2(1.0, 1.0)}, WMode{0.05, Vec2(2.0, -2.0)}}};
}

double w_quadratic_form(const StatePartW &W, const std::vector<Vec2> &xs,
                        const std::vector<Vec2> &ys)
{
    double s = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            s += W(xs[i], xs[j]) - W(ys[i], xs[j]) - W(xs[i], ys[j]) + W(ys[i], ys[j]);
        }
    }
    return s;
}

double euclid_cov(const Vec2 &x, const Vec2 &y, const RegulatorParams &reg)
{
    const double d2 = (x - y).squaredNorm() + reg.eps * reg.eps;
    if (!(reg.Lambda > 0.0) || !(d2 > 0.0)) {
        throw DomainError("euclid_cov: needs Lambda > 0 and separated points");
    }
    return -std::log(reg.Lambda * reg.Lambda * d2) / (4.0 * pi);
}

double massive_cov(const Vec2 &x, const Vec2 &y, double m)
{
    const double r = (x - y).norm();
    if (!(m > 0.0) || !(r > 0.0)) {
        throw DomainError("massive_cov: needs m > 0 and x != y");
    }
    return bessel_k0(m * r) / (2.0 * pi);
}

LightConePair lightcone(const Vec2 &x, const Vec2 &y)
{
    const Vec2 d = x - y;
    return {d[0] - d[1], d[0] + d[1]};
}

cplx hadamard_log(const Vec2 &x, const Vec2 &y, double mu, double eps)
{
    const auto [u, v] = lightcone(x, y);
    if (eps > 0.0) {
        return std::log(cplx(-u * v + eps * eps, eps * std::abs(u + v))) + 2.0 * std::log(mu);
    }
    const double r = -u * v;
    if (r == 0.0) {
        throw DomainError("hadamard_log: light cone at eps = 0");
    }
    const double re = std::log(mu * mu * std::abs(r));
    return r > 0.0 ? cplx(re, 0.0) : cplx(re, pi);
}

cplx hadamard_feynman(const Vec2 &x, const Vec2 &y, double mu, double eps)
{
    return cplx(0.0, 1.0 / (4.0 * pi)) * hadamard_log(x, y, mu, eps);
}

std::pair<cplx, cplx> h_mu(const Vec2 &x, const Vec2 &y, double eps)
{
    const auto [u, v] = lightcone(x, y);
    const double s = u + v;
    if (eps == 0.0) {
        if (u == 0.0 || v == 0.0) {
            throw DomainError("h_mu: light cone at eps = 0");
        }
        // On u + v = 0 both prescriptions reduce to the same real value at
        // eps = 0, so their average is 1/u.
        return {cplx(1.0 / u, 0.0), cplx(1.0 / v, 0.0)};
    }
    if (s > 0.0) {
        return {1.0 / cplx(u, -eps), 1.0 / cplx(v, -eps)};
    }
    if (s < 0.0) {
        return {1.0 / cplx(u, eps), 1.0 / cplx(v, eps)};
    }
    return {0.5 * (1.0 / cplx(u, -eps) + 1.0 / cplx(u, eps)),
            0.5 * (1.0 / cplx(v, -eps) + 1.0 / cplx(v, eps))};
}

cplx mink_twopoint(const Vec2 &x, const Vec2 &y, const RegulatorParams &reg,
                   const StatePartW &W)
{
    const auto [u, v] = lightcone(x, y);
    if (!(reg.Lambda > 0.0)) {
        throw DomainError("mink_twopoint: needs Lambda > 0");
    }
    if (reg.eps == 0.0 && (u == 0.0 || v == 0.0)) {
        throw DomainError("mink_twopoint: light cone at eps = 0");
    }
    // Principal logs of the two factors separately keep the branch fixed.
    const cplx L = 2.0 * std::log(reg.Lambda) + std::log(cplx(reg.eps, u)) +
                   std::log(cplx(reg.eps, v));
    return cplx(0.0, 1.0 / (4.0 * pi)) * L - cplx(0.0, 1.0) * W(x, y);
}

} // namespace sg
