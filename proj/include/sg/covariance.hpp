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

#pragma once

#include <utility>
#include <vector>

#include "sg/types.hpp"

namespace sg {

struct RegulatorParams {
    double Lambda = 0.0;
    double eps = 0.0;
    double mu = 1.0;
    double beta2 = 2.0 * pi;

    void validate() const;
    double p() const { return beta2 / (4.0 * pi); }
};

struct WMode {
    double w;
    Vec2 p; // null covector (p0, p1) with p0 = +-p1
};

// W(x, y) = sum_k w_k cos(p_k . (x - y))
struct StatePartW {
    std::vector<WMode> modes;

    void validate() const;
    double operator()(const Vec2 &x, const Vec2 &y) const;
    // Cartesian gradient in the first argument.
    Vec2 grad1(const Vec2 &x, const Vec2 &y) const;
    // lim_{z' -> z} d^z_mu d^{z'}_nu W(z, z'), Cartesian components.
    Mat2 coincidence() const;

    static StatePartW default_modes();
};

// sum_{i,j} [W(x_i,x_j) - W(y_i,x_j) - W(x_i,y_j) + W(y_i,y_j)]
double w_quadratic_form(const StatePartW &W, const std::vector<Vec2> &xs,
                        const std::vector<Vec2> &ys);

double euclid_cov(const Vec2 &x, const Vec2 &y, const RegulatorParams &reg);
double massive_cov(const Vec2 &x, const Vec2 &y, double m);

LightConePair lightcone(const Vec2 &x, const Vec2 &y);

// Cartesian (d_0, d_1) to light-cone (d_u, d_v) derivative components.
inline Eigen::Vector2d to_lightcone(const Vec2 &g)
{
    return Eigen::Vector2d(0.5 * (g[0] - g[1]), 0.5 * (g[0] + g[1]));
}

// ln[mu^2 (-uv + i eps |u+v| + eps^2)], principal branch; at eps = 0 the
// boundary value ln|r| + i pi for negative argument.
cplx hadamard_log(const Vec2 &x, const Vec2 &y, double mu, double eps);
cplx hadamard_feynman(const Vec2 &x, const Vec2 &y, double mu, double eps);

// (H_u, H_v) with H_mu = -4 pi i d_mu H^F in the first argument.
std::pair<cplx, cplx> h_mu(const Vec2 &x, const Vec2 &y, double eps);

cplx mink_twopoint(const Vec2 &x, const Vec2 &y, const RegulatorParams &reg,
                   const StatePartW &W);

} // namespace sg
