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

#include <vector>

#include "sg/covariance.hpp"
#include "sg/renorm.hpp"
#include "sg/smearing.hpp"

namespace sg {

struct ChargeConfiguration {
    std::vector<Vec2> points;
    std::vector<int> charges;

    void validate() const;
    int total_charge() const;
    std::size_t size() const { return points.size(); }
};

struct EuclidCorrelator {
    double value;
    int neutrality_class;
};

struct MinkCorrelator {
    cplx value;
    int neutrality_class;
};

// Physical limit: delta_{0,sum sigma} prod_{j<k} [mu^2 (x_j-x_k)^2]^{sigma_j sigma_k p}.
// Regulated (Lambda > 0, eps > 0): (mu eps)^{-n p} exp[-beta^2/2 sum sigma sigma C].
EuclidCorrelator euclid_vertex_corr(const ChargeConfiguration &cfg, const RegulatorParams &reg,
                                    bool physical_limit);

// sum_{j<k} sigma_j sigma_k p ln[mu^2 ((x_j-x_k)^2 + eps^2)]
double euclid_log_pairprod(const ChargeConfiguration &cfg, double p, double mu, double eps = 0.0);

Tensor2 euclid_O_corr_smeared(const SmearingFunction &f, const ChargeConfiguration &cfg,
                              double beta2, double mu);

// The unrenormalised correlator at eps > 0, smeared with f.
Tensor2 euclid_O_corr_eps(const SmearingFunction &f, const ChargeConfiguration &cfg,
                          const RegulatorParams &reg);

// Pointwise kernel of the unrenormalised correlator at z, eps > 0.
Tensor2 euclid_O_kernel_eps(const Vec2 &z, const ChargeConfiguration &cfg,
                            const RegulatorParams &reg);

// int f(z) sym[(a-z)/((a-z)^2+eps^2) (x) (b-z)/((b-z)^2+eps^2)] d^2z
Tensor2 euclid_cross_smeared(const SmearingFunction &f, const Vec2 &a, const Vec2 &b,
                             double eps = 0.0);

// euclid_cross_smeared at eps = 0 for Gaussian-mixture f without 2-d
// cubature: the traceless part follows from the closed-form field of each
// Gaussian, the trace from the angular average of A_a . A_b about each centre
// followed by a radial integral.
Tensor2 euclid_cross_fast(const SmearingFunction &f, const Vec2 &a, const Vec2 &b);

inline double quantum_coupling(double beta2) { return 1.0 - beta2 / (8.0 * pi); }

// int f(z) <V_{sign beta}(z) prod V> d^2z in the physical limit.
double euclid_vertex_smeared(const SmearingFunction &f, const ChargeConfiguration &cfg,
                             int sign, double beta2, double mu);

Tensor2 euclid_T_corr_smeared(const SmearingFunction &f, const ChargeConfiguration &cfg,
                              double beta2, double mu, double g_at_insertion,
                              bool quantum_corrected);

// sum_{j<k} sigma_j sigma_k p ln[mu^2 (-uv + i eps |u+v| + eps^2)]
cplx mink_log_pairprod(const ChargeConfiguration &cfg, double p, double mu, double eps);

// Lambda = 0 selects the physical limit.
MinkCorrelator mink_vertex_corr(const ChargeConfiguration &cfg, const RegulatorParams &reg,
                                const StatePartW &W);

// Requires eps > 0. Light-cone components.
Tensor2c mink_O_corr_smeared(const SmearingFunction &f, const ChargeConfiguration &cfg,
                             const RegulatorParams &reg, const StatePartW &W,
                             bool with_counterterm, const CubatureOptions &opt = {});

// eta_{mu nu} in light-cone components.
inline Mat2 eta_lightcone()
{
    Mat2 e;
    e << 0.0, -0.5, -0.5, 0.0;
    return e;
}

// Cartesian (0, 1) tensor to light-cone (u, v) components.
Mat2 to_lightcone(const Mat2 &t);

} // namespace sg
