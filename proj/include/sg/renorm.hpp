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

#include "sg/integrate.hpp"
#include "sg/smearing.hpp"
#include "sg/types.hpp"

namespace sg {

// Euclidean tensors carry Cartesian indices, Minkowski ones light-cone (u, v)
// indices.
using Tensor2 = Mat2;
using Tensor2c = Mat2c;

// int x_mu x_nu / (x^2 + eps^2)^2 f(x) d^2x
Tensor2 u_reg_smeared(const SmearingFunction &f, double eps, double mu);
// Same kernel centred at a: int (a-z)_mu (a-z)_nu / ((a-z)^2 + eps^2)^2 f(z) d^2z
Tensor2 u_reg_shifted(const Vec2 &a, const SmearingFunction &f, double eps);

Tensor2 u_ren_smeared(const SmearingFunction &f, double mu);
// int u^ren(a - z) f(z) d^2z
Tensor2 u_ren_shifted(const Vec2 &a, const SmearingFunction &f, double mu);
// int u^ren(a - z) d_k f(z) d^2z
Tensor2 u_ren_shifted_grad(const Vec2 &a, const SmearingFunction &f, double mu, int k);

Tensor2 u_div(const SmearingFunction &f, double eps, double mu);

// u_ren_shifted(a, f, mu) tabulated per Gaussian term of f. Each term is
// rotation covariant about its centre, so two radial splines per term
// suffice. Points beyond r_max of a term fall back to direct cubature.
class URenTable {
public:
    URenTable(const SmearingFunction &f, double mu, double r_max, int nodes = 240);
    Tensor2 operator()(const Vec2 &a) const;
    double r_max() const { return r_max_; }

private:
    struct Term {
        GaussianTerm g;
        RadialSpline radial, transverse;
    };
    SmearingFunction f_;
    double mu_;
    double r_max_;
    std::vector<Term> terms_;
};

// Pointwise integrand of u_ren_shifted at z (used inside Monte Carlo).
Tensor2 u_ren_kernel(const Vec2 &a, const Vec2 &z, const SmearingFunction &f, double mu);

// Smeared [H_mu H_nu]^ren(z, x) against f(z), light-cone components, with
// H^F regulated at eps.
Tensor2c hmuhnu_ren_smeared(const SmearingFunction &f, const Vec2 &x, double mu, double eps,
                            const CubatureOptions &opt = {});

// int f(z) H_mu(z, x) H_nu(z, y) d^2z at eps, light-cone components.
Tensor2c hmuhnu_direct_smeared(const SmearingFunction &f, const Vec2 &x, const Vec2 &y,
                               double eps, const CubatureOptions &opt = {});

// int H^F(z, y) d^2 f(z) d^2z with d^2 = -4 d_u d_v; tends to f(y) as eps -> 0.
cplx fundamental_solution_smeared(const SmearingFunction &f, const Vec2 &y, double mu, double eps,
                                  const CubatureOptions &opt = {});

cplx counterterm_c(double beta2, double mu, double eps);
cplx cons_redef_c(double beta2);

// Least-squares fit of value(eps) = a + b ln(eps) + c eps.
struct LadderFit {
    cplx a, b, c;
    double rms;
};

// Rows of the pseudo-inverse: a = row(0) . values, etc.
Eigen::Matrix<double, 3, Eigen::Dynamic> ladder_pinv(const std::vector<double> &eps);
LadderFit fit_a_lneps_eps(const std::vector<double> &eps, const std::vector<cplx> &values);
LadderFit fit_a_lneps_eps(const std::vector<double> &eps, const std::vector<double> &values);

inline const std::vector<double> &default_eps_ladder()
{
    static const std::vector<double> ladder{1e-1, 3e-2, 1e-2, 3e-3};
    return ladder;
}

} // namespace sg
