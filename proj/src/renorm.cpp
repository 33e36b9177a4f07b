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

#include "sg/renorm.hpp"

#include <algorithm>

#include "sg/covariance.hpp"

namespace sg {

namespace {

using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;
using Vec4c = Eigen::Vector4cd;

constexpr double decay_delta = 1e-16;

struct Cover {
    std::vector<Vec2> centers;
    Disk domain;
};

// Integration region for kernels singular at a: the decay disk of f, in polar
// coordinates about a when a lies inside it.
Cover covering(const Vec2 &a, const SmearingFunction &f)
{
    const Disk d{centroid(f), support_radius(f, decay_delta)};
    if ((a - d.center).norm() < d.R) {
        return {{a}, d};
    }
    return {{d.center}, d};
}

Tensor2 unpack(const Vec3 &t)
{
    Tensor2 m;
    m << t[0], t[1], t[1], t[2];
    return m;
}

Vec3 pack(const Mat2 &m) { return Vec3(m(0, 0), 0.5 * (m(0, 1) + m(1, 0)), m(1, 1)); }

// Light-cone second derivatives (d_u^2, d_v^2, d_u d_v) from a Cartesian Hessian.
Vec3 lightcone_hess(const Mat2 &h)
{
    return Vec3(0.25 * (h(0, 0) - 2.0 * h(0, 1) + h(1, 1)),
                0.25 * (h(0, 0) + 2.0 * h(0, 1) + h(1, 1)), 0.25 * (h(0, 0) - h(1, 1)));
}

struct LightconeBox {
    Vec2 center;
    double half;
};

LightconeBox lightcone_box(const SmearingFunction &f)
{
    return {centroid(f), std::sqrt(2.0) * support_radius(f, decay_delta) * 1.05};
}

std::vector<double> point_ubreaks(const std::vector<Vec2> &pts)
{
    std::vector<double> b;
    for (const auto &p : pts) {
        b.push_back(p[0] - p[1]);
    }
    return b;
}

auto point_vbreaks(const std::vector<Vec2> &pts)
{
    return [pts](double u) {
        std::vector<double> b;
        for (const auto &p : pts) {
            const double vp = p[0] + p[1];
            const double up = p[0] - p[1];
            b.push_back(vp);
            b.push_back(vp + up - u);
        }
        return b;
    };
}

} // namespace

Tensor2 u_reg_shifted(const Vec2 &a, const SmearingFunction &f, double eps)
{
    if (!(eps > 0.0)) {
        throw DomainError("u_reg: eps must be positive");
    }
    const double e2 = eps * eps;
    auto kern = [&](const Vec2 &z) -> Vec3 {
        const Vec2 d = a - z;
        const double den = d.squaredNorm() + e2;
        return Vec3(d[0] * d[0], d[0] * d[1], d[1] * d[1]) * (value(f, z) / (den * den));
    };
    const Cover cv = covering(a, f);
    return unpack(adaptive_cubature<Vec3>(kern, cv.centers, cv.domain, {1e-11}));
}

Tensor2 u_reg_smeared(const SmearingFunction &f, double eps, double mu)
{
    (void)mu;
    return u_reg_shifted(Vec2::Zero(), f, eps);
}

Tensor2 u_ren_kernel(const Vec2 &a, const Vec2 &z, const SmearingFunction &f, double mu)
{
    const Vec2 d = a - z;
    const double r2 = d.squaredNorm();
    const Jet j = eval_jet(f, z);
    return -0.25 * std::log(mu * mu * r2) *
           (j.hess - Mat2::Identity() * (d.dot(j.grad) / r2));
}

Tensor2 u_ren_shifted(const Vec2 &a, const SmearingFunction &f, double mu)
{
    auto kern = [&](const Vec2 &z) -> Vec3 { return pack(u_ren_kernel(a, z, f, mu)); };
    const Cover cv = covering(a, f);
    return unpack(adaptive_cubature<Vec3>(kern, cv.centers, cv.domain, {1e-11}));
}

Tensor2 u_ren_smeared(const SmearingFunction &f, double mu)
{
    return u_ren_shifted(Vec2::Zero(), f, mu);
}

Tensor2 u_ren_shifted_grad(const Vec2 &a, const SmearingFunction &f, double mu, int k)
{
    auto kern = [&](const Vec2 &z) -> Vec3 {
        const Vec2 d = a - z;
        const double r2 = d.squaredNorm();
        const Jet3 j = eval_jet3(f, z);
        const Mat2 m = -0.25 * std::log(mu * mu * r2) *
                       (j.third[k] - Mat2::Identity() * (d.dot(j.hess.col(k)) / r2));
        return pack(m);
    };
    const Cover cv = covering(a, f);
    return unpack(adaptive_cubature<Vec3>(kern, cv.centers, cv.domain, {1e-11}));
}

Tensor2 u_div(const SmearingFunction &f, double eps, double mu)
{
    if (!(eps > 0.0)) {
        throw DomainError("u_div: eps must be positive");
    }
    return -pi * std::log(mu * eps) * value(f, Vec2::Zero()) * Mat2::Identity();
}

URenTable::URenTable(const SmearingFunction &f, double mu, double r_max, int nodes)
    : f_(f), mu_(mu), r_max_(r_max)
{
    f.validate();
    if (!(r_max > 0.0) || nodes < 4) {
        throw DomainError("URenTable: bad range or node count");
    }
    for (const auto &t : f.terms) {
        const auto unit = SmearingFunction::gaussian(1.0, Vec2::Zero(), t.a);
        std::vector<double> rad(nodes), tr(nodes);
        for (int i = 0; i < nodes; ++i) {
            const double r = r_max * i / (nodes - 1);
            const Tensor2 u = u_ren_shifted(Vec2(r, 0.0), unit, mu);
            rad[i] = u(0, 0);
            tr[i] = u(1, 1);
        }
        terms_.push_back({t, RadialSpline::fit(r_max, rad), RadialSpline::fit(r_max, tr)});
    }
}

Tensor2 URenTable::operator()(const Vec2 &a) const
{
    Tensor2 out = Tensor2::Zero();
    for (const auto &t : terms_) {
        const Vec2 d = a - t.g.center;
        const double r = d.norm();
        if (r > r_max_) {
            out += u_ren_shifted(a, SmearingFunction::gaussian(t.g.A, t.g.center, t.g.a), mu_);
            continue;
        }
        const double ur = t.radial(r);
        const double ut = t.transverse(r);
        Tensor2 u = ut * Tensor2::Identity();
        if (r > 0.0) {
            const Vec2 e = d / r;
            u += (ur - ut) * e * e.transpose();
        }
        out += t.g.A * u;
    }
    return out;
}

Tensor2c hmuhnu_ren_smeared(const SmearingFunction &f, const Vec2 &x, double mu, double eps,
                            const CubatureOptions &opt)
{
    if (!(eps > 0.0)) {
        throw DomainError("hmuhnu_ren_smeared: eps must be positive");
    }
    auto kern = [&](const Vec2 &z) -> Vec3c {
        const cplx h = hadamard_feynman(z, x, mu, eps);
        const Vec3 d2 = lightcone_hess(eval_jet(f, z).hess);
        return Vec3c(h * d2[0], h * d2[1], h * h * d2[2]);
    };
    const auto box = lightcone_box(f);
    const std::vector<Vec2> pts{x};
    const Vec3c I = lightcone_cubature<Vec3c>(kern, box.center, box.half, point_ubreaks(pts),
                                              point_vbreaks(pts), opt);
    const cplx i(0.0, 1.0);
    const cplx local = i * pi * value(f, x);
    Tensor2c t;
    t(0, 0) = 4.0 * pi * i * I[0] + local;
    t(1, 1) = 4.0 * pi * i * I[1] + local;
    t(0, 1) = t(1, 0) = -8.0 * pi * pi * I[2];
    return t;
}

Tensor2c hmuhnu_direct_smeared(const SmearingFunction &f, const Vec2 &x, const Vec2 &y,
                               double eps, const CubatureOptions &opt)
{
    auto kern = [&](const Vec2 &z) -> Vec4c {
        const auto hx = h_mu(z, x, eps);
        const auto hy = h_mu(z, y, eps);
        const double fz = value(f, z);
        return Vec4c(hx.first * hy.first, hx.first * hy.second, hx.second * hy.first,
                     hx.second * hy.second) *
               fz;
    };
    const auto box = lightcone_box(f);
    const std::vector<Vec2> pts{x, y};
    const Vec4c I = lightcone_cubature<Vec4c>(kern, box.center, box.half, point_ubreaks(pts),
                                              point_vbreaks(pts), opt);
    Tensor2c t;
    t << I[0], I[1], I[2], I[3];
    return t;
}

cplx fundamental_solution_smeared(const SmearingFunction &f, const Vec2 &y, double mu, double eps,
                                  const CubatureOptions &opt)
{
    if (!(eps > 0.0)) {
        throw DomainError("fundamental_solution_smeared: eps must be positive");
    }
    auto kern = [&](const Vec2 &z) -> cplx {
        const double box = -4.0 * lightcone_hess(eval_jet(f, z).hess)[2];
        return hadamard_feynman(z, y, mu, eps) * box;
    };
    const auto box = lightcone_box(f);
    const std::vector<Vec2> pts{y};
    return lightcone_cubature<cplx>(kern, box.center, box.half, point_ubreaks(pts),
                                    point_vbreaks(pts), opt);
}

cplx counterterm_c(double beta2, double mu, double eps)
{
    if (!(eps > 0.0)) {
        throw DomainError("counterterm_c: eps must be positive");
    }
    return cplx(0.0, beta2 / (4.0 * pi) * std::log(2.0 * mu * eps));
}

cplx cons_redef_c(double beta2) { return cplx(0.0, -beta2 / (16.0 * pi)); }

Eigen::Matrix<double, 3, Eigen::Dynamic> ladder_pinv(const std::vector<double> &eps)
{
    const int n = static_cast<int>(eps.size());
    if (n < 3) {
        throw ConfigError("ladder fit needs at least three points");
    }
    Eigen::MatrixXd X(n, 3);
    for (int k = 0; k < n; ++k) {
        if (!(eps[k] > 0.0)) {
            throw ConfigError("ladder fit: eps must be positive");
        }
        X(k, 0) = 1.0;
        X(k, 1) = std::log(eps[k]);
        X(k, 2) = eps[k];
    }
    return X.completeOrthogonalDecomposition().pseudoInverse();
}

LadderFit fit_a_lneps_eps(const std::vector<double> &eps, const std::vector<cplx> &values)
{
    if (values.size() != eps.size()) {
        throw ConfigError("ladder fit: size mismatch");
    }
    const auto P = ladder_pinv(eps);
    const int n = static_cast<int>(eps.size());
    Eigen::VectorXcd y(n);
    for (int k = 0; k < n; ++k) {
        y[k] = values[k];
    }
    const Eigen::Vector3cd c = P.cast<cplx>() * y;
    double ss = 0.0;
    for (int k = 0; k < n; ++k) {
        ss += std::norm(y[k] - (c[0] + c[1] * std::log(eps[k]) + c[2] * eps[k]));
    }
    return {c[0], c[1], c[2], std::sqrt(ss / n)};
}

LadderFit fit_a_lneps_eps(const std::vector<double> &eps, const std::vector<double> &values)
{
    return fit_a_lneps_eps(eps, std::vector<cplx>(values.begin(), values.end()));
}

} // namespace sg
