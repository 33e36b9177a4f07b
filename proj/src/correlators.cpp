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

#include "sg/correlators.hpp"

#include "sg/integrate.hpp"

namespace sg {

namespace {

using Vec3 = Eigen::Vector3d;
using Vec9c = Eigen::Matrix<cplx, 9, 1>;

constexpr double decay_delta = 1e-16;

Disk support_disk(const SmearingFunction &f)
{
    return Disk{centroid(f), support_radius(f, decay_delta)};
}

Tensor2 unpack(const Vec3 &t)
{
    Tensor2 m;
    m << t[0], t[1], t[1], t[2];
    return m;
}

void require_distinct(const ChargeConfiguration &cfg)
{
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        for (std::size_t k = j + 1; k < cfg.size(); ++k) {
            if ((cfg.points[j] - cfg.points[k]).squaredNorm() == 0.0) {
                throw DomainError("coincident insertion points");
            }
        }
    }
}

double lambda_factor(const RegulatorParams &reg, int q)
{
    return std::pow(reg.Lambda / reg.mu, reg.p() * q * q);
}

} // namespace

void ChargeConfiguration::validate() const
{
    if (points.size() != charges.size()) {
        throw ConfigError("charge configuration: points and charges differ in length");
    }
    for (int s : charges) {
        if (s != 1 && s != -1) {
            throw ConfigError("charge configuration: charges must be +1 or -1");
        }
    }
}

int ChargeConfiguration::total_charge() const
{
    int q = 0;
    for (int s : charges) {
        q += s;
    }
    return q;
}

Mat2 to_lightcone(const Mat2 &t)
{
    Mat2 J;
    J << 0.5, -0.5, 0.5, 0.5;
    return J * t * J.transpose();
}

double euclid_log_pairprod(const ChargeConfiguration &cfg, double p, double mu, double eps)
{
    double s = 0.0;
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        for (std::size_t k = j + 1; k < cfg.size(); ++k) {
            const double d2 = (cfg.points[j] - cfg.points[k]).squaredNorm() + eps * eps;
            s += cfg.charges[j] * cfg.charges[k] * std::log(mu * mu * d2);
        }
    }
    return p * s;
}

EuclidCorrelator euclid_vertex_corr(const ChargeConfiguration &cfg, const RegulatorParams &reg,
                                    bool physical_limit)
{
    cfg.validate();
    const int q = cfg.total_charge();
    if (physical_limit) {
        if (q != 0) {
            return {0.0, q};
        }
        require_distinct(cfg);
        return {std::exp(euclid_log_pairprod(cfg, reg.p(), reg.mu)), q};
    }
    if (!(reg.Lambda > 0.0) || !(reg.eps > 0.0)) {
        throw DomainError("regulated vertex correlator needs Lambda > 0 and eps > 0");
    }
    const double n = static_cast<double>(cfg.size());
    double s = -n * reg.p() * std::log(reg.mu * reg.eps);
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        for (std::size_t k = 0; k < cfg.size(); ++k) {
            s -= 0.5 * reg.beta2 * cfg.charges[j] * cfg.charges[k] *
                 euclid_cov(cfg.points[j], cfg.points[k], reg);
        }
    }
    return {std::exp(s), q};
}

Tensor2 euclid_cross_smeared(const SmearingFunction &f, const Vec2 &a, const Vec2 &b, double eps)
{
    const double e2 = eps * eps;
    auto kern = [&](const Vec2 &z) -> Vec3 {
        const Vec2 A = (a - z) / ((a - z).squaredNorm() + e2);
        const Vec2 B = (b - z) / ((b - z).squaredNorm() + e2);
        return Vec3(A[0] * B[0], 0.5 * (A[0] * B[1] + A[1] * B[0]), A[1] * B[1]) * value(f, z);
    };
    return unpack(adaptive_cubature<Vec3>(kern, {a, b}, support_disk(f), {1e-10}));
}

namespace {

cplx as_complex(const Vec2 &v) { return {v[0], v[1]}; }

// int f(z) / conj(a - z) d^2z; for each Gaussian this is the 2-d Gauss law.
cplx gauss_field(const SmearingFunction &f, const Vec2 &a)
{
    cplx e = 0.0;
    for (const auto &t : f.terms) {
        const Vec2 d = a - t.center;
        const double r2 = d.squaredNorm();
        if (r2 == 0.0) {
            continue;
        }
        e += (-std::expm1(-t.a * r2) * t.A * pi / t.a) / std::conj(as_complex(d));
    }
    return e;
}

// int exp(-alpha |z|^2) A_a(z) . A_b(z) d^2z for a, b relative to the centre.
// The angular average of A_a . A_b over |z| = rho is Re 1/(conj(a) b - rho^2)
// inside both points, Re 1/(rho^2 - conj(a) b) outside both and 0 between.
double gauss_cross_trace(double alpha, const Vec2 &a, const Vec2 &b)
{
    const cplx w = std::conj(as_complex(a)) * as_complex(b);
    const double ra = a.squaredNorm();
    const double rb = b.squaredNorm();
    const double lo = std::min(ra, rb);
    const double hi = std::max(ra, rb);
    const QuadOptions opt{1e-11, 1e-300, 400};
    double s = 0.0;
    if (lo > 0.0) {
        auto inner = [&](double t) { return std::exp(-alpha * t) * (1.0 / (w - t)).real(); };
        const auto r = integrate_gk<double>(inner, 0.0, lo, opt);
        s += r.value;
    }
    const double tail = 40.0 / alpha;
    auto outer = [&](double t) { return std::exp(-alpha * t) * (1.0 / (t - w)).real(); };
    std::vector<double> br;
    for (double x = hi + 1.0 / alpha; x < hi + tail; x *= 2.0) {
        br.push_back(x);
        if (x <= 0.0) {
            break;
        }
    }
    const auto r = integrate_gk<double>(outer, hi, hi + tail, opt, br);
    s += r.value;
    return pi * s;
}

} // namespace

Tensor2 euclid_cross_fast(const SmearingFunction &f, const Vec2 &a, const Vec2 &b)
{
    if ((a - b).squaredNorm() == 0.0) {
        throw DomainError("euclid_cross_fast: coincident points");
    }
    double tr = 0.0;
    for (const auto &t : f.terms) {
        tr += t.A * gauss_cross_trace(t.a, a - t.center, b - t.center);
    }
    // int f alpha_a alpha_b by partial fractions in the complex coordinate
    const cplx S = (gauss_field(f, a) - gauss_field(f, b)) / std::conj(as_complex(b - a));
    Tensor2 c;
    c << 0.5 * (tr + S.real()), 0.5 * S.imag(), 0.5 * S.imag(), 0.5 * (tr - S.real());
    return c;
}

Tensor2 euclid_O_corr_smeared(const SmearingFunction &f, const ChargeConfiguration &cfg,
                              double beta2, double mu)
{
    cfg.validate();
    if (cfg.size() == 0 || cfg.total_charge() != 0) {
        return Tensor2::Zero();
    }
    require_distinct(cfg);
    const double p = beta2 / (4.0 * pi);
    Tensor2 bracket = Tensor2::Zero();
    for (std::size_t k = 0; k < cfg.size(); ++k) {
        bracket += u_ren_shifted(cfg.points[k], f, mu);
        for (std::size_t j = 0; j < k; ++j) {
            bracket += 2.0 * cfg.charges[j] * cfg.charges[k] *
                       euclid_cross_smeared(f, cfg.points[j], cfg.points[k]);
        }
    }
    return -beta2 / (4.0 * pi * pi) * std::exp(euclid_log_pairprod(cfg, p, mu)) * bracket;
}

Tensor2 euclid_O_corr_eps(const SmearingFunction &f, const ChargeConfiguration &cfg,
                          const RegulatorParams &reg)
{
    cfg.validate();
    if (!(reg.eps > 0.0)) {
        throw DomainError("euclid_O_corr_eps: eps must be positive");
    }
    const int q = cfg.total_charge();
    double pref;
    if (reg.Lambda > 0.0) {
        pref = lambda_factor(reg, q);
    } else {
        if (q != 0) {
            return Tensor2::Zero();
        }
        pref = 1.0;
    }
    Tensor2 bracket = Tensor2::Zero();
    for (std::size_t k = 0; k < cfg.size(); ++k) {
        bracket += u_reg_shifted(cfg.points[k], f, reg.eps);
        for (std::size_t j = 0; j < k; ++j) {
            bracket += 2.0 * cfg.charges[j] * cfg.charges[k] *
                       euclid_cross_smeared(f, cfg.points[j], cfg.points[k], reg.eps);
        }
    }
    return -reg.beta2 / (4.0 * pi * pi) * pref *
           std::exp(euclid_log_pairprod(cfg, reg.p(), reg.mu, reg.eps)) * bracket;
}

Tensor2 euclid_O_kernel_eps(const Vec2 &z, const ChargeConfiguration &cfg,
                            const RegulatorParams &reg)
{
    cfg.validate();
    const double e2 = reg.eps * reg.eps;
    Vec2 s = Vec2::Zero();
    for (std::size_t k = 0; k < cfg.size(); ++k) {
        const Vec2 d = cfg.points[k] - z;
        s += cfg.charges[k] * d / (d.squaredNorm() + e2);
    }
    const double pref = reg.Lambda > 0.0 ? lambda_factor(reg, cfg.total_charge()) : 1.0;
    return -reg.beta2 / (4.0 * pi * pi) * pref *
           std::exp(euclid_log_pairprod(cfg, reg.p(), reg.mu, reg.eps)) * (s * s.transpose());
}

double euclid_vertex_smeared(const SmearingFunction &f, const ChargeConfiguration &cfg,
                             int sign, double beta2, double mu)
{
    cfg.validate();
    if (cfg.total_charge() + sign != 0) {
        return 0.0;
    }
    require_distinct(cfg);
    const double p = beta2 / (4.0 * pi);
    auto kern = [&](const Vec2 &z) -> double {
        double s = 0.0;
        for (std::size_t j = 0; j < cfg.size(); ++j) {
            s += sign * cfg.charges[j] * std::log(mu * mu * (z - cfg.points[j]).squaredNorm());
        }
        return value(f, z) * std::exp(p * s);
    };
    const double I = adaptive_cubature<double>(kern, cfg.points, support_disk(f), {1e-10});
    return std::exp(euclid_log_pairprod(cfg, p, mu)) * I;
}

Tensor2 euclid_T_corr_smeared(const SmearingFunction &f, const ChargeConfiguration &cfg,
                              double beta2, double mu, double g_at_insertion,
                              bool quantum_corrected)
{
    const Tensor2 O = euclid_O_corr_smeared(f, cfg, beta2, mu);
    const double coupling = quantum_corrected ? quantum_coupling(beta2) : 1.0;
    const double V = euclid_vertex_smeared(f, cfg, 1, beta2, mu) +
                     euclid_vertex_smeared(f, cfg, -1, beta2, mu);
    return O - 0.5 * O.trace() * Tensor2::Identity() +
           g_at_insertion * coupling * V * Tensor2::Identity();
}

cplx mink_log_pairprod(const ChargeConfiguration &cfg, double p, double mu, double eps)
{
    cplx s = 0.0;
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        for (std::size_t k = j + 1; k < cfg.size(); ++k) {
            s += static_cast<double>(cfg.charges[j] * cfg.charges[k]) *
                 hadamard_log(cfg.points[j], cfg.points[k], mu, eps);
        }
    }
    return p * s;
}

namespace {

double w_charge_form(const ChargeConfiguration &cfg, const StatePartW &W)
{
    double s = 0.0;
    for (std::size_t j = 0; j < cfg.size(); ++j) {
        for (std::size_t k = 0; k < cfg.size(); ++k) {
            s += cfg.charges[j] * cfg.charges[k] * W(cfg.points[j], cfg.points[k]);
        }
    }
    return s;
}

// Prefactor shared by all Minkowski correlators: pair product, W factor and
// the Lambda power (or the neutrality delta at Lambda = 0).
cplx mink_prefactor(const ChargeConfiguration &cfg, const RegulatorParams &reg,
                    const StatePartW &W)
{
    const int q = cfg.total_charge();
    double lf = 1.0;
    if (reg.Lambda > 0.0) {
        lf = lambda_factor(reg, q);
    } else if (q != 0) {
        return 0.0;
    }
    return lf * std::exp(mink_log_pairprod(cfg, reg.p(), reg.mu, reg.eps) -
                         0.5 * reg.beta2 * w_charge_form(cfg, W));
}

} // namespace

MinkCorrelator mink_vertex_corr(const ChargeConfiguration &cfg, const RegulatorParams &reg,
                                const StatePartW &W)
{
    cfg.validate();
    return {mink_prefactor(cfg, reg, W), cfg.total_charge()};
}

Tensor2c mink_O_corr_smeared(const SmearingFunction &f, const ChargeConfiguration &cfg,
                             const RegulatorParams &reg, const StatePartW &W,
                             bool with_counterterm, const CubatureOptions &opt)
{
    cfg.validate();
    if (!(reg.eps > 0.0)) {
        throw DomainError("mink_O_corr_smeared: eps must be positive");
    }
    const cplx pref = mink_prefactor(cfg, reg, W);
    if (pref == 0.0 && cfg.size() > 0) {
        return Tensor2c::Zero();
    }
    const double b2 = reg.beta2;
    Tensor2c bracket = (to_lightcone(W.coincidence()) * integral(f)).cast<cplx>();
    if (cfg.size() > 0) {
        auto kern = [&](const Vec2 &z) -> Vec9c {
            Eigen::Vector2cd H = Eigen::Vector2cd::Zero();
            Eigen::Vector2d G = Eigen::Vector2d::Zero();
            for (std::size_t i = 0; i < cfg.size(); ++i) {
                const auto h = h_mu(z, cfg.points[i], reg.eps);
                H[0] += static_cast<double>(cfg.charges[i]) * h.first;
                H[1] += static_cast<double>(cfg.charges[i]) * h.second;
                G += cfg.charges[i] * to_lightcone(W.grad1(z, cfg.points[i]));
            }
            const double fz = value(f, z);
            Vec9c out;
            out << G[0] * G[0], G[0] * G[1], G[1] * G[1], H[0] * G[0],
                0.5 * (H[0] * G[1] + H[1] * G[0]), H[1] * G[1], H[0] * H[0], H[0] * H[1],
                H[1] * H[1];
            return out * fz;
        };
        const Vec2 c = centroid(f);
        const double half = std::sqrt(2.0) * support_radius(f, decay_delta) * 1.05;
        std::vector<double> ub;
        for (const auto &p : cfg.points) {
            ub.push_back(p[0] - p[1]);
        }
        auto vb = [&](double u) {
            std::vector<double> b;
            for (const auto &p : cfg.points) {
                b.push_back(p[0] + p[1]);
                b.push_back(2.0 * p[0] - u);
            }
            return b;
        };
        const Vec9c I = lightcone_cubature<Vec9c>(kern, c, half, ub, vb, opt);
        auto sym = [](cplx a, cplx b, cplx d) {
            Tensor2c t;
            t << a, b, b, d;
            return t;
        };
        bracket += -b2 * sym(I[0], I[1], I[2]);
        bracket += b2 / (2.0 * pi) * sym(I[3], I[4], I[5]);
        bracket += -b2 / (16.0 * pi * pi) * sym(I[6], I[7], I[8]);
        if (with_counterterm) {
            const cplx c0 = counterterm_c(b2, reg.mu, reg.eps);
            double fs = 0.0;
            for (const auto &p : cfg.points) {
                fs += value(f, p);
            }
            bracket += c0 * fs * eta_lightcone().cast<cplx>();
        }
    }
    return pref * bracket;
}

} // namespace sg
