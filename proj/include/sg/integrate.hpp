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

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sg/quadrature.hpp"
#include "sg/smearing.hpp"
#include "sg/types.hpp"

namespace sg {

// Philox4x32-10 counter-based generator.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

inline constexpr const char *rng_algorithm = "philox4x32-10";

// Random stream for one sample: key = seed, counter = (sample index, slot).
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t index) : seed_(seed), index_(index) {}

    // Uniform on the open interval (0, 1) with 53 random bits.
    double uniform();
    double normal();
    std::uint32_t below(std::uint32_t n);

private:
    std::uint64_t seed_;
    std::uint64_t index_;
    std::uint32_t slot_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int used_ = 4;
    bool have_normal_ = false;
    double spare_ = 0.0;

    std::uint32_t next32();
};

struct McEstimate {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;     // covariance of the mean
    double stderr_ = 0.0;    // norm of the componentwise standard errors
    std::int64_t n = 0;
    std::uint64_t seed = 0;
    std::string sampler;

    double se(int k) const { return std::sqrt(std::max(cov(k, k), 0.0)); }
};

// Writes dim components for the sample with the given index.
using Integrand = std::function<void(std::uint64_t index, Stream &rng, double *out)>;

struct McConfig {
    std::int64_t n = 1000000;
    std::uint64_t seed = 1;
    int workers = 1;
};

// Sample mean over n independent samples. Blocks of samples are reduced with
// compensated summation and merged in index order, so the result does not
// depend on the worker count.
McEstimate mc_integrate(const Integrand &f, int dim, const McConfig &cfg,
                        const std::string &sampler = "custom");

// Regression control variate: component k has known mean `expected`; the
// other components are corrected with the fitted coefficients and the result
// drops component k.
McEstimate apply_control_variate(const McEstimate &e, int k, double expected);

enum class PairMetric { euclid, lightcone };

struct PairDraw {
    std::vector<Vec2> xs;
    std::vector<Vec2> ys;
    double q; // sampling density at (xs, ys)
};

// int |g(y)| |x - y|^{-2p} d^2y, or with an extra factor ln |x - y|^2 when
// with_log is set. Polar about x with t = r^{2 - 2p}, which removes the
// power singularity.
double plateau_riesz(const PlateauCutoff &g, const Vec2 &x, double p, bool with_log = false,
                     double tol = 1e-11);

// Draws m (x, y) pairs for integrands of the form prod g(x) g(y) K(x, y) with
// K singular like |x - y|^{-2p} (euclid) or |uv|^{-p} (lightcone). The y's
// are randomly permuted after drawing, so the density is the average over
// all pairings.
//
// euclid: y | x has density |g(y)| |x - y|^{-2p} / G(x), drawn by rejection
// from a power law about x, and x has density |g(x)| G(x) / Z. G is
// tabulated on a radial grid; x is drawn from the piecewise-linear radial
// density through the grid values. For m = 1 the weight K g g / q is then
// constant up to the interpolation error of G.
//
// lightcone: x follows |g|, y | x is a mixture of a power law in u and v
// about x (weight mix) and |g|.
class PairSampler {
public:
    PairSampler(const PlateauCutoff &g, double p, PairMetric metric = PairMetric::euclid,
                double mix = 0.5);

    PairDraw sample_pairs(Stream &rng, int m) const;
    Vec2 sample_x(Stream &rng) const;
    Vec2 sample_y(Stream &rng, const Vec2 &x) const;
    double density_x(const Vec2 &x) const;
    double density_y(const Vec2 &y, const Vec2 &x) const;
    double density(const std::vector<Vec2> &xs, const std::vector<Vec2> &ys) const;
    double mass() const { return mass_; }
    std::string spec() const;

    const PlateauCutoff &cutoff() const { return g_; }
    double exponent() const { return p_; }

private:
    struct RadialTables {
        RadialSpline G;            // int |g(y)| |x - y|^{-2p} d^2y at |x - center| = r
        std::vector<double> rho;   // 2 pi r |g(r)| G(r) on the fine grid
        std::vector<double> cdf;   // trapezoid cumulative mass
        double h = 0.0;
    };

    PlateauCutoff g_;
    double p_;
    PairMetric metric_;
    double mix_;
    double mass_;
    double rho_;
    std::shared_ptr<const RadialTables> tab_;

    Vec2 sample_g(Stream &rng) const;
    double G(double r) const;
};

// Density for a point z near a Gaussian mixture f and a set of singular
// points: half the mass follows the Gaussians, half is spread as 1/r about
// the points out to the f-decay radius.
class PointSampler {
public:
    PointSampler(const SmearingFunction &f, std::vector<Vec2> points);
    Vec2 sample(Stream &rng) const;
    double density(const Vec2 &z) const;

private:
    SmearingFunction f_;
    std::vector<Vec2> points_;
    std::vector<double> rho_;
};

// Light-cone analogue of PointSampler for integrands with 1/(u - u_k - i eps)
// and 1/(v - v_k - i eps) factors: half the mass follows the Gaussians, half
// is a product of independent u and v mixtures with density ~ 1/(|t| + eps)
// about the light-cone coordinates of the points.
class LightconePointSampler {
public:
    LightconePointSampler(const SmearingFunction &f, std::vector<Vec2> points, double eps);
    Vec2 sample(Stream &rng) const;
    double density(const Vec2 &z) const;

private:
    PointSampler gauss_;
    std::vector<double> us_, vs_, du_, dv_;
    double eps_;

    double sample_1d(Stream &rng, const std::vector<double> &c, const std::vector<double> &d) const;
    double density_1d(double t, const std::vector<double> &c, const std::vector<double> &d) const;
};

// Permanent of a small square matrix by Ryser's formula.
double permanent(const Eigen::MatrixXd &a);

struct Disk {
    Vec2 center;
    double R;
};

struct CubatureOptions {
    double tol = 1e-9;
    double abs_tol = 0.0;
    int max_segments = 2000;
};

class CubatureError : public NumericAbort {
public:
    CubatureError(const std::string &msg, double estimate)
        : NumericAbort(msg), estimate(estimate) {}
    double estimate;
};

namespace detail {

inline double pou_weight(const Vec2 &z, const std::vector<Vec2> &centers, std::size_t c)
{
    if (centers.size() == 1) {
        return 1.0;
    }
    const double dc = (z - centers[c]).squaredNorm();
    if (dc == 0.0) {
        return 1.0;
    }
    double s = 0.0;
    for (const auto &e : centers) {
        const double de = (z - e).squaredNorm();
        if (de == 0.0) {
            return 0.0;
        }
        s += 1.0 / de;
    }
    return (1.0 / dc) / s;
}

// Parameter interval of the ray c + r (cos t, sin t), r >= 0, inside the disk.
inline bool ray_disk(const Vec2 &c, double t, const Disk &d, double &r0, double &r1)
{
    const Vec2 e(std::cos(t), std::sin(t));
    const Vec2 oc = c - d.center;
    const double b = e.dot(oc);
    const double disc = b * b - (oc.squaredNorm() - d.R * d.R);
    if (disc <= 0.0) {
        return false;
    }
    const double s = std::sqrt(disc);
    r0 = std::max(0.0, -b - s);
    r1 = -b + s;
    return r1 > r0;
}

} // namespace detail

// Integral of F over a disk with integrable point singularities (log or
// r^{-q}, q < 2) at the given centers. A partition of unity w_c ~ |z-c|^{-2}
// splits the integrand between centers, and each piece is integrated in polar
// coordinates about its center with adaptive Gauss-Kronrod in angle and radius.
template <typename T, typename F>
T adaptive_cubature(F &&f, std::vector<Vec2> centers, const Disk &domain,
                    const CubatureOptions &opt = {})
{
    if (centers.empty()) {
        centers.push_back(domain.center);
    }
    QuadOptions inner{opt.tol * 0.1, opt.abs_tol * 0.01, opt.max_segments};
    QuadOptions outer{opt.tol, opt.abs_tol, opt.max_segments};
    bool ok = true;
    T total = zero_of<T>();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const Vec2 cc = centers[c];
        auto angular = [&](double t) -> T {
            double r0, r1;
            const Vec2 e(std::cos(t), std::sin(t));
            if (!detail::ray_disk(cc, t, domain, r0, r1)) {
                return zero_of<T>();
            }
            auto radial = [&](double r) -> T {
                const Vec2 z = cc + r * e;
                const double w = detail::pou_weight(z, centers, c);
                if (w == 0.0) {
                    return zero_of<T>();
                }
                return T(f(z) * (w * r));
            };
            auto res = integrate_gk<T>(radial, r0, r1, inner);
            ok = ok && res.converged;
            return res.value;
        };
        std::vector<double> breaks;
        for (int k = 1; k < 8; ++k) {
            breaks.push_back(k * pi / 4.0);
        }
        auto res = integrate_gk<T>(angular, 0.0, 2.0 * pi, outer, breaks);
        ok = ok && res.converged;
        total = T(total + res.value);
    }
    if (!ok) {
        throw CubatureError("adaptive_cubature: tolerance not reached", qnorm(total));
    }
    return total;
}

// (1/2) int du int dv F(z) over the light-cone box |u - u0| <= half,
// |v - v0| <= half around x. Breakpoints in u are fixed; those in v may depend
// on u, which handles kinks along lines of constant u + v.
template <typename T, typename F, typename B>
T lightcone_cubature(F &&f, const Vec2 &x, double half, const std::vector<double> &ubreaks,
                     B &&vbreaks, const CubatureOptions &opt = {})
{
    const double u0 = x[0] - x[1];
    const double v0 = x[0] + x[1];
    QuadOptions inner{opt.tol * 0.1, opt.abs_tol * 0.01, opt.max_segments};
    QuadOptions outer{opt.tol, opt.abs_tol, opt.max_segments};
    bool ok = true;
    auto outer_fn = [&](double u) -> T {
        auto inner_fn = [&](double v) -> T {
            const Vec2 z(0.5 * (u + v), 0.5 * (v - u));
            return T(f(z) * 0.5);
        };
        auto res = integrate_gk<T>(inner_fn, v0 - half, v0 + half, inner, vbreaks(u));
        ok = ok && res.converged;
        return res.value;
    };
    auto res = integrate_gk<T>(outer_fn, u0 - half, u0 + half, outer, ubreaks);
    ok = ok && res.converged;
    if (!ok) {
        throw CubatureError("lightcone_cubature: tolerance not reached", qnorm(res.value));
    }
    return res.value;
}

} // namespace sg
