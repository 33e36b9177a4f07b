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


#include "sg/glow.hpp"

#include <cmath>
#include <cstdio>
#include <future>

#include <json.hpp>

namespace sg {

namespace {

// Per-sample weights are accumulated in log space; the phase is kept apart.
struct LogWeight {
    double log_mag = 0.0;
    double phase = 0.0;

    cplx value() const { return std::polar(std::exp(log_mag), phase); }
};

// Every configuration has an even number of points, so the sign of g drops out.

double log_g_product(const PlateauCutoff &g, const std::vector<Vec2> &xs,
                     const std::vector<Vec2> &ys)
{
    double s = 0.0;
    for (const auto &x : xs) {
        s += std::log(std::abs(value(g, x)));
    }
    for (const auto &y : ys) {
        s += std::log(std::abs(value(g, y)));
    }
    return s;
}

double avg_f(const SmearingFunction &f, const std::vector<Vec2> &pts)
{
    double s = 0.0;
    for (const auto &p : pts) {
        s += value(f, p);
    }
    return s / static_cast<double>(pts.size());
}

std::vector<Vec2> joined(const std::vector<Vec2> &xs, const std::vector<Vec2> &ys)
{
    std::vector<Vec2> pts(xs);
    pts.insert(pts.end(), ys.begin(), ys.end());
    return pts;
}

std::vector<int> charges_for(std::size_t m)
{
    std::vector<int> c(2 * m, 1);
    std::fill(c.begin() + static_cast<std::ptrdiff_t>(m), c.end(), -1);
    return c;
}

void require_order(int m, const char *what)
{
    if (m < 0) {
        throw DomainError(std::string(what) + ": order must be non-negative");
    }
}

SeriesTerm exact_term(Signature s, Role r, int m, double eps, Eigen::VectorXd mean,
                      const McConfig &mc)
{
    SeriesTerm t{s, r, m, eps, {}};
    t.value.mean = std::move(mean);
    t.value.cov = Eigen::MatrixXd::Zero(t.value.mean.size(), t.value.mean.size());
    t.value.n = 0;
    t.value.seed = mc.seed;
    t.value.sampler = "exact";
    return t;
}

// Light-cone Hessian of W(z, a) in z.
Mat2 w_hess_lightcone(const StatePartW &W, const Vec2 &z, const Vec2 &a)
{
    Mat2 h = Mat2::Zero();
    for (const auto &md : W.modes) {
        h -= md.w * std::cos(md.p.dot(z - a)) * md.p * md.p.transpose();
    }
    return to_lightcone(h);
}

LogWeight euclid_config_weight(const PairDraw &d, const PlateauCutoff &g, double p, double mu,
                               double log_comb)
{
    LogWeight w;
    const double lg = log_g_product(g, d.xs, d.ys);
    if (std::isinf(lg)) {
        w.log_mag = lg;
        return w;
    }
    w.log_mag = euclid_pair_logweight(d.xs, d.ys, p, mu) + lg - std::log(d.q) - log_comb;
    return w;
}

LogWeight mink_config_weight(const PairDraw &d, const PlateauCutoff &g, double beta2, double mu,
                             double eps, const StatePartW &W, double log_comb, int sign_power)
{
    LogWeight w;
    const double lg = log_g_product(g, d.xs, d.ys);
    if (std::isinf(lg)) {
        w.log_mag = lg;
        return w;
    }
    const cplx lp = mink_pair_logweight(d.xs, d.ys, beta2 / (4.0 * pi), mu, eps);
    w.log_mag = lp.real() - 0.5 * beta2 * w_quadratic_form(W, d.xs, d.ys) + lg -
                std::log(d.q) - log_comb;
    w.phase = lp.imag() + (sign_power % 2 != 0 ? pi : 0.0);
    return w;
}

void put(double *out, int k, cplx c)
{
    out[2 * k] = c.real();
    out[2 * k + 1] = c.imag();
}

cplx get(const Eigen::VectorXd &v, int k) { return {v[2 * k], v[2 * k + 1]}; }

double get_se(const McEstimate &e, int k)
{
    return std::hypot(e.se(2 * k), e.se(2 * k + 1));
}

Tensor2 sym3(double xx, double xy, double yy)
{
    Tensor2 t;
    t << xx, xy, xy, yy;
    return t;
}

Tensor2c sym3c(cplx uu, cplx uv, cplx vv)
{
    Tensor2c t;
    t << uu, uv, uv, vv;
    return t;
}

// int int g(x) g(y) [mu^2 (x - y)^2]^{-p} ln(mu^2 (x - y)^2) (f(x) + f(y)),
// with the inner integrals over y tabulated radially about the cutoff center.
double log_pair_mean(const SmearingFunction &f, const PlateauCutoff &g, double p, double mu)
{
    constexpr int nodes = 193;
    const double rho = g.R + g.w;
    std::vector<double> gv(nodes), hv(nodes);
    for (int i = 0; i < nodes; ++i) {
        const Vec2 x = g.center + Vec2(rho * i / (nodes - 1), 0.0);
        gv[i] = plateau_riesz(g, x, p);
        hv[i] = plateau_riesz(g, x, p, true);
    }
    const RadialSpline G = RadialSpline::fit(rho, std::move(gv));
    const RadialSpline H = RadialSpline::fit(rho, std::move(hv));
    const double lm = std::log(mu * mu);
    auto k = [&](const Vec2 &x) {
        const double gx = std::abs(value(g, x));
        if (gx == 0.0) {
            return 0.0;
        }
        const double r = std::min((x - g.center).norm(), rho);
        return value(f, x) * gx * (H(r) + lm * G(r));
    };
    std::vector<Vec2> centers;
    for (const auto &t : f.terms) {
        if ((t.center - g.center).norm() < rho) {
            centers.push_back(t.center);
        }
    }
    const double j = adaptive_cubature<double>(k, centers, Disk{g.center, rho}, {1e-10, 1e-14});
    return 2.0 * std::pow(mu, -2.0 * p) * j;
}

} // namespace

double euclid_sample_weight(const PairDraw &d, const PlateauCutoff &g, double beta2, double mu)
{
    const int m = static_cast<int>(d.xs.size());
    return euclid_config_weight(d, g, beta2 / (4.0 * pi), mu, 2.0 * log_factorial(m))
        .value()
        .real();
}

cplx mink_sample_weight(const PairDraw &d, const PlateauCutoff &g, double beta2, double mu,
                        double eps, const StatePartW &W)
{
    const int m = static_cast<int>(d.xs.size());
    return mink_config_weight(d, g, beta2, mu, eps, W, 2.0 * log_factorial(m), m).value();
}

const char *to_string(Signature s)
{
    return s == Signature::euclid ? "euclid" : "minkowski";
}

const char *to_string(Role r)
{
    switch (r) {
    case Role::denominator:
        return "denominator";
    case Role::numerator_O:
        return "numerator-O";
    case Role::numerator_vertex:
        return "numerator-vertex";
    }
    return "?";
}

std::string sampler_hash(const std::string &spec)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : spec) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string to_json_line(const SeriesTerm &t)
{
    nlohmann::ordered_json j;
    j["signature"] = to_string(t.signature);
    j["role"] = to_string(t.role);
    j["m"] = t.m;
    j["eps"] = t.eps;
    j["mean"] = std::vector<double>(t.value.mean.data(), t.value.mean.data() + t.value.mean.size());
    j["stderr"] = t.value.stderr_;
    j["n"] = t.value.n;
    j["seed"] = t.value.seed;
    j["rng"] = rng_algorithm;
    j["sampler"] = sampler_hash(t.value.sampler);
    return j.dump();
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double euclid_pair_logweight(const std::vector<Vec2> &xs, const std::vector<Vec2> &ys, double p,
                             double mu)
{
    const double mu2 = mu * mu;
    double s = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        for (std::size_t k = j + 1; k < xs.size(); ++k) {
            s += std::log(mu2 * (xs[j] - xs[k]).squaredNorm());
            s += std::log(mu2 * (ys[j] - ys[k]).squaredNorm());
        }
        for (const auto &y : ys) {
            s -= std::log(mu2 * (xs[j] - y).squaredNorm());
        }
    }
    return p * s;
}

cplx mink_pair_logweight(const std::vector<Vec2> &xs, const std::vector<Vec2> &ys, double p,
                         double mu, double eps)
{
    cplx s = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
        for (std::size_t k = j + 1; k < xs.size(); ++k) {
            s += hadamard_log(xs[j], xs[k], mu, eps);
            s += hadamard_log(ys[j], ys[k], mu, eps);
        }
        for (const auto &y : ys) {
            s -= hadamard_log(xs[j], y, mu, eps);
        }
    }
    return p * s;
}

SeriesTerm euclid_denominator_term(int m, const PlateauCutoff &g, double beta2, double mu,
                                   const McConfig &mc)
{
    require_order(m, "euclid_denominator_term");
    const RegulatorParams reg{0.0, 0.0, mu, beta2};
    reg.validate();
    if (m == 0) {
        return exact_term(Signature::euclid, Role::denominator, 0, 0.0,
                          Eigen::VectorXd::Ones(1), mc);
    }
    const double p = reg.p();
    const PairSampler ps(g, p);
    const double lc = 2.0 * log_factorial(m);
    auto fn = [&](std::uint64_t, Stream &rng, double *out) {
        const PairDraw d = ps.sample_pairs(rng, m);
        out[0] = euclid_config_weight(d, g, p, mu, lc).value().real();
    };
    return {Signature::euclid, Role::denominator, m, 0.0, mc_integrate(fn, 1, mc, ps.spec())};
}

SeriesTerm euclid_numerator_term_O(int m, const SmearingFunction &f, const PlateauCutoff &g,
                                   double beta2, double mu, const McConfig &mc)
{
    require_order(m, "euclid_numerator_term_O");
    f.validate();
    const RegulatorParams reg{0.0, 0.0, mu, beta2};
    reg.validate();
    if (m == 0) {
        return exact_term(Signature::euclid, Role::numerator_O, 0, 0.0,
                          Eigen::VectorXd::Zero(3), mc);
    }
    const double p = reg.p();
    const PairSampler ps(g, p);
    const double lc = 2.0 * log_factorial(m);
    const double pref = -beta2 / (4.0 * pi * pi);
    double r_max = 0.0;
    for (const auto &t : f.terms) {
        r_max = std::max(r_max, (t.center - g.center).norm() + g.R + g.w);
    }
    // The z integrals are done per configuration: u_ren from radial tables,
    // the cross terms semi-analytically.
    const URenTable U(f, mu, r_max * 1.01);
    // At m = 1 the weight is nearly flat under the pair sampler and the
    // variance comes from the bracket. L = w ln(mu^2 |x - y|^2) (f(x) + f(y))
    // tracks it and has a known mean.
    const bool cv = m == 1 && g.g0 != 0.0;
    const int dim = cv ? 4 : 3;
    auto fn = [&](std::uint64_t, Stream &rng, double *out) {
        const PairDraw d = ps.sample_pairs(rng, m);
        const double w = euclid_config_weight(d, g, p, mu, lc).value().real();
        if (w == 0.0) {
            std::fill(out, out + dim, 0.0);
            return;
        }
        const auto pts = joined(d.xs, d.ys);
        const auto sig = charges_for(static_cast<std::size_t>(m));
        Tensor2 b = Tensor2::Zero();
        for (std::size_t k = 0; k < pts.size(); ++k) {
            b += U(pts[k]);
            for (std::size_t j = 0; j < k; ++j) {
                b += 2.0 * sig[j] * sig[k] * euclid_cross_fast(f, pts[j], pts[k]);
            }
        }
        const Tensor2 r = pref * w * b;
        out[0] = r(0, 0);
        out[1] = r(0, 1);
        out[2] = r(1, 1);
        if (cv) {
            const Vec2 &x = d.xs[0];
            const Vec2 &y = d.ys[0];
            out[3] = w * std::log(mu * mu * (x - y).squaredNorm()) * (value(f, x) + value(f, y));
        }
    };
    McEstimate e = mc_integrate(fn, dim, mc, ps.spec() + ";z=exact" + (cv ? ";cv=log" : ""));
    if (cv) {
        e = apply_control_variate(e, 3, log_pair_mean(f, g, p, mu));
    }
    return {Signature::euclid, Role::numerator_O, m, 0.0, std::move(e)};
}

SeriesTerm euclid_numerator_term_vertex(int m, const SmearingFunction &f, const PlateauCutoff &g,
                                        double beta2, double mu, const McConfig &mc)
{
    require_order(m, "euclid_numerator_term_vertex");
    f.validate();
    const RegulatorParams reg{0.0, 0.0, mu, beta2};
    reg.validate();
    const double p = reg.p();
    const PairSampler ps(g, p);
    const double lc = log_factorial(m) + log_factorial(m + 1);
    auto fn = [&](std::uint64_t, Stream &rng, double *out) {
        const PairDraw d = ps.sample_pairs(rng, m + 1);
        const double w = euclid_config_weight(d, g, p, mu, lc).value().real();
        out[0] = w * avg_f(f, d.xs);
        out[1] = w * avg_f(f, d.ys);
    };
    return {Signature::euclid, Role::numerator_vertex, m, 0.0,
            mc_integrate(fn, 2, mc, ps.spec())};
}

double estimate_K(const PlateauCutoff &g, double beta2, double mu)
{
    const RegulatorParams reg{0.0, 0.0, mu, beta2};
    reg.validate();
    if (g.g0 == 0.0) {
        return 0.0;
    }
    const double p = reg.p();
    const double sign = g.g0 > 0.0 ? 1.0 : -1.0;
    auto G = [&](double r) {
        return sign * std::pow(mu, -2.0 * p) * plateau_riesz(g, g.center + Vec2(r, 0.0), p, false, 1e-10);
    };
    auto outer = [&](double r) {
        const double gx = value(g, g.center + Vec2(r, 0.0));
        return gx == 0.0 ? 0.0 : 2.0 * pi * r * gx * G(r);
    };
    const auto res = integrate_gk<double>(outer, 0.0, g.R + g.w, {1e-9, 0.0, 200}, {g.R});
    if (!res.converged) {
        throw NumericAbort("estimate_K: quadrature did not converge");
    }
    return res.value;
}

std::vector<double> series_majorant(double C, double K, double beta2, int N)
{
    if (C < 0.0 || K < 0.0 || N < 0) {
        throw DomainError("series_majorant: C, K and N must be non-negative");
    }
    if (!(beta2 > 0.0) || !(beta2 < 4.0 * pi)) {
        throw DomainError("series_majorant: beta^2 outside (0, 4 pi)");
    }
    const double e = beta2 < 2.0 * pi ? -1.0 : beta2 / (2.0 * pi) - 2.0;
    std::vector<double> out;
    for (int n = 0; n <= N; ++n) {
        if (n == 0) {
            out.push_back(0.0);
            continue;
        }
        const double lt = std::log(C) + 2.0 * std::log(n) + n * std::log(K) + e * log_factorial(n);
        out.push_back(std::exp(lt));
    }
    return out;
}

namespace {

// T = O - 1/2 metric tr(O) + coupling metric (V_beta + V_-beta); the Euclidean
// metric is the identity.
template <typename M, typename S>
M stress_from(const M &O, const M &metric, const M &inverse_metric, S vsum, double coupling)
{
    const S tr = (inverse_metric.transpose().array() * O.array()).sum();
    return O - 0.5 * tr * metric + coupling * vsum * metric;
}

template <typename F>
SeriesTerm from_source(const TermSource &source, Signature sig, Role role, int m, double eps,
                       F &&compute)
{
    if (!source) {
        return compute();
    }
    return source(sig, role, m, eps, std::function<SeriesTerm()>(compute));
}

double coupling_for(Observable obs, double beta2)
{
    return obs == Observable::T_hat ? quantum_coupling(beta2) : 1.0;
}

} // namespace

GlowResult glow_value_euclid(const SmearingFunction &f, const PlateauCutoff &g, double beta2,
                             double mu, int N_max, const McConfig &mc, Observable obs,
                             const TermSource &source)
{
    if (N_max < 0) {
        throw DomainError("glow_value_euclid: N_max must be non-negative");
    }
    GlowResult res;
    std::vector<std::future<SeriesTerm>> jobs;
    for (int m = 0; m <= N_max; ++m) {
        const auto E = Signature::euclid;
        jobs.push_back(std::async(std::launch::deferred, [&, m] {
            return from_source(source, E, Role::denominator, m, 0.0,
                               [&] { return euclid_denominator_term(m, g, beta2, mu, mc); });
        }));
        jobs.push_back(std::async(std::launch::deferred, [&, m] {
            return from_source(source, E, Role::numerator_O, m, 0.0,
                               [&] { return euclid_numerator_term_O(m, f, g, beta2, mu, mc); });
        }));
        if (obs != Observable::O) {
            jobs.push_back(std::async(std::launch::deferred, [&, m] {
                return from_source(source, E, Role::numerator_vertex, m, 0.0, [&] {
                    return euclid_numerator_term_vertex(m, f, g, beta2, mu, mc);
                });
            }));
        }
    }
    double D = 0.0, dD = 0.0, V = 0.0, dV = 0.0;
    Tensor2 N = Tensor2::Zero(), dN = Tensor2::Zero();
    for (auto &j : jobs) {
        SeriesTerm t = j.get();
        const McEstimate &e = t.value;
        switch (t.role) {
        case Role::denominator:
            D += e.mean[0];
            dD += e.se(0) * e.se(0);
            break;
        case Role::numerator_O:
            N += sym3(e.mean[0], e.mean[1], e.mean[2]);
            dN += sym3(e.se(0) * e.se(0), e.se(1) * e.se(1), e.se(2) * e.se(2));
            break;
        case Role::numerator_vertex:
            V += e.mean[0] + e.mean[1];
            dV += e.cov(0, 0) + e.cov(1, 1) + 2.0 * e.cov(0, 1);
            break;
        }
        res.terms.push_back(std::move(t));
    }
    dD = std::sqrt(dD);
    dN = dN.cwiseSqrt();
    dV = std::sqrt(std::max(dV, 0.0));
    if (D < 0.5) {
        throw NumericAbort("glow_value_euclid: denominator below 1/2");
    }
    if (obs != Observable::O) {
        const double c = coupling_for(obs, beta2);
        const Tensor2 I = Tensor2::Identity();
        N = stress_from<Tensor2, double>(N, I, I, V, c);
        // Linear error propagation through the trace and vertex parts.
        const double dtr = dN(0, 0) + dN(1, 1);
        Tensor2 dT = dN;
        dT(0, 0) = dN(0, 0) + 0.5 * dtr + c * dV;
        dT(1, 1) = dN(1, 1) + 0.5 * dtr + c * dV;
        dN = dT;
    }
    res.numerator = N;
    res.numerator_error = dN;
    res.denominator = D;
    res.denominator_error = dD;
    res.value = N / D;
    res.error = dN / std::abs(D) + N.cwiseAbs() * (dD / (D * D));
    return res;
}

SeriesTerm mink_denominator_term(int m, const PlateauCutoff &g, double beta2, double mu,
                                 double eps, const StatePartW &W, const McConfig &mc)
{
    require_order(m, "mink_denominator_term");
    const RegulatorParams reg{0.0, eps, mu, beta2};
    reg.validate();
    W.validate();
    if (!(eps > 0.0)) {
        throw DomainError("mink_denominator_term: eps must be positive");
    }
    if (m == 0) {
        Eigen::VectorXd one(2);
        one << 1.0, 0.0;
        return exact_term(Signature::minkowski, Role::denominator, 0, eps, one, mc);
    }
    const PairSampler ps(g, reg.p(), PairMetric::lightcone);
    const double lc = 2.0 * log_factorial(m);
    auto fn = [&](std::uint64_t, Stream &rng, double *out) {
        const PairDraw d = ps.sample_pairs(rng, m);
        put(out, 0, mink_config_weight(d, g, beta2, mu, eps, W, lc, m).value());
    };
    return {Signature::minkowski, Role::denominator, m, eps, mc_integrate(fn, 2, mc, ps.spec())};
}

SeriesTerm mink_numerator_term_O(int m, const SmearingFunction &f, const PlateauCutoff &g,
                                 double beta2, double mu, double eps, const StatePartW &W,
                                 const McConfig &mc)
{
    require_order(m, "mink_numerator_term_O");
    f.validate();
    const RegulatorParams reg{0.0, eps, mu, beta2};
    reg.validate();
    W.validate();
    if (!(eps > 0.0)) {
        throw DomainError("mink_numerator_term_O: eps must be positive");
    }
    const Tensor2c coinc = (to_lightcone(W.coincidence()) * integral(f)).cast<cplx>();
    if (m == 0) {
        Eigen::VectorXd v(6);
        v << coinc(0, 0).real(), 0.0, coinc(0, 1).real(), 0.0, coinc(1, 1).real(), 0.0;
        return exact_term(Signature::minkowski, Role::numerator_O, 0, eps, v, mc);
    }
    const PairSampler ps(g, reg.p(), PairMetric::lightcone);
    const double lc = 2.0 * log_factorial(m);
    const cplx i(0.0, 1.0);
    const double cHG = beta2 / (2.0 * pi);
    const double cHH = -beta2 / (16.0 * pi * pi);
    const Vec2 fc = centroid(f);
    auto fn = [&](std::uint64_t, Stream &rng, double *out) {
        const PairDraw d = ps.sample_pairs(rng, m);
        const cplx w = mink_config_weight(d, g, beta2, mu, eps, W, lc, m).value();
        if (w == 0.0) {
            std::fill(out, out + 6, 0.0);
            return;
        }
        const auto pts = joined(d.xs, d.ys);
        const auto sig = charges_for(static_cast<std::size_t>(m));
        const LightconePointSampler zs(f, pts, eps);
        const Vec2 z = zs.sample(rng);
        const Jet jf = eval_jet(f, z);
        const Eigen::Vector2d df = to_lightcone(jf.grad);
        const Mat2 d2f = to_lightcone(jf.hess);

        Eigen::Vector2d G = Eigen::Vector2d::Zero();
        Mat2 dG = Mat2::Zero();
        for (std::size_t k = 0; k < pts.size(); ++k) {
            G += sig[k] * to_lightcone(W.grad1(z, pts[k]));
            dG += sig[k] * w_hess_lightcone(W, z, pts[k]);
        }
        Tensor2c b = (-beta2 * jf.value * G * G.transpose()).cast<cplx>();

        // H-W terms with the derivative moved onto f dW.
        Mat2 dfG = 0.5 * (df * G.transpose() + G * df.transpose()) + jf.value * dG;
        cplx hf_sum = 0.0;
        std::vector<std::pair<cplx, cplx>> h(pts.size());
        for (std::size_t k = 0; k < pts.size(); ++k) {
            // H^F(z, a) - H^F(c, a) has the same integral against derivatives of f
            const cplx hc = hadamard_feynman(fc, pts[k], mu, eps);
            const cplx hf = hadamard_feynman(z, pts[k], mu, eps) - hc;
            hf_sum += static_cast<double>(sig[k]) * hf;
            h[k] = h_mu(z, pts[k], eps);
            // renormalised coincident products, local part added below
            b += cHH * sym3c(4.0 * pi * i * hf * d2f(0, 0), -8.0 * pi * pi * hf * (hf + 2.0 * hc) * d2f(0, 1),
                             4.0 * pi * i * hf * d2f(1, 1));
        }
        b += cHG * 4.0 * pi * i * hf_sum * dfG.cast<cplx>();
        for (std::size_t j = 0; j < pts.size(); ++j) {
            for (std::size_t k = j + 1; k < pts.size(); ++k) {
                const double s = 2.0 * sig[j] * sig[k] * jf.value;
                const cplx uu = h[j].first * h[k].first;
                const cplx vv = h[j].second * h[k].second;
                const cplx uv = 0.5 * (h[j].first * h[k].second + h[j].second * h[k].first);
                b += cHH * s * sym3c(uu, uv, vv);
            }
        }
        double floc = 0.0;
        for (const auto &pt : pts) {
            floc += value(f, pt);
        }
        Tensor2c r = b / zs.density(z) + coinc;
        const cplx loc = cHH * i * pi * floc;
        r(0, 0) += loc;
        r(1, 1) += loc;
        r *= w;
        put(out, 0, r(0, 0));
        put(out, 1, r(0, 1));
        put(out, 2, r(1, 1));
    };
    return {Signature::minkowski, Role::numerator_O, m, eps,
            mc_integrate(fn, 6, mc, ps.spec() + ";z=lightcone")};
}

SeriesTerm mink_numerator_term_vertex(int m, const SmearingFunction &f, const PlateauCutoff &g,
                                      double beta2, double mu, double eps, const StatePartW &W,
                                      const McConfig &mc)
{
    require_order(m, "mink_numerator_term_vertex");
    f.validate();
    const RegulatorParams reg{0.0, eps, mu, beta2};
    reg.validate();
    W.validate();
    if (!(eps > 0.0)) {
        throw DomainError("mink_numerator_term_vertex: eps must be positive");
    }
    const PairSampler ps(g, reg.p(), PairMetric::lightcone);
    const double lc = log_factorial(m) + log_factorial(m + 1);
    const cplx i(0.0, 1.0);
    auto fn = [&](std::uint64_t, Stream &rng, double *out) {
        const PairDraw d = ps.sample_pairs(rng, m + 1);
        const cplx w = i * mink_config_weight(d, g, beta2, mu, eps, W, lc, m).value();
        put(out, 0, w * avg_f(f, d.xs));
        put(out, 1, w * avg_f(f, d.ys));
    };
    return {Signature::minkowski, Role::numerator_vertex, m, eps,
            mc_integrate(fn, 4, mc, ps.spec())};
}

GlowResultMink glow_value_mink(const SmearingFunction &f, const PlateauCutoff &g, double beta2,
                               double mu, const StatePartW &W, int N_max,
                               const std::vector<double> &ladder, const McConfig &mc,
                               Observable obs, const TermSource &source)
{
    if (N_max < 0) {
        throw DomainError("glow_value_mink: N_max must be non-negative");
    }
    if (ladder.size() < 3) {
        throw DomainError("glow_value_mink: ladder needs at least three points");
    }
    GlowResultMink res;
    res.ladder = ladder;
    std::vector<Tensor2> errs;
    const Mat2 eta = eta_lightcone();
    Mat2 eta_inv;
    eta_inv << 0.0, -2.0, -2.0, 0.0;
    for (double eps : ladder) {
        cplx D = 0.0, V = 0.0;
        double dD = 0.0, dV = 0.0;
        Tensor2c N = Tensor2c::Zero();
        Tensor2 dN = Tensor2::Zero();
        for (int m = 0; m <= N_max; ++m) {
            const auto M = Signature::minkowski;
            SeriesTerm td = from_source(source, M, Role::denominator, m, eps, [&] {
                return mink_denominator_term(m, g, beta2, mu, eps, W, mc);
            });
            D += get(td.value.mean, 0);
            dD += std::pow(get_se(td.value, 0), 2);
            SeriesTerm to = from_source(source, M, Role::numerator_O, m, eps, [&] {
                return mink_numerator_term_O(m, f, g, beta2, mu, eps, W, mc);
            });
            N += sym3c(get(to.value.mean, 0), get(to.value.mean, 1), get(to.value.mean, 2));
            const Tensor2 se = sym3(get_se(to.value, 0), get_se(to.value, 1), get_se(to.value, 2));
            dN += se.cwiseProduct(se);
            res.terms.push_back(std::move(td));
            res.terms.push_back(std::move(to));
            if (obs != Observable::O) {
                SeriesTerm tv = from_source(source, M, Role::numerator_vertex, m, eps, [&] {
                    return mink_numerator_term_vertex(m, f, g, beta2, mu, eps, W, mc);
                });
                V += get(tv.value.mean, 0) + get(tv.value.mean, 1);
                dV += std::pow(get_se(tv.value, 0) + get_se(tv.value, 1), 2);
                res.terms.push_back(std::move(tv));
            }
        }
        if (std::abs(D) < 0.5) {
            throw NumericAbort("glow_value_mink: denominator modulus below 1/2");
        }
        dN = dN.cwiseSqrt();
        if (obs != Observable::O) {
            const double c = coupling_for(obs, beta2);
            N = stress_from<Tensor2c, cplx>(N, eta.cast<cplx>(), eta_inv.cast<cplx>(), V, c);
            const double dtr = 4.0 * dN(0, 1);
            Tensor2 dT = dN;
            dT(0, 1) = dT(1, 0) = dN(0, 1) + 0.25 * dtr + 0.5 * c * std::sqrt(dV);
            dN = dT;
        }
        const double sD = std::sqrt(dD);
        res.ladder_values.push_back(N / D);
        errs.push_back(dN / std::abs(D) + N.cwiseAbs() * (sD / std::norm(D)));
    }
    const auto L = ladder_pinv(ladder);
    res.value = Tensor2c::Zero();
    res.error = Tensor2::Zero();
    double stat = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            std::vector<cplx> vals;
            for (std::size_t k = 0; k < ladder.size(); ++k) {
                vals.push_back(res.ladder_values[k](a, b));
                res.error(a, b) += std::abs(L(0, static_cast<Eigen::Index>(k))) * errs[k](a, b);
                stat = std::max(stat, errs[k](a, b));
            }
            const LadderFit fit = fit_a_lneps_eps(ladder, vals);
            res.value(a, b) = fit.a;
            res.fit_rms = std::max(res.fit_rms, fit.rms);
        }
    }
    res.flagged = res.fit_rms > 3.0 * stat;
    return res;
}

} // namespace sg
