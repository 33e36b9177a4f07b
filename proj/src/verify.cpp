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


#include "sg/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace sg {

namespace {

using cvec = std::vector<cplx>;

cplx random_point(Stream &rng)
{
    return {2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
}

// 2n points in the unit box with all pairwise distances at least min_dist.
void separated_points(Stream &rng, int n, double min_dist, cvec &chi, cvec &ups)
{
    for (;;) {
        chi.clear();
        ups.clear();
        cvec all;
        bool ok = true;
        for (int k = 0; k < 2 * n && ok; ++k) {
            const cplx z = random_point(rng);
            for (const auto &w : all) {
                if (std::abs(z - w) < min_dist) {
                    ok = false;
                    break;
                }
            }
            all.push_back(z);
        }
        if (ok) {
            chi.assign(all.begin(), all.begin() + n);
            ups.assign(all.begin() + n, all.end());
            return;
        }
    }
}

double factorial(int n)
{
    double f = 1.0;
    for (int k = 2; k <= n; ++k) {
        f *= k;
    }
    return f;
}

VectorEstimate linear_image(const Eigen::MatrixXd &A, const Eigen::VectorXd &mean,
                            const Eigen::MatrixXd &cov)
{
    VectorEstimate v;
    v.value = A * mean;
    const Eigen::MatrixXd c = A * cov * A.transpose();
    v.error = c.diagonal().cwiseMax(0.0).cwiseSqrt();
    return v;
}

Vec2 lc_grad(const SmearingFunction &f, const Vec2 &a) { return to_lightcone(gradient(f, a)); }

// Pair draws with one point near the support of f. One pair has a point
// drawn from a Gaussian about the centroid of f (twice its variance) and the
// partner from the conditional of the pair sampler; the other pairs are
// ordinary draws. The density averages over which pair is the anchor and over
// the pairings.
class AnchoredSampler {
public:
    AnchoredSampler(const PairSampler &ps, const SmearingFunction &f) : ps_(ps), c_(centroid(f))
    {
        const PlateauCutoff &g = ps.cutoff();
        r0_ = std::max(g.R - (c_ - g.center).norm(), 0.0);
        double a = std::numeric_limits<double>::infinity();
        for (const auto &t : f.terms) {
            a = std::min(a, t.a);
        }
        s_ = std::sqrt(1.0 / a);
        for (const auto &t : f.terms) {
            s_ = std::max(s_, (t.center - c_).norm() + std::sqrt(1.0 / t.a));
        }
    }

    PairDraw sample_pairs(Stream &rng, int m) const
    {
        PairDraw d;
        const Vec2 a = c_ + s_ * Vec2(rng.normal(), rng.normal());
        const Vec2 b = ps_.sample_y(rng, a);
        const bool swap = rng.uniform() < 0.5;
        d.xs.push_back(swap ? b : a);
        d.ys.push_back(swap ? a : b);
        for (int k = 1; k < m; ++k) {
            d.xs.push_back(ps_.sample_x(rng));
            d.ys.push_back(ps_.sample_y(rng, d.xs.back()));
        }
        for (int j = m - 1; j > 0; --j) {
            std::swap(d.xs[j], d.xs[rng.below(static_cast<std::uint32_t>(j + 1))]);
        }
        for (int j = m - 1; j > 0; --j) {
            std::swap(d.ys[j], d.ys[rng.below(static_cast<std::uint32_t>(j + 1))]);
        }
        d.q = density(d.xs, d.ys);
        return d;
    }

    // A draw and its mirror image: points within r0 of the centroid of f are
    // reflected through it, which is a measure-preserving involution. Both
    // carry the symmetrised density, so averaging their integrands is unbiased.
    std::pair<PairDraw, PairDraw> sample_antithetic(Stream &rng, int m) const
    {
        PairDraw d = sample_pairs(rng, m);
        PairDraw r = d;
        auto reflect = [&](Vec2 &x) {
            if ((x - c_).norm() < r0_) {
                x = 2.0 * c_ - x;
            }
        };
        std::for_each(r.xs.begin(), r.xs.end(), reflect);
        std::for_each(r.ys.begin(), r.ys.end(), reflect);
        r.q = density(r.xs, r.ys);
        const double q = 0.5 * (d.q + r.q);
        d.q = q;
        r.q = q;
        return {std::move(d), std::move(r)};
    }

    double density(const std::vector<Vec2> &xs, const std::vector<Vec2> &ys) const
    {
        const int m = static_cast<int>(xs.size());
        Eigen::MatrixXd qs(m, m), qa(m, m);
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                const double yx = ps_.density_y(ys[k], xs[j]);
                qs(j, k) = ps_.density_x(xs[j]) * yx;
                qa(j, k) = 0.5 * (h(xs[j]) * yx + h(ys[k]) * ps_.density_y(xs[j], ys[k]));
            }
        }
        std::vector<int> perm(m);
        for (int k = 0; k < m; ++k) {
            perm[k] = k;
        }
        double total = 0.0;
        do {
            for (int j = 0; j < m; ++j) {
                double t = qa(j, perm[j]);
                for (int k = 0; k < m; ++k) {
                    if (k != j) {
                        t *= qs(k, perm[k]);
                    }
                }
                total += t;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return total / (m * factorial(m));
    }

    std::string spec() const
    {
        std::ostringstream os;
        os.precision(17);
        os << ps_.spec() << ";anchor=" << c_[0] << "," << c_[1] << ":" << s_ << ";mirror=" << r0_;
        return os.str();
    }

private:
    const PairSampler &ps_;
    Vec2 c_;
    double s_ = 1.0;
    double r0_ = 0.0;

    double h(const Vec2 &x) const
    {
        return std::exp(-0.5 * (x - c_).squaredNorm() / (s_ * s_)) / (2.0 * pi * s_ * s_);
    }
};

// Per-order outputs of the Euclidean conservation integrand:
// O-part (2), vertex part (2).
McEstimate euclid_cons_order(int m, const SmearingFunction &f, const PlateauCutoff &g,
                             double beta2, double mu, const McConfig &mc)
{
    const double p = beta2 / (4.0 * pi);
    const PairSampler base(g, p);
    const AnchoredSampler ps(base, f);
    const double pref = -beta2 / (4.0 * pi * pi);
    auto eval = [&](const PairDraw &d, double *out) {
        const double w = euclid_sample_weight(d, g, beta2, mu);
        std::fill(out, out + 4, 0.0);
        if (w == 0.0) {
            return;
        }
        std::vector<Vec2> pts(d.xs);
        pts.insert(pts.end(), d.ys.begin(), d.ys.end());
        const std::size_t n = pts.size();
        std::vector<double> fv(n);
        Vec2 o = Vec2::Zero();
        Vec2 v = Vec2::Zero();
        for (std::size_t k = 0; k < n; ++k) {
            fv[k] = value(f, pts[k]);
            const Vec2 gk = gradient(f, pts[k]);
            v += gk;
            o += -0.5 * pi * gk;
        }
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < j; ++k) {
                const double ss = ((j < n / 2) == (k < n / 2)) ? 1.0 : -1.0;
                const Vec2 d2 = pts[j] - pts[k];
                o += 2.0 * ss * pi * d2 * (fv[k] - fv[j]) / d2.squaredNorm();
            }
        }
        o *= pref * w;
        v *= w;
        out[0] = o[0];
        out[1] = o[1];
        out[2] = v[0];
        out[3] = v[1];
    };
    auto fn = [&](std::uint64_t, Stream &rng, double *out) {
        const auto [d, r] = ps.sample_antithetic(rng, m);
        double a[4], b[4];
        eval(d, a);
        eval(r, b);
        for (int k = 0; k < 4; ++k) {
            out[k] = 0.5 * (a[k] + b[k]);
        }
    };
    return mc_integrate(fn, 4, mc, ps.spec() + ";conservation");
}

// Per-order outputs of the Minkowski conservation integrand at eps, as
// (re, im) pairs of the u and v components: O-part (4), vertex part
// -i sum d f (4), local part sum D (4).
McEstimate mink_cons_order(int m, const SmearingFunction &f, const PlateauCutoff &g, double beta2,
                           double mu, double eps, const StatePartW &W, const McConfig &mc)
{
    const double p = beta2 / (4.0 * pi);
    const PairSampler base(g, p, PairMetric::lightcone);
    const AnchoredSampler ps(base, f);
    const cplx I(0.0, 1.0);
    auto eval = [&](const PairDraw &d, double *out) {
        const cplx w = mink_sample_weight(d, g, beta2, mu, eps, W);
        std::fill(out, out + 12, 0.0);
        if (w == 0.0) {
            return;
        }
        std::vector<Vec2> pts(d.xs);
        pts.insert(pts.end(), d.ys.begin(), d.ys.end());
        const std::size_t n = pts.size();
        std::vector<double> fv(n);
        Eigen::Vector2cd o = Eigen::Vector2cd::Zero();
        Eigen::Vector2cd sd = Eigen::Vector2cd::Zero();
        Eigen::Vector2cd sD = Eigen::Vector2cd::Zero();
        auto sig = [&](std::size_t k) { return k < n / 2 ? 1.0 : -1.0; };
        for (std::size_t k = 0; k < n; ++k) {
            fv[k] = value(f, pts[k]);
            const Vec2 dk = lc_grad(f, pts[k]);
            const Vec2 Dk(dk[1], dk[0]);
            sd += dk.cast<cplx>();
            sD += Dk.cast<cplx>();
            o += (-I * beta2 / (8.0 * pi)) * (dk - Dk).cast<cplx>();
        }
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (fv[j] != 0.0) {
                    const Vec2 gw = to_lightcone(W.grad1(pts[j], pts[k]));
                    o += (I * beta2 * sig(j) * sig(k) * fv[j]) * gw.cast<cplx>();
                }
                if (k < j) {
                    const double df = fv[j] - fv[k];
                    if (df != 0.0) {
                        const auto [hu, hv] = h_mu(pts[j], pts[k], eps);
                        const cplx c = -I * beta2 / (4.0 * pi) * sig(j) * sig(k) * df;
                        o += c * Eigen::Vector2cd(hu, hv);
                    }
                }
            }
        }
        const Eigen::Vector2cd vv = -I * sd;
        const cplx parts[6] = {w * o[0], w * o[1], w * vv[0], w * vv[1], w * sD[0], w * sD[1]};
        for (int k = 0; k < 6; ++k) {
            out[2 * k] = parts[k].real();
            out[2 * k + 1] = parts[k].imag();
        }
    };
    auto fn = [&](std::uint64_t, Stream &rng, double *out) {
        const auto [d, r] = ps.sample_antithetic(rng, m);
        double a[12], b[12];
        eval(d, a);
        eval(r, b);
        for (int k = 0; k < 12; ++k) {
            out[k] = 0.5 * (a[k] + b[k]);
        }
    };
    return mc_integrate(fn, 12, mc, ps.spec() + ";conservation");
}

void require_hypotheses(const SmearingFunction &f, const PlateauCutoff &g, int N_max,
                        const char *what)
{
    f.validate();
    g.validate();
    if (N_max < 1) {
        throw ConfigError(std::string(what) + ": N_max must be at least 1");
    }
    if (!constant_on_support(g, f)) {
        throw ConfigError(std::string(what) + ": g is not constant on the support of f");
    }
}

// Sum of per-order estimates, treating orders as independent.
void accumulate(Eigen::VectorXd &mean, Eigen::MatrixXd &cov, const McEstimate &e)
{
    if (mean.size() == 0) {
        mean = Eigen::VectorXd::Zero(e.mean.size());
        cov = Eigen::MatrixXd::Zero(e.mean.size(), e.mean.size());
    }
    mean += e.mean;
    cov += e.cov;
}

// Rows mapping the 12 Minkowski outputs to the 4 residual reals for the
// complex combination O + kappa V + r D.
Eigen::MatrixXd mink_residual_map(double kappa, cplx r)
{
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(4, 12);
    for (int nu = 0; nu < 2; ++nu) {
        const int re = 2 * nu;
        const int im = 2 * nu + 1;
        // O
        A(re, re) += 1.0;
        A(im, im) += 1.0;
        // kappa V
        A(re, 4 + re) += kappa;
        A(im, 4 + im) += kappa;
        // r D: (a + ib)(x + iy) = (ax - by) + i(ay + bx)
        A(re, 8 + re) += r.real();
        A(re, 8 + im) -= r.imag();
        A(im, 8 + re) += r.imag();
        A(im, 8 + im) += r.real();
    }
    return A;
}

MinkConservation extrapolate(const std::vector<double> &ladder,
                             const std::vector<VectorEstimate> &per_eps)
{
    MinkConservation out;
    out.ladder = ladder;
    out.per_eps = per_eps;
    const auto pinv = ladder_pinv(ladder);
    const int dim = static_cast<int>(per_eps.front().value.size());
    out.residual.value = Eigen::VectorXd::Zero(dim);
    out.residual.error = Eigen::VectorXd::Zero(dim);
    double rms2 = 0.0;
    for (int c = 0; c < dim; ++c) {
        std::vector<double> vals;
        for (std::size_t k = 0; k < ladder.size(); ++k) {
            vals.push_back(per_eps[k].value[c]);
            out.residual.value[c] += pinv(0, static_cast<Eigen::Index>(k)) * per_eps[k].value[c];
            out.residual.error[c] +=
                std::abs(pinv(0, static_cast<Eigen::Index>(k))) * per_eps[k].error[c];
        }
        const LadderFit fit = fit_a_lneps_eps(ladder, vals);
        rms2 += fit.rms * fit.rms;
    }
    out.fit_rms = std::sqrt(rms2);
    return out;
}

} // namespace

double VectorEstimate::max_z() const
{
    double z = 0.0;
    for (Eigen::Index k = 0; k < value.size(); ++k) {
        if (error[k] > 0.0) {
            z = std::max(z, std::abs(value[k]) / error[k]);
        } else if (value[k] != 0.0) {
            return std::numeric_limits<double>::infinity();
        }
    }
    return z;
}

FitReport fit_line(const std::vector<double> &x, const std::vector<double> &y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw ConfigError("fit_line: need at least two points of matching length");
    }
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd b(n);
    FitReport r;
    for (int k = 0; k < n; ++k) {
        A(k, 0) = 1.0;
        A(k, 1) = x[k];
        b[k] = y[k];
        r.points.emplace_back(x[k], y[k]);
    }
    const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
    r.coefficients = {c[0], c[1]};
    r.residual_rms = std::sqrt((A * c - b).squaredNorm() / n);
    return r;
}

double check_cauchy_determinant(int n, std::uint64_t seed, int trials, double min_dist)
{
    if (n < 1 || n > 8) {
        throw ConfigError("check_cauchy_determinant: n must lie in [1, 8]");
    }
    double worst = 0.0;
    cvec chi, ups;
    for (int t = 0; t < trials; ++t) {
        Stream rng(seed, static_cast<std::uint64_t>(t));
        separated_points(rng, n, min_dist, chi, ups);
        Eigen::MatrixXcd M(n, n);
        cplx prod = 1.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                M(i, j) = 1.0 / (chi[i] - ups[j]);
                prod /= chi[i] - ups[j];
            }
        }
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                prod *= (chi[j] - chi[i]) * (ups[i] - ups[j]);
            }
        }
        const cplx det = M.partialPivLu().determinant();
        worst = std::max(worst, std::abs(det - prod) / std::abs(prod));
    }
    return worst;
}

double determinant_bound_prefactor(int n, double p)
{
    return std::pow(factorial(n), std::max(2.0 * p - 1.0, 0.0));
}

BoundCheck check_determinant_bound_stats(int n, double p, std::uint64_t seed, int trials)
{
    if (n < 1 || n > 6) {
        throw ConfigError("check_determinant_bound: n must lie in [1, 6]");
    }
    if (!(p > 0.0) || !(p < 1.0)) {
        throw ConfigError("check_determinant_bound: p must lie in (0, 1)");
    }
    BoundCheck res;
    const double pre = determinant_bound_prefactor(n, p);
    for (int t = 0; t < trials; ++t) {
        Stream rng(seed, static_cast<std::uint64_t>(t));
        std::vector<Vec2> xs(n), ys(n);
        for (int k = 0; k < n; ++k) {
            xs[k] = Vec2(rng.uniform(), rng.uniform());
            ys[k] = Vec2(rng.uniform(), rng.uniform());
        }
        double lhs_log = 0.0;
        Eigen::MatrixXd K(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double d2 = (xs[i] - ys[j]).squaredNorm();
                lhs_log -= p * std::log(d2);
                K(i, j) = std::pow(d2, -p);
            }
            for (int j = i + 1; j < n; ++j) {
                lhs_log += p * std::log((xs[i] - xs[j]).squaredNorm());
                lhs_log += p * std::log((ys[i] - ys[j]).squaredNorm());
            }
        }
        const double rhs = pre * permanent(K);
        const double ratio = std::exp(lhs_log) / rhs;
        res.max_ratio = std::max(res.max_ratio, ratio);
        ++res.trials;
        if (ratio > 1.0 + 1e-12) {
            ++res.violations;
        }
    }
    return res;
}

bool check_determinant_bound(int n, double p, std::uint64_t seed, int trials)
{
    return check_determinant_bound_stats(n, p, seed, trials).holds();
}

YoungExponents young_exponents(double beta2)
{
    if (!(beta2 > 0.0) || !(beta2 < 4.0 * pi)) {
        throw DomainError("young_exponents: beta^2 must lie in (0, 4 pi)");
    }
    const double q = 1.0 + (4.0 * pi - beta2) / (8.0 * pi);
    const double p = 1.0 + 4.0 * pi / (8.0 * pi - beta2);
    return {p, q, p};
}

double theta_norm_q(double beta2, double mu)
{
    young_exponents(beta2);
    if (!(mu > 0.0)) {
        throw DomainError("theta_norm_q: mu must be positive");
    }
    return 32.0 * pi * pi * pi / ((4.0 * pi - beta2) * (8.0 * pi - beta2)) / (mu * mu);
}

double theta_norm_q_quadrature(double beta2, double mu, double tol)
{
    const double q = young_exponents(beta2).q;
    if (!(mu > 0.0)) {
        throw DomainError("theta_norm_q_quadrature: mu must be positive");
    }
    const double e = beta2 * q / (2.0 * pi);
    auto k = [&](const Vec2 &x) { return std::pow(mu * x.norm(), -e); };
    return adaptive_cubature<double>(k, {Vec2::Zero()}, Disk{Vec2::Zero(), 1.0 / mu}, {tol});
}

FitReport fit_neutrality_exponent(const ChargeConfiguration &cfg, const RegulatorParams &reg,
                                  const std::vector<double> &lambdas)
{
    cfg.validate();
    if (lambdas.size() < 4) {
        throw ConfigError("fit_neutrality_exponent: need at least 4 ladder points");
    }
    const auto [lo, hi] = std::minmax_element(lambdas.begin(), lambdas.end());
    if (!(*lo > 0.0) || *hi / *lo < 100.0) {
        throw ConfigError("fit_neutrality_exponent: ladder must span at least 2 decades");
    }
    std::vector<double> x, y;
    for (const double L : lambdas) {
        RegulatorParams r = reg;
        r.Lambda = L;
        const double v = euclid_vertex_corr(cfg, r, false).value;
        if (!(v > 0.0)) {
            throw NumericAbort("fit_neutrality_exponent: zero correlator on the ladder");
        }
        x.push_back(std::log(L));
        y.push_back(std::log(v));
    }
    return fit_line(x, y);
}

FitReport fit_log_divergence_euclid(const SmearingFunction &f, double mu,
                                    const std::vector<double> &eps)
{
    if (eps.size() < 4) {
        throw ConfigError("fit_log_divergence_euclid: need at least 4 ladder points");
    }
    std::vector<double> x, y;
    for (const double e : eps) {
        const Tensor2 u = u_reg_smeared(f, e, mu);
        x.push_back(std::log(e));
        y.push_back(0.5 * (u(0, 0) + u(1, 1)));
    }
    return fit_line(x, y);
}

FitReport fit_log_divergence_mink(const SmearingFunction &f, const ChargeConfiguration &cfg,
                                  double beta2, double mu, const StatePartW &W,
                                  const std::vector<double> &eps, bool with_counterterm)
{
    if (eps.size() < 4) {
        throw ConfigError("fit_log_divergence_mink: need at least 4 ladder points");
    }
    std::vector<cplx> vals;
    for (const double e : eps) {
        const RegulatorParams reg{0.0, e, mu, beta2};
        vals.push_back(mink_O_corr_smeared(f, cfg, reg, W, with_counterterm)(0, 1));
    }
    const LadderFit fit = fit_a_lneps_eps(eps, vals);
    FitReport r;
    r.coefficients = {fit.a.real(), fit.b.real(), fit.a.imag(), fit.b.imag()};
    r.residual_rms = fit.rms;
    for (std::size_t k = 0; k < eps.size(); ++k) {
        r.points.emplace_back(std::log(eps[k]), std::abs(vals[k]));
    }
    return r;
}

EuclidConservation conservation_euclid(const SmearingFunction &f, const PlateauCutoff &g,
                                       double beta2, double mu, int N_max, const McConfig &mc)
{
    require_hypotheses(f, g, N_max, "conservation_euclid");
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    for (int m = 1; m <= N_max; ++m) {
        accumulate(mean, cov, euclid_cons_order(m, f, g, beta2, mu, mc));
    }
    const double kappa = quantum_coupling(beta2);
    Eigen::MatrixXd AT(2, 4), AH(2, 4), AV(2, 4);
    AT << 1, 0, 1, 0, 0, 1, 0, 1;
    AH << 1, 0, kappa, 0, 0, 1, 0, kappa;
    AV << 0, 0, 1, 0, 0, 0, 0, 1;
    EuclidConservation out;
    out.residual_T = linear_image(AT, mean, cov);
    out.residual_T_hat = linear_image(AH, mean, cov);
    out.vertex = linear_image(AV, mean, cov);
    // r = (O + V) . V / V . V = 1 + O . V / V . V
    const Vec2 O(mean[0], mean[1]);
    const Vec2 V(mean[2], mean[3]);
    const double S = V.squaredNorm();
    if (S > 0.0) {
        out.ratio = 1.0 + O.dot(V) / S;
        Eigen::Vector4d grad;
        grad << V[0] / S, V[1] / S, O[0] / S - 2.0 * V[0] * O.dot(V) / (S * S),
            O[1] / S - 2.0 * V[1] * O.dot(V) / (S * S);
        out.ratio_error = std::sqrt(std::max(grad.dot(cov * grad), 0.0));
    }
    return out;
}

VectorEstimate conservation_residual_euclid(const SmearingFunction &f, const PlateauCutoff &g,
                                            double beta2, double mu, int N_max, bool corrected,
                                            const McConfig &mc)
{
    if (g.g0 == 0.0) {
        require_hypotheses(f, g, N_max, "conservation_residual_euclid");
        return {Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2)};
    }
    const EuclidConservation c = conservation_euclid(f, g, beta2, mu, N_max, mc);
    return corrected ? c.residual_T_hat : c.residual_T;
}

std::pair<MinkConservation, MinkConservation>
conservation_mink_both(const SmearingFunction &f, const PlateauCutoff &g, double beta2, double mu,
                       const StatePartW &W, int N_max, const std::vector<double> &ladder,
                       const McConfig &mc)
{
    require_hypotheses(f, g, N_max, "conservation_residual_mink");
    W.validate();
    if (ladder.size() < 3) {
        throw ConfigError("conservation_residual_mink: need at least 3 ladder points");
    }
    const double kappa = quantum_coupling(beta2);
    const cplx c = cons_redef_c(beta2);
    const Eigen::MatrixXd on = mink_residual_map(kappa, -2.0 * c);
    const Eigen::MatrixXd off = mink_residual_map(kappa, 0.0);
    std::vector<VectorEstimate> r_on, r_off;
    for (const double eps : ladder) {
        Eigen::VectorXd mean;
        Eigen::MatrixXd cov;
        for (int m = 1; m <= N_max; ++m) {
            accumulate(mean, cov, mink_cons_order(m, f, g, beta2, mu, eps, W, mc));
        }
        r_on.push_back(linear_image(on, mean, cov));
        r_off.push_back(linear_image(off, mean, cov));
    }
    return {extrapolate(ladder, r_on), extrapolate(ladder, r_off)};
}

MinkConservation conservation_residual_mink(const SmearingFunction &f, const PlateauCutoff &g,
                                            double beta2, double mu, const StatePartW &W,
                                            int N_max, const std::vector<double> &ladder,
                                            bool redefined, const McConfig &mc)
{
    auto both = conservation_mink_both(f, g, beta2, mu, W, N_max, ladder, mc);
    return redefined ? std::move(both.first) : std::move(both.second);
}

std::string check_report(const std::string &check, const std::string &inputs_json,
                         const std::string &expected_json, const std::string &observed_json,
                         double tolerance, bool pass)
{
    nlohmann::ordered_json j;
    j["check"] = check;
    j["inputs"] = nlohmann::ordered_json::parse(inputs_json);
    j["expected"] = nlohmann::ordered_json::parse(expected_json);
    j["observed"] = nlohmann::ordered_json::parse(observed_json);
    j["tolerance"] = tolerance;
    j["pass"] = pass;
    return j.dump();
}

} // namespace sg
