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

#include "sg/integrate.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace sg {

namespace {

constexpr std::uint32_t philox_w0 = 0x9E3779B9u;
constexpr std::uint32_t philox_w1 = 0xBB67AE85u;
constexpr std::uint32_t philox_m0 = 0xD2511F53u;
constexpr std::uint32_t philox_m1 = 0xCD9E8D57u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t &hi, std::uint32_t &lo)
{
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

// Neumaier compensated accumulator.
struct Kahan {
    double sum = 0.0;
    double c = 0.0;
    void add(double x)
    {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + c; }
};

struct BlockSums {
    std::vector<Kahan> s1;
    std::vector<Kahan> s2; // upper triangle, row major
};

constexpr std::int64_t block_size = 1024;

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key)
{
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += philox_w0;
            key[1] += philox_w1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(philox_m0, ctr[0], hi0, lo0);
        mulhilo(philox_m1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::uint32_t Stream::next32()
{
    if (used_ == 4) {
        buf_ = philox4x32({static_cast<std::uint32_t>(index_),
                           static_cast<std::uint32_t>(index_ >> 32), slot_, 0u},
                          {static_cast<std::uint32_t>(seed_),
                           static_cast<std::uint32_t>(seed_ >> 32)});
        ++slot_;
        used_ = 0;
    }
    return buf_[used_++];
}

double Stream::uniform()
{
    const std::uint64_t a = next32() >> 5;
    const std::uint64_t b = next32() >> 6;
    return (static_cast<double>(a * 67108864u + b) + 0.5) / 9007199254740992.0;
}

double Stream::normal()
{
    if (have_normal_) {
        have_normal_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = 2.0 * pi * uniform();
    spare_ = r * std::sin(t);
    have_normal_ = true;
    return r * std::cos(t);
}

std::uint32_t Stream::below(std::uint32_t n)
{
    const auto k = static_cast<std::uint32_t>(uniform() * n);
    return std::min(k, n - 1);
}

McEstimate mc_integrate(const Integrand &f, int dim, const McConfig &cfg,
                        const std::string &sampler)
{
    if (cfg.n < 2) {
        throw ConfigError("mc_integrate: need at least two samples");
    }
    const std::int64_t nblocks = (cfg.n + block_size - 1) / block_size;
    const int npairs = dim * (dim + 1) / 2;
    std::vector<BlockSums> blocks(static_cast<std::size_t>(nblocks));
    std::atomic<std::int64_t> next{0};
    std::mutex err_mu;
    std::int64_t err_block = nblocks;
    std::exception_ptr err;

    auto work = [&]() {
        std::vector<double> out(static_cast<std::size_t>(dim));
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= nblocks) {
                return;
            }
            BlockSums bs{std::vector<Kahan>(dim), std::vector<Kahan>(npairs)};
            const std::int64_t lo = b * block_size;
            const std::int64_t hi = std::min(cfg.n, lo + block_size);
            try {
                for (std::int64_t i = lo; i < hi; ++i) {
                    Stream rng(cfg.seed, static_cast<std::uint64_t>(i));
                    std::fill(out.begin(), out.end(), 0.0);
                    f(static_cast<std::uint64_t>(i), rng, out.data());
                    int k = 0;
                    for (int a = 0; a < dim; ++a) {
                        if (!std::isfinite(out[a])) {
                            std::ostringstream os;
                            os << "non-finite integrand at sample " << i << ", component " << a;
                            throw NumericAbort(os.str());
                        }
                        bs.s1[a].add(out[a]);
                        for (int c = a; c < dim; ++c) {
                            bs.s2[k++].add(out[a] * out[c]);
                        }
                    }
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (b < err_block) {
                    err_block = b;
                    err = std::current_exception();
                }
                return;
            }
            blocks[static_cast<std::size_t>(b)] = std::move(bs);
        }
    };

    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (err) {
        std::rethrow_exception(err);
    }

    std::vector<Kahan> s1(dim), s2(npairs);
    for (const auto &bs : blocks) {
        for (int a = 0; a < dim; ++a) {
            s1[a].add(bs.s1[a].value());
        }
        for (int k = 0; k < npairs; ++k) {
            s2[k].add(bs.s2[k].value());
        }
    }
    const double n = static_cast<double>(cfg.n);
    McEstimate est;
    est.n = cfg.n;
    est.seed = cfg.seed;
    est.sampler = sampler;
    est.mean.resize(dim);
    est.cov.resize(dim, dim);
    for (int a = 0; a < dim; ++a) {
        est.mean[a] = s1[a].value() / n;
    }
    int k = 0;
    for (int a = 0; a < dim; ++a) {
        for (int c = a; c < dim; ++c) {
            double v = (s2[k++].value() - n * est.mean[a] * est.mean[c]) / (n - 1.0);
            if (a == c) {
                v = std::max(v, 0.0);
            }
            est.cov(a, c) = est.cov(c, a) = v / n;
        }
    }
    double s = 0.0;
    for (int a = 0; a < dim; ++a) {
        s += est.cov(a, a);
    }
    est.stderr_ = std::sqrt(s);
    return est;
}

McEstimate apply_control_variate(const McEstimate &e, int k, double expected)
{
    const int dim = static_cast<int>(e.mean.size());
    if (k < 0 || k >= dim) {
        throw ConfigError("apply_control_variate: component out of range");
    }
    std::vector<int> keep;
    for (int i = 0; i < dim; ++i) {
        if (i != k) {
            keep.push_back(i);
        }
    }
    const double cll = e.cov(k, k);
    McEstimate out = e;
    const int d = dim - 1;
    out.mean.resize(d);
    out.cov.resize(d, d);
    for (int a = 0; a < d; ++a) {
        const int i = keep[a];
        const double b = cll > 0.0 ? e.cov(i, k) / cll : 0.0;
        out.mean[a] = e.mean[i] - b * (e.mean[k] - expected);
        for (int c = 0; c < d; ++c) {
            const int j = keep[c];
            out.cov(a, c) = e.cov(i, j) - (cll > 0.0 ? e.cov(i, k) * e.cov(k, j) / cll : 0.0);
        }
    }
    double s2 = 0.0;
    for (int a = 0; a < d; ++a) {
        s2 += std::max(out.cov(a, a), 0.0);
    }
    out.stderr_ = std::sqrt(s2);
    return out;
}

double plateau_riesz(const PlateauCutoff &g, const Vec2 &x, double p, bool with_log, double tol)
{
    if (g.g0 == 0.0) {
        return 0.0;
    }
    const double k = 2.0 - 2.0 * p;
    const double rho = g.R + g.w;
    const Vec2 off = x - g.center;
    const double d = off.norm();
    const double th0 = std::atan2(-off[1], -off[0]);
    std::vector<double> abreaks;
    for (const double rc : {g.R, rho}) {
        if (d >= rc * (1.0 - 1e-12) && rc > 0.0) {
            const double dt = std::asin(std::min(rc / d, 1.0));
            for (const double t : {th0 - dt, th0, th0 + dt}) {
                abreaks.push_back(t - 2.0 * pi * std::floor(t / (2.0 * pi)));
            }
        }
    }
    std::sort(abreaks.begin(), abreaks.end());
    abreaks.erase(std::unique(abreaks.begin(), abreaks.end()), abreaks.end());
    bool ok = true;
    const double scale = std::pow(2.0 * rho, k) * (1.0 + std::abs(std::log(2.0 * rho)));
    const QuadOptions inner{tol * 0.1, tol * 1e-3 * scale, 400};
    auto angular = [&](double th) {
        const Vec2 e(std::cos(th), std::sin(th));
        double r0, r1;
        if (!detail::ray_disk(x, th, Disk{g.center, rho}, r0, r1)) {
            return 0.0;
        }
        std::vector<double> tb;
        double c0, c1;
        if (g.R > 0.0 && detail::ray_disk(x, th, Disk{g.center, g.R}, c0, c1)) {
            for (const double c : {c0, c1}) {
                if (c > r0 && c < r1) {
                    tb.push_back(std::pow(c, k));
                }
            }
        }
        auto radial = [&](double t) {
            if (t <= 0.0) {
                return 0.0;
            }
            const double r = std::pow(t, 1.0 / k);
            const double v = std::abs(value(g, x + r * e)) / k;
            return with_log ? v * 2.0 * std::log(r) : v;
        };
        const auto res = integrate_gk<double>(radial, std::pow(r0, k), std::pow(r1, k), inner, tb);
        ok = ok && res.converged;
        return res.value;
    };
    const auto res = integrate_gk<double>(angular, 0.0, 2.0 * pi, {tol, tol * 1e-2 * scale, 400}, abreaks);
    if (!ok || !res.converged) {
        throw CubatureError("plateau_riesz: tolerance not reached", res.value);
    }
    return res.value;
}

namespace {

constexpr int g_table_nodes = 97;
constexpr int x_grid_cells = 2048;

} // namespace

PairSampler::PairSampler(const PlateauCutoff &g, double p, PairMetric metric, double mix)
    : g_(g), p_(p), metric_(metric), mix_(mix), mass_(plateau_mass(g)), rho_(g.R + g.w)
{
    g.validate();
    if (!(p >= 0.0) || !(p < 1.0)) {
        throw ConfigError("PairSampler: exponent must lie in [0, 1)");
    }
    if (!(mix > 0.0) || !(mix < 1.0)) {
        throw ConfigError("PairSampler: mixture weight must lie in (0, 1)");
    }
    mass_ = std::abs(mass_);
    if (metric_ != PairMetric::euclid || g.g0 == 0.0) {
        return;
    }
    auto tab = std::make_shared<RadialTables>();
    std::vector<double> gv(g_table_nodes);
    for (int i = 0; i < g_table_nodes; ++i) {
        gv[i] = plateau_riesz(g, g.center + Vec2(rho_ * i / (g_table_nodes - 1), 0.0), p);
    }
    tab->G = RadialSpline::fit(rho_, std::move(gv));
    tab->h = rho_ / x_grid_cells;
    tab->rho.resize(x_grid_cells + 1);
    tab->cdf.assign(x_grid_cells + 1, 0.0);
    for (int i = 0; i <= x_grid_cells; ++i) {
        const double r = i * tab->h;
        tab->rho[i] = 2.0 * pi * r * std::abs(value(g, g.center + Vec2(r, 0.0))) * tab->G(r);
        if (i > 0) {
            tab->cdf[i] = tab->cdf[i - 1] + 0.5 * tab->h * (tab->rho[i - 1] + tab->rho[i]);
        }
    }
    tab_ = std::move(tab);
}

std::string PairSampler::spec() const
{
    std::ostringstream os;
    os.precision(17);
    os << "pair:" << (metric_ == PairMetric::euclid ? "euclid-conditional" : "lightcone")
       << ":g0=" << g_.g0 << ":c=" << g_.center[0] << "," << g_.center[1] << ":R=" << g_.R
       << ":w=" << g_.w << ":p=" << p_;
    if (metric_ == PairMetric::lightcone) {
        os << ":mix=" << mix_;
    } else {
        os << ":nodes=" << g_table_nodes << ":cells=" << x_grid_cells;
    }
    return os.str();
}

double PairSampler::G(double r) const { return tab_->G(std::min(r, rho_)); }

Vec2 PairSampler::sample_g(Stream &rng) const
{
    if (g_.g0 == 0.0) {
        return g_.center;
    }
    const double g0 = std::abs(g_.g0);
    for (;;) {
        const double r = rho_ * std::sqrt(rng.uniform());
        const double t = 2.0 * pi * rng.uniform();
        const Vec2 x = g_.center + r * Vec2(std::cos(t), std::sin(t));
        if (r <= g_.R || rng.uniform() * g0 < std::abs(value(g_, x))) {
            return x;
        }
    }
}

Vec2 PairSampler::sample_x(Stream &rng) const
{
    if (metric_ != PairMetric::euclid || !tab_) {
        return sample_g(rng);
    }
    const auto &t = *tab_;
    const double target = rng.uniform() * t.cdf.back();
    const auto it = std::upper_bound(t.cdf.begin(), t.cdf.end(), target);
    const int i = std::clamp(static_cast<int>(it - t.cdf.begin()) - 1, 0, x_grid_cells - 1);
    // invert the linear density a + (b - a) s / h on the cell
    const double a = t.rho[i];
    const double b = t.rho[i + 1];
    const double need = target - t.cdf[i];
    const double slope = (b - a) / t.h;
    double s;
    if (std::abs(slope) * t.h < 1e-12 * std::max(a, 1e-300)) {
        s = a > 0.0 ? need / a : 0.5 * t.h;
    } else {
        const double disc = std::max(a * a + 2.0 * slope * need, 0.0);
        s = (std::sqrt(disc) - a) / slope;
    }
    const double r = std::clamp(i * t.h + s, 0.0, rho_);
    const double th = 2.0 * pi * rng.uniform();
    return g_.center + r * Vec2(std::cos(th), std::sin(th));
}

double PairSampler::density_x(const Vec2 &x) const
{
    if (metric_ != PairMetric::euclid || !tab_) {
        return mass_ > 0.0 ? std::abs(value(g_, x)) / mass_ : 0.0;
    }
    const auto &t = *tab_;
    const double r = (x - g_.center).norm();
    if (r >= rho_) {
        return 0.0;
    }
    const int i = std::min(static_cast<int>(r / t.h), x_grid_cells - 1);
    const double s = r - i * t.h;
    double over_r; // interpolated rho(r) / r
    if (i == 0) {
        over_r = t.rho[1] / t.h;
    } else {
        over_r = (t.rho[i] + (t.rho[i + 1] - t.rho[i]) * s / t.h) / r;
    }
    return over_r / (2.0 * pi * t.cdf.back());
}

Vec2 PairSampler::sample_y(Stream &rng, const Vec2 &x) const
{
    if (metric_ == PairMetric::euclid) {
        if (!tab_) {
            return g_.center;
        }
        const double reach = (x - g_.center).norm() + rho_;
        const double g0 = std::abs(g_.g0);
        for (int tries = 0; tries < 1000000; ++tries) {
            const double r = reach * std::pow(rng.uniform(), 1.0 / (2.0 - 2.0 * p_));
            const double t = 2.0 * pi * rng.uniform();
            const Vec2 y = x + r * Vec2(std::cos(t), std::sin(t));
            if (rng.uniform() * g0 < std::abs(value(g_, y))) {
                return y;
            }
        }
        throw NumericAbort("PairSampler: rejection sampling did not terminate");
    }
    if (rng.uniform() >= mix_) {
        return sample_g(rng);
    }
    auto draw = [&]() {
        const double s = rng.uniform() < 0.5 ? -1.0 : 1.0;
        return s * rho_ * std::pow(rng.uniform(), 1.0 / (1.0 - p_));
    };
    const double u = draw();
    const double v = draw();
    return x + Vec2(0.5 * (u + v), 0.5 * (v - u));
}

double PairSampler::density_y(const Vec2 &y, const Vec2 &x) const
{
    const Vec2 d = y - x;
    if (metric_ == PairMetric::euclid) {
        if (!tab_) {
            return 0.0;
        }
        const double r2 = d.squaredNorm();
        const double k = p_ == 0.0 ? 1.0 : std::pow(r2, -p_);
        return std::abs(value(g_, y)) * k / G((x - g_.center).norm());
    }
    double pl = 0.0;
    const double u = std::abs(d[0] - d[1]);
    const double v = std::abs(d[0] + d[1]);
    if (u > 0.0 && v > 0.0 && u < rho_ && v < rho_) {
        const double c = (1.0 - p_) / (2.0 * std::pow(rho_, 1.0 - p_));
        pl = 2.0 * c * c * std::pow(u * v, -p_);
    }
    const double gy = mass_ > 0.0 ? std::abs(value(g_, y)) / mass_ : 0.0;
    return mix_ * pl + (1.0 - mix_) * gy;
}

double PairSampler::density(const std::vector<Vec2> &xs, const std::vector<Vec2> &ys) const
{
    const int m = static_cast<int>(xs.size());
    if (m == 0) {
        return 1.0;
    }
    double px = 1.0;
    for (const auto &x : xs) {
        px *= density_x(x);
    }
    Eigen::MatrixXd q(m, m);
    for (int j = 0; j < m; ++j) {
        for (int k = 0; k < m; ++k) {
            q(j, k) = density_y(ys[k], xs[j]);
        }
    }
    double mfact = 1.0;
    for (int k = 2; k <= m; ++k) {
        mfact *= k;
    }
    return px * permanent(q) / mfact;
}

PairDraw PairSampler::sample_pairs(Stream &rng, int m) const
{
    PairDraw d;
    d.xs.reserve(m);
    d.ys.reserve(m);
    for (int j = 0; j < m; ++j) {
        d.xs.push_back(sample_x(rng));
    }
    for (int j = 0; j < m; ++j) {
        d.ys.push_back(sample_y(rng, d.xs[j]));
    }
    for (int j = m - 1; j > 0; --j) {
        const auto k = rng.below(static_cast<std::uint32_t>(j + 1));
        std::swap(d.ys[j], d.ys[k]);
    }
    d.q = density(d.xs, d.ys);
    return d;
}

PointSampler::PointSampler(const SmearingFunction &f, std::vector<Vec2> points)
    : f_(f), points_(std::move(points))
{
    const Vec2 c = centroid(f_);
    const double R = support_radius(f_, 1e-16);
    for (const auto &p : points_) {
        rho_.push_back((p - c).norm() + R);
    }
}

Vec2 PointSampler::sample(Stream &rng) const
{
    const bool gauss = points_.empty() || rng.uniform() < 0.5;
    if (gauss) {
        double total = 0.0;
        for (const auto &t : f_.terms) {
            total += std::abs(t.A) / t.a;
        }
        double pick = rng.uniform() * total;
        const GaussianTerm *term = &f_.terms.back();
        for (const auto &t : f_.terms) {
            pick -= std::abs(t.A) / t.a;
            if (pick <= 0.0) {
                term = &t;
                break;
            }
        }
        const double s = std::sqrt(0.5 / term->a);
        const double z0 = rng.normal();
        const double z1 = rng.normal();
        return term->center + s * Vec2(z0, z1);
    }
    const auto k = rng.below(static_cast<std::uint32_t>(points_.size()));
    const double r = rho_[k] * rng.uniform();
    const double t = 2.0 * pi * rng.uniform();
    return points_[k] + r * Vec2(std::cos(t), std::sin(t));
}

double PointSampler::density(const Vec2 &z) const
{
    double total = 0.0;
    for (const auto &t : f_.terms) {
        total += std::abs(t.A) / t.a;
    }
    double g = 0.0;
    for (const auto &t : f_.terms) {
        const double wt = (std::abs(t.A) / t.a) / total;
        g += wt * (t.a / pi) * std::exp(-t.a * (z - t.center).squaredNorm());
    }
    if (points_.empty()) {
        return g;
    }
    double s = 0.0;
    for (std::size_t k = 0; k < points_.size(); ++k) {
        const double r = (z - points_[k]).norm();
        if (r > 0.0 && r < rho_[k]) {
            s += 1.0 / (2.0 * pi * rho_[k] * r);
        }
    }
    return 0.5 * g + 0.5 * s / static_cast<double>(points_.size());
}

LightconePointSampler::LightconePointSampler(const SmearingFunction &f, std::vector<Vec2> points,
                                             double eps)
    : gauss_(f, {}), eps_(eps)
{
    if (!(eps > 0.0)) {
        throw DomainError("LightconePointSampler: eps must be positive");
    }
    const Vec2 c = centroid(f);
    const double h = std::sqrt(2.0) * support_radius(f, 1e-16);
    const double uc = c[0] - c[1];
    const double vc = c[0] + c[1];
    for (const auto &p : points) {
        us_.push_back(p[0] - p[1]);
        vs_.push_back(p[0] + p[1]);
        du_.push_back(std::abs(us_.back() - uc) + h);
        dv_.push_back(std::abs(vs_.back() - vc) + h);
    }
}

double LightconePointSampler::sample_1d(Stream &rng, const std::vector<double> &c,
                                        const std::vector<double> &d) const
{
    const auto k = rng.below(static_cast<std::uint32_t>(c.size()));
    const double t = eps_ * std::expm1(rng.uniform() * std::log1p(d[k] / eps_));
    return rng.uniform() < 0.5 ? c[k] - t : c[k] + t;
}

double LightconePointSampler::density_1d(double t, const std::vector<double> &c,
                                         const std::vector<double> &d) const
{
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double a = std::abs(t - c[k]);
        if (a < d[k]) {
            s += 0.5 / ((a + eps_) * std::log1p(d[k] / eps_));
        }
    }
    return s / static_cast<double>(c.size());
}

Vec2 LightconePointSampler::sample(Stream &rng) const
{
    if (us_.empty() || rng.uniform() < 0.5) {
        return gauss_.sample(rng);
    }
    const double u = sample_1d(rng, us_, du_);
    const double v = sample_1d(rng, vs_, dv_);
    return Vec2(0.5 * (u + v), 0.5 * (v - u));
}

double LightconePointSampler::density(const Vec2 &z) const
{
    const double g = gauss_.density(z);
    if (us_.empty()) {
        return g;
    }
    // d^2z = du dv / 2
    const double lc = 2.0 * density_1d(z[0] - z[1], us_, du_) * density_1d(z[0] + z[1], vs_, dv_);
    return 0.5 * g + 0.5 * lc;
}

double permanent(const Eigen::MatrixXd &a)
{
    const int n = static_cast<int>(a.rows());
    if (n == 0) {
        return 1.0;
    }
    // Ryser with Gray-code subset enumeration.
    double total = 0.0;
    std::vector<double> rowsum(n, 0.0);
    std::uint32_t gray = 0;
    for (std::uint32_t k = 1; k < (1u << n); ++k) {
        const std::uint32_t g = k ^ (k >> 1);
        const std::uint32_t diff = g ^ gray;
        int col = 0;
        while (!((diff >> col) & 1u)) {
            ++col;
        }
        const double sign = (g >> col) & 1u ? 1.0 : -1.0;
        for (int i = 0; i < n; ++i) {
            rowsum[i] += sign * a(i, col);
        }
        gray = g;
        double prod = 1.0;
        for (int i = 0; i < n; ++i) {
            prod *= rowsum[i];
        }
        const int bits = __builtin_popcount(g);
        total += ((n - bits) % 2 == 0 ? 1.0 : -1.0) * prod;
    }
    return total;
}

void gauss_legendre(int n, std::vector<double> &x, std::vector<double> &w)
{
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

RadialSpline RadialSpline::fit(double x_max, std::vector<double> values)
{
    const int n = static_cast<int>(values.size());
    if (n < 4 || !(x_max > 0.0)) {
        throw DomainError("RadialSpline: need at least four nodes on a positive range");
    }
    RadialSpline s;
    s.h = x_max / (n - 1);
    s.y = std::move(values);
    s.m.assign(n, 0.0);
    // Tridiagonal system for the second derivatives; clamped slope 0 at the
    // left end, m = 0 at the right end.
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
    const double h = s.h;
    b[0] = h / 3.0;
    c[0] = h / 6.0;
    d[0] = (s.y[1] - s.y[0]) / h;
    for (int i = 1; i < n - 1; ++i) {
        a[i] = h / 6.0;
        b[i] = 2.0 * h / 3.0;
        c[i] = h / 6.0;
        d[i] = (s.y[i + 1] - 2.0 * s.y[i] + s.y[i - 1]) / h;
    }
    b[n - 1] = 1.0;
    for (int i = 1; i < n; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        d[i] -= w * d[i - 1];
    }
    s.m[n - 1] = d[n - 1] / b[n - 1];
    for (int i = n - 2; i >= 0; --i) {
        s.m[i] = (d[i] - c[i] * s.m[i + 1]) / b[i];
    }
    return s;
}

double RadialSpline::operator()(double x) const
{
    const int n = static_cast<int>(y.size());
    int i = static_cast<int>(x / h);
    i = std::clamp(i, 0, n - 2);
    const double t = x - i * h;
    const double u = h - t;
    return (m[i] * u * u * u + m[i + 1] * t * t * t) / (6.0 * h) +
           (y[i] / h - m[i] * h / 6.0) * u + (y[i + 1] / h - m[i + 1] * h / 6.0) * t;
}

} // namespace sg
