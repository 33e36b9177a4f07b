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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

namespace sg {

inline double qnorm(double x) { return std::abs(x); }
inline double qnorm(const std::complex<double> &x) { return std::abs(x); }
template <typename Derived>
double qnorm(const Eigen::MatrixBase<Derived> &x)
{
    return x.template lpNorm<Eigen::Infinity>();
}

template <typename T>
T zero_of()
{
    if constexpr (std::is_base_of_v<Eigen::DenseBase<T>, T>) {
        return T::Zero();
    } else {
        return T{};
    }
}

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    int max_segments = 4000;
};

template <typename T>
struct QuadResult {
    T value;
    double error;
    bool converged;
    int evaluations;
};

namespace detail {

inline constexpr std::array<double, 8> gk15_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> gk15_wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gk15_wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T>
struct Segment {
    double a, b;
    T value;
    double error;
    bool operator<(const Segment &o) const { return error < o.error; }
};

template <typename T, typename F>
Segment<T> gk15(F &f, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    T k = fc * gk15_wk[7];
    T g = fc * gk15_wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * gk15_x[j];
        const T f1 = f(c - dx);
        const T f2 = f(c + dx);
        k = k + (f1 + f2) * gk15_wk[j];
        if (j % 2 == 1) {
            g = g + (f1 + f2) * gk15_wg[j / 2];
        }
    }
    Segment<T> s{a, b, k * h, 0.0};
    s.error = qnorm((k - g) * h);
    return s;
}

} // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) quadrature over [a, b] with optional
// interior breakpoints. T may be double, complex, or a fixed Eigen vector.
template <typename T, typename F>
QuadResult<T> integrate_gk(F &&f, double a, double b, const QuadOptions &opt,
                           const std::vector<double> &breaks = {})
{
    std::vector<double> pts{a};
    for (double x : breaks) {
        if (x > a && x < b) {
            pts.push_back(x);
        }
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());

    std::priority_queue<detail::Segment<T>> heap;
    int evals = 0;
    bool have = false;
    T total = zero_of<T>();
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] <= pts[i]) {
            continue;
        }
        auto s = detail::gk15<T>(f, pts[i], pts[i + 1]);
        evals += 15;
        total = have ? T(total + s.value) : s.value;
        have = true;
        err += s.error;
        heap.push(s);
    }
    if (!have) {
        return {zero_of<T>(), 0.0, true, 0};
    }
    while (err > std::max(opt.abs_tol, opt.rel_tol * qnorm(total))) {
        if (static_cast<int>(heap.size()) >= opt.max_segments) {
            return {total, err, false, evals};
        }
        auto s = heap.top();
        heap.pop();
        const double m = 0.5 * (s.a + s.b);
        if (!(m > s.a && m < s.b)) {
            return {total, err, false, evals};
        }
        auto l = detail::gk15<T>(f, s.a, m);
        auto r = detail::gk15<T>(f, m, s.b);
        evals += 30;
        total = total - s.value + l.value + r.value;
        err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
    }
    // Recompute the sum to shed accumulated rounding from the updates.
    T sum = zero_of<T>();
    double e = 0.0;
    while (!heap.empty()) {
        sum = sum + heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    return {sum, e, true, evals};
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double> &x, std::vector<double> &w);

// Cubic spline on a uniform grid over [0, x_max] with zero slope at 0 and a
// natural right end.
struct RadialSpline {
    double h = 0.0;
    std::vector<double> y, m;

    static RadialSpline fit(double x_max, std::vector<double> values);
    double operator()(double x) const;
};

} // namespace sg
