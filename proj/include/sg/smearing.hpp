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
#include <vector>

#include "sg/types.hpp"

namespace sg {

struct GaussianTerm {
    double A;
    Vec2 center;
    double a;
};

// f(x) = sum_k A_k exp(-a_k |x - c_k|^2)
struct SmearingFunction {
    std::vector<GaussianTerm> terms;

    static SmearingFunction gaussian(double A, const Vec2 &center, double a)
    {
        return SmearingFunction{{GaussianTerm{A, center, a}}};
    }
    void validate() const;
};

// g(x) = g0 s(|x - center|), s = 1 on [0, R], 0 beyond R + w, smooth between.
struct PlateauCutoff {
    double g0;
    Vec2 center;
    double R;
    double w;

    void validate() const;
};

struct Jet {
    double value;
    Vec2 grad;
    Mat2 hess;
};

// third[k](i, j) = d_i d_j d_k f
struct Jet3 {
    double value;
    Vec2 grad;
    Mat2 hess;
    std::array<Mat2, 2> third;
};

double value(const SmearingFunction &f, const Vec2 &x);
Vec2 gradient(const SmearingFunction &f, const Vec2 &x);
Jet eval_jet(const SmearingFunction &f, const Vec2 &x);
Jet3 eval_jet3(const SmearingFunction &f, const Vec2 &x);

double value(const PlateauCutoff &g, const Vec2 &x);
Jet eval_jet(const PlateauCutoff &g, const Vec2 &x);

// |A|-weighted mean of the term centers.
Vec2 centroid(const SmearingFunction &f);

// Smallest R such that |f| < delta outside the ball of radius R about the
// centroid, bounded term by term.
double support_radius(const SmearingFunction &f, double delta);

double integral(const SmearingFunction &f);

// Integral of g over the plane.
double plateau_mass(const PlateauCutoff &g);

bool constant_on_support(const PlateauCutoff &g, const SmearingFunction &f,
                         double delta = 1e-12);

} // namespace sg
