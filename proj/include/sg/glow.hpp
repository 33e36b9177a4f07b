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

#include <functional>
#include <string>
#include <vector>

#include "sg/correlators.hpp"
#include "sg/covariance.hpp"
#include "sg/integrate.hpp"
#include "sg/renorm.hpp"
#include "sg/smearing.hpp"

namespace sg {

enum class Signature { euclid, minkowski };
enum class Role { denominator, numerator_O, numerator_vertex };
enum class Observable { O, T, T_hat };

const char *to_string(Signature s);
const char *to_string(Role r);

// One order of a Gell-Mann-Low series. Complex terms store (re, im) pairs.
struct SeriesTerm {
    Signature signature = Signature::euclid;
    Role role = Role::denominator;
    int m = 0;
    double eps = 0.0;
    McEstimate value;
};

std::string to_json_line(const SeriesTerm &t);
std::string sampler_hash(const std::string &spec);

double log_factorial(int n);

// Log of the charge-pair product with x's of charge +1 and y's of charge -1.
double euclid_pair_logweight(const std::vector<Vec2> &xs, const std::vector<Vec2> &ys, double p,
                             double mu);
cplx mink_pair_logweight(const std::vector<Vec2> &xs, const std::vector<Vec2> &ys, double p,
                         double mu, double eps);

// Importance weight of an order-m pair draw: pair product, cutoffs and the
// 1/(m!)^2 combinatorial factor over the sampling density.
double euclid_sample_weight(const PairDraw &d, const PlateauCutoff &g, double beta2, double mu);
// As above with the (-1)^m sign and the exp(-beta^2/2 W) factor.
cplx mink_sample_weight(const PairDraw &d, const PlateauCutoff &g, double beta2, double mu,
                        double eps, const StatePartW &W);

SeriesTerm euclid_denominator_term(int m, const PlateauCutoff &g, double beta2, double mu,
                                   const McConfig &mc);
// Components (xx, xy, yy).
SeriesTerm euclid_numerator_term_O(int m, const SmearingFunction &f, const PlateauCutoff &g,
                                   double beta2, double mu, const McConfig &mc);
// Components (V_beta, V_-beta).
SeriesTerm euclid_numerator_term_vertex(int m, const SmearingFunction &f, const PlateauCutoff &g,
                                        double beta2, double mu, const McConfig &mc);

double estimate_K(const PlateauCutoff &g, double beta2, double mu);
std::vector<double> series_majorant(double C, double K, double beta2, int N);

// Hook for term-level caching: returns the stored term for (signature, role,
// m, eps) or calls compute.
using TermSource = std::function<SeriesTerm(Signature, Role, int m, double eps,
                                            const std::function<SeriesTerm()> &compute)>;

struct GlowResult {
    Tensor2 value;
    Tensor2 error;
    Tensor2 numerator;
    Tensor2 numerator_error;
    double denominator = 1.0;
    double denominator_error = 0.0;
    std::vector<SeriesTerm> terms;
};

GlowResult glow_value_euclid(const SmearingFunction &f, const PlateauCutoff &g, double beta2,
                             double mu, int N_max, const McConfig &mc,
                             Observable obs = Observable::O, const TermSource &source = {});

SeriesTerm mink_denominator_term(int m, const PlateauCutoff &g, double beta2, double mu,
                                 double eps, const StatePartW &W, const McConfig &mc);
// Components (uu, uv, vv) as (re, im) pairs.
SeriesTerm mink_numerator_term_O(int m, const SmearingFunction &f, const PlateauCutoff &g,
                                 double beta2, double mu, double eps, const StatePartW &W,
                                 const McConfig &mc);
// Components (V_beta, V_-beta) as (re, im) pairs.
SeriesTerm mink_numerator_term_vertex(int m, const SmearingFunction &f, const PlateauCutoff &g,
                                      double beta2, double mu, double eps, const StatePartW &W,
                                      const McConfig &mc);

struct GlowResultMink {
    Tensor2c value;        // extrapolated to eps -> 0
    Tensor2 error;         // componentwise modulus error
    std::vector<Tensor2c> ladder_values;
    std::vector<double> ladder;
    double fit_rms = 0.0;
    bool flagged = false;  // ladder residual above the statistical error
    std::vector<SeriesTerm> terms;
};

GlowResultMink glow_value_mink(const SmearingFunction &f, const PlateauCutoff &g, double beta2,
                               double mu, const StatePartW &W, int N_max,
                               const std::vector<double> &ladder, const McConfig &mc,
                               Observable obs = Observable::O, const TermSource &source = {});

} // namespace sg
