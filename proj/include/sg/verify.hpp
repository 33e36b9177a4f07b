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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sg/correlators.hpp"
#include "sg/covariance.hpp"
#include "sg/glow.hpp"
#include "sg/integrate.hpp"
#include "sg/smearing.hpp"

namespace sg {

// Least-squares fit of a ladder of (parameter, value) points.
struct FitReport {
    std::vector<double> coefficients; // intercept, slope, ...
    double residual_rms = 0.0;        // same units as the values
    std::vector<std::pair<double, double>> points;
    bool flagged = false;
};

// Ordinary least squares for value = a + b x.
FitReport fit_line(const std::vector<double> &x, const std::vector<double> &y);

// Largest relative deviation between det(1/(chi_i - ups_j)) from LU
// elimination and the Cauchy product formula, over random configurations
// with pairwise distances >= min_dist.
double check_cauchy_determinant(int n, std::uint64_t seed, int trials = 1000,
                                double min_dist = 0.1);

struct BoundCheck {
    int trials = 0;
    int violations = 0;
    double max_ratio = 0.0; // largest lhs / rhs seen
    bool holds() const { return violations == 0; }
};

BoundCheck check_determinant_bound_stats(int n, double p, std::uint64_t seed, int trials = 200);
bool check_determinant_bound(int n, double p, std::uint64_t seed, int trials = 200);
// (n!)^{max(2p - 1, 0)}
double determinant_bound_prefactor(int n, double p);

struct YoungExponents {
    double p, q, r;
};

YoungExponents young_exponents(double beta2);
// ||Theta(1 - mu|x|) (mu|x|)^{-beta^2/2pi}||_q^q in closed form.
double theta_norm_q(double beta2, double mu);
// The same by 2-d cubature over the disk mu|x| <= 1.
double theta_norm_q_quadrature(double beta2, double mu, double tol = 1e-10);

FitReport fit_neutrality_exponent(const ChargeConfiguration &cfg, const RegulatorParams &reg,
                                  const std::vector<double> &lambdas);

// Slope of the diagonal u_reg components against ln eps.
FitReport fit_log_divergence_euclid(const SmearingFunction &f, double mu,
                                    const std::vector<double> &eps);
// ln eps coefficient of the smeared Minkowski correlator (uv component) from
// the a + b ln eps + c eps ladder fit. Coefficients (a re, b re, a im, b im).
FitReport fit_log_divergence_mink(const SmearingFunction &f, const ChargeConfiguration &cfg,
                                  double beta2, double mu, const StatePartW &W,
                                  const std::vector<double> &eps, bool with_counterterm);

struct VectorEstimate {
    Eigen::VectorXd value;
    Eigen::VectorXd error;

    double max_z() const;
};

// Conservation residual of the Euclidean stress tensor smeared with d^mu f,
// summed over orders m = 1..N_max. Components (0, 1).
struct EuclidConservation {
    VectorEstimate residual_T;     // classical coupling
    VectorEstimate residual_T_hat; // (1 - beta^2/8pi) coupling
    VectorEstimate vertex;         // vertex series smeared with d f
    double ratio = 0.0;            // residual_T projected on vertex
    double ratio_error = 0.0;
};

EuclidConservation conservation_euclid(const SmearingFunction &f, const PlateauCutoff &g,
                                       double beta2, double mu, int N_max, const McConfig &mc);
VectorEstimate conservation_residual_euclid(const SmearingFunction &f, const PlateauCutoff &g,
                                            double beta2, double mu, int N_max, bool corrected,
                                            const McConfig &mc);

// Minkowski residual in light-cone components as (u re, u im, v re, v im),
// extrapolated to eps -> 0 over the ladder. The (1 - beta^2/8pi) coupling is
// used throughout; `redefined` adds the c^u = c^v local terms.
struct MinkConservation {
    VectorEstimate residual;
    std::vector<double> ladder;
    std::vector<VectorEstimate> per_eps;
    double fit_rms = 0.0;
};

MinkConservation conservation_residual_mink(const SmearingFunction &f, const PlateauCutoff &g,
                                            double beta2, double mu, const StatePartW &W,
                                            int N_max, const std::vector<double> &ladder,
                                            bool redefined, const McConfig &mc);
// Both flags from the same samples.
std::pair<MinkConservation, MinkConservation>
conservation_mink_both(const SmearingFunction &f, const PlateauCutoff &g, double beta2, double mu,
                       const StatePartW &W, int N_max, const std::vector<double> &ladder,
                       const McConfig &mc);

// JSON report {check, inputs, expected, observed, tolerance, pass}.
std::string check_report(const std::string &check, const std::string &inputs_json,
                         const std::string &expected_json, const std::string &observed_json,
                         double tolerance, bool pass);

} // namespace sg
