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


#include <cmath>

#include "doctest.h"
#include "sg/special_fn.hpp"
#include "sg/types.hpp"

using sg::bessel_k0;

TEST_CASE("bessel_k0 reference values")
{
    CHECK(bessel_k0(1.0) == doctest::Approx(0.421024438240708).epsilon(1e-12));
    CHECK(bessel_k0(2.0) == doctest::Approx(0.113893872749533).epsilon(1e-12));
}

TEST_CASE("bessel_k0 small argument")
{
    const double x = 1e-8;
    CHECK(std::abs(bessel_k0(x) - (-std::log(x / 2.0) - sg::euler_gamma)) < 1e-12);
}

TEST_CASE("bessel_k0 against libstdc++ cyl_bessel_k")
{
    // Covers both branches and the switch point.
    for (double x : {1e-4, 0.05, 0.5, 1.0, 1.999, 2.0, 2.001, 3.7, 10.0, 25.0, 60.0}) {
        const double ref = std::cyl_bessel_k(0.0, x);
        CHECK(bessel_k0(x) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("bessel_k0 is positive and decreasing")
{
    double prev = bessel_k0(1e-3);
    for (double x = 2e-3; x < 40.0; x *= 1.3) {
        const double k = bessel_k0(x);
        CHECK(k > 0.0);
        CHECK(k < prev);
        prev = k;
    }
}

TEST_CASE("bessel_k0 rejects non-positive arguments")
{
    CHECK_THROWS_AS(bessel_k0(0.0), sg::DomainError);
    CHECK_THROWS_AS(bessel_k0(-1.0), sg::DomainError);
}
