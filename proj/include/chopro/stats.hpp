/*
 * Copyright 2026 The choquet-probit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CHOPRO_STATS_HPP
#define CHOPRO_STATS_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace chopro {

// Standard normal CDF.
double norm_cdf(double x);

// Standard normal quantile function (Wichura's AS 241, double precision).
// p must lie in (0, 1).
double norm_ppf(double p);

// Radical-inverse (van der Corput) sequence in the given prime base.
// Point k of the sequence uses index k+1, so halton_sequence(2, 0, 4)
// = {0.5, 0.25, 0.75, 0.125}.  The first `skip` points are discarded.
std::vector<double> halton_sequence(int base, int skip, int count);

// Linear-interpolation percentile of a sample, q in [0, 1].
double percentile(std::vector<double> values, double q);

// Sample standard deviation (divides by n-1).
double sample_std(std::span<const double> values);

// Population standard deviation (divides by n).
double population_std(std::span<const double> values);

// Deterministic random stream.  Streams derived from the same seed but
// different stream ids are independent for practical purposes, and every
// value is reproducible bit-for-bit across platforms: uniforms come from
// mt19937_64's specified output, normals from norm_ppf(uniform).
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  double uniform();                        // (0, 1)
  double uniform(double lo, double hi);
  double normal();
  Eigen::VectorXd normal_vector(int n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace chopro

#endif  // CHOPRO_STATS_HPP
