//
// Copyright 2026 The ggdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef GGDP_SPECIAL_FUNCTIONS_H_
#define GGDP_SPECIAL_FUNCTIONS_H_

namespace ggdp {

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
// Series expansion for x < a + 1, Lentz continued fraction otherwise.
// Relative accuracy is better than 1e-12 for a in (0, 100], x >= 0.
double RegularizedGammaP(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
// directly (no cancellation) so that tiny tails keep relative accuracy.
double RegularizedGammaQ(double a, double x);

// Inverses in x: RegularizedGammaP(a, InverseGammaP(a, p)) == p.
// p must lie in (0, 1); throws ParameterError otherwise.
double InverseGammaP(double a, double p);
double InverseGammaQ(double a, double q);

// Standard normal CDF.
double NormalCdf(double x);

}  // namespace ggdp

#endif  // GGDP_SPECIAL_FUNCTIONS_H_
