// Copyright 2026 The casbi authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "casbi/prior.hpp"

#include <cmath>

#include "casbi/errors.hpp"

namespace casbi {

PriorSpec PriorSpec::box_uniform(std::vector<double> low, std::vector<double> high) {
  if (low.empty() || low.size() != high.size()) {
    throw DomainError("box_uniform requires matching non-empty bounds");
  }
  for (std::size_t d = 0; d < low.size(); ++d) {
    if (!(low[d] < high[d]) || !std::isfinite(low[d]) || !std::isfinite(high[d])) {
      throw DomainError("box_uniform requires finite low < high per dimension");
    }
  }
  PriorSpec p;
  p.kind_ = Kind::box_uniform;
  p.a_ = std::move(low);
  p.b_ = std::move(high);
  return p;
}

PriorSpec PriorSpec::gaussian(std::vector<double> mean, std::vector<double> stddev) {
  if (mean.empty() || mean.size() != stddev.size()) {
    throw DomainError("gaussian prior requires matching non-empty mean/stddev");
  }
  for (double s : stddev) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw DomainError("gaussian prior requires positive finite stddev");
    }
  }
  PriorSpec p;
  p.kind_ = Kind::gaussian;
  p.a_ = std::move(mean);
  p.b_ = std::move(stddev);
  return p;
}

double PriorSpec::density(std::span<const double> theta) const {
  if (theta.size() != dim()) {
    throw DomainError("prior density called with mismatched dimension");
  }
  double d = 1.0;
  if (kind_ == Kind::box_uniform) {
    for (std::size_t i = 0; i < dim(); ++i) {
      if (theta[i] < a_[i] || theta[i] > b_[i]) return 0.0;
      d /= (b_[i] - a_[i]);
    }
    return d;
  }
  constexpr double inv_sqrt_2pi = 0.3989422804014326779399461;
  for (std::size_t i = 0; i < dim(); ++i) {
    const double z = (theta[i] - a_[i]) / b_[i];
    d *= inv_sqrt_2pi / b_[i] * std::exp(-0.5 * z * z);
  }
  return d;
}

std::vector<double> PriorSpec::sample(RngStream& rng) const {
  std::vector<double> theta(dim());
  if (kind_ == Kind::box_uniform) {
    for (std::size_t i = 0; i < dim(); ++i) theta[i] = rng.uniform(a_[i], b_[i]);
  } else {
    for (std::size_t i = 0; i < dim(); ++i) theta[i] = a_[i] + b_[i] * rng.normal();
  }
  return theta;
}

Box PriorSpec::support_box() const {
  Box box;
  box.low.resize(dim());
  box.high.resize(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (kind_ == Kind::box_uniform) {
      box.low[i] = a_[i];
      box.high[i] = b_[i];
    } else {
      box.low[i] = a_[i] - 10.0 * b_[i];
      box.high[i] = a_[i] + 10.0 * b_[i];
    }
  }
  return box;
}

}  // namespace casbi
