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

#ifndef CASBI_BOX_HPP
#define CASBI_BOX_HPP

#include <cstddef>
#include <vector>

namespace casbi {

/// Axis-aligned bounded parameter domain.
struct Box {
  std::vector<double> low;
  std::vector<double> high;
  std::size_t dim() const { return low.size(); }
};

}  // namespace casbi

#endif
