// Copyright 2026 The Detox Authors.
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

#ifndef DETOX_RNG_H_
#define DETOX_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace detox {

// std::mt19937_64's output sequence is fixed by the standard, but the
// distributions and std::shuffle are not. These helpers only consume raw
// engine output so sampling is identical across standard libraries.
using Rng = std::mt19937_64;

// Uniform integer in [0, bound); bound must be > 0.
uint64_t uniform_below(Rng& rng, uint64_t bound);

// Uniform real in [0, 1) with 53 random bits.
double uniform_unit(Rng& rng);

template <typename T>
void shuffle_in_place(std::span<T> items, Rng& rng) {
  for (size_t i = items.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

// Uniform sample of `count` distinct indices from [0, n), returned ascending.
std::vector<size_t> sample_indices(size_t n, size_t count, Rng& rng);

}  // namespace detox

#endif  // DETOX_RNG_H_
