// Copyright 2026 The seqmi Authors
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

#ifndef SEQMI_RNG_HPP_
#define SEQMI_RNG_HPP_

#include <cstdint>

namespace seqmi {

// Deterministic, splittable random stream.
//
// A stream is identified by a (seed, stream_id) pair. The generator state is
// derived from the pair by avalanche mixing, so constructing the same stream
// twice yields the same sample sequence regardless of what any other stream
// has consumed. Monte-Carlo rounds each own the stream (seed, round_index),
// which makes results independent of thread count and scheduling.
//
// Substreams derived via child(label) mix the label into the stream id, an
// O(1) split. The underlying generator is xoshiro256**; state initialization
// uses a splitmix64 chain per its authors' recommendation.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  // A statistically independent stream derived from this one. Does not
  // consume any state from the parent.
  RngStream child(std::uint64_t label) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform();

  // Uniform integer on {0, 1, ..., bound - 1}. bound must be >= 1.
  std::uint64_t uniform_int(std::uint64_t bound);

  // Standard normal via Box-Muller. Pairs are cached, so the draw sequence
  // is a deterministic function of the stream state.
  double gaussian();

 private:
  std::uint64_t state_[4];
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

}  // namespace seqmi

#endif  // SEQMI_RNG_HPP_
