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

#ifndef SEQMI_INSERTION_HPP_
#define SEQMI_INSERTION_HPP_

#include "seqmi/gaussian.hpp"

namespace seqmi {

// What the crafter decided for one mechanism run: whether the target is a
// member (b = 1), in which batch it lands (tau, 1-based), which batch entry
// it replaces (replaced_index, 1-based), and the target itself.
struct InsertionSpec {
  int b = 0;
  int tau = 1;
  Vec target;
  int replaced_index = 1;

  static InsertionSpec out() { return InsertionSpec{}; }
  static InsertionSpec in(int tau, Vec target, int replaced_index = 1) {
    InsertionSpec s;
    s.b = 1;
    s.tau = tau;
    s.target = std::move(target);
    s.replaced_index = replaced_index;
    return s;
  }
};

// Throws ConfigError if the spec is inconsistent with T steps, batch size n
// and data dimension d.
void validate_insertion(const InsertionSpec& spec, int T, int n, int d);

}  // namespace seqmi

#endif  // SEQMI_INSERTION_HPP_
