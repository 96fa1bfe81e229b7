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

#ifndef SEQMI_CSV_HPP_
#define SEQMI_CSV_HPP_

#include <string>

namespace seqmi {

// Shortest decimal string that round-trips to the same double. Keeps CSV
// output byte-stable across runs and thread counts.
std::string csv_double(double v);

}  // namespace seqmi

#endif  // SEQMI_CSV_HPP_
