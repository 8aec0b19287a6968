// Copyright 2026 the BranchLab Authors
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

#ifndef BRANCHLAB_ERRORS_HPP_
#define BRANCHLAB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace branchlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// LP pivot selection stalled on sub-tolerance pivots even under Bland's rule.
struct NumericalBreakdown : Error {
  using Error::Error;
};

// Tensor operand shapes incompatible with the requested op.
struct ShapeMismatch : Error {
  using Error::Error;
};

// Every strong-branching candidate was skipped (score -inf).
struct AllSkipped : Error {
  using Error::Error;
};

// Checkpoint feature dimensions disagree with the graph encoder.
struct ArchitectureMismatch : Error {
  using Error::Error;
};

// Dense pair state of the 2-FGNN would exceed the configured cap.
struct OOMGuard : Error {
  using Error::Error;
};

// Subgraph anchor index outside the variable node set.
struct AnchorOutOfRange : Error {
  using Error::Error;
};

// Training requested on an empty sample set.
struct EmptyDataset : Error {
  using Error::Error;
};

// Malformed or wrong-version artifact file (MILP-JSON, SAMPLES-JSONL, CKPT-JSON).
struct FormatError : Error {
  using Error::Error;
};

}  // namespace branchlab

#endif  // BRANCHLAB_ERRORS_HPP_
