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

#ifndef BRANCHLAB_INSTANCE_GEN_HPP_
#define BRANCHLAB_INSTANCE_GEN_HPP_

#include <cstdint>
#include <string>

#include "branchlab/milp.hpp"

namespace branchlab {

enum class Family { kSetcover, kCauction, kFacilities, kIndset };
enum class SizeClass { kSmall, kMedium, kLarge, kCustom };

Family family_from_string(const std::string& s);
std::string to_string(Family f);
SizeClass size_from_string(const std::string& s);

// Size presets (vars x cons for setcover, bids x items for cauction,
// facilities x customers for facilities, node count for indset):
//   setcover   1000x500 / 1000x1000 / 1000x2000
//   cauction    500x100 / 1000x200  / 1500x300
//   facilities    50x50 /  100x100  /  150x150
//   indset          500 /      1000 /      1500
struct GenSpec {
  Family family = Family::kSetcover;
  SizeClass size = SizeClass::kSmall;
  int custom_a = 0;  // vars / bids / facilities / nodes
  int custom_b = 0;  // cons / items / customers  (ignored for indset)
  std::uint64_t seed = 0;

  // Family parameters; every knob the generators use is exposed here.
  double density = 0.05;        // setcover coverage density
  int cost_lo = 1, cost_hi = 100;  // setcover integer column costs
  double bundle_mean = 4.0;     // cauction geometric bundle-size mean
  double value_lo = 1.0, value_hi = 100.0;  // cauction item base values
  double price_jitter = 0.2;    // cauction bid price multiplier U(0, jitter)
  int affinity = 4;             // indset Barabasi-Albert attachment count
  int demand_lo = 5, demand_hi = 35;    // facilities customer demands
  int cap_lo = 40, cap_hi = 80;         // facilities base capacities
  double fixed_lo = 100.0, fixed_hi = 110.0;  // facilities opening costs
  double cost_scale = 1.0;      // facilities cost multiplier
  double cap_margin = 1.2;      // facilities sum-capacity / sum-demand floor

  // Resolved primary/secondary dimensions for the chosen size.
  std::pair<int, int> dims() const;
};

// All four generators emit canonical minimization instances (maximization
// objectives negated) that pass MilpInstance::validate() and have a feasible
// point by construction. Same spec => identical MILP-JSON bytes.
MilpInstance gen_setcover(const GenSpec& spec);
MilpInstance gen_cauction(const GenSpec& spec);
MilpInstance gen_facilities(const GenSpec& spec);
MilpInstance gen_indset(const GenSpec& spec);

MilpInstance generate(const GenSpec& spec);

}  // namespace branchlab

#endif  // BRANCHLAB_INSTANCE_GEN_HPP_
