/*
   Copyright 2026 The LayoutGraph Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */

// Checkpoint container: named f64 arrays plus a JSON metadata block.
//
// Layout (all integers little-endian):
//   "LGRAPHCK" | u32 version | u32 entry count | u64 meta length | meta bytes
//   per entry: u32 name length | name | u32 ndim | u64 dims[ndim]
//   per entry, in table order: f64 values (IEEE-754 bit patterns)

#ifndef LAYOUTGRAPH_CHECKPOINT_HPP_
#define LAYOUTGRAPH_CHECKPOINT_HPP_

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "layoutgraph/autodiff.hpp"
#include "layoutgraph/tensor.hpp"

namespace lg {

inline constexpr char kCheckpointMagic[8] = {'L', 'G', 'R', 'A', 'P', 'H', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  nlohmann::json meta = nlohmann::json::object();
  std::vector<std::pair<std::string, Tensor>> entries;

  const Tensor& at(const std::string& name) const;
  bool contains(const std::string& name) const;
};

std::string checkpoint_to_bytes(const Checkpoint& ck);
// Throws ParseError on a malformed or truncated container.
Checkpoint checkpoint_from_bytes(const std::string& bytes);

// Throw IoError when the file cannot be written or read.
void save_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::string& path);

Checkpoint checkpoint_from_params(const ParamStore& store, nlohmann::json meta);
// Overwrites every parameter of store from ck; names and shapes must match.
void load_params(ParamStore& store, const Checkpoint& ck);

}  // namespace lg

#endif  // LAYOUTGRAPH_CHECKPOINT_HPP_
