/* Copyright 2026 The ShardGNN Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "shardgnn/common.h"

namespace shardgnn {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSchema: return "SchemaError";
    case ErrorCode::kLookup: return "LookupError";
    case ErrorCode::kNotLocal: return "NotLocal";
    case ErrorCode::kUnmappedVertex: return "UnmappedVertex";
    case ErrorCode::kDegenerateSample: return "DegenerateSample";
    case ErrorCode::kEmptyDomain: return "EmptyDomain";
    case ErrorCode::kCandidateExhausted: return "CandidateExhausted";
    case ErrorCode::kEmptyNeighborhood: return "EmptyNeighborhood";
    case ErrorCode::kFeatureMissing: return "FeatureMissing";
    case ErrorCode::kStateMissing: return "StateMissing";
    case ErrorCode::kDivergence: return "Divergence";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kUsage: return "UsageError";
  }
  return "Error";
}

uint16_t TypeRegistry::Intern(std::string_view name) {
  auto it = codes_.find(std::string(name));
  if (it != codes_.end()) return it->second;
  if (names_.size() >= 0xfffe) {
    throw Error(ErrorCode::kSchema, "too many distinct type labels");
  }
  auto code = static_cast<uint16_t>(names_.size());
  names_.emplace_back(name);
  codes_.emplace(std::string(name), code);
  return code;
}

uint16_t TypeRegistry::Code(std::string_view name) const {
  auto it = codes_.find(std::string(name));
  if (it == codes_.end()) {
    throw Error(ErrorCode::kSchema, "unknown type label '" + std::string(name) + "'");
  }
  return it->second;
}

const std::string& TypeRegistry::Name(uint16_t code) const {
  if (code >= names_.size()) {
    throw Error(ErrorCode::kSchema, "unknown type code " + std::to_string(code));
  }
  return names_[code];
}

}  // namespace shardgnn
