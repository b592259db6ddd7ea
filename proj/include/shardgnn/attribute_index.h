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

#ifndef SHARDGNN_ATTRIBUTE_INDEX_H_
#define SHARDGNN_ATTRIBUTE_INDEX_H_

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "shardgnn/lru_cache.h"

namespace shardgnn {

using AttributeVector = std::vector<double>;

struct AttributeLookup {
  AttributeVector values;
  bool hit = false;
};

// Deduplicated, append-only store of fixed-arity attribute vectors fronted by
// a bounded LRU cache. Entries are compared bit-for-bit.
class AttributeIndex {
 public:
  AttributeIndex(size_t arity, size_t cache_capacity);

  // Returns the entry index for `attr`, appending it if unseen.
  uint32_t Intern(std::span<const double> attr);

  // Cached read. Records a hit or miss and updates recency.
  AttributeLookup Get(uint32_t idx);

  // Uncached read, for bulk copies and accounting.
  std::span<const double> Peek(uint32_t idx) const;

  size_t arity() const { return arity_; }
  size_t size() const { return count_; }
  size_t cache_size() const { return cache_.size(); }
  size_t cache_capacity() const { return cache_.capacity(); }
  uint64_t hits() const { return hits_; }
  uint64_t misses() const { return misses_; }

 private:
  size_t arity_;
  size_t count_ = 0;
  std::vector<double> entries_;
  std::unordered_multimap<uint64_t, uint32_t> lookup_;
  LruCache<uint32_t, AttributeVector> cache_;
  uint64_t hits_ = 0;
  uint64_t misses_ = 0;
};

}  // namespace shardgnn

#endif  // SHARDGNN_ATTRIBUTE_INDEX_H_
