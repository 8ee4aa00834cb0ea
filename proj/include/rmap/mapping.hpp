// Copyright 2026 The rmap Authors
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

#ifndef RMAP_MAPPING_HPP_
#define RMAP_MAPPING_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rmap/random.hpp"

namespace rmap {

using Vertex = std::uint32_t;

// A function f: [n] -> [n], i.e. a digraph with every out-degree equal to 1.
// Vertices are 0-based internally; text formats are 1-based.
class Mapping {
 public:
  Mapping() = default;

  // `image[v]` is f(v), 0-based. Throws InvalidArgument when empty or when an
  // entry is out of range.
  explicit Mapping(std::vector<Vertex> image);

  static Mapping FromOneBased(std::span<const std::uint64_t> image);

  // Space-separated 1-based images, e.g. "2 3 4 5 1 2 6 7 6 3 1 2 12 13 10".
  static Mapping Parse(std::string_view text);
  std::string Format() const;

  std::size_t size() const { return image_.size(); }
  Vertex operator[](Vertex v) const { return image_[v]; }
  std::span<const Vertex> image() const { return image_; }

  friend bool operator==(const Mapping&, const Mapping&) = default;

 private:
  friend void SampleUniformInto(std::size_t n, Stream& stream, Mapping& out);
  friend class MappingOdometer;

  std::vector<Vertex> image_;
};

// Each of the n^n mappings with equal probability. Throws InvalidArgument
// for n = 0.
Mapping SampleUniform(std::size_t n, Stream& stream);
// Reuses the storage of `out`.
void SampleUniformInto(std::size_t n, Stream& stream, Mapping& out);

// Cycle/tree structure of a mapping.
struct Decomposition {
  std::vector<Vertex> parent;         // copy of f
  std::vector<std::uint8_t> cyclic;   // 1 iff v lies on a cycle
  std::vector<std::uint32_t> height;  // distance to the cycle
  std::vector<Vertex> tree_root;      // cyclic vertex anchoring v's tree
  // Max height within the tree rooted at v; meaningful for cyclic v only.
  std::vector<std::uint32_t> tree_height;
  // Every vertex appears after its parent unless both are cyclic.
  std::vector<Vertex> outward_order;
  std::uint32_t lambda = 0;

  std::size_t size() const { return parent.size(); }
};

// Linear time: in-degree peeling isolates the cycles, then heights and roots
// propagate outward along the reversed peeling order.
Decomposition Decompose(const Mapping& m);
void DecomposeInto(const Mapping& m, Decomposition& out);

// Level-c branch profile. Heights are relative to branch roots.
struct CrownReport {
  std::uint32_t level_c = 0;
  std::uint32_t branch_count = 0;
  std::uint32_t top_height = 0;
  std::uint32_t second_height = 0;
  std::uint32_t tie_count = 0;
  Vertex top_root = 0;               // root of a highest branch (lowest index)
  std::vector<Vertex> crown_vertices;  // ascending, 0-based
  std::uint32_t crown_roots = 0;

  std::size_t crown_size() const { return crown_vertices.size(); }
  std::uint32_t margin() const { return top_height - second_height; }
  bool has_branches() const { return branch_count > 0; }
};

struct CrownScratch {
  std::vector<Vertex> anchor;
  std::vector<std::uint32_t> branch_height;
  std::vector<Vertex> roots;
};

// Branches are the subtrees rooted at vertices of height exactly c (c = 0
// gives the trees). With a single branch the second height is taken as 0;
// with no branch the report is empty.
CrownReport BuildCrownReport(const Decomposition& d, std::uint32_t c);
void BuildCrownReportInto(const Decomposition& d, std::uint32_t c,
                          CrownReport& out, CrownScratch& scratch);

struct ClassificationFlags {
  bool has_branches = false;
  std::uint32_t tie_count = 0;
  bool unique_highest = false;
  bool margin_ge_2 = false;
  // |H| > 2r > 0
  bool crown_ok = false;

  bool exactly_k_highest(std::uint32_t k) const {
    return has_branches && tie_count == k;
  }
  friend bool operator==(const ClassificationFlags&,
                         const ClassificationFlags&) = default;
};

ClassificationFlags Classify(const CrownReport& report);

}  // namespace rmap

#endif  // RMAP_MAPPING_HPP_
