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

#include "rmap/mapping.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "rmap/error.hpp"

namespace rmap {

Mapping::Mapping(std::vector<Vertex> image) : image_(std::move(image)) {
  if (image_.empty()) throw InvalidArgument("mapping size must be positive");
  const std::size_t n = image_.size();
  for (std::size_t v = 0; v < n; ++v) {
    if (image_[v] >= n) {
      throw InvalidArgument("image of vertex " + std::to_string(v + 1) +
                            " is " + std::to_string(image_[v] + 1) +
                            ", outside [1.." + std::to_string(n) + "]");
    }
  }
}

Mapping Mapping::FromOneBased(std::span<const std::uint64_t> image) {
  std::vector<Vertex> zero_based;
  zero_based.reserve(image.size());
  for (std::size_t v = 0; v < image.size(); ++v) {
    const std::uint64_t x = image[v];
    if (x < 1 || x > image.size()) {
      throw InvalidArgument("image of vertex " + std::to_string(v + 1) +
                            " is " + std::to_string(x) + ", outside [1.." +
                            std::to_string(image.size()) + "]");
    }
    zero_based.push_back(static_cast<Vertex>(x - 1));
  }
  return Mapping(std::move(zero_based));
}

Mapping Mapping::Parse(std::string_view text) {
  std::vector<std::uint64_t> values;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() &&
           (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
            text[pos] == '\r')) {
      ++pos;
    }
    if (pos == text.size()) break;
    std::uint64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc() || ptr == text.data() + pos) {
      throw InvalidArgument("malformed mapping text near offset " +
                            std::to_string(pos));
    }
    values.push_back(value);
    pos = static_cast<std::size_t>(ptr - text.data());
  }
  return FromOneBased(values);
}

std::string Mapping::Format() const {
  std::ostringstream out;
  for (std::size_t v = 0; v < image_.size(); ++v) {
    if (v) out << ' ';
    out << image_[v] + 1;
  }
  return out.str();
}

void SampleUniformInto(std::size_t n, Stream& stream, Mapping& out) {
  if (n == 0) throw InvalidArgument("mapping size must be positive");
  out.image_.resize(n);
  for (auto& x : out.image_) x = static_cast<Vertex>(stream.Below(n));
}

Mapping SampleUniform(std::size_t n, Stream& stream) {
  Mapping m;
  SampleUniformInto(n, stream, m);
  return m;
}

void DecomposeInto(const Mapping& m, Decomposition& d) {
  const std::size_t n = m.size();
  const auto image = m.image();
  d.parent.assign(image.begin(), image.end());
  d.cyclic.assign(n, 1);
  d.height.assign(n, 0);
  d.tree_root.resize(n);
  d.tree_height.assign(n, 0);
  d.outward_order.resize(n);

  // In-degrees are counted into tree_root, which is overwritten below.
  auto& indegree = d.tree_root;
  std::fill(indegree.begin(), indegree.end(), 0);
  for (Vertex v : image) ++indegree[v];

  // Peel leaves into the tail of outward_order, back to front, so the tail
  // ends up in reversed peeling order.
  auto& order = d.outward_order;
  std::size_t tail = n;
  for (Vertex v = 0; v < n; ++v) {
    if (indegree[v] == 0) order[--tail] = v;
  }
  for (std::size_t head = n; head > tail; --head) {
    const Vertex u = image[order[head - 1]];
    if (--indegree[u] == 0) order[--tail] = u;
  }
  for (std::size_t i = tail; i < n; ++i) d.cyclic[order[i]] = 0;

  std::size_t front = 0;
  for (Vertex v = 0; v < n; ++v) {
    if (d.cyclic[v]) {
      order[front++] = v;
      d.tree_root[v] = v;
    }
  }
  d.lambda = static_cast<std::uint32_t>(front);

  // The peeled vertices were written from index n-1 down to `tail` in peeling
  // order; reading them from `tail` upward is therefore reversed peeling
  // order, which visits f(v) before v.
  for (std::size_t i = tail; i < n; ++i) {
    const Vertex v = order[i];
    const Vertex p = image[v];
    const std::uint32_t h = d.height[p] + 1;
    const Vertex root = d.tree_root[p];
    d.height[v] = h;
    d.tree_root[v] = root;
    if (h > d.tree_height[root]) d.tree_height[root] = h;
  }
}

Decomposition Decompose(const Mapping& m) {
  Decomposition d;
  DecomposeInto(m, d);
  return d;
}

void BuildCrownReportInto(const Decomposition& d, std::uint32_t c,
                          CrownReport& out, CrownScratch& scratch) {
  const std::size_t n = d.size();
  out.level_c = c;
  out.branch_count = 0;
  out.top_height = 0;
  out.second_height = 0;
  out.tie_count = 0;
  out.top_root = 0;
  out.crown_vertices.clear();
  out.crown_roots = 0;

  // anchor[v]: root of the level-c branch containing v (for height >= c).
  std::span<const Vertex> anchor;
  std::span<const std::uint32_t> branch_height;
  auto& roots = scratch.roots;
  roots.clear();
  if (c == 0) {
    for (std::size_t i = 0; i < d.lambda; ++i) {
      roots.push_back(d.outward_order[i]);
    }
    anchor = d.tree_root;
    branch_height = d.tree_height;
  } else {
    scratch.anchor.resize(n);
    scratch.branch_height.resize(n);
    for (Vertex v : d.outward_order) {
      const std::uint32_t h = d.height[v];
      if (h < c) continue;
      if (h == c) {
        scratch.anchor[v] = v;
        scratch.branch_height[v] = 0;
        roots.push_back(v);
      } else {
        const Vertex a = scratch.anchor[d.parent[v]];
        scratch.anchor[v] = a;
        scratch.branch_height[a] = std::max(scratch.branch_height[a], h - c);
      }
    }
    anchor = scratch.anchor;
    branch_height = scratch.branch_height;
  }
  if (roots.empty()) return;

  out.branch_count = static_cast<std::uint32_t>(roots.size());
  std::uint32_t top = 0;
  std::uint32_t below_top = 0;
  std::uint32_t ties = 0;
  Vertex top_root = 0;
  for (Vertex r : roots) {
    const std::uint32_t h = branch_height[r];
    if (ties == 0 || h > top) {
      if (ties > 0) below_top = std::max(below_top, top);
      top = h;
      ties = 1;
      top_root = r;
    } else if (h == top) {
      ++ties;
      top_root = std::min(top_root, r);
    } else {
      below_top = std::max(below_top, h);
    }
  }
  out.top_height = top;
  out.tie_count = ties;
  out.top_root = top_root;
  out.second_height = ties > 1 ? top : below_top;
  if (ties != 1) return;

  const std::uint32_t threshold = out.second_height + 1;
  for (Vertex v = 0; v < n; ++v) {
    const std::uint32_t h = d.height[v];
    if (h < c + threshold || anchor[v] != top_root) continue;
    out.crown_vertices.push_back(v);
    if (h == c + threshold) ++out.crown_roots;
  }
}

CrownReport BuildCrownReport(const Decomposition& d, std::uint32_t c) {
  CrownReport report;
  CrownScratch scratch;
  BuildCrownReportInto(d, c, report, scratch);
  return report;
}

ClassificationFlags Classify(const CrownReport& report) {
  ClassificationFlags flags;
  if (!report.has_branches()) return flags;
  flags.has_branches = true;
  flags.tie_count = report.tie_count;
  flags.unique_highest = report.tie_count == 1;
  flags.margin_ge_2 = flags.unique_highest && report.margin() >= 2;
  flags.crown_ok = report.crown_roots > 0 &&
                   report.crown_size() > 2 * std::size_t{report.crown_roots};
  return flags;
}

}  // namespace rmap
