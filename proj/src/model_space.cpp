// Copyright 2026 The MSCS Authors
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

#include "mscs/model_space.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_map>

#include "mscs/error.hpp"

namespace mscs {
namespace {

int ParseInt(std::string_view token) {
  int value = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  while (first != last && *first == ' ') ++first;
  while (last != first && *(last - 1) == ' ') --last;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw Error(ErrorCode::kParse,
                "bad integer token '" + std::string(token) + "'");
  }
  return value;
}

std::vector<int> SplitInts(std::string_view text, char sep) {
  std::vector<int> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(ParseInt(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

ModelIndex ModelIndex::Subset(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "subset ids are 1-based, got " + std::to_string(ids[i]));
    }
    if (i > 0 && ids[i] == ids[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate subset id " + std::to_string(ids[i]));
    }
  }
  return ModelIndex(ModelKind::kSubset, std::move(ids));
}

ModelIndex ModelIndex::Partition(const std::vector<int>& labels) {
  if (labels.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "partition of zero items");
  }
  std::unordered_map<int, int> relabel;
  std::vector<int> rgs(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) {
      throw Error(ErrorCode::kInvalidArgument, "negative block label");
    }
    auto [it, inserted] =
        relabel.try_emplace(labels[i], static_cast<int>(relabel.size()));
    rgs[i] = it->second;
  }
  return ModelIndex(ModelKind::kPartition, std::move(rgs));
}

ModelIndex ModelIndex::Parse(std::string_view text, ModelKind kind) {
  if (kind == ModelKind::kSubset) return Subset(SplitInts(text, ','));
  return Partition(SplitInts(text, '|'));
}

std::string ModelIndex::ToString() const {
  const char sep = kind_ == ModelKind::kSubset ? ',' : '|';
  std::string out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i > 0) out += sep;
    out += std::to_string(values_[i]);
  }
  return out;
}

bool ModelIndex::Contains(int id) const {
  return std::binary_search(values_.begin(), values_.end(), id);
}

int ModelIndex::NumBlocks() const {
  if (values_.empty()) return 0;
  return *std::max_element(values_.begin(), values_.end()) + 1;
}

std::vector<int> ModelIndex::BlockSizes() const {
  std::vector<int> sizes(NumBlocks(), 0);
  for (int label : values_) ++sizes[label];
  return sizes;
}

std::vector<std::vector<int>> ModelIndex::Blocks() const {
  std::vector<std::vector<int>> blocks(NumBlocks());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    blocks[values_[i]].push_back(static_cast<int>(i));
  }
  return blocks;
}

std::size_t ModelIndexHash::operator()(const ModelIndex& m) const noexcept {
  // FNV-1a over kind and values.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  mix(static_cast<std::uint64_t>(m.kind()));
  for (int v : m.values()) mix(static_cast<std::uint64_t>(v) + 0x9e37U);
  return static_cast<std::size_t>(h);
}

bool IsRestrictedGrowth(const std::vector<int>& labels) {
  if (labels.empty() || labels[0] != 0) return false;
  int max_label = 0;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] > max_label + 1) return false;
    max_label = std::max(max_label, labels[i]);
  }
  return true;
}

ModelSpace ModelSpace::AllSubsets(int p, std::vector<int> forced) {
  if (p < 1) throw Error(ErrorCode::kInvalidArgument, "p must be >= 1");
  std::sort(forced.begin(), forced.end());
  forced.erase(std::unique(forced.begin(), forced.end()), forced.end());
  for (int id : forced) {
    if (id < 1 || id > p) {
      throw Error(ErrorCode::kInvalidArgument,
                  "forced id " + std::to_string(id) + " outside [1, p]");
    }
  }
  return ModelSpace(SpaceKind::kAllSubsets, p, std::move(forced));
}

ModelSpace ModelSpace::AllPartitions(int p) {
  if (p < 1) throw Error(ErrorCode::kInvalidArgument, "p must be >= 1");
  return ModelSpace(SpaceKind::kAllPartitions, p, {});
}

std::vector<int> ModelSpace::FreeIds() const {
  std::vector<int> out;
  for (int id = 1; id <= p_; ++id) {
    if (!IsForced(id)) out.push_back(id);
  }
  return out;
}

bool ModelSpace::IsForced(int id) const {
  return std::binary_search(forced_.begin(), forced_.end(), id);
}

ModelIndex ModelSpace::FullModel() const {
  if (kind_ == SpaceKind::kAllPartitions) {
    return ModelIndex::Partition(std::vector<int>(p_, 0));
  }
  std::vector<int> ids(p_);
  for (int i = 0; i < p_; ++i) ids[i] = i + 1;
  return ModelIndex::Subset(std::move(ids));
}

ModelIndex ModelSpace::EmptyModel() const {
  if (kind_ == SpaceKind::kAllPartitions) {
    std::vector<int> labels(p_);
    for (int i = 0; i < p_; ++i) labels[i] = i;
    return ModelIndex::Partition(labels);
  }
  return ModelIndex::Subset(forced_);
}

bool ModelSpace::Contains(const ModelIndex& model) const {
  if (model.kind() != model_kind()) return false;
  const auto& v = model.values();
  if (kind_ == SpaceKind::kAllPartitions) {
    return static_cast<int>(v.size()) == p_ && IsRestrictedGrowth(v);
  }
  if (!v.empty() && (v.front() < 1 || v.back() > p_)) return false;
  return std::includes(v.begin(), v.end(), forced_.begin(), forced_.end());
}

void ModelSpace::CheckContains(const ModelIndex& model) const {
  if (!Contains(model)) {
    throw Error(ErrorCode::kModelSpaceMismatch,
                "model '" + model.ToString() + "' is not in " + ToString());
  }
}

BigInt ModelSpace::Cardinality() const {
  if (kind_ == SpaceKind::kAllPartitions) return BellNumber(p_);
  BigInt one = 1;
  return one << (p_ - static_cast<int>(forced_.size()));
}

std::string ModelSpace::ToString() const {
  std::string out = kind_ == SpaceKind::kAllSubsets ? "subsets(p=" : "partitions(p=";
  out += std::to_string(p_);
  if (!forced_.empty()) {
    out += ", forced=" + ModelIndex::Subset(forced_).ToString();
  }
  return out + ")";
}

BigInt BellNumber(int p) {
  if (p < 1 || p > 30) {
    throw Error(ErrorCode::kInvalidArgument, "BellNumber needs 1 <= p <= 30");
  }
  // Bell triangle: each row starts with the last entry of the previous row.
  std::vector<BigInt> row{1};
  for (int i = 1; i < p; ++i) {
    std::vector<BigInt> next{row.back()};
    next.reserve(row.size() + 1);
    for (const BigInt& v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.back();
}

ModelEnumerator::ModelEnumerator(const ModelSpace& space, std::uint64_t cap)
    : space_(space) {
  if (space.kind() == SpaceKind::kAllPartitions) {
    if (space.p() > kMaxPartitionItems ||
        BellNumber(space.p()) > BigInt(cap)) {
      throw Error(ErrorCode::kPartitionSpaceTooLarge,
                  "Bell(" + std::to_string(space.p()) +
                      ") partitions exceed the enumeration cap");
    }
    size_ = BellNumber(space.p()).convert_to<std::uint64_t>();
    rgs_.assign(space.p(), 0);
    prefix_max_.assign(space.p(), 0);
  } else {
    free_ids_ = space.FreeIds();
    if (free_ids_.size() >= 64 || (std::uint64_t{1} << free_ids_.size()) > cap) {
      throw Error(ErrorCode::kEnumerationCapExceeded,
                  "2^" + std::to_string(free_ids_.size()) +
                      " subsets exceed the enumeration cap");
    }
    size_ = std::uint64_t{1} << free_ids_.size();
  }
}

std::optional<ModelIndex> ModelEnumerator::Next() {
  if (emitted_ >= size_) return std::nullopt;
  if (space_.kind() == SpaceKind::kAllSubsets) {
    const std::uint64_t mask = emitted_++;
    std::vector<int> ids = space_.forced();
    for (std::size_t i = 0; i < free_ids_.size(); ++i) {
      if ((mask >> i) & 1U) ids.push_back(free_ids_[i]);
    }
    return ModelIndex::Subset(std::move(ids));
  }
  if (emitted_++ > 0) {
    // Advance to the lexicographic successor: bump the rightmost label that
    // can grow, then reset everything after it to 0.
    const int p = static_cast<int>(rgs_.size());
    int i = p - 1;
    while (i > 0 && rgs_[i] > prefix_max_[i - 1]) --i;
    ++rgs_[i];
    prefix_max_[i] = std::max(i > 0 ? prefix_max_[i - 1] : 0, rgs_[i]);
    for (int j = i + 1; j < p; ++j) {
      rgs_[j] = 0;
      prefix_max_[j] = prefix_max_[i];
    }
  }
  return ModelIndex::Partition(rgs_);
}

std::vector<ModelIndex> Enumerate(const ModelSpace& space, std::uint64_t cap) {
  ModelEnumerator stream(space, cap);
  std::vector<ModelIndex> out;
  out.reserve(stream.size());
  while (auto m = stream.Next()) out.push_back(std::move(*m));
  return out;
}

std::string FeatureId::ToString() const {
  if (!is_pair()) return std::to_string(first);
  return std::to_string(first) + "-" + std::to_string(second);
}

std::vector<FeatureId> FeaturesOf(const ModelSpace& space,
                                  const ModelIndex& model) {
  space.CheckContains(model);
  std::vector<FeatureId> out;
  if (model.kind() == ModelKind::kSubset) {
    out.reserve(model.size());
    for (int id : model.values()) out.push_back({id, 0});
    return out;
  }
  const auto& g = model.values();
  for (int j = 0; j < space.p(); ++j) {
    for (int k = j + 1; k < space.p(); ++k) {
      if (g[j] == g[k]) out.push_back({j + 1, k + 1});
    }
  }
  return out;
}

std::vector<FeatureId> AllFeatures(const ModelSpace& space) {
  return FeaturesOf(space, space.FullModel());
}

}  // namespace mscs
