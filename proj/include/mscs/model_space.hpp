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

#ifndef MSCS_MODEL_SPACE_HPP_
#define MSCS_MODEL_SPACE_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mscs {

using BigInt = boost::multiprecision::cpp_int;

enum class ModelKind : std::uint8_t { kSubset, kPartition };

// A candidate model. Subsets hold strictly increasing 1-based variable ids;
// partitions hold a restricted-growth string (block label per item, labels
// introduced in first-use order starting at 0). Construction canonicalizes,
// so equality of ModelIndex values is equality of their encodings.
class ModelIndex {
 public:
  ModelIndex() = default;

  // Sorts `ids`; throws kInvalidArgument on duplicates or ids < 1.
  static ModelIndex Subset(std::vector<int> ids);
  // Relabels arbitrary non-negative block labels into restricted-growth form.
  static ModelIndex Partition(const std::vector<int>& labels);

  // Textual encodings: subsets "1,3,7" (empty model is ""), partitions
  // "0|0|1|2|1". Parse(ToString()) is the identity.
  static ModelIndex Parse(std::string_view text, ModelKind kind);
  std::string ToString() const;

  ModelKind kind() const noexcept { return kind_; }
  // Subset ids or partition labels depending on kind().
  const std::vector<int>& values() const noexcept { return values_; }

  std::size_t size() const noexcept { return values_.size(); }
  bool Contains(int id) const;
  int NumBlocks() const;
  // Sizes of the partition blocks, indexed by label.
  std::vector<int> BlockSizes() const;
  // 0-based item indices of each block, indexed by label.
  std::vector<std::vector<int>> Blocks() const;

  friend bool operator==(const ModelIndex&, const ModelIndex&) = default;
  friend std::strong_ordering operator<=>(const ModelIndex&,
                                          const ModelIndex&) = default;

 private:
  ModelIndex(ModelKind kind, std::vector<int> values)
      : kind_(kind), values_(std::move(values)) {}

  ModelKind kind_ = ModelKind::kSubset;
  std::vector<int> values_;
};

struct ModelIndexHash {
  std::size_t operator()(const ModelIndex& m) const noexcept;
};

// Restricted-growth check: g[0] == 0 and g[i] <= 1 + max(g[0..i-1]).
bool IsRestrictedGrowth(const std::vector<int>& labels);

enum class SpaceKind : std::uint8_t { kAllSubsets, kAllPartitions };

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;
inline constexpr int kMaxPartitionItems = 14;

class ModelSpace {
 public:
  static ModelSpace AllSubsets(int p, std::vector<int> forced = {});
  static ModelSpace AllPartitions(int p);

  SpaceKind kind() const noexcept { return kind_; }
  ModelKind model_kind() const noexcept {
    return kind_ == SpaceKind::kAllSubsets ? ModelKind::kSubset
                                           : ModelKind::kPartition;
  }
  int p() const noexcept { return p_; }
  const std::vector<int>& forced() const noexcept { return forced_; }
  // Variable ids not forced in, ascending.
  std::vector<int> FreeIds() const;
  bool IsForced(int id) const;

  // The reference model every candidate is tested against: all ids for
  // subset spaces, the single-block partition for partition spaces.
  ModelIndex FullModel() const;
  // The most parsimonious model: forced ids only, or all singletons.
  ModelIndex EmptyModel() const;

  bool Contains(const ModelIndex& model) const;
  // Throws kModelSpaceMismatch when !Contains(model).
  void CheckContains(const ModelIndex& model) const;

  BigInt Cardinality() const;

  std::string ToString() const;

  friend bool operator==(const ModelSpace&, const ModelSpace&) = default;

 private:
  ModelSpace(SpaceKind kind, int p, std::vector<int> forced)
      : kind_(kind), p_(p), forced_(std::move(forced)) {}

  SpaceKind kind_;
  int p_;
  std::vector<int> forced_;
};

// Bell number via the Bell triangle; 1 <= p <= 30.
BigInt BellNumber(int p);

// Deterministic single-pass stream over a model space. Subsets are produced
// by binary counting on the free ids (bit i of the counter selects the i-th
// free id); partitions in lexicographic order of restricted-growth strings.
class ModelEnumerator {
 public:
  explicit ModelEnumerator(const ModelSpace& space,
                           std::uint64_t cap = kDefaultEnumerationCap);

  std::optional<ModelIndex> Next();
  std::uint64_t size() const noexcept { return size_; }

 private:
  ModelSpace space_;
  std::vector<int> free_ids_;
  std::uint64_t size_ = 0;
  std::uint64_t emitted_ = 0;
  std::vector<int> rgs_;
  std::vector<int> prefix_max_;
};

std::vector<ModelIndex> Enumerate(const ModelSpace& space,
                                  std::uint64_t cap = kDefaultEnumerationCap);

// A unit of inclusion importance: a variable id (second == 0) for subset
// spaces, or a co-clustered pair first < second for partition spaces.
struct FeatureId {
  int first = 0;
  int second = 0;

  bool is_pair() const noexcept { return second != 0; }
  std::string ToString() const;

  friend bool operator==(const FeatureId&, const FeatureId&) = default;
  friend auto operator<=>(const FeatureId&, const FeatureId&) = default;
};

std::vector<FeatureId> FeaturesOf(const ModelSpace& space,
                                  const ModelIndex& model);
// Features of the full model, in canonical order.
std::vector<FeatureId> AllFeatures(const ModelSpace& space);

}  // namespace mscs

#endif  // MSCS_MODEL_SPACE_HPP_
