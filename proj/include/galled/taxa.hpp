#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace galled {

using TaxonId = std::uint32_t;
using TaxonSet = boost::dynamic_bitset<std::uint64_t>;

// Ordered, duplicate-free list of taxon labels. Shared (immutably) between the
// trees, networks and characters of one instance.
class TaxonTable {
 public:
  TaxonTable() = default;
  explicit TaxonTable(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(TaxonId id) const { return labels_.at(id); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<TaxonId> find(std::string_view label) const;

  TaxonSet empty_set() const { return TaxonSet(labels_.size()); }
  TaxonSet full_set() const { return ~empty_set(); }

  // Set built from labels; throws InputError on unknown labels.
  TaxonSet set_of(const std::vector<std::string>& labels) const;
  std::vector<std::string> labels_of(const TaxonSet& set) const;
  // "{a,b,c}" in table order.
  std::string format(const TaxonSet& set) const;

  friend bool operator==(const TaxonTable& a, const TaxonTable& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, TaxonId> index_;
};

using TaxonTablePtr = std::shared_ptr<const TaxonTable>;

inline TaxonTablePtr make_taxa(std::vector<std::string> labels) {
  return std::make_shared<const TaxonTable>(std::move(labels));
}

// Members of `set`, ascending.
std::vector<TaxonId> members(const TaxonSet& set);

}  // namespace galled
