#pragma once

#include <string>
#include <vector>

#include "galled/taxa.hpp"

namespace galled {

struct Character {
  std::string name;
  TaxonSet members;
};

// Ordered characters over one taxon table with pairwise distinct member sets.
class CharacterSet {
 public:
  explicit CharacterSet(TaxonTablePtr taxa);

  // Throws InputError on an empty character or one sized for another table.
  // Returns false (and keeps the earlier one) if the member set is a duplicate.
  bool add(Character c);
  bool add(std::string name, const std::vector<std::string>& labels);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const Character& operator[](std::size_t i) const { return items_[i]; }
  const std::vector<Character>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  const TaxonTable& taxa() const { return *taxa_; }
  const TaxonTablePtr& taxa_ptr() const { return taxa_; }
  // Union of all members.
  TaxonSet support() const;

  // Same characters re-expressed over `target` by label; throws InputError if
  // a member is missing from `target`.
  CharacterSet rebased(TaxonTablePtr target) const;
  // The characters with the given indices, in that order.
  CharacterSet subset(const std::vector<std::size_t>& indices) const;

 private:
  TaxonTablePtr taxa_;
  std::vector<Character> items_;
};

}  // namespace galled
