#include "galled/character.hpp"

#include "galled/errors.hpp"

namespace galled {

CharacterSet::CharacterSet(TaxonTablePtr taxa) : taxa_(std::move(taxa)) {
  if (!taxa_) throw InputError("character set requires a taxon table");
}

bool CharacterSet::add(Character c) {
  if (c.members.size() != taxa_->size())
    throw InputError("character '" + c.name + "' is defined over a different taxon table");
  if (c.members.none()) throw InputError("character '" + c.name + "' is empty");
  for (const auto& existing : items_)
    if (existing.members == c.members) return false;
  items_.push_back(std::move(c));
  return true;
}

bool CharacterSet::add(std::string name, const std::vector<std::string>& labels) {
  return add(Character{std::move(name), taxa_->set_of(labels)});
}

TaxonSet CharacterSet::support() const {
  TaxonSet all = taxa_->empty_set();
  for (const auto& c : items_) all |= c.members;
  return all;
}

CharacterSet CharacterSet::rebased(TaxonTablePtr target) const {
  CharacterSet out(std::move(target));
  for (const auto& c : items_) out.add(c.name, taxa_->labels_of(c.members));
  return out;
}

CharacterSet CharacterSet::subset(const std::vector<std::size_t>& indices) const {
  CharacterSet out(taxa_);
  for (std::size_t i : indices) out.items_.push_back(items_.at(i));
  return out;
}

}  // namespace galled
