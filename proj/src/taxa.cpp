#include "galled/taxa.hpp"

#include "galled/errors.hpp"

namespace galled {

TaxonTable::TaxonTable(std::vector<std::string> labels) : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (TaxonId i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) throw InputError("empty taxon label");
    if (!index_.emplace(labels_[i], i).second)
      throw InputError("duplicate taxon label '" + labels_[i] + "'");
  }
}

std::optional<TaxonId> TaxonTable::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TaxonSet TaxonTable::set_of(const std::vector<std::string>& labels) const {
  TaxonSet set = empty_set();
  for (const auto& l : labels) {
    auto id = find(l);
    if (!id) throw InputError("unknown taxon '" + l + "'");
    set.set(*id);
  }
  return set;
}

std::vector<std::string> TaxonTable::labels_of(const TaxonSet& set) const {
  std::vector<std::string> out;
  for (TaxonId t : members(set)) out.push_back(labels_.at(t));
  return out;
}

std::string TaxonTable::format(const TaxonSet& set) const {
  std::string out = "{";
  bool first = true;
  for (TaxonId t : members(set)) {
    if (!first) out += ',';
    out += labels_.at(t);
    first = false;
  }
  return out + "}";
}

std::vector<TaxonId> members(const TaxonSet& set) {
  std::vector<TaxonId> out;
  out.reserve(set.count());
  for (auto i = set.find_first(); i != TaxonSet::npos; i = set.find_next(i))
    out.push_back(static_cast<TaxonId>(i));
  return out;
}

}  // namespace galled
