#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "galled/errors.hpp"
#include "galled/io.hpp"

namespace galled {

namespace {

struct Line {
  std::size_t number;
  std::string_view text;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Non-blank lines, trimmed, with 1-based numbers.
std::vector<Line> lines_of(std::string_view text) {
  std::vector<Line> out;
  std::size_t number = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = trim(text.substr(pos, end - pos));
    if (!line.empty()) out.push_back({number, line});
    pos = end + 1;
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = s.find(sep, pos);
    if (end == std::string_view::npos) {
      out.push_back(trim(s.substr(pos)));
      return out;
    }
    out.push_back(trim(s.substr(pos, end - pos)));
    pos = end + 1;
  }
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    pos = s.find_first_not_of(" \t", pos);
    if (pos == std::string_view::npos) return out;
    std::size_t end = s.find_first_of(" \t", pos);
    if (end == std::string_view::npos) end = s.size();
    out.push_back(s.substr(pos, end - pos));
    pos = end;
  }
}

[[noreturn]] void fail(const std::string& what, std::size_t line) {
  throw ParseError("matrix: " + what, line, ParseError::Unit::line);
}

// Adds characters in order, turning duplicate member sets into warnings.
void add_all(ParsedMatrix& out, std::vector<Character> chars) {
  for (auto& c : chars) {
    const std::string name = c.name;
    const TaxonSet members = c.members;
    if (out.characters.add(std::move(c))) continue;
    for (const auto& kept : out.characters)
      if (kept.members == members)
        out.warnings.push_back("character '" + name + "' has the same members as '" + kept.name +
                               "' and was dropped");
  }
}

ParsedMatrix parse_csv(std::string_view text) {
  auto lines = lines_of(text);
  if (lines.empty()) fail("missing header line", 1);
  const auto header = split(lines[0].text, ',');
  if (header[0] != "taxon")
    fail("header must start with 'taxon'", lines[0].number);
  std::vector<std::string> names;
  std::unordered_set<std::string> seen_names;
  for (std::size_t j = 1; j < header.size(); ++j) {
    if (header[j].empty()) fail("empty character name in column " + std::to_string(j + 1),
                                lines[0].number);
    if (!seen_names.insert(std::string(header[j])).second)
      fail("duplicate character name '" + std::string(header[j]) + "'", lines[0].number);
    names.emplace_back(header[j]);
  }

  std::vector<std::string> taxa;
  std::unordered_map<std::string, std::size_t> row_of;
  std::vector<std::vector<bool>> cells;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = split(lines[i].text, ',');
    const std::size_t line = lines[i].number;
    if (row[0].empty()) fail("empty taxon label", line);
    if (row.size() < header.size()) fail("missing cells", line);
    if (row.size() > header.size()) fail("more cells than characters", line);
    if (!row_of.emplace(std::string(row[0]), taxa.size()).second)
      fail("duplicate taxon '" + std::string(row[0]) + "'", line);
    taxa.emplace_back(row[0]);
    std::vector<bool> bits(names.size());
    for (std::size_t j = 1; j < row.size(); ++j) {
      if (row[j] == "1") {
        bits[j - 1] = true;
      } else if (row[j] != "0") {
        fail("non-binary cell '" + std::string(row[j]) + "' for character '" + names[j - 1] +
                 "'",
             line);
      }
    }
    cells.push_back(std::move(bits));
  }

  auto table = make_taxa(taxa);
  ParsedMatrix out{table, CharacterSet(table), {}};
  std::vector<Character> chars;
  for (std::size_t j = 0; j < names.size(); ++j) {
    TaxonSet members = table->empty_set();
    for (std::size_t i = 0; i < taxa.size(); ++i)
      if (cells[i][j]) members.set(i);
    if (members.none()) fail("character '" + names[j] + "' is empty", lines[0].number);
    chars.push_back({names[j], std::move(members)});
  }
  add_all(out, std::move(chars));
  return out;
}

ParsedMatrix parse_sets(std::string_view text) {
  std::vector<std::string> taxa;
  std::unordered_set<std::string> known;
  bool explicit_taxa = false;
  struct Pending {
    std::string name;
    std::vector<std::string> members;
    std::size_t line;
  };
  std::vector<Pending> pending;
  std::unordered_set<std::string> seen_names;

  for (const auto& [line, raw] : lines_of(text)) {
    if (raw.front() == '#') continue;
    const auto colon = raw.find(':');
    if (colon == std::string_view::npos) fail("expected 'name: taxa...'", line);
    const std::string name(trim(raw.substr(0, colon)));
    const auto members = words(raw.substr(colon + 1));
    if (name.empty()) fail("empty character name", line);
    if (name == "taxa") {
      if (explicit_taxa) fail("second 'taxa:' line", line);
      if (!pending.empty()) fail("'taxa:' line must precede the characters", line);
      explicit_taxa = true;
      for (auto m : members) {
        if (!known.insert(std::string(m)).second)
          fail("duplicate taxon '" + std::string(m) + "'", line);
        taxa.emplace_back(m);
      }
      continue;
    }
    if (!seen_names.insert(name).second) fail("duplicate character name '" + name + "'", line);
    if (members.empty()) fail("character '" + name + "' is empty", line);
    Pending p{name, {}, line};
    for (auto m : members) {
      std::string label(m);
      if (!known.count(label)) {
        if (explicit_taxa) fail("unknown taxon '" + label + "' in character '" + name + "'", line);
        known.insert(label);
        taxa.push_back(label);
      }
      p.members.push_back(std::move(label));
    }
    pending.push_back(std::move(p));
  }

  auto table = make_taxa(std::move(taxa));
  ParsedMatrix out{table, CharacterSet(table), {}};
  std::vector<Character> chars;
  for (const auto& p : pending) chars.push_back({p.name, table->set_of(p.members)});
  add_all(out, std::move(chars));
  return out;
}

}  // namespace

ParsedMatrix parse_character_matrix(std::string_view text, MatrixFormat format) {
  return format == MatrixFormat::csv ? parse_csv(text) : parse_sets(text);
}

CharacterMatrix CharacterMatrix::from(const CharacterSet& cs) {
  CharacterMatrix m;
  m.taxa = cs.taxa().labels();
  for (const auto& c : cs) m.characters.push_back(c.name);
  m.cells.assign(m.taxa.size(), std::vector<std::uint8_t>(cs.size(), 0));
  for (std::size_t j = 0; j < cs.size(); ++j)
    for (TaxonId t : members(cs[j].members)) m.cells[t][j] = 1;
  return m;
}

std::string format_matrix_csv(const CharacterSet& cs) {
  const auto m = CharacterMatrix::from(cs);
  std::ostringstream out;
  out << "taxon";
  for (const auto& name : m.characters) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < m.taxa.size(); ++i) {
    out << m.taxa[i];
    for (auto cell : m.cells[i]) out << ',' << static_cast<int>(cell);
    out << '\n';
  }
  return out.str();
}

std::string format_matrix_sets(const CharacterSet& cs) {
  std::ostringstream out;
  out << "taxa:";
  for (const auto& label : cs.taxa().labels()) out << ' ' << label;
  out << '\n';
  for (const auto& c : cs) {
    out << c.name << ':';
    for (const auto& label : cs.taxa().labels_of(c.members)) out << ' ' << label;
    out << '\n';
  }
  return out.str();
}

}  // namespace galled
