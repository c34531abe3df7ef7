// galled: decide and build galled perfect transfer networks from the command
// line. Exit codes: 0 yes, 1 no, 2 bad input, 3 internal error.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "galled/compatibility.hpp"
#include "galled/completion.hpp"
#include "galled/errors.hpp"
#include "galled/io.hpp"
#include "galled/oracle.hpp"
#include "galled/ptn.hpp"

namespace {

using namespace galled;

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kBadInput = 2;
constexpr int kInternal = 3;

struct Options {
  std::string matrix_format = "auto";
  std::string out = "structured";
  unsigned jobs = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs `parse` on the file contents, prefixing parse errors with the path.
template <typename F>
auto parse_file(const std::string& path, F&& parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

ParsedMatrix load_matrix(const std::string& path, const Options& opt) {
  MatrixFormat format = MatrixFormat::sets;
  if (opt.matrix_format == "csv" ||
      (opt.matrix_format == "auto" && path.size() >= 4 && path.substr(path.size() - 4) == ".csv"))
    format = MatrixFormat::csv;
  ParsedMatrix m = parse_file(
      path, [&](const std::string& text) { return parse_character_matrix(text, format); });
  for (const auto& w : m.warnings) std::cerr << "warning: " << path << ": " << w << '\n';
  return m;
}

// Moves characters onto the taxon table of the tree or network they are checked against.
CharacterSet characters_on(const ParsedMatrix& m, const TaxonTablePtr& table) {
  try {
    return m.characters.rebased(table);
  } catch (const InputError& e) {
    throw InputError(std::string("character matrix does not fit the tree: ") + e.what());
  }
}

Tree load_tree(const std::string& path) {
  return parse_file(path, [](const std::string& text) { return parse_newick(text); });
}

NetworkFormat network_format(const std::string& out) {
  return out == "dot" ? NetworkFormat::dot : NetworkFormat::structured;
}

std::vector<OriginLabel> origin_labels(const CharacterSet& cs,
                                       const std::vector<std::optional<NodeId>>& origins) {
  std::vector<OriginLabel> labels;
  for (std::size_t i = 0; i < cs.size(); ++i) labels.emplace_back(cs[i].name, origins[i]);
  return labels;
}

// Tree nodes are named by their clade; subdivision nodes by the clade below.
std::string describe(const Tree& t, NodeId v) {
  const std::string clade = t.taxa().format(t.clade_leaves(v));
  return t.is_subdivision(v) ? "above" + clade : clade;
}

int cmd_verify(const std::string& network_path, const std::string& matrix_path,
               const Options& opt) {
  const NetworkDocument doc = parse_file(
      network_path, [](const std::string& text) { return parse_network_document(text); });
  const auto m = load_matrix(matrix_path, opt);
  const CharacterSet cs = characters_on(m, doc.network.support().taxa_ptr());
  const Explanation ex = explains(doc.network, cs, opt.jobs);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    std::cout << cs[i].name << '\t' << (ex.origins[i] ? "explained" : "unexplained") << '\t';
    if (ex.origins[i]) std::cout << *ex.origins[i];
    else std::cout << '-';
    std::cout << '\n';
  }
  return ex.all() ? kYes : kNo;
}

int cmd_complete(const std::string& tree_path, const std::string& matrix_path,
                 const Options& opt) {
  const Tree tree = load_tree(tree_path);
  const auto m = load_matrix(matrix_path, opt);
  const CharacterSet cs = characters_on(m, tree.taxa_ptr());
  const CompletionOutcome outcome = galled_completion(tree, cs, opt.jobs);
  return std::visit(
      [&](const auto& v) -> int {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Completable>) {
          std::cout << export_network(v.network, origin_labels(cs, v.origins),
                                      network_format(opt.out));
          return kYes;
        } else if constexpr (std::is_same_v<V, TooManyFAs>) {
          std::cout << "not-completable\ttoo-many-fas\tcharacter=" << cs[v.character].name
                    << "\tfas=";
          for (std::size_t i = 0; i < v.fas.size(); ++i)
            std::cout << (i ? ";" : "") << describe(tree, v.fas[i]);
          std::cout << '\n';
          return kNo;
        } else if constexpr (std::is_same_v<V, IncomparableFaNeighbors>) {
          std::cout << "not-completable\tincomparable-fa-neighbors\tnode="
                    << describe(tree, v.node) << "\tfirst=" << describe(tree, v.first)
                    << "\tsecond=" << describe(tree, v.second) << '\n';
          return kNo;
        } else {
          const Tree& t = v.network.support();
          std::cout << "not-completable\tnot-galled";
          for (const TransferEdge& e : {v.first, v.second}) {
            std::cout << "\ttransfer=" << describe(t, e.donor) << "->" << describe(t, e.recipient)
                      << " cycle=";
            const auto cycle = transfer_cycle(v.network, e);
            for (std::size_t i = 0; i < cycle.size(); ++i)
              std::cout << (i ? "," : "") << cycle[i];
          }
          std::cout << '\n';
          return kNo;
        }
      },
      outcome.verdict);
}

TaxonTablePtr extend_taxa(const TaxonTable& base, const std::string& taxa_path) {
  std::vector<std::string> labels = base.labels();
  std::istringstream in(read_file(taxa_path));
  std::string word;
  while (in >> word)
    if (!base.find(word) && std::find(labels.begin(), labels.end(), word) == labels.end())
      labels.push_back(word);
  return make_taxa(std::move(labels));
}

int cmd_compat(const std::string& matrix_path, const std::string& taxa_path, const Options& opt) {
  const auto m = load_matrix(matrix_path, opt);
  TaxonTablePtr table = m.taxa;
  if (!taxa_path.empty()) table = extend_taxa(*m.taxa, taxa_path);
  const CharacterSet cs = m.characters.rebased(table);
  const CompatOutcome outcome = galled_compatible(cs, table->full_set(), opt.jobs);
  if (!outcome.compatible) {
    for (const auto& line : outcome.trace) std::cout << "not-compatible\t" << line << '\n';
    return kNo;
  }
  const std::string newick = serialize_newick(*outcome.tree);
  if (opt.out == "newick") {
    std::cout << newick << '\n';
  } else {
    std::cout << (opt.out == "dot" ? "// tree: " : "# tree: ") << newick << '\n';
    std::cout << export_network(*outcome.network, origin_labels(cs, outcome.origins),
                                network_format(opt.out));
  }
  return kYes;
}

int cmd_fa_stats(const std::string& tree_path, const std::string& matrix_path,
                 const Options& opt) {
  const Tree tree = load_tree(tree_path);
  const auto m = load_matrix(matrix_path, opt);
  const CharacterSet cs = characters_on(m, tree.taxa_ptr());
  std::cout << format_fa_table(tree, fa_statistics(tree, cs));
  return kYes;
}

struct OracleRun {
  std::size_t instances = 0;
  std::size_t disagreements = 0;
};

void report(OracleRun& run, bool fast, bool brute, const std::string& instance) {
  ++run.instances;
  if (fast == brute) return;
  ++run.disagreements;
  std::cout << "disagreement\talgorithm=" << (fast ? "yes" : "no")
            << "\toracle=" << (brute ? "yes" : "no") << '\n'
            << instance;
}

void oracle_complete(OracleRun& run, const Tree& tree, const CharacterSet& cs, unsigned jobs) {
  const bool fast = galled_completion(tree, cs, jobs).completable();
  const bool brute = brute_force_completable(tree, cs).found;
  report(run, fast, brute, serialize_newick(tree) + "\n" + format_matrix_sets(cs));
}

void oracle_compat(OracleRun& run, const CharacterSet& cs, const TaxonSet& taxa, unsigned jobs) {
  const bool fast = galled_compatible(cs, taxa, jobs).compatible;
  const bool brute = brute_force_compatible(cs, taxa).found;
  report(run, fast, brute, format_matrix_sets(cs));
}

struct OracleArgs {
  std::string subject;
  std::vector<std::string> files;
  std::size_t random = 0;
  std::uint64_t seed = 1;
  std::size_t taxa = 5;
  std::size_t chars = 4;
};

int cmd_oracle(const OracleArgs& args, const Options& opt) {
  OracleRun run;
  if (args.random > 0) {
    std::vector<std::string> labels;
    for (std::size_t i = 1; i <= args.taxa; ++i) labels.push_back("t" + std::to_string(i));
    const TaxonTablePtr table = make_taxa(labels);
    std::mt19937_64 rng(args.seed);
    for (std::size_t n = 0; n < args.random; ++n) {
      const Tree tree = random_tree(table, table->full_set(), rng);
      const CharacterSet cs = random_characters(tree, args.chars, rng);
      if (args.subject == "complete") oracle_complete(run, tree, cs, opt.jobs);
      else oracle_compat(run, cs, table->full_set(), opt.jobs);
    }
  } else if (args.subject == "complete") {
    if (args.files.size() != 2) throw InputError("oracle complete expects <newick> <matrix>");
    const Tree tree = load_tree(args.files[0]);
    const auto m = load_matrix(args.files[1], opt);
    oracle_complete(run, tree, characters_on(m, tree.taxa_ptr()), opt.jobs);
  } else {
    if (args.files.size() != 1) throw InputError("oracle compat expects <matrix>");
    const auto m = load_matrix(args.files[0], opt);
    oracle_compat(run, m.characters, m.taxa->full_set(), opt.jobs);
  }
  std::cout << "instances\t" << run.instances << "\tdisagreements\t" << run.disagreements << '\n';
  return run.disagreements == 0 ? kYes : kNo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Galled perfect transfer networks: verify, complete, reconstruct"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--jobs", opt.jobs, "Worker threads for per-character work")
      ->check(CLI::Range(1u, 256u));

  auto add_matrix_format = [&](CLI::App* sub) {
    sub->add_option("--matrix-format", opt.matrix_format,
                    "Matrix format; auto picks csv for .csv files and sets otherwise")
        ->check(CLI::IsMember({"auto", "csv", "sets"}));
  };

  std::string network_path, tree_path, matrix_path, taxa_path;

  auto* verify = app.add_subcommand("verify", "Check that a network explains every character");
  verify->add_option("network", network_path, "Structured network file")->required();
  verify->add_option("matrix", matrix_path, "Character matrix")->required();
  add_matrix_format(verify);

  auto* complete = app.add_subcommand("complete", "Add transfers to a tree to explain characters");
  complete->add_option("tree", tree_path, "Newick tree")->required();
  complete->add_option("matrix", matrix_path, "Character matrix")->required();
  complete->add_option("--out", opt.out, "Output format")
      ->check(CLI::IsMember({"dot", "structured"}));
  add_matrix_format(complete);

  auto* compat = app.add_subcommand("compat", "Build a galled network from characters alone");
  compat->add_option("matrix", matrix_path, "Character matrix")->required();
  compat->add_option("--taxa", taxa_path, "File listing additional taxa");
  compat->add_option("--out", opt.out, "Output format")
      ->check(CLI::IsMember({"dot", "structured", "newick"}));
  add_matrix_format(compat);

  auto* fa_stats = app.add_subcommand("fa-stats", "Tabulate first appearances per character");
  fa_stats->add_option("tree", tree_path, "Newick tree")->required();
  fa_stats->add_option("matrix", matrix_path, "Character matrix")->required();
  add_matrix_format(fa_stats);

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand("oracle", "Compare an algorithm against exhaustive search");
  oracle->add_option("subject", oracle_args.subject, "complete or compat")
      ->required()
      ->check(CLI::IsMember({"complete", "compat"}));
  oracle->add_option("files", oracle_args.files, "Instance files");
  oracle->add_option("--random", oracle_args.random, "Number of random instances");
  oracle->add_option("--seed", oracle_args.seed, "Random seed");
  oracle->add_option("--taxa", oracle_args.taxa, "Taxa per random instance")
      ->check(CLI::Range(2, 7));
  oracle->add_option("--chars", oracle_args.chars, "Characters per random instance")
      ->check(CLI::Range(1, 8));
  add_matrix_format(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kYes : kBadInput;
  }

  try {
    if (*verify) return cmd_verify(network_path, matrix_path, opt);
    if (*complete) return cmd_complete(tree_path, matrix_path, opt);
    if (*compat) {
      if (compat->count("--out") == 0) opt.out = "newick";
      return cmd_compat(matrix_path, taxa_path, opt);
    }
    if (*fa_stats) return cmd_fa_stats(tree_path, matrix_path, opt);
    if (*oracle) return cmd_oracle(oracle_args, opt);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kBadInput;
}
