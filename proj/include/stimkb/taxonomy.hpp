#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stimkb {

/// Name of the root inserted above several parentless concepts.
inline constexpr std::string_view kVirtualRoot = "Entity";

struct TaxonomyEdge {
  std::string child;
  std::string parent;

  friend auto operator<=>(const TaxonomyEdge&, const TaxonomyEdge&) = default;
};

/// Rooted IS-A hierarchy (a DAG: multiple parents are allowed).
///
/// Concepts are stored densely, indexed in lexicographic name order, so index
/// comparison doubles as the name tie-break. The ancestor closure and depths
/// are materialized at construction; the graph is immutable afterwards and
/// safe to share between threads.
class TaxonomyGraph {
 public:
  using Index = std::uint32_t;

  /// Empty placeholder, only good for assigning a real graph to.
  TaxonomyGraph() = default;

  /// Builds from child->parent edges plus optional isolated concepts. Several
  /// parentless concepts get a common virtual root. Throws ParseError on a
  /// cycle (naming one edge on it) or an empty concept set.
  static TaxonomyGraph fromEdges(std::span<const TaxonomyEdge> edges,
                                 std::span<const std::string> isolated = {});

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& root() const { return names_.at(root_); }
  bool contains(std::string_view concept_name) const;

  /// Throws LookupError for unknown names.
  Index indexOf(std::string_view concept_name) const;
  const std::string& name(Index i) const { return names_.at(i); }
  const std::vector<std::string>& concepts() const noexcept { return names_; }

  int depth(std::string_view c) const { return depth_[indexOf(c)]; }
  int depth(Index i) const { return depth_.at(i); }
  int maxDepth() const noexcept { return maxDepth_; }

  std::vector<std::string> parents(std::string_view c) const;
  std::vector<std::string> children(std::string_view c) const;

  /// Strict ancestors, sorted by name.
  std::vector<std::string> ancestors(std::string_view c) const;
  const std::vector<Index>& ancestorIndices(Index i) const { return ancestors_.at(i); }

  /// Reflexive-transitive subsumption: a == b or b is an ancestor of a.
  bool isSubclassOf(std::string_view a, std::string_view b) const;
  bool isSubclassOf(Index a, Index b) const;

  /// Least common subsumer: among the most specific common ancestors-or-self,
  /// the deepest one; ties go to the smallest name.
  std::string lcs(std::string_view a, std::string_view b) const;
  Index lcs(Index a, Index b) const;

  /// Edge count of the shortest path with IS-A edges taken as undirected.
  int shortestPath(std::string_view a, std::string_view b) const;
  int shortestPath(Index a, Index b) const;

  /// Shortest distance following parent edges only from `from` up to
  /// `ancestor`, or -1 when `ancestor` does not subsume `from`.
  int upwardDistance(Index from, Index ancestor) const;

  /// All edges sorted by (child, parent), virtual-root edges included.
  std::vector<TaxonomyEdge> edges() const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, Index, std::less<>> index_;
  std::vector<std::vector<Index>> parents_;
  std::vector<std::vector<Index>> children_;
  std::vector<std::vector<Index>> ancestors_;  // sorted, excludes self
  std::vector<int> depth_;
  Index root_ = 0;
  int maxDepth_ = 1;
};

/// Reads `child<TAB>parent` lines; '#' comments and blank lines are skipped,
/// duplicate edges are collapsed.
TaxonomyGraph parseTaxonomy(std::string_view text);
std::string serializeTaxonomy(const TaxonomyGraph& g);

/// Case-folded keyword -> concepts table resolved against one taxonomy.
class KeywordMapping {
 public:
  void add(std::string_view keyword, std::string concept_name);

  /// Concepts for a keyword (folded before lookup); empty when unmapped.
  const std::vector<std::string>& lookup(std::string_view keyword) const;
  bool contains(std::string_view keyword) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<std::string, std::vector<std::string>>& entries() const noexcept {
    return entries_;
  }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

/// Reads `keyword<TAB>concept` lines. Unknown concepts raise ParseError with
/// the keyword and line number.
KeywordMapping parseMapping(std::string_view text, const TaxonomyGraph& g);
std::string serializeMapping(const KeywordMapping& m);

}  // namespace stimkb
