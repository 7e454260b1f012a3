#include "stimkb/taxonomy.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <set>

#include "stimkb/error.hpp"
#include "stimkb/text.hpp"

namespace stimkb {

namespace {

using Index = TaxonomyGraph::Index;

// Walks parent edges among the nodes Kahn's algorithm could not order until a
// node repeats; returns one edge on the cycle found.
TaxonomyEdge findCycleEdge(const std::vector<std::vector<Index>>& parents,
                           const std::vector<bool>& ordered,
                           const std::vector<std::string>& names) {
  Index start = 0;
  while (ordered[start]) ++start;
  std::vector<int> seenAt(names.size(), -1);
  std::vector<Index> walk;
  Index cur = start;
  while (seenAt[cur] < 0) {
    seenAt[cur] = static_cast<int>(walk.size());
    walk.push_back(cur);
    Index next = cur;
    for (Index p : parents[cur]) {
      if (!ordered[p]) {
        next = p;
        break;
      }
    }
    cur = next;
  }
  const Index child = walk.back();
  return {names[child], names[cur]};
}

}  // namespace

TaxonomyGraph TaxonomyGraph::fromEdges(std::span<const TaxonomyEdge> edgeList,
                                       std::span<const std::string> isolated) {
  std::set<std::string> nameSet(isolated.begin(), isolated.end());
  std::set<std::pair<std::string, std::string>> edgeSet;
  for (const auto& e : edgeList) {
    if (e.child.empty() || e.parent.empty()) throw ParseError("empty concept name in edge");
    if (e.child == e.parent) throw ParseError("cycle detected at edge " + e.child + " -> " + e.parent);
    nameSet.insert(e.child);
    nameSet.insert(e.parent);
    edgeSet.emplace(e.child, e.parent);
  }
  if (nameSet.empty()) throw ParseError("taxonomy has no concepts");
  for (const auto& n : nameSet) {
    if (n.empty()) throw ParseError("empty concept name");
  }

  // Roots are decided before indexing because a virtual root adds a name.
  std::set<std::string> hasParent;
  for (const auto& [c, p] : edgeSet) hasParent.insert(c);
  std::vector<std::string> maximal;
  for (const auto& n : nameSet) {
    if (!hasParent.count(n)) maximal.push_back(n);
  }
  if (maximal.size() > 1) {
    const std::string vroot(kVirtualRoot);
    if (nameSet.count(vroot) && hasParent.count(vroot)) {
      throw ParseError("cannot insert virtual root: concept " + vroot + " already has parents");
    }
    nameSet.insert(vroot);
    for (const auto& m : maximal) {
      if (m != vroot) edgeSet.emplace(m, vroot);
    }
  }

  TaxonomyGraph g;
  g.names_.assign(nameSet.begin(), nameSet.end());
  for (Index i = 0; i < g.names_.size(); ++i) g.index_.emplace(g.names_[i], i);
  const std::size_t n = g.names_.size();
  g.parents_.assign(n, {});
  g.children_.assign(n, {});
  for (const auto& [c, p] : edgeSet) {
    const Index ci = g.index_.at(c);
    const Index pi = g.index_.at(p);
    g.parents_[ci].push_back(pi);
    g.children_[pi].push_back(ci);
  }

  // Kahn's algorithm, parents before children.
  std::vector<std::size_t> pending(n);
  std::deque<Index> ready;
  for (Index i = 0; i < n; ++i) {
    pending[i] = g.parents_[i].size();
    if (pending[i] == 0) ready.push_back(i);
  }
  std::vector<Index> order;
  std::vector<bool> ordered(n, false);
  while (!ready.empty()) {
    const Index v = ready.front();
    ready.pop_front();
    order.push_back(v);
    ordered[v] = true;
    for (Index c : g.children_[v]) {
      if (--pending[c] == 0) ready.push_back(c);
    }
  }
  if (order.size() != n) {
    const auto e = findCycleEdge(g.parents_, ordered, g.names_);
    throw ParseError("cycle detected at edge " + e.child + " -> " + e.parent);
  }

  std::vector<Index> roots;
  for (Index i = 0; i < n; ++i) {
    if (g.parents_[i].empty()) roots.push_back(i);
  }
  if (roots.size() != 1) throw InvariantError("taxonomy does not have a single root");
  g.root_ = roots.front();

  g.depth_.assign(n, 0);
  g.ancestors_.assign(n, {});
  for (Index v : order) {
    if (g.parents_[v].empty()) {
      g.depth_[v] = 1;
      continue;
    }
    int best = std::numeric_limits<int>::max();
    auto& anc = g.ancestors_[v];
    for (Index p : g.parents_[v]) {
      best = std::min(best, g.depth_[p]);
      anc.push_back(p);
      anc.insert(anc.end(), g.ancestors_[p].begin(), g.ancestors_[p].end());
    }
    std::sort(anc.begin(), anc.end());
    anc.erase(std::unique(anc.begin(), anc.end()), anc.end());
    g.depth_[v] = best + 1;
  }
  g.maxDepth_ = *std::max_element(g.depth_.begin(), g.depth_.end());
  return g;
}

bool TaxonomyGraph::contains(std::string_view c) const { return index_.find(c) != index_.end(); }

TaxonomyGraph::Index TaxonomyGraph::indexOf(std::string_view c) const {
  auto it = index_.find(c);
  if (it == index_.end()) throw LookupError("unknown concept: " + std::string(c));
  return it->second;
}

std::vector<std::string> TaxonomyGraph::parents(std::string_view c) const {
  std::vector<std::string> out;
  for (Index p : parents_[indexOf(c)]) out.push_back(names_[p]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> TaxonomyGraph::children(std::string_view c) const {
  std::vector<std::string> out;
  for (Index ch : children_[indexOf(c)]) out.push_back(names_[ch]);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> TaxonomyGraph::ancestors(std::string_view c) const {
  std::vector<std::string> out;
  for (Index a : ancestors_[indexOf(c)]) out.push_back(names_[a]);
  return out;
}

bool TaxonomyGraph::isSubclassOf(std::string_view a, std::string_view b) const {
  return isSubclassOf(indexOf(a), indexOf(b));
}

bool TaxonomyGraph::isSubclassOf(Index a, Index b) const {
  if (a == b) return true;
  const auto& anc = ancestors_.at(a);
  return std::binary_search(anc.begin(), anc.end(), b);
}

std::string TaxonomyGraph::lcs(std::string_view a, std::string_view b) const {
  return names_[lcs(indexOf(a), indexOf(b))];
}

TaxonomyGraph::Index TaxonomyGraph::lcs(Index a, Index b) const {
  if (isSubclassOf(a, b)) return b;
  if (isSubclassOf(b, a)) return a;
  const auto& aa = ancestors_.at(a);
  const auto& bb = ancestors_.at(b);
  std::vector<Index> common;
  std::set_intersection(aa.begin(), aa.end(), bb.begin(), bb.end(), std::back_inserter(common));
  // Only the most specific common subsumers compete: with min-depth on a DAG a
  // strict ancestor can be deeper than one of its descendants.
  std::set<Index> subsumed;
  for (Index c : common) subsumed.insert(ancestors_[c].begin(), ancestors_[c].end());
  std::optional<Index> best;
  for (Index c : common) {
    if (subsumed.count(c)) continue;
    if (!best || depth_[c] > depth_[*best]) best = c;
  }
  // The root subsumes everything, so at least one candidate survives.
  return *best;
}

int TaxonomyGraph::shortestPath(std::string_view a, std::string_view b) const {
  return shortestPath(indexOf(a), indexOf(b));
}

int TaxonomyGraph::shortestPath(Index a, Index b) const {
  if (a == b) return 0;
  std::vector<int> dist(names_.size(), -1);
  std::deque<Index> queue{a};
  dist[a] = 0;
  while (!queue.empty()) {
    const Index v = queue.front();
    queue.pop_front();
    for (const auto* adj : {&parents_[v], &children_[v]}) {
      for (Index w : *adj) {
        if (dist[w] >= 0) continue;
        dist[w] = dist[v] + 1;
        if (w == b) return dist[w];
        queue.push_back(w);
      }
    }
  }
  throw InvariantError("taxonomy is disconnected");
}

int TaxonomyGraph::upwardDistance(Index from, Index ancestor) const {
  if (!isSubclassOf(from, ancestor)) return -1;
  if (from == ancestor) return 0;
  std::vector<int> dist(names_.size(), -1);
  std::deque<Index> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    const Index v = queue.front();
    queue.pop_front();
    for (Index p : parents_[v]) {
      if (dist[p] >= 0) continue;
      dist[p] = dist[v] + 1;
      if (p == ancestor) return dist[p];
      queue.push_back(p);
    }
  }
  throw InvariantError("ancestor closure disagrees with parent edges");
}

std::vector<TaxonomyEdge> TaxonomyGraph::edges() const {
  std::vector<TaxonomyEdge> out;
  for (Index c = 0; c < names_.size(); ++c) {
    for (Index p : parents_[c]) out.push_back({names_[c], names_[p]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

TaxonomyGraph parseTaxonomy(std::string_view text) {
  std::vector<TaxonomyEdge> edges;
  for (const auto& line : text::contentLines(text)) {
    const auto fields = text::split(line.content, '\t');
    if (fields.size() != 2) {
      throw ParseError("expected child<TAB>parent", line.number);
    }
    for (auto f : fields) {
      if (!text::isIdentifier(f)) {
        throw ParseError("invalid concept name '" + std::string(f) + "'", line.number);
      }
    }
    edges.push_back({std::string(fields[0]), std::string(fields[1])});
  }
  if (edges.empty()) throw ParseError("taxonomy file contains no edges");
  return TaxonomyGraph::fromEdges(edges);
}

std::string serializeTaxonomy(const TaxonomyGraph& g) {
  std::string out;
  for (const auto& e : g.edges()) {
    out += e.child;
    out += '\t';
    out += e.parent;
    out += '\n';
  }
  return out;
}

void KeywordMapping::add(std::string_view keyword, std::string concept_name) {
  auto& concepts = entries_[text::foldCase(keyword)];
  auto it = std::lower_bound(concepts.begin(), concepts.end(), concept_name);
  if (it == concepts.end() || *it != concept_name) concepts.insert(it, std::move(concept_name));
}

const std::vector<std::string>& KeywordMapping::lookup(std::string_view keyword) const {
  static const std::vector<std::string> kNone;
  auto it = entries_.find(text::foldCase(keyword));
  return it == entries_.end() ? kNone : it->second;
}

bool KeywordMapping::contains(std::string_view keyword) const {
  return entries_.count(text::foldCase(keyword)) > 0;
}

KeywordMapping parseMapping(std::string_view text, const TaxonomyGraph& g) {
  KeywordMapping m;
  for (const auto& line : text::contentLines(text)) {
    const auto fields = text::split(line.content, '\t');
    if (fields.size() != 2 || text::trim(fields[0]).empty()) {
      throw ParseError("expected keyword<TAB>concept", line.number);
    }
    const std::string keyword(text::trim(fields[0]));
    const std::string concept_name(fields[1]);
    if (!g.contains(concept_name)) {
      throw ParseError("keyword '" + keyword + "' maps to unknown concept '" + concept_name + "'",
                       line.number);
    }
    m.add(keyword, concept_name);
  }
  return m;
}

std::string serializeMapping(const KeywordMapping& m) {
  std::string out;
  for (const auto& [kw, concepts] : m.entries()) {
    for (const auto& c : concepts) {
      out += kw;
      out += '\t';
      out += c;
      out += '\n';
    }
  }
  return out;
}

}  // namespace stimkb
