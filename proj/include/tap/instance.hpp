#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tap/rational.hpp"

namespace tap {

// Raw, unchecked instance description as it appears in a file. Everything
// downstream works on TapInstance, which can only be built from valid data.
struct InstanceData {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> tree_edges;
  struct RawLink {
    std::string u, v;
    Rat cost;
  };
  std::vector<RawLink> links;
  std::optional<std::string> root;
};

struct Violation {
  std::string kind;    // "not a tree", "negative cost", "duplicate link", ...
  std::string detail;
};

// Structural checks: spanning tree property, cost non-negativity, unknown
// endpoints, self-loops, exact duplicate links. Reports, never throws.
std::vector<Violation> validate_instance(const InstanceData& data);

struct Link {
  int u = -1, v = -1;  // node ids
  Rat cost;
};

// Immutable tree-plus-links instance. Node identifiers are opaque strings;
// links carry stable integer indices assigned at construction. The cover
// relation is precomputed and cached. Safe to share across threads.
class TapInstance {
 public:
  static TapInstance make(const InstanceData& data);

  int node_count() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }

  const std::string& node_name(int v) const { return names_[v]; }
  int node_id(const std::string& name) const;
  const std::vector<std::string>& node_names() const { return names_; }

  std::pair<int, int> edge(int e) const { return edges_[e]; }
  std::string edge_name(int e) const;
  // -1 when no tree edge joins u and v.
  int edge_between(int u, int v) const;

  const Link& link(int l) const { return links_[l]; }
  const std::vector<Link>& links() const { return links_; }

  // Stored root if present, otherwise the lexicographically smallest node.
  int root() const { return root_; }
  int parent(int v) const { return parent_[v]; }         // -1 at root
  int parent_edge(int v) const { return parent_edge_[v]; }
  int depth(int v) const { return depth_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  // Node ids adjacent to v in the tree.
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }

  int lca(int u, int v) const;
  // Ordered tree edges on the unique u-v path; empty when u == v.
  std::vector<int> tree_path(int u, int v) const;

  // Links covering tree edge e (the delta(e) of the covering relation).
  const std::vector<int>& cover_set(int e) const { return cover_sets_[e]; }
  // Tree edges covered by link l, in path order from l.u to l.v.
  const std::vector<int>& link_path(int l) const { return link_paths_[l]; }
  bool link_covers(int l, int e) const { return covers_[l][e] != 0; }
  int link_lca(int l) const { return link_lca_[l]; }

  bool is_binary() const;           // every node degree 1 or 3
  bool links_leaf_to_leaf() const;  // every link joins two leaves
  // Deeper of the two subtree-root... the deeper endpoint of edge e.
  int edge_child(int e) const;
  int edge_parent_node(int e) const;
  // Depth of an edge = depth of its child endpoint.
  int edge_depth(int e) const { return depth_[edge_child(e)]; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, int> ids_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<Link> links_;
  int root_ = 0;
  std::vector<int> parent_, parent_edge_, depth_;
  std::vector<std::vector<int>> children_, adj_;
  std::vector<std::vector<int>> cover_sets_, link_paths_;
  std::vector<std::vector<unsigned char>> covers_;
  std::vector<int> link_lca_;
};

struct IntegralSolution {
  std::vector<int> chosen;  // sorted, unique link ids
  bool contains(int l) const;
  void add(int l);
};

struct FractionalSolution {
  std::map<int, Rat> values;  // absent ids have value 0
  Rat value(int l) const;
  void set(int l, const Rat& r);  // erases zero entries
};

FractionalSolution to_fractional(const IntegralSolution& a);
FractionalSolution add(const FractionalSolution& x, const FractionalSolution& y);
FractionalSolution scale(const FractionalSolution& x, const Rat& s);

// Sum of x over cover_set(e).
Rat coverage(const TapInstance& inst, const FractionalSolution& x, int e);

// True iff every tree edge has a covering link in a; equivalent to
// two-edge-connectivity of the tree plus a.
bool is_feasible_cover(const TapInstance& inst, const IntegralSolution& a);

Rat cost_of(const TapInstance& inst, const IntegralSolution& a);
Rat cost_of(const TapInstance& inst, const FractionalSolution& x);

}  // namespace tap
