#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "unitdep/expr_tree.h"

namespace unitdep {

enum class VertexLabel : std::uint8_t { NotRate, Rate };

// Edge labels for a vertex pair (i, j) with i < j. "Fwd" labels make the
// lower vertex i the rate (Rate->Num: the Num Unit of i matches the unit of
// j); "Bwd" labels make j the rate.
enum class EdgeType : std::uint8_t {
  SameUnit,
  NoRelation,
  RateNumFwd,
  RateNumBwd,
  RateDenFwd,
  RateDenBwd,
};

inline constexpr std::array<EdgeType, 6> kAllEdgeTypes = {
    EdgeType::SameUnit,   EdgeType::NoRelation, EdgeType::RateNumFwd,
    EdgeType::RateNumBwd, EdgeType::RateDenFwd, EdgeType::RateDenBwd};

std::string_view edge_name(EdgeType type);  // "SameUnit", "Rate->Num", ...
std::optional<EdgeType> parse_edge_type(std::string_view name);
std::string_view vertex_name(VertexLabel label);

// Whether `type` may label pair (i, j) given the vertex labels: directed
// labels need a Rate source.
bool edge_allowed(EdgeType type, VertexLabel label_i, VertexLabel label_j);

// Vertices 0..n-1 are quantities in mention order, vertex n is the question.
// Every unordered pair carries exactly one EdgeType; NoRelation is the
// absence of an edge.
class UnitDependencyGraph {
 public:
  explicit UnitDependencyGraph(int num_quantities);

  int num_quantities() const { return n_; }
  int num_vertices() const { return n_ + 1; }
  int question() const { return n_; }
  std::size_t num_pairs() const { return edges_.size(); }

  VertexLabel vertex(int v) const { return vertices_.at(static_cast<std::size_t>(v)); }
  void set_vertex(int v, VertexLabel label) { vertices_.at(static_cast<std::size_t>(v)) = label; }
  std::span<const VertexLabel> vertex_labels() const { return vertices_; }

  // Requires i < j.
  EdgeType edge(int i, int j) const { return edges_[pair_index(i, j)]; }
  void set_edge(int i, int j, EdgeType type) { edges_[pair_index(i, j)] = type; }
  std::span<const EdgeType> edges() const { return edges_; }

  // Dense index of pair (i, j), i < j, in row-major order.
  std::size_t pair_index(int i, int j) const;

  bool structurally_valid() const;

  friend bool operator==(const UnitDependencyGraph&, const UnitDependencyGraph&) = default;
  // Lexicographic over (vertex labels, edge labels).
  friend auto operator<=>(const UnitDependencyGraph& a, const UnitDependencyGraph& b) {
    if (auto c = a.vertices_ <=> b.vertices_; c != 0) return c;
    return a.edges_ <=> b.edges_;
  }

 private:
  int n_;
  std::vector<VertexLabel> vertices_;
  std::vector<EdgeType> edges_;
};

// Pair enumeration helper: calls fn(i, j) for all 0 <= i < j < num_vertices
// in pair_index order.
void for_each_pair(int num_vertices, const std::function<void(int, int)>& fn);

// {"rates": [...], "edges": [[i, j, label], ...]}, NoRelation pairs omitted;
// the question vertex is written as "question".
nlohmann::json udg_to_json(const UnitDependencyGraph& graph);
UnitDependencyGraph udg_from_json(const nlohmann::json& j, int num_quantities);

// Operations on the tree path between two vertices. For two quantities this
// is the leaf-to-leaf path through their lowest common ancestor; with the
// question (vertex id == question_vertex) it is the leaf-to-root path.
// Throws std::invalid_argument if a quantity is unused or vi == vj.
std::set<Op> path(const ExprTree& tree, int vi, int vj, int question_vertex);

// Edge label implied by the tree and the two vertex labels, or nullopt when
// it cannot be determined. Same labels with no x/÷ node on the path give
// SameUnit. Different labels with exactly one x/÷ node give the rate edge
// that unit algebra forces: a rate r[A per B] times n[B] matches its Den
// Unit, x[A] divided by r matches its Num Unit with the quotient in B.
// The result is oriented by (min(vi, vj), max(vi, vj)).
std::optional<EdgeType> edge_label(const ExprTree& tree, int vi, int vj, VertexLabel label_i,
                                   VertexLabel label_j, int question_vertex);

struct Violation {
  int condition = 0;  // 1, 2 or 3
  std::vector<int> vertices;
  std::string detail;
};

struct ConsistencyReport {
  std::vector<Violation> violations;
  bool consistent() const { return violations.empty(); }
  explicit operator bool() const { return consistent(); }
};

namespace detail {

// Path facts needed by edge_label, computed once per vertex pair.
struct PathFacts {
  std::set<Op> ops;
  int mul_div = 0;  // x/÷ nodes on the path, counted per node
  std::uint8_t place = 0;  // where the single x/÷ node sits: LCA, first side, second side
  bool mul = false;
  // Whether the first (second) endpoint's side enters the x/÷ node as the
  // divisor.
  bool first_divisor = false;
  bool second_divisor = false;
};

}  // namespace detail

// Caches per-pair path analysis for one tree so that many graphs can be
// checked against it cheaply.
class ConsistencyChecker {
 public:
  ConsistencyChecker(const ExprTree& tree, int num_quantities);

  const ExprTree& tree() const { return tree_; }
  int num_quantities() const { return n_; }
  bool in_tree(int vertex) const;

  // Conditions 1 and 2, which depend on vertex labels only, plus the label
  // agreement that condition 3 implies: two leaves joined by an all +/- path
  // share one unit, so a rate can never sit across such a path from a
  // non-rate.
  bool vertex_conditions_hold(std::span<const VertexLabel> labels) const;
  // Edge label forced by condition 3 on pair (i, j), if any.
  std::optional<EdgeType> forced_edge(int i, int j, std::span<const VertexLabel> labels) const;
  // Whether condition 3 admits `type` on pair (i, j): the forced label when
  // there is one, otherwise anything but SameUnit across a path with exactly
  // one x/÷ node (no unit can survive a single product or quotient
  // unchanged).
  bool permits(int i, int j, EdgeType type, std::span<const VertexLabel> labels) const;

  // Throws std::invalid_argument on a vertex count mismatch.
  ConsistencyReport check(const UnitDependencyGraph& graph) const;
  bool consistent(const UnitDependencyGraph& graph) const;

 private:
  struct PairInfo {
    bool active = false;  // both endpoints in the tree
    detail::PathFacts facts;
  };
  const PairInfo& pair(int i, int j) const;

  ExprTree tree_;
  int n_;
  std::vector<bool> used_;
  std::vector<bool> additive_to_root_;
  std::vector<std::pair<int, int>> additive_pairs_;  // leaf pairs with no x/÷ between
  std::vector<PairInfo> pairs_;
};

ConsistencyReport check_consistency(const UnitDependencyGraph& graph, const ExprTree& tree);
bool is_consistent(const UnitDependencyGraph& graph, const ExprTree& tree);

// Streams every structurally valid graph over n quantities that is
// consistent with the tree: forced edges take their forced label, all other
// edges range over the labels the vertex labels allow.
void for_each_consistent_udg(const ExprTree& tree, int num_quantities,
                             const std::function<void(const UnitDependencyGraph&)>& visit);
std::vector<UnitDependencyGraph> enumerate_consistent_udgs(const ExprTree& tree,
                                                           int num_quantities);

}  // namespace unitdep
