#pragma once

#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "unitdep/error.h"
#include "unitdep/problem.h"
#include "unitdep/udg.h"

namespace unitdep {

// A tree with a x/÷ node needs human rate annotation to label its vertices.
class MissingAnnotation : public DataError {
 public:
  using DataError::DataError;
};

// Vertex labels for all n + 1 vertices. Trees without x/÷ nodes make every
// vertex NotRate regardless of `rates`; otherwise `rates` (question = n) is
// required and unlisted vertices are NotRate.
std::vector<VertexLabel> derive_vertex_labels(const ExprTree& tree, int num_quantities,
                                              const std::optional<std::set<int>>& rates);

struct DerivedUdgGold {
  UnitDependencyGraph graph;
  // Pairs (i < j) whose label could not be inferred and fell back to
  // NoRelation.
  std::set<std::pair<int, int>> noisy;

  std::size_t num_edges() const { return graph.num_pairs(); }
};

DerivedUdgGold derive_edge_labels(const ExprTree& tree, std::span<const VertexLabel> labels);

// Full derivation from a problem's gold tree and rate annotation. Throws
// DataError when the problem has no gold tree.
DerivedUdgGold derive_gold(const Problem& problem);

// Noisy edges over all edges.
double noise_rate(std::span<const DerivedUdgGold> derived);

// Graph JSON plus "noisy": [[i, j], ...].
nlohmann::json derived_to_json(const DerivedUdgGold& derived);

}  // namespace unitdep
