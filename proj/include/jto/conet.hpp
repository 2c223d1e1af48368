#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "jto/types.hpp"

namespace jto::conet {

struct EdgeAttr {
  int arrest_count = 0;
  int fir_count = 0;
  bool drug_related = false;
  std::vector<std::string> supporting_events;

  friend bool operator==(const EdgeAttr&, const EdgeAttr&) = default;
};

// Undirected person-person graph. Nodes are indexed in first-seen order and
// edges keyed by the canonical (smaller, larger) index pair.
class OffenderGraph {
 public:
  using Index = std::uint32_t;
  using EdgeKey = std::pair<Index, Index>;

  Index add_node(std::string_view person_id);
  // Adds every participant and one edge per unordered participant pair.
  void add_event(const CoEventRecord& event);

  std::optional<Index> index_of(std::string_view person_id) const;
  bool contains(std::string_view person_id) const { return index_of(person_id).has_value(); }
  const std::string& id(Index i) const { return ids_[i]; }
  const std::vector<Index>& neighbors(Index i) const { return adjacency_[i]; }

  // nullptr when the pair is not linked; argument order does not matter.
  const EdgeAttr* edge(std::string_view a, std::string_view b) const;

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& node_ids() const { return ids_; }
  const std::map<EdgeKey, EdgeAttr>& edges() const { return edges_; }

  // Copies an edge with its attributes, creating endpoints as needed.
  void insert_edge(std::string_view a, std::string_view b, const EdgeAttr& attr);

 private:
  EdgeAttr& edge_slot(Index a, Index b);

  std::vector<std::string> ids_;
  std::unordered_map<std::string, Index> index_;
  std::vector<std::vector<Index>> adjacency_;
  std::map<EdgeKey, EdgeAttr> edges_;
};

OffenderGraph build_graph(std::span<const CoEventRecord> events);

// Relationship counts by evidence source and degree from a seed set.
struct NetworkSummary {
  std::size_t max_degree = 3;
  // counts[0] arrest-sourced, counts[1] FIR-sourced; column d-1 holds degree d.
  std::array<std::vector<std::size_t>, 2> counts;
  std::size_t excluded = 0;  // farther than max_degree or unreachable

  std::size_t row_total(std::size_t source) const;
  std::size_t column_total(std::size_t degree) const;  // degree is 1-based
  std::size_t grand_total() const;
};

// Degree of an edge = 1 + hop distance of its nearer endpoint from the seeds.
// Edges with any arrest support count as arrest-sourced. Throws DataError for
// an empty seed set or a seed missing from the graph.
NetworkSummary degree_counts(const OffenderGraph& graph, const std::set<std::string>& seeds,
                             std::size_t max_degree = 3);

// Hop distance from the nearest source; nullopt when unreachable within max_hops.
std::vector<std::optional<std::size_t>> hop_distances(const OffenderGraph& graph,
                                                      std::span<const OffenderGraph::Index> sources,
                                                      std::size_t max_hops);

// Only drug-related edges; nodes left without edges are dropped.
OffenderGraph filter_drug_edges(const OffenderGraph& graph);

struct ProlificThresholds {
  int min_drug_arrests = 2;
  int min_violent_priors = 1;
};

struct ProlificSelection {
  std::vector<std::string> person_ids;  // sorted
  std::vector<std::string> warnings;    // graph nodes missing from the persons file
};

// Persons in `graph` with at least min_drug_arrests distinct drug-related
// ARREST events and at least min_violent_priors violent priors.
ProlificSelection select_prolific(const OffenderGraph& graph, std::span<const PersonRecord> persons,
                                  std::span<const CoEventRecord> events, const ProlificThresholds& thresholds = {});

// 0 for gang members; otherwise hops to the nearest gang member; nullopt when
// farther than max_hops.
std::map<std::string, std::optional<std::size_t>> gang_connection_degree(
    const OffenderGraph& graph, std::span<const std::string> prolific, std::span<const PersonRecord> persons,
    std::size_t max_hops = 3);

}  // namespace jto::conet
