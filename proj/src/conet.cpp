#include "jto/conet.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "jto/error.hpp"

namespace jto::conet {

OffenderGraph::Index OffenderGraph::add_node(std::string_view person_id) {
  std::string key(person_id);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  const auto idx = static_cast<Index>(ids_.size());
  ids_.push_back(key);
  index_.emplace(std::move(key), idx);
  adjacency_.emplace_back();
  return idx;
}

std::optional<OffenderGraph::Index> OffenderGraph::index_of(std::string_view person_id) const {
  auto it = index_.find(std::string(person_id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EdgeAttr& OffenderGraph::edge_slot(Index a, Index b) {
  const EdgeKey key = std::minmax(a, b);
  auto [it, inserted] = edges_.try_emplace(key);
  if (inserted) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  return it->second;
}

void OffenderGraph::add_event(const CoEventRecord& event) {
  std::vector<Index> members;
  members.reserve(event.participants.size());
  for (const auto& p : event.participants) members.push_back(add_node(p));
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (members[i] == members[j]) continue;
      EdgeAttr& e = edge_slot(members[i], members[j]);
      if (event.type == EventType::arrest) ++e.arrest_count;
      else ++e.fir_count;
      e.drug_related = e.drug_related || event.drug_related;
      e.supporting_events.push_back(event.event_id);
    }
  }
}

void OffenderGraph::insert_edge(std::string_view a, std::string_view b, const EdgeAttr& attr) {
  const Index ia = add_node(a);
  const Index ib = add_node(b);
  edge_slot(ia, ib) = attr;
}

const EdgeAttr* OffenderGraph::edge(std::string_view a, std::string_view b) const {
  auto ia = index_of(a);
  auto ib = index_of(b);
  if (!ia || !ib) return nullptr;
  auto it = edges_.find(std::minmax(*ia, *ib));
  return it == edges_.end() ? nullptr : &it->second;
}

OffenderGraph build_graph(std::span<const CoEventRecord> events) {
  OffenderGraph g;
  for (const auto& e : events) g.add_event(e);
  return g;
}

std::size_t NetworkSummary::row_total(std::size_t source) const {
  std::size_t t = 0;
  for (auto c : counts[source]) t += c;
  return t;
}

std::size_t NetworkSummary::column_total(std::size_t degree) const {
  return counts[0][degree - 1] + counts[1][degree - 1];
}

std::size_t NetworkSummary::grand_total() const { return row_total(0) + row_total(1); }

std::vector<std::optional<std::size_t>> hop_distances(const OffenderGraph& graph,
                                                      std::span<const OffenderGraph::Index> sources,
                                                      std::size_t max_hops) {
  std::vector<std::optional<std::size_t>> dist(graph.node_count());
  std::deque<OffenderGraph::Index> queue;
  for (auto s : sources) {
    if (!dist[s]) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop_front();
    if (*dist[u] == max_hops) continue;
    for (auto v : graph.neighbors(u)) {
      if (!dist[v]) {
        dist[v] = *dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

NetworkSummary degree_counts(const OffenderGraph& graph, const std::set<std::string>& seeds,
                             std::size_t max_degree) {
  if (seeds.empty()) throw DataError("no seed set");
  if (max_degree < 1) throw ConfigError("max_degree must be at least 1");
  std::vector<OffenderGraph::Index> sources;
  for (const auto& s : seeds) {
    auto idx = graph.index_of(s);
    if (!idx) throw DataError("seed " + s + " is not in the network");
    sources.push_back(*idx);
  }
  const auto dist = hop_distances(graph, sources, max_degree - 1);

  NetworkSummary summary;
  summary.max_degree = max_degree;
  summary.counts[0].assign(max_degree, 0);
  summary.counts[1].assign(max_degree, 0);
  for (const auto& [key, attr] : graph.edges()) {
    const auto& da = dist[key.first];
    const auto& db = dist[key.second];
    if (!da && !db) {
      ++summary.excluded;
      continue;
    }
    const std::size_t nearer = std::min(da.value_or(max_degree), db.value_or(max_degree));
    const std::size_t source = attr.arrest_count >= 1 ? 0 : 1;
    ++summary.counts[source][nearer];
  }
  return summary;
}

OffenderGraph filter_drug_edges(const OffenderGraph& graph) {
  OffenderGraph out;
  for (const auto& [key, attr] : graph.edges())
    if (attr.drug_related) out.insert_edge(graph.id(key.first), graph.id(key.second), attr);
  return out;
}

ProlificSelection select_prolific(const OffenderGraph& graph, std::span<const PersonRecord> persons,
                                  std::span<const CoEventRecord> events, const ProlificThresholds& thresholds) {
  std::unordered_map<std::string, int> drug_arrests;
  for (const auto& e : events) {
    if (e.type != EventType::arrest || !e.drug_related) continue;
    std::unordered_set<std::string_view> once(e.participants.begin(), e.participants.end());
    for (auto id : once) ++drug_arrests[std::string(id)];
  }
  std::unordered_map<std::string_view, const PersonRecord*> by_id;
  for (const auto& p : persons) by_id.emplace(p.person_id, &p);

  ProlificSelection out;
  for (const auto& id : graph.node_ids()) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      out.warnings.push_back("person " + id + " not in persons file; treated as non-prolific");
      continue;
    }
    auto da = drug_arrests.find(id);
    const int arrests = da == drug_arrests.end() ? 0 : da->second;
    if (arrests >= thresholds.min_drug_arrests && it->second->violent_prior_count >= thresholds.min_violent_priors)
      out.person_ids.push_back(id);
  }
  std::sort(out.person_ids.begin(), out.person_ids.end());
  std::sort(out.warnings.begin(), out.warnings.end());
  return out;
}

std::map<std::string, std::optional<std::size_t>> gang_connection_degree(
    const OffenderGraph& graph, std::span<const std::string> prolific, std::span<const PersonRecord> persons,
    std::size_t max_hops) {
  std::vector<OffenderGraph::Index> gang;
  std::unordered_set<std::string_view> gang_ids;
  for (const auto& p : persons) {
    if (!p.gang_member) continue;
    gang_ids.insert(p.person_id);
    if (auto idx = graph.index_of(p.person_id)) gang.push_back(*idx);
  }
  const auto dist = hop_distances(graph, gang, max_hops);

  std::map<std::string, std::optional<std::size_t>> out;
  for (const auto& id : prolific) {
    if (gang_ids.count(id)) {
      out[id] = 0;
      continue;
    }
    auto idx = graph.index_of(id);
    out[id] = idx ? dist[*idx] : std::nullopt;
  }
  return out;
}

}  // namespace jto::conet
