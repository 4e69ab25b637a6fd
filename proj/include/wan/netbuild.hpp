#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "wan/errors.hpp"
#include "wan/tokenizer.hpp"

namespace wan {

// Bijection between token surfaces and dense node ids, assigned 0..N-1 in
// first-appearance order.
class Interner {
public:
    // Returns (id, true) on first appearance, (id, false) afterwards.
    std::pair<uint32_t, bool> intern(const std::string& surface) {
        auto [it, inserted] =
            map_.try_emplace(surface, static_cast<uint32_t>(by_id_.size()));
        if (inserted) by_id_.push_back(&it->first);
        return {it->second, inserted};
    }

    std::optional<uint32_t> lookup(const std::string& surface) const {
        auto it = map_.find(surface);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& surface(uint32_t id) const { return *by_id_[id]; }
    uint32_t size() const { return static_cast<uint32_t>(by_id_.size()); }

private:
    std::unordered_map<std::string, uint32_t> map_;
    std::vector<const std::string*> by_id_;  // map nodes are address-stable
};

// Binary undirected simple graph under incremental growth. Neighbor lists
// stay sorted so duplicate-edge checks are binary searches.
struct AdjacencyNetwork {
    std::vector<std::vector<uint32_t>> adjacency;
    uint64_t n_edges = 0;
    uint32_t last_active = 0;
    uint64_t tokens_consumed = 0;

    uint32_t n_nodes() const { return static_cast<uint32_t>(adjacency.size()); }
    size_t degree(uint32_t u) const { return adjacency[u].size(); }

    uint32_t add_node() {
        adjacency.emplace_back();
        return n_nodes() - 1;
    }

    bool has_edge(uint32_t u, uint32_t v) const {
        const auto& shorter =
            adjacency[u].size() <= adjacency[v].size() ? adjacency[u] : adjacency[v];
        const uint32_t probe = adjacency[u].size() <= adjacency[v].size() ? v : u;
        return std::binary_search(shorter.begin(), shorter.end(), probe);
    }

    // No self-loops, no duplicates. Returns whether an edge was added.
    bool add_edge(uint32_t u, uint32_t v) {
        if (u == v || has_edge(u, v)) return false;
        auto& au = adjacency[u];
        au.insert(std::upper_bound(au.begin(), au.end(), v), v);
        auto& av = adjacency[v];
        av.insert(std::upper_bound(av.begin(), av.end(), u), u);
        ++n_edges;
        return true;
    }
};

enum class GrowthKind : uint8_t { NewNode, NewEdge, Repeat };

struct GrowthEvent {
    GrowthKind kind;
    uint32_t node;  // node of the consumed token
    uint64_t tau;   // tokens consumed so far (this token included)
};

// A token stream mapped once onto dense global ids, for growth paths that
// re-walk the same stream from many offsets.
struct InternedStream {
    std::vector<uint32_t> ids;
    std::vector<std::string> surfaces;  // global id -> surface

    uint32_t vocabulary() const { return static_cast<uint32_t>(surfaces.size()); }
    size_t total_len() const { return ids.size(); }
};

inline InternedStream intern_stream(const TokenStream& stream) {
    InternedStream out;
    out.ids.reserve(stream.tokens.size());
    Interner interner;
    for (const Token& tok : stream.tokens) {
        auto [id, fresh] = interner.intern(tok.surface);
        if (fresh) out.surfaces.push_back(tok.surface);
        out.ids.push_back(id);
    }
    return out;
}

// Growth cursor over a pre-interned id sequence. Local node ids follow
// first-appearance order from the chosen start offset; consumption wraps
// cyclically once past the end of the stream.
class IdGrower {
public:
    IdGrower(const InternedStream& stream, size_t start, uint64_t limit)
        : seq_(&stream.ids), remaining_(stream.ids.empty() ? 0 : limit),
          local_(stream.vocabulary(), -1) {
        pos_ = stream.ids.empty() ? 0 : start % stream.ids.size();
        global_of_.reserve(64);
        if (remaining_ > 0) consume_first();
    }

    std::optional<GrowthEvent> step() {
        if (remaining_ == 0) return std::nullopt;
        const uint32_t gid = next_id();
        GrowthEvent ev;
        ev.tau = net_.tokens_consumed;
        const uint32_t prev = net_.last_active;
        int32_t& slot = local_[gid];
        if (slot < 0) {
            const uint32_t node = net_.add_node();
            slot = static_cast<int32_t>(node);
            global_of_.push_back(gid);
            net_.add_edge(prev, node);
            net_.last_active = node;
            ev.kind = GrowthKind::NewNode;
            ev.node = node;
            return ev;
        }
        const uint32_t node = static_cast<uint32_t>(slot);
        ev.node = node;
        if (node != prev && net_.add_edge(prev, node))
            ev.kind = GrowthKind::NewEdge;
        else
            ev.kind = GrowthKind::Repeat;  // existing edge or self-pair
        net_.last_active = node;
        return ev;
    }

    const AdjacencyNetwork& network() const { return net_; }
    uint32_t global_id(uint32_t local) const { return global_of_[local]; }
    bool exhausted() const { return remaining_ == 0; }

private:
    uint32_t next_id() {
        const uint32_t id = (*seq_)[pos_];
        pos_ = (pos_ + 1) % seq_->size();
        --remaining_;
        ++net_.tokens_consumed;
        return id;
    }

    void consume_first() {
        const uint32_t gid = next_id();
        local_[gid] = static_cast<int32_t>(net_.add_node());
        global_of_.push_back(gid);
        net_.last_active = 0;
    }

    const std::vector<uint32_t>* seq_;
    size_t pos_;
    uint64_t remaining_;
    std::vector<int32_t> local_;
    std::vector<uint32_t> global_of_;
    AdjacencyNetwork net_;
};

// Surface-level growth cursor: the spec'd grow() iterator.
class Grower {
public:
    Grower(const TokenStream& stream, size_t start,
           std::optional<uint64_t> limit = std::nullopt)
        : interned_(intern_stream(stream)),
          grower_(interned_, start % std::max<size_t>(stream.total_len(), 1),
                  limit.value_or(stream.total_len())) {}

    std::optional<GrowthEvent> step() { return grower_.step(); }
    const AdjacencyNetwork& network() const { return grower_.network(); }
    const std::string& surface(uint32_t local) const {
        return interned_.surfaces[grower_.global_id(local)];
    }

private:
    InternedStream interned_;
    IdGrower grower_;
};

// Network state at the first moment the node count reaches target_n,
// including the edge brought in by the token that introduced that node.
inline AdjacencyNetwork snapshot_at_nodes(const TokenStream& stream, size_t start,
                                          uint32_t target_n) {
    if (stream.total_len() == 0) throw EmptyStreamError("cannot grow an empty stream");
    Grower grower(stream, start, stream.total_len());
    while (grower.network().n_nodes() < target_n) {
        if (!grower.step())
            throw VocabularyExhaustedError(
                "stream vocabulary smaller than requested node count " +
                std::to_string(target_n));
    }
    return grower.network();
}

// One full pass over the stream, no cyclic wrap.
inline AdjacencyNetwork full_network(const TokenStream& stream) {
    if (stream.total_len() == 0) throw EmptyStreamError("cannot grow an empty stream");
    Grower grower(stream, 0, stream.total_len());
    while (grower.step()) {
    }
    return grower.network();
}

} // namespace wan
