#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <stdexcept>

namespace qrep {

// Finite quiver. Vertices and arrows are kept sorted by id, and all
// positional indexing throughout the library refers to these sorted orders.
class Quiver {
public:
    struct Arrow {
        std::string id;
        std::string src;  // start of the arrow
        std::string tgt;  // tip of the arrow
    };

    Quiver() {}
    Quiver(std::vector<std::string> vertices, std::vector<Arrow> arrows)
        : vertices_(std::move(vertices)), arrows_(std::move(arrows)) {
        std::sort(vertices_.begin(), vertices_.end());
        std::sort(arrows_.begin(), arrows_.end(),
                  [](const Arrow& a, const Arrow& b) { return a.id < b.id; });
        for (size_t i = 0; i + 1 < vertices_.size(); ++i)
            if (vertices_[i] == vertices_[i + 1])
                throw std::invalid_argument("Quiver: duplicate vertex id");
        for (size_t i = 0; i + 1 < arrows_.size(); ++i)
            if (arrows_[i].id == arrows_[i + 1].id)
                throw std::invalid_argument("Quiver: duplicate arrow id");
        for (size_t i = 0; i < vertices_.size(); ++i) vindex_[vertices_[i]] = i;
        for (size_t i = 0; i < arrows_.size(); ++i) {
            if (!vindex_.count(arrows_[i].src) || !vindex_.count(arrows_[i].tgt))
                throw std::invalid_argument("Quiver: arrow endpoint not a vertex");
            aindex_[arrows_[i].id] = i;
        }
    }

    size_t num_vertices() const { return vertices_.size(); }
    size_t num_arrows() const { return arrows_.size(); }
    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<Arrow>& arrows() const { return arrows_; }
    const Arrow& arrow(size_t i) const { return arrows_[i]; }
    const std::string& vertex(size_t i) const { return vertices_[i]; }

    size_t vertex_index(const std::string& id) const {
        auto it = vindex_.find(id);
        if (it == vindex_.end()) throw std::invalid_argument("Quiver: unknown vertex " + id);
        return it->second;
    }
    size_t arrow_index(const std::string& id) const {
        auto it = aindex_.find(id);
        if (it == aindex_.end()) throw std::invalid_argument("Quiver: unknown arrow " + id);
        return it->second;
    }
    bool has_vertex(const std::string& id) const { return vindex_.count(id) > 0; }

    size_t src_index(size_t arrow) const { return vertex_index(arrows_[arrow].src); }
    size_t tgt_index(size_t arrow) const { return vertex_index(arrows_[arrow].tgt); }

    std::vector<size_t> arrows_out(size_t v) const {
        std::vector<size_t> r;
        for (size_t i = 0; i < arrows_.size(); ++i)
            if (src_index(i) == v) r.push_back(i);
        return r;
    }
    std::vector<size_t> arrows_in(size_t v) const {
        std::vector<size_t> r;
        for (size_t i = 0; i < arrows_.size(); ++i)
            if (tgt_index(i) == v) r.push_back(i);
        return r;
    }
    bool is_sink(size_t v) const { return arrows_out(v).empty(); }
    bool is_source(size_t v) const { return arrows_in(v).empty(); }
    bool has_loop_at(size_t v) const {
        for (size_t i = 0; i < arrows_.size(); ++i)
            if (src_index(i) == v && tgt_index(i) == v) return true;
        return false;
    }

    Quiver opposite() const {
        std::vector<Arrow> rev;
        for (const auto& a : arrows_) rev.push_back({a.id, a.tgt, a.src});
        return Quiver(vertices_, rev);
    }

    bool operator==(const Quiver& o) const {
        if (vertices_ != o.vertices_ || arrows_.size() != o.arrows_.size()) return false;
        for (size_t i = 0; i < arrows_.size(); ++i)
            if (arrows_[i].id != o.arrows_[i].id || arrows_[i].src != o.arrows_[i].src ||
                arrows_[i].tgt != o.arrows_[i].tgt)
                return false;
        return true;
    }
    bool operator!=(const Quiver& o) const { return !(*this == o); }

    // Vertices in an order with all arrows pointing from earlier to later;
    // empty when the quiver has an oriented cycle.
    std::optional<std::vector<size_t>> topological_order() const {
        std::vector<size_t> indeg(vertices_.size(), 0);
        for (size_t a = 0; a < arrows_.size(); ++a) ++indeg[tgt_index(a)];
        std::vector<size_t> order;
        std::vector<bool> done(vertices_.size(), false);
        for (size_t step = 0; step < vertices_.size(); ++step) {
            size_t pick = vertices_.size();
            for (size_t v = 0; v < vertices_.size(); ++v)
                if (!done[v] && indeg[v] == 0) { pick = v; break; }
            if (pick == vertices_.size()) return std::nullopt;
            done[pick] = true;
            order.push_back(pick);
            for (size_t a : arrows_out(pick))
                if (!done[tgt_index(a)]) --indeg[tgt_index(a)];
        }
        return order;
    }
    bool is_acyclic() const { return topological_order().has_value(); }

private:
    std::vector<std::string> vertices_;
    std::vector<Arrow> arrows_;
    std::map<std::string, size_t> vindex_;
    std::map<std::string, size_t> aindex_;
};

// The n-arrow Kronecker quiver: vertices x (source) and y (sink), arrows
// a1..an from x to y. Two-digit arrow labels once n reaches 10 keep the
// lexicographic arrow order equal to the label order.
inline Quiver kronecker_quiver(int n) {
    if (n < 1) throw std::invalid_argument("kronecker_quiver: need at least one arrow");
    std::vector<Quiver::Arrow> arrows;
    for (int l = 1; l <= n; ++l) {
        std::string id = "a";
        if (n >= 10 && l < 10) id += "0";
        id += std::to_string(l);
        arrows.push_back({id, "x", "y"});
    }
    return Quiver({"x", "y"}, arrows);
}

}  // namespace qrep
