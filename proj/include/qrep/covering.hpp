#pragma once

#include <map>
#include <string>
#include <vector>

#include "qrep/homext.hpp"
#include "qrep/quiver.hpp"
#include "qrep/reflect.hpp"
#include "qrep/rep.hpp"

namespace qrep {

enum class FiberClass { SinkClass, SourceClass };

// Truncated universal cover of the n-Kronecker quiver: the n-regular
// bipartite tree around a central sink, cut after a fixed number of layers.
// Layer j holds n (n-1)^{j-1} vertices for j >= 1; even layers are sinks,
// odd layers sources; every vertex meets each arrow label 1..n at most once.
// Vertex ids sort by layer, then by position inside the layer.
struct TruncatedCover {
    Quiver quiver;
    size_t n = 0;
    size_t depth = 0;
    std::string center;
    std::map<std::string, size_t> layer;        // vertex id -> 0..depth
    std::map<std::string, size_t> arrow_label;  // arrow id -> 1..n

    FiberClass fiber_label(const std::string& v) const {
        return layer.at(v) % 2 == 0 ? FiberClass::SinkClass : FiberClass::SourceClass;
    }
    std::vector<std::string> layer_vertices(size_t j) const {
        std::vector<std::string> out;
        for (const auto& [v, l] : layer)
            if (l == j) out.push_back(v);
        return out;
    }
};

inline TruncatedCover build_cover(size_t n, size_t depth) {
    if (n < 1) throw std::invalid_argument("build_cover: need n >= 1");
    TruncatedCover cov;
    cov.n = n;
    cov.depth = depth;

    auto vertex_id = [](size_t lay, size_t idx) {
        std::string l = std::to_string(lay);
        if (l.size() < 2) l.insert(0, "0");
        std::string k = std::to_string(idx);
        while (k.size() < 4) k.insert(0, "0");
        return "L" + l + "v" + k;
    };

    std::vector<std::string> vertices;
    std::vector<Quiver::Arrow> arrows;
    cov.center = vertex_id(0, 0);
    vertices.push_back(cov.center);
    cov.layer[cov.center] = 0;

    // prev holds the current outer layer with each vertex's parent label
    // (0 at the center, meaning no label is taken yet).
    std::vector<std::pair<std::string, size_t>> prev{{cov.center, 0}};
    size_t arrow_count = 0;
    for (size_t j = 1; j <= depth && !prev.empty(); ++j) {
        std::vector<std::pair<std::string, size_t>> cur;
        for (const auto& [parent, taken] : prev) {
            for (size_t l = 1; l <= n; ++l) {
                if (l == taken) continue;
                std::string child = vertex_id(j, cur.size());
                vertices.push_back(child);
                cov.layer[child] = j;
                std::string aid = std::to_string(arrow_count++);
                while (aid.size() < 4) aid.insert(0, "0");
                aid = "e" + aid;
                // Arrows run from the odd layer to the even layer.
                if (j % 2 == 1)
                    arrows.push_back({aid, child, parent});
                else
                    arrows.push_back({aid, parent, child});
                cov.arrow_label[aid] = l;
                cur.emplace_back(child, l);
            }
        }
        prev = std::move(cur);
    }
    cov.quiver = Quiver(vertices, arrows);
    return cov;
}

namespace detail {

// The representation's quiver must carry the cover's arrows either all as
// stored or all reversed (reflection sweeps flip the whole orientation).
// Returns true for the stored orientation.
template <class S>
bool cover_orientation(const TruncatedCover& cov, const Rep<S>& m) {
    if (m.quiver.vertices() != cov.quiver.vertices())
        throw std::invalid_argument("push_down: representation is not on this cover");
    bool same = true, seen = false;
    for (const auto& ar : m.quiver.arrows()) {
        auto it = cov.arrow_label.find(ar.id);
        if (it == cov.arrow_label.end())
            throw std::invalid_argument("push_down: representation is not on this cover");
        const Quiver::Arrow& ref = cov.quiver.arrows()[cov.quiver.arrow_index(ar.id)];
        bool match = ar.src == ref.src && ar.tgt == ref.tgt;
        bool rev = ar.src == ref.tgt && ar.tgt == ref.src;
        if (!match && !rev)
            throw std::invalid_argument("push_down: representation is not on this cover");
        if (!seen) {
            same = match;
            seen = true;
        } else if (match != same) {
            throw std::invalid_argument("push_down: mixed cover orientation");
        }
    }
    return same;
}

// Offsets of the cover vertices inside the two Kronecker fibers. Sources of
// the representation's orientation map to x, sinks to y, each fiber ordered
// by vertex id.
template <class S>
struct FiberLayout {
    std::map<std::string, size_t> off;  // vertex -> offset inside its fiber
    size_t dim_x = 0, dim_y = 0;

    FiberLayout(const TruncatedCover& cov, const Rep<S>& m) {
        bool same = cover_orientation(cov, m);
        for (const auto& v : m.quiver.vertices()) {
            bool odd = cov.layer.at(v) % 2 == 1;
            bool to_x = odd == same;  // sources of the current orientation
            size_t d = m.dims[m.quiver.vertex_index(v)];
            if (to_x) {
                off[v] = dim_x;
                dim_x += d;
            } else {
                off[v] = dim_y;
                dim_y += d;
            }
        }
    }
};

}  // namespace detail

// Push-down along the covering: fibers are summed and each Kronecker arrow
// is assembled from all cover arrows with its label. Total dimension is
// preserved. A representation of the opposite orientation is pushed down to
// the same Kronecker quiver, absorbing the source/sink swap.
template <class S>
Rep<S> push_down(const TruncatedCover& cov, const Rep<S>& m) {
    for (const auto& [v, l] : cov.layer)
        if (l == cov.depth && cov.depth > 0 && m.dims[m.quiver.vertex_index(v)] > 0)
            throw std::invalid_argument("push_down: support touches the boundary, increase depth");
    detail::FiberLayout<S> lay(cov, m);
    Quiver qn = kronecker_quiver(static_cast<int>(cov.n));
    std::vector<Matrix<S>> mats(cov.n, Matrix<S>(lay.dim_y, lay.dim_x));
    for (size_t a = 0; a < m.quiver.num_arrows(); ++a) {
        const Quiver::Arrow& ar = m.quiver.arrows()[a];
        size_t label = cov.arrow_label.at(ar.id);
        mats[label - 1].set_block(lay.off.at(ar.tgt), lay.off.at(ar.src), m.mats[a]);
    }
    return Rep<S>(qn, m.field, {lay.dim_x, lay.dim_y}, mats);
}

// Push-down of a morphism: the block diagonal over each fiber.
template <class S>
std::vector<Matrix<S>> push_down_map(const TruncatedCover& cov, const Rep<S>& a,
                                     const Rep<S>& b, const std::vector<Matrix<S>>& f) {
    if (!is_morphism(a, b, f))
        throw std::invalid_argument("push_down_map: not a morphism");
    bool same = detail::cover_orientation(cov, a);
    if (detail::cover_orientation(cov, b) != same)
        throw std::invalid_argument("push_down_map: orientation mismatch");
    detail::FiberLayout<S> la(cov, a), lb(cov, b);
    Matrix<S> fx(lb.dim_x, la.dim_x), fy(lb.dim_y, la.dim_y);
    for (const auto& v : a.quiver.vertices()) {
        size_t vi = a.quiver.vertex_index(v);
        bool odd = cov.layer.at(v) % 2 == 1;
        if (odd == same)
            fx.set_block(lb.off.at(v), la.off.at(v), f[vi]);
        else
            fy.set_block(lb.off.at(v), la.off.at(v), f[vi]);
    }
    return {fx, fy};
}

template <class S>
struct LiftedRep {
    TruncatedCover cover;
    Rep<S> rep;
};

// Lifting of the preprojective module P_i to the cover, built by reflecting
// at all sources i times starting from the central simple. Sources are
// pairwise non-adjacent, so the sweep order does not matter. The extra two
// layers keep the support away from the truncation boundary.
template <class S>
LiftedRep<S> lift_preprojective(size_t n, size_t i, const FieldInfo& f) {
    TruncatedCover cov = build_cover(n, i + 2);
    Rep<S> m = simple_rep<S>(cov.quiver, f, cov.center);
    for (size_t step = 0; step < i; ++step) {
        std::vector<std::string> sources;
        for (size_t v = 0; v < m.quiver.num_vertices(); ++v)
            if (m.quiver.is_source(v)) sources.push_back(m.quiver.vertex(v));
        for (const auto& v : sources) m = reflect_source(m, v).rep;
    }
    return {std::move(cov), std::move(m)};
}

template <class S>
struct StripResult {
    Rep<S> sub, quot;                  // on the same quiver; quot vanishes at the sink
    std::vector<Matrix<S>> inc, proj;  // 0 -> sub -> m -> quot -> 0
};

// Quotient by the simple at a sink carrying a one-dimensional space reached
// by exactly one arrow from the support. End and Ext^1 dimensions of the
// quotient agree with those of the input.
template <class S>
StripResult<S> strip_sink(const Rep<S>& m, const std::string& s) {
    const Quiver& q = m.quiver;
    size_t y = q.vertex_index(s);
    if (!q.is_sink(y)) throw std::invalid_argument("strip_sink: not a sink");
    std::vector<size_t> in;
    for (size_t a : q.arrows_in(y))
        if (m.dims[q.src_index(a)] > 0) in.push_back(a);
    if (in.size() != 1)
        throw std::invalid_argument(
            "strip_sink: need exactly one incoming arrow from the support");
    if (m.dims[y] != 1) throw std::invalid_argument("strip_sink: sink dimension must be 1");
    size_t src = q.src_index(in[0]);
    if (m.dims[src] != 1)
        throw std::invalid_argument("strip_sink: source dimension must be 1");
    if (m.mats[in[0]] == Matrix<S>(1, 1))
        throw std::invalid_argument("strip_sink: zero arrow map");

    StripResult<S> res{simple_rep<S>(q, m.field, s), m, {}, {}};
    std::vector<size_t> qdims = m.dims;
    qdims[y] = 0;
    std::vector<Matrix<S>> qmats = m.mats;
    for (size_t a : q.arrows_in(y)) qmats[a] = Matrix<S>(0, m.dims[q.src_index(a)]);
    res.quot = Rep<S>(q, m.field, qdims, qmats);
    for (size_t v = 0; v < q.num_vertices(); ++v) {
        if (v == y) {
            res.inc.push_back(Matrix<S>(1, 1, {scalar_traits<S>::from_long(1, m.field)}));
            res.proj.push_back(Matrix<S>(0, 1));
        } else {
            res.inc.push_back(Matrix<S>(m.dims[v], 0));
            res.proj.push_back(Matrix<S>::identity(m.dims[v]));
        }
    }
    if (!is_morphism(res.sub, m, res.inc) || !is_morphism(m, res.quot, res.proj))
        throw std::logic_error("strip_sink: sequence maps are not morphisms");
    return res;
}

template <class S>
struct PreprojectiveSequence {
    TruncatedCover cover;
    std::string sink;     // the stripped vertex in the outer support layer
    Rep<S> lift;          // lifting of P_i on the cover
    StripResult<S> strip; // 0 -> E_s -> lift -> C -> 0
    Rep<S> pushed_sub, pushed_total, pushed_quot;  // 0 -> E -> P_i -> U -> 0
    std::vector<Matrix<S>> pushed_inc, pushed_proj;
};

// Nonsplit sequence under a preprojective module: strip one outer vertex of
// the lifting and push the whole sequence down. The side conditions
// Hom(C, E_s) = Hom(E_s, C) = 0, dim Ext^1(C, E_s) = 1 and the
// exceptionality of C are certified here; the quotient inherits
// indecomposability under push-down.
template <class S>
PreprojectiveSequence<S> satz539_sequence(size_t n, size_t i, const FieldInfo& f) {
    if (i < 1)
        throw std::invalid_argument("satz539_sequence: the simple module has no such sequence");
    LiftedRep<S> lp = lift_preprojective<S>(n, i, f);
    std::string s = lp.cover.layer_vertices(i).front();
    StripResult<S> st = strip_sink(lp.rep, s);

    if (hom_dim(st.quot, st.sub) != 0 || hom_dim(st.sub, st.quot) != 0 ||
        ext_dim(st.quot, st.sub) != 1)
        throw std::logic_error("satz539_sequence: side conditions failed");
    if (hom_dim(st.quot, st.quot) != 1 || ext_dim(st.quot, st.quot) != 0)
        throw std::logic_error("satz539_sequence: quotient is not exceptional");

    PreprojectiveSequence<S> out{lp.cover,
                                 s,
                                 lp.rep,
                                 st,
                                 push_down(lp.cover, st.sub),
                                 push_down(lp.cover, lp.rep),
                                 push_down(lp.cover, st.quot),
                                 push_down_map(lp.cover, st.sub, lp.rep, st.inc),
                                 push_down_map(lp.cover, lp.rep, st.quot, st.proj)};
    if (!is_morphism(out.pushed_sub, out.pushed_total, out.pushed_inc) ||
        !is_morphism(out.pushed_total, out.pushed_quot, out.pushed_proj))
        throw std::logic_error("satz539_sequence: pushed maps are not morphisms");
    return out;
}

}  // namespace qrep
