#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "qrep/matrix.hpp"
#include "qrep/rep.hpp"

namespace qrep {

// Reflected representation together with the vertex relabeling between the
// source quiver and the reflected one. Vertex and arrow ids persist, so the
// relabeling is the identity map, recorded for serialization stability.
template <class S>
struct ReflectionResult {
    Rep<S> rep;
    std::string vertex;  // where the reflection happened
    std::map<std::string, std::string> vertex_map;
};

// Reflected dimension vector: s_y(d)(y) = -d(y) + sum over arrows at y of
// the dimension at the other endpoint.
inline std::vector<long long> simple_reflection(const Quiver& q, const std::string& vertex,
                                                std::vector<long long> d) {
    size_t y = q.vertex_index(vertex);
    if (d.size() != q.num_vertices())
        throw std::invalid_argument("simple_reflection: dimension vector size mismatch");
    long long s = -d[y];
    for (size_t a = 0; a < q.num_arrows(); ++a) {
        if (q.src_index(a) == y) s += d[q.tgt_index(a)];
        if (q.tgt_index(a) == y) s += d[q.src_index(a)];
    }
    d[y] = s;
    return d;
}

// BGP reflection at a sink y. The new space at y is the kernel of the
// assembled map phi : sum over incoming arrows of M(start) -> M(y), with
// blocks in arrow order; the reversed arrows carry the component blocks of
// the kernel inclusion. Arrow and vertex ids persist, so positional
// indexing is unchanged.
template <class S>
ReflectionResult<S> reflect_sink(const Rep<S>& m, const std::string& vertex) {
    const Quiver& q = m.quiver;
    size_t y = q.vertex_index(vertex);
    if (!q.is_sink(y)) throw std::invalid_argument("not a sink");
    std::vector<size_t> in = q.arrows_in(y);
    size_t total = 0;
    std::vector<size_t> off;
    for (size_t a : in) {
        off.push_back(total);
        total += m.dims[q.src_index(a)];
    }
    Matrix<S> phi(m.dims[y], total);
    for (size_t i = 0; i < in.size(); ++i) phi.set_block(0, off[i], m.mats[in[i]]);
    Matrix<S> k = normalize_matrix(kernel_basis(phi), m.field);

    std::vector<Quiver::Arrow> arrows;
    for (const auto& ar : q.arrows()) {
        if (ar.tgt == vertex)
            arrows.push_back({ar.id, ar.tgt, ar.src});
        else
            arrows.push_back(ar);
    }
    Quiver rq(q.vertices(), arrows);
    std::vector<size_t> dims = m.dims;
    dims[y] = k.cols();
    std::vector<Matrix<S>> mats(q.num_arrows());
    for (size_t a = 0; a < q.num_arrows(); ++a) mats[a] = m.mats[a];
    for (size_t i = 0; i < in.size(); ++i)
        mats[in[i]] = k.block(off[i], 0, m.dims[q.src_index(in[i])], k.cols());
    ReflectionResult<S> res{Rep<S>(rq, m.field, dims, mats), vertex, {}};
    for (const auto& v : q.vertices()) res.vertex_map[v] = v;
    return res;
}

// Reflection at a source, literally the dual of the sink reflection.
template <class S>
ReflectionResult<S> reflect_source(const Rep<S>& m, const std::string& vertex) {
    size_t z = m.quiver.vertex_index(vertex);
    if (!m.quiver.is_source(z)) throw std::invalid_argument("not a source");
    ReflectionResult<S> inner = reflect_sink(dual_rep(m), vertex);
    ReflectionResult<S> res{dual_rep(inner.rep), vertex, std::move(inner.vertex_map)};
    return res;
}

// Transport of a morphism f : M -> N under the sink reflection at y. Away
// from y the components are unchanged; at y the map is induced between the
// two kernels.
template <class S>
std::vector<Matrix<S>> reflect_sink_map(const Rep<S>& m, const Rep<S>& n,
                                        const std::vector<Matrix<S>>& f,
                                        const std::string& vertex,
                                        const ReflectionResult<S>& rm,
                                        const ReflectionResult<S>& rn) {
    const Quiver& q = m.quiver;
    size_t y = q.vertex_index(vertex);
    if (!q.is_sink(y)) throw std::invalid_argument("not a sink");
    if (!is_morphism(m, n, f))
        throw std::invalid_argument("reflect_sink_map: not a morphism");
    std::vector<size_t> in = q.arrows_in(y);
    size_t km = rm.rep.dims[y], kn = rn.rep.dims[y];
    size_t totm = 0, totn = 0;
    for (size_t a : in) {
        totm += m.dims[q.src_index(a)];
        totn += n.dims[q.src_index(a)];
    }
    // Stacked kernel inclusions and the block-diagonal of f at the sources.
    Matrix<S> kmat(totm, km), knmat(totn, kn), fdiag(totn, totm);
    size_t rm_off = 0, rn_off = 0;
    for (size_t a : in) {
        size_t s = q.src_index(a);
        kmat.set_block(rm_off, 0, rm.rep.mats[a]);
        knmat.set_block(rn_off, 0, rn.rep.mats[a]);
        fdiag.set_block(rn_off, rm_off, f[s]);
        rm_off += m.dims[s];
        rn_off += n.dims[s];
    }
    auto g = solve(knmat, fdiag * kmat);
    if (!g || knmat * *g != fdiag * kmat)
        throw std::logic_error("reflect_sink_map: kernel map does not factor");
    std::vector<Matrix<S>> out = f;
    out[y] = std::move(*g);
    return out;
}

// Admissible enumerations: repeatedly peel off the lexicographically first
// sink (resp. source) of the current orientation.
inline std::vector<std::string> admissible_sink_sequence(Quiver q) {
    std::vector<std::string> seq;
    std::set<std::string> done;
    while (done.size() < q.num_vertices()) {
        size_t pick = q.num_vertices();
        for (size_t v = 0; v < q.num_vertices(); ++v)
            if (!done.count(q.vertex(v)) && q.is_sink(v)) { pick = v; break; }
        if (pick == q.num_vertices()) throw std::invalid_argument("cyclic quiver");
        const std::string id = q.vertex(pick);
        seq.push_back(id);
        done.insert(id);
        std::vector<Quiver::Arrow> arrows;
        for (const auto& ar : q.arrows())
            if (ar.tgt == id)
                arrows.push_back({ar.id, ar.tgt, ar.src});
            else
                arrows.push_back(ar);
        q = Quiver(q.vertices(), arrows);
    }
    return seq;
}

inline std::vector<std::string> admissible_source_sequence(const Quiver& q) {
    return admissible_sink_sequence(q.opposite());
}

enum class CoxeterDirection { Plus, Minus };

// Coxeter functor: all reflections along an admissible enumeration. The
// result lives over the original quiver.
template <class S>
Rep<S> coxeter(const Rep<S>& m, CoxeterDirection dir) {
    Rep<S> r = m;
    if (dir == CoxeterDirection::Plus) {
        for (const auto& v : admissible_sink_sequence(m.quiver)) r = reflect_sink(r, v).rep;
    } else {
        for (const auto& v : admissible_source_sequence(m.quiver))
            r = reflect_source(r, v).rep;
    }
    if (r.quiver != m.quiver) throw std::logic_error("coxeter: orientation not restored");
    return r;
}

template <class S>
Rep<S> coxeter_plus(const Rep<S>& m) { return coxeter(m, CoxeterDirection::Plus); }

template <class S>
Rep<S> coxeter_minus(const Rep<S>& m) { return coxeter(m, CoxeterDirection::Minus); }

}  // namespace qrep
