#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qrep/decomp.hpp"
#include "qrep/homext.hpp"
#include "qrep/rep.hpp"

namespace qrep {

// Schofield induction datum for an exceptional module m: exceptional X and Y
// with Hom(X, Y) = Hom(Y, X) = 0 and an exact sequence
//   0 -> Y^v -> m -> X^u -> 0,   u, v >= 1.
// All parts live on the quiver of m; sub and quot are Y^v and X^u.
template <class S>
struct SchofieldPair {
    Rep<S> x, y;
    size_t u = 0, v = 0;
    Rep<S> sub, quot;
    std::vector<Matrix<S>> inc;   // Y^v -> m
    std::vector<Matrix<S>> proj;  // m -> X^u
};

// Bongartz complement of an exceptional module: the sum of the projectives
// away from s when m = P_s, otherwise the middle term of the minimal
// universal extension of add(m) by the path algebra. Its indecomposable
// summands are exactly the modules N completing m to an exceptional
// sequence (N, m) in which m is a non-simple relative object.
template <class S>
Rep<S> bongartz_complement(const Rep<S>& m, uint64_t seed = 1729) {
    if (!m.quiver.is_acyclic())
        throw std::invalid_argument("bongartz_complement: quiver has a cycle");
    if (hom_dim(m, m) != 1 || ext_dim(m, m) != 0)
        throw std::invalid_argument("bongartz_complement: module is not exceptional");
    for (const auto& v : m.quiver.vertices()) {
        Rep<S> pv = projective_rep<S>(m.quiver, m.field, v);
        if (pv.dims != m.dims || !is_isomorphic(pv, m, seed)) continue;
        std::vector<Rep<S>> parts;
        for (const auto& w : m.quiver.vertices())
            if (w != v) parts.push_back(projective_rep<S>(m.quiver, m.field, w));
        return parts.empty() ? zero_rep<S>(m.quiver, m.field) : direct_sum(parts);
    }
    UniversalExtension<S> ue =
        minimal_universal_extension_by(m, algebra_rep<S>(m.quiver, m.field));
    if (decompose(ue.total, seed).summands.size() != m.quiver.num_vertices() - 1)
        throw std::logic_error("bongartz_complement: unexpected number of summand classes");
    return ue.total;
}

namespace detail {

// Restriction to the full subquiver on the support of m.
template <class S>
Rep<S> restrict_to_support(const Rep<S>& m) {
    std::vector<std::string> verts;
    for (size_t v = 0; v < m.dims.size(); ++v)
        if (m.dims[v] > 0) verts.push_back(m.quiver.vertices()[v]);
    std::vector<Quiver::Arrow> arrows;
    for (const auto& ar : m.quiver.arrows())
        if (m.dims[m.quiver.vertex_index(ar.src)] > 0 &&
            m.dims[m.quiver.vertex_index(ar.tgt)] > 0)
            arrows.push_back(ar);
    Quiver sq(verts, arrows);
    std::vector<size_t> dims(sq.num_vertices());
    for (size_t v = 0; v < dims.size(); ++v)
        dims[v] = m.dims[m.quiver.vertex_index(sq.vertices()[v])];
    std::vector<Matrix<S>> mats;
    for (size_t a = 0; a < sq.num_arrows(); ++a)
        mats.push_back(m.mats[m.quiver.arrow_index(sq.arrows()[a].id)]);
    return Rep<S>(sq, m.field, dims, mats);
}

// Zero-extension of a representation on a subquiver back to the ambient
// quiver. Arrows missing from the subquiver have a zero-dimensional end.
template <class S>
Rep<S> embed_from_subquiver(const Rep<S>& r, const Quiver& big) {
    std::vector<size_t> dims(big.num_vertices(), 0);
    for (size_t v = 0; v < r.dims.size(); ++v)
        dims[big.vertex_index(r.quiver.vertices()[v])] = r.dims[v];
    std::map<std::string, size_t> sub;
    for (size_t a = 0; a < r.quiver.num_arrows(); ++a) sub[r.quiver.arrows()[a].id] = a;
    std::vector<Matrix<S>> mats;
    for (const auto& ar : big.arrows()) {
        auto it = sub.find(ar.id);
        if (it != sub.end())
            mats.push_back(r.mats[it->second]);
        else
            mats.push_back(
                Matrix<S>(dims[big.vertex_index(ar.tgt)], dims[big.vertex_index(ar.src)]));
    }
    return Rep<S>(big, r.field, dims, mats);
}

template <class S>
std::vector<Matrix<S>> embed_morphism(const Quiver& sub, const Quiver& big,
                                      const std::vector<Matrix<S>>& f) {
    std::set<std::string> in(sub.vertices().begin(), sub.vertices().end());
    std::vector<Matrix<S>> out;
    for (const auto& v : big.vertices())
        out.push_back(in.count(v) ? f[sub.vertex_index(v)] : Matrix<S>(0, 0));
    return out;
}

// Kernel chain of universal morphisms: starting from the exceptional pair
// (a, b) with dim a < dim b, replace (a, b) by (ker Phi, a) for the
// universal Phi : a^d -> b until Phi is injective. The final source is Y and
// coker Phi is X; the chain walks (P_i, P_{i+1}) down to (P_0, P_1) in the
// Kronecker category the pair generates.
template <class S>
std::pair<Rep<S>, Rep<S>> schofield_xy(Rep<S> a, Rep<S> b, size_t cap) {
    for (size_t step = 0; step <= cap; ++step) {
        UniversalHom<S> phi = universal_hom(a, b);
        if (morphism_is_injective(phi.source, phi.map)) {
            auto cok = cokernel_of_morphism(phi.source, b, phi.map);
            return {std::move(cok.first), std::move(a)};
        }
        auto ker = kernel_of_morphism(phi.source, b, phi.map);
        b = std::move(a);
        a = std::move(ker.first);
    }
    throw std::logic_error("schofield_pairs: kernel iteration exceeded the dimension bound");
}

// Exact sequence 0 -> y^v -> m -> x^u -> 0 from the universal morphisms,
// with injectivity, surjectivity and exactness verified per vertex.
template <class S>
SchofieldPair<S> assemble_pair(const Rep<S>& m, Rep<S> x, Rep<S> y) {
    SchofieldPair<S> p;
    UniversalHom<S> in = universal_hom(y, m);
    std::vector<std::vector<Matrix<S>>> hb = hom_basis(m, x);
    p.v = in.copies;
    p.u = hb.size();
    if (p.v < 1 || p.u < 1)
        throw std::logic_error("schofield_pairs: sequence verification failed");
    Rep<S> xu = direct_power(x, p.u);
    std::vector<Matrix<S>> pr;
    for (size_t w = 0; w < m.dims.size(); ++w) {
        Matrix<S> block(xu.dims[w], m.dims[w]);
        for (size_t i = 0; i < hb.size(); ++i) block.set_block(i * x.dims[w], 0, hb[i][w]);
        pr.push_back(std::move(block));
    }
    bool ok = is_morphism(in.source, m, in.map) && is_morphism(m, xu, pr) &&
              morphism_is_injective(in.source, in.map) && morphism_is_surjective(xu, pr);
    for (size_t w = 0; ok && w < m.dims.size(); ++w)
        ok = (pr[w] * in.map[w]).is_zero() && in.source.dims[w] + xu.dims[w] == m.dims[w];
    if (!ok) throw std::logic_error("schofield_pairs: sequence verification failed");
    p.x = std::move(x);
    p.y = std::move(y);
    p.sub = std::move(in.source);
    p.quot = std::move(xu);
    p.inc = std::move(in.map);
    p.proj = std::move(pr);
    return p;
}

template <class S>
SchofieldPair<S> pair_from_summand(const Rep<S>& n, const Rep<S>& m) {
    Rep<S> x, y;
    size_t cap = m.total_dim();
    if (n.total_dim() < m.total_dim()) {
        auto xy = schofield_xy(n, m, cap);
        x = std::move(xy.first);
        y = std::move(xy.second);
    } else {
        // Preinjective side of the chain: run the same iteration on the
        // duals over the opposite quiver; dualizing back swaps the roles.
        auto xy = schofield_xy(dual_rep(m), dual_rep(n), cap);
        x = dual_rep(xy.second);
        y = dual_rep(xy.first);
    }
    return assemble_pair(m, std::move(x), std::move(y));
}

}  // namespace detail

// All Schofield pairs of an exceptional non-simple module, one per
// indecomposable summand class of the Bongartz complement of the support
// restriction, deduplicated up to isomorphism of (X, Y). Over an
// algebraically closed field the count is #support - 1; the caller owns
// comparing against that.
template <class S>
std::vector<SchofieldPair<S>> schofield_pairs(const Rep<S>& m, uint64_t seed = 1729) {
    if (!m.quiver.is_acyclic())
        throw std::invalid_argument("schofield_pairs: quiver has a cycle");
    if (hom_dim(m, m) != 1 || ext_dim(m, m) != 0)
        throw std::invalid_argument("schofield_pairs: module is not exceptional");
    if (m.total_dim() == 1) throw std::invalid_argument("schofield_pairs: module is simple");
    Rep<S> mr = detail::restrict_to_support(m);
    Decomposition<S> dec = decompose(bongartz_complement(mr, seed), seed);
    std::vector<SchofieldPair<S>> pairs;
    for (const auto& cls : dec.summands) {
        SchofieldPair<S> p = detail::pair_from_summand(cls.first, mr);
        bool dup = false;
        for (const auto& q : pairs)
            if (is_isomorphic(p.x, q.x, seed) && is_isomorphic(p.y, q.y, seed)) {
                dup = true;
                break;
            }
        if (!dup) pairs.push_back(std::move(p));
    }
    for (auto& p : pairs) {
        p.inc = detail::embed_morphism(mr.quiver, m.quiver, p.inc);
        p.proj = detail::embed_morphism(mr.quiver, m.quiver, p.proj);
        p.x = detail::embed_from_subquiver(p.x, m.quiver);
        p.y = detail::embed_from_subquiver(p.y, m.quiver);
        p.sub = detail::embed_from_subquiver(p.sub, m.quiver);
        p.quot = detail::embed_from_subquiver(p.quot, m.quiver);
    }
    return pairs;
}

// Cocycle in C^1(X^u, Y^v) presenting the pair's exact sequence: pick a
// section of proj and a retraction of inc per vertex and measure the failure
// of the section to be a morphism. extension_from_cocycle(sub, quot, .)
// rebuilds a module isomorphic to m.
template <class S>
std::vector<Matrix<S>> sequence_cocycle(const Rep<S>& m, const SchofieldPair<S>& p) {
    std::vector<Matrix<S>> sect, retr;
    for (size_t v = 0; v < m.dims.size(); ++v) {
        auto s = solve(p.proj[v],
                       normalize_matrix(Matrix<S>::identity(p.quot.dims[v]), m.field));
        if (!s) throw std::invalid_argument("sequence_cocycle: projection is not surjective");
        sect.push_back(std::move(*s));
        auto rt = solve(p.inc[v].transpose(),
                        normalize_matrix(Matrix<S>::identity(p.sub.dims[v]), m.field));
        if (!rt) throw std::invalid_argument("sequence_cocycle: inclusion is not injective");
        retr.push_back(rt->transpose());
    }
    std::vector<Matrix<S>> delta;
    for (size_t a = 0; a < m.quiver.num_arrows(); ++a) {
        size_t s = m.quiver.src_index(a), t = m.quiver.tgt_index(a);
        delta.push_back(retr[t] * (m.mats[a] * sect[s] - sect[t] * p.quot.mats[a]));
    }
    return delta;
}

}  // namespace qrep
