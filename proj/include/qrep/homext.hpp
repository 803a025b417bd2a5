#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "qrep/matrix.hpp"
#include "qrep/rep.hpp"

namespace qrep {

// Morphisms N -> M live in the two-term complex
//   C0 = sum_v Hom(N(v), M(v))  --d-->  C1 = sum_a Hom(N(start a), M(tip a)),
//   (d f)_a = M(a) f_{start a} - f_{tip a} N(a),
// with Hom = ker d and Ext^1 = coker d. Blocks are ordered by vertex and
// arrow position, and each Hom(U, V) block is vectorized row-major.
template <class S>
struct CochainLayout {
    std::vector<size_t> c0_off, c1_off;
    size_t c0_dim = 0, c1_dim = 0;
    std::vector<size_t> n_dims, m_dims;

    CochainLayout(const Rep<S>& n, const Rep<S>& m) : n_dims(n.dims), m_dims(m.dims) {
        if (n.quiver != m.quiver || !(n.field == m.field))
            throw std::invalid_argument("cochain: incompatible representations");
        for (size_t v = 0; v < n.dims.size(); ++v) {
            c0_off.push_back(c0_dim);
            c0_dim += m.dims[v] * n.dims[v];
        }
        for (size_t a = 0; a < n.quiver.num_arrows(); ++a) {
            c1_off.push_back(c1_dim);
            c1_dim += m.dims[n.quiver.tgt_index(a)] * n.dims[n.quiver.src_index(a)];
        }
    }

    Matrix<S> flatten0(const std::vector<Matrix<S>>& f) const {
        Matrix<S> v(c0_dim, 1);
        for (size_t w = 0; w < f.size(); ++w)
            for (size_t i = 0; i < f[w].rows(); ++i)
                for (size_t j = 0; j < f[w].cols(); ++j)
                    v.at(c0_off[w] + i * n_dims[w] + j, 0) = f[w].at(i, j);
        return v;
    }
    std::vector<Matrix<S>> unflatten0(const Matrix<S>& v, size_t col = 0) const {
        std::vector<Matrix<S>> f;
        for (size_t w = 0; w < n_dims.size(); ++w) {
            Matrix<S> b(m_dims[w], n_dims[w]);
            for (size_t i = 0; i < b.rows(); ++i)
                for (size_t j = 0; j < b.cols(); ++j)
                    b.at(i, j) = v.at(c0_off[w] + i * n_dims[w] + j, col);
            f.push_back(std::move(b));
        }
        return f;
    }
    Matrix<S> flatten1(const Quiver& q, const std::vector<Matrix<S>>& z) const {
        Matrix<S> v(c1_dim, 1);
        for (size_t a = 0; a < z.size(); ++a) {
            size_t nd = n_dims[q.src_index(a)];
            for (size_t i = 0; i < z[a].rows(); ++i)
                for (size_t j = 0; j < z[a].cols(); ++j)
                    v.at(c1_off[a] + i * nd + j, 0) = z[a].at(i, j);
        }
        return v;
    }
    std::vector<Matrix<S>> unflatten1(const Quiver& q, const Matrix<S>& v,
                                      size_t col = 0) const {
        std::vector<Matrix<S>> z;
        for (size_t a = 0; a < q.num_arrows(); ++a) {
            size_t nd = n_dims[q.src_index(a)];
            Matrix<S> b(m_dims[q.tgt_index(a)], nd);
            for (size_t i = 0; i < b.rows(); ++i)
                for (size_t j = 0; j < b.cols(); ++j) b.at(i, j) = v.at(c1_off[a] + i * nd + j, col);
            z.push_back(std::move(b));
        }
        return z;
    }
};

// Matrix of the differential d : C0 -> C1.
template <class S>
Matrix<S> hom_differential(const Rep<S>& n, const Rep<S>& m) {
    CochainLayout<S> lay(n, m);
    Matrix<S> d(lay.c1_dim, lay.c0_dim);
    const Quiver& q = n.quiver;
    for (size_t a = 0; a < q.num_arrows(); ++a) {
        size_t s = q.src_index(a), t = q.tgt_index(a);
        const Matrix<S>& ma = m.mats[a];
        const Matrix<S>& na = n.mats[a];
        // + M(a) f_s contributes M(a)_{ik} to row (a,i,j), column (s,k,j).
        for (size_t i = 0; i < m.dims[t]; ++i)
            for (size_t k = 0; k < m.dims[s]; ++k) {
                if (ma.at(i, k).is_zero()) continue;
                for (size_t j = 0; j < n.dims[s]; ++j)
                    d.at(lay.c1_off[a] + i * n.dims[s] + j,
                         lay.c0_off[s] + k * n.dims[s] + j) += ma.at(i, k);
            }
        // - f_t N(a) contributes -N(a)_{lj} to row (a,i,j), column (t,i,l).
        for (size_t l = 0; l < n.dims[t]; ++l)
            for (size_t j = 0; j < n.dims[s]; ++j) {
                if (na.at(l, j).is_zero()) continue;
                for (size_t i = 0; i < m.dims[t]; ++i)
                    d.at(lay.c1_off[a] + i * n.dims[s] + j,
                         lay.c0_off[t] + i * n.dims[t] + l) -= na.at(l, j);
            }
    }
    return d;
}

namespace detail {

// Rank of the differential without materializing the dense matrix. Rows are
// sorted (column, value) lists; each step pivots in the lightest column and
// there on the shortest row, which keeps fill-in low for the block-sparse
// differentials of structured representations.
template <class S>
size_t sparse_differential_rank(const Rep<S>& n, const Rep<S>& m,
                                const CochainLayout<S>& lay) {
    using Entry = std::pair<size_t, S>;
    const Quiver& q = n.quiver;
    std::vector<std::vector<Entry>> rows;
    rows.reserve(lay.c1_dim);
    for (size_t a = 0; a < q.num_arrows(); ++a) {
        size_t s = q.src_index(a), t = q.tgt_index(a);
        const Matrix<S>& ma = m.mats[a];
        const Matrix<S>& na = n.mats[a];
        for (size_t i = 0; i < m.dims[t]; ++i)
            for (size_t j = 0; j < n.dims[s]; ++j) {
                std::vector<Entry> ent;
                for (size_t k = 0; k < m.dims[s]; ++k)
                    if (!ma.at(i, k).is_zero())
                        ent.emplace_back(lay.c0_off[s] + k * n.dims[s] + j, ma.at(i, k));
                for (size_t l = 0; l < n.dims[t]; ++l)
                    if (!na.at(l, j).is_zero())
                        ent.emplace_back(lay.c0_off[t] + i * n.dims[t] + l, S(0) - na.at(l, j));
                std::sort(ent.begin(), ent.end(),
                          [](const Entry& x, const Entry& y) { return x.first < y.first; });
                // Positions can collide only for loop arrows; merge and drop zeros.
                std::vector<Entry> merged;
                for (auto& e : ent) {
                    if (!merged.empty() && merged.back().first == e.first)
                        merged.back().second = merged.back().second + e.second;
                    else
                        merged.push_back(std::move(e));
                }
                merged.erase(std::remove_if(merged.begin(), merged.end(),
                                            [](const Entry& e) { return e.second.is_zero(); }),
                             merged.end());
                rows.push_back(std::move(merged));
            }
    }

    size_t ncols = lay.c0_dim;
    std::vector<char> row_active(rows.size(), 1);
    std::vector<size_t> col_count(ncols, 0);
    std::vector<std::vector<size_t>> col_rows(ncols);
    for (size_t r = 0; r < rows.size(); ++r)
        for (const auto& e : rows[r]) {
            ++col_count[e.first];
            col_rows[e.first].push_back(r);
        }

    auto row_find = [](const std::vector<Entry>& row, size_t c) -> const S* {
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const Entry& e, size_t col) { return e.first < col; });
        return it != row.end() && it->first == c ? &it->second : nullptr;
    };

    size_t rk = 0;
    while (true) {
        size_t col = ncols;
        for (size_t c = 0; c < ncols; ++c)
            if (col_count[c] != 0 && (col == ncols || col_count[c] < col_count[col])) col = c;
        if (col == ncols) break;

        // col_rows is maintained lazily; compact it while picking the pivot row.
        auto& cand = col_rows[col];
        size_t pr = rows.size(), w = 0;
        for (size_t r : cand) {
            if (!row_active[r] || !row_find(rows[r], col)) continue;
            cand[w++] = r;
            if (pr == rows.size() || rows[r].size() < rows[pr].size()) pr = r;
        }
        cand.resize(w);
        if (pr == rows.size()) throw std::logic_error("sparse rank: column bookkeeping broke");

        S pinv = row_find(rows[pr], col)->inv();
        row_active[pr] = 0;
        for (const auto& e : rows[pr]) --col_count[e.first];
        ++rk;

        const std::vector<Entry>& piv = rows[pr];
        for (size_t r : cand) {
            if (r == pr || !row_active[r]) continue;
            const S* cp = row_find(rows[r], col);
            if (!cp) continue;
            S factor = *cp * pinv;
            std::vector<Entry> out;
            out.reserve(rows[r].size() + piv.size());
            size_t ia = 0, ib = 0;
            while (ia < rows[r].size() || ib < piv.size()) {
                if (ib == piv.size() ||
                    (ia < rows[r].size() && rows[r][ia].first < piv[ib].first)) {
                    out.push_back(rows[r][ia++]);
                } else if (ia == rows[r].size() || piv[ib].first < rows[r][ia].first) {
                    // Fill entry: nonzero over a field, so count it unconditionally.
                    out.emplace_back(piv[ib].first, S(0) - factor * piv[ib].second);
                    ++col_count[piv[ib].first];
                    col_rows[piv[ib].first].push_back(r);
                    ++ib;
                } else {
                    S v = rows[r][ia].second - factor * piv[ib].second;
                    if (v.is_zero())
                        --col_count[rows[r][ia].first];
                    else
                        out.emplace_back(rows[r][ia].first, std::move(v));
                    ++ia;
                    ++ib;
                }
            }
            rows[r] = std::move(out);
        }
        col_rows[col].clear();
    }
    return rk;
}

// Dense elimination wins for small problems, the sparse path for the large
// block-sparse ones; results are identical.
template <class S>
size_t differential_rank(const Rep<S>& n, const Rep<S>& m, const CochainLayout<S>& lay) {
    if (lay.c0_dim * lay.c1_dim > 200000) return sparse_differential_rank(n, m, lay);
    return rank(hom_differential(n, m));
}

}  // namespace detail

// Hom and Ext^1 dimensions from a single rank computation.
template <class S>
std::pair<size_t, size_t> hom_ext_dims(const Rep<S>& n, const Rep<S>& m) {
    CochainLayout<S> lay(n, m);
    size_t r = detail::differential_rank(n, m, lay);
    return {lay.c0_dim - r, lay.c1_dim - r};
}

// Basis of Hom(N, M), each element as its tuple of vertex maps.
template <class S>
std::vector<std::vector<Matrix<S>>> hom_basis(const Rep<S>& n, const Rep<S>& m) {
    CochainLayout<S> lay(n, m);
    Matrix<S> k = kernel_basis(hom_differential(n, m));
    std::vector<std::vector<Matrix<S>>> basis;
    for (size_t c = 0; c < k.cols(); ++c)
        basis.push_back(normalize_matrices(lay.unflatten0(k, c), m.field));
    return basis;
}

template <class S>
size_t hom_dim(const Rep<S>& n, const Rep<S>& m) {
    return hom_ext_dims(n, m).first;
}

// Ext^1(N, M) presented by cocycle representatives spanning a complement of
// the image of d. The representatives are elementary: each is a single 1 in
// one matrix slot of one arrow.
template <class S>
struct ExtSpace {
    Rep<S> sub, quot;  // Ext^1(quot, sub)
    CochainLayout<S> layout;
    Matrix<S> differential;
    std::vector<std::vector<Matrix<S>>> reps;  // per-arrow matrix tuples
    std::vector<size_t> rep_positions;         // C1 coordinates of the single 1s

    size_t dim() const { return reps.size(); }
};

template <class S>
ExtSpace<S> ext_space(const Rep<S>& n, const Rep<S>& m) {
    CochainLayout<S> lay(n, m);
    Matrix<S> d = hom_differential(n, m);
    std::vector<size_t> idx = image_complement(d);
    ExtSpace<S> e{m, n, lay, std::move(d), {}, idx};
    for (size_t pos : idx) {
        Matrix<S> unit(lay.c1_dim, 1);
        unit.at(pos, 0) = S(1);
        e.reps.push_back(normalize_matrices(lay.unflatten1(n.quiver, unit), m.field));
    }
    return e;
}

template <class S>
size_t ext_dim(const Rep<S>& n, const Rep<S>& m) {
    return hom_ext_dims(n, m).second;
}

// Coordinates of the class of a cocycle in the representative basis.
template <class S>
std::vector<S> ext_coords(const ExtSpace<S>& e, const std::vector<Matrix<S>>& cocycle) {
    Matrix<S> z = e.layout.flatten1(e.quot.quiver, cocycle);
    Matrix<S> basis(e.layout.c1_dim, e.dim());
    for (size_t c = 0; c < e.dim(); ++c) basis.at(e.rep_positions[c], c) = S(1);
    auto sol = solve(hstack(e.differential, basis), z);
    if (!sol) throw std::logic_error("ext_coords: cocycle outside C1 span");
    std::vector<S> out;
    for (size_t c = 0; c < e.dim(); ++c) out.push_back(sol->at(e.layout.c0_dim + c, 0));
    return out;
}

template <class S>
bool ext_class_is_zero(const Rep<S>& n, const Rep<S>& m, const std::vector<Matrix<S>>& cocycle) {
    CochainLayout<S> lay(n, m);
    Matrix<S> d = hom_differential(n, m);
    Matrix<S> z = lay.flatten1(n.quiver, cocycle);
    return solve(d, z).has_value();
}

// Middle term of the extension of N by M determined by a cocycle in C1(N, M):
//   X(a) = [ M(a)  delta_a ]      0 -> M -> X -> N -> 0.
//          [ 0     N(a)    ]
template <class S>
Rep<S> extension_from_cocycle(const Rep<S>& m, const Rep<S>& n,
                              const std::vector<Matrix<S>>& delta) {
    if (delta.size() != m.quiver.num_arrows())
        throw std::invalid_argument("extension_from_cocycle: wrong cocycle length");
    std::vector<size_t> dims(m.dims.size());
    for (size_t v = 0; v < dims.size(); ++v) dims[v] = m.dims[v] + n.dims[v];
    std::vector<Matrix<S>> mats;
    for (size_t a = 0; a < m.quiver.num_arrows(); ++a) {
        size_t s = m.quiver.src_index(a), t = m.quiver.tgt_index(a);
        if (delta[a].rows() != m.dims[t] || delta[a].cols() != n.dims[s])
            throw std::invalid_argument("extension_from_cocycle: cocycle shape mismatch");
        Matrix<S> x(dims[t], dims[s]);
        x.set_block(0, 0, m.mats[a]);
        x.set_block(0, m.dims[s], delta[a]);
        x.set_block(m.dims[t], m.dims[s], n.mats[a]);
        mats.push_back(std::move(x));
    }
    return Rep<S>(m.quiver, m.field, dims, mats);
}

// Morphism helpers. A morphism f : A -> B is its tuple of vertex maps.

template <class S>
std::vector<Matrix<S>> identity_morphism(const Rep<S>& a) {
    std::vector<Matrix<S>> f;
    for (size_t v = 0; v < a.dims.size(); ++v) f.push_back(Matrix<S>::identity(a.dims[v]));
    return f;
}

template <class S>
std::vector<Matrix<S>> compose_morphisms(const std::vector<Matrix<S>>& g,
                                         const std::vector<Matrix<S>>& f) {
    std::vector<Matrix<S>> r;
    for (size_t v = 0; v < f.size(); ++v) r.push_back(g[v] * f[v]);
    return r;
}

template <class S>
bool morphism_is_injective(const Rep<S>& a, const std::vector<Matrix<S>>& f) {
    for (size_t v = 0; v < f.size(); ++v)
        if (rank(f[v]) < a.dims[v]) return false;
    return true;
}

template <class S>
bool morphism_is_surjective(const Rep<S>& b, const std::vector<Matrix<S>>& f) {
    for (size_t v = 0; v < f.size(); ++v)
        if (rank(f[v]) < b.dims[v]) return false;
    return true;
}

// Kernel representation with its inclusion into A.
template <class S>
std::pair<Rep<S>, std::vector<Matrix<S>>> kernel_of_morphism(const Rep<S>& a, const Rep<S>& b,
                                                             const std::vector<Matrix<S>>& f) {
    (void)b;
    std::vector<Matrix<S>> incl;
    std::vector<size_t> dims;
    for (size_t v = 0; v < f.size(); ++v) {
        incl.push_back(normalize_matrix(kernel_basis(f[v]), a.field));
        dims.push_back(incl.back().cols());
    }
    std::vector<Matrix<S>> mats;
    for (size_t r = 0; r < a.quiver.num_arrows(); ++r) {
        size_t s = a.quiver.src_index(r), t = a.quiver.tgt_index(r);
        auto x = solve(incl[t], a.mats[r] * incl[s]);
        if (!x) throw std::logic_error("kernel_of_morphism: kernel not invariant");
        mats.push_back(std::move(*x));
    }
    return {Rep<S>(a.quiver, a.field, dims, mats), incl};
}

// Cokernel representation with the projection from B. The section used for
// the induced maps is the set of standard basis vectors completing the image.
template <class S>
std::pair<Rep<S>, std::vector<Matrix<S>>> cokernel_of_morphism(
    const Rep<S>& a, const Rep<S>& b, const std::vector<Matrix<S>>& f) {
    (void)a;
    std::vector<Matrix<S>> proj;
    std::vector<size_t> dims;
    for (size_t v = 0; v < f.size(); ++v) {
        Matrix<S> img = column_space_basis(f[v]);
        std::vector<size_t> comp = image_complement(f[v]);
        Matrix<S> ext(b.dims[v], comp.size());
        for (size_t c = 0; c < comp.size(); ++c) ext.at(comp[c], c) = S(1);
        Matrix<S> g = normalize_matrix(hstack(img, ext), b.field);
        auto gi = inverse(g);
        if (!gi) throw std::logic_error("cokernel_of_morphism: basis completion failed");
        proj.push_back(gi->block(img.cols(), 0, comp.size(), b.dims[v]));
        dims.push_back(comp.size());
    }
    std::vector<Matrix<S>> mats;
    for (size_t r = 0; r < b.quiver.num_arrows(); ++r) {
        size_t s = b.quiver.src_index(r), t = b.quiver.tgt_index(r);
        // Any preimages under proj[s] work; reuse the standard vectors.
        std::vector<size_t> comp = image_complement(f[s]);
        Matrix<S> sect(b.dims[s], comp.size());
        for (size_t c = 0; c < comp.size(); ++c) sect.at(comp[c], c) = S(1);
        mats.push_back(proj[t] * b.mats[r] * normalize_matrix(sect, b.field));
    }
    return {Rep<S>(b.quiver, b.field, dims, mats), proj};
}

// Subrepresentation induced on given invariant subspaces; basis[v] has the
// spanning vectors as columns and must have full column rank.
template <class S>
Rep<S> induced_subrep(const Rep<S>& a, const std::vector<Matrix<S>>& raw_basis) {
    std::vector<Matrix<S>> basis = normalize_matrices(raw_basis, a.field);
    std::vector<size_t> dims;
    for (size_t v = 0; v < basis.size(); ++v) dims.push_back(basis[v].cols());
    std::vector<Matrix<S>> mats;
    for (size_t r = 0; r < a.quiver.num_arrows(); ++r) {
        size_t s = a.quiver.src_index(r), t = a.quiver.tgt_index(r);
        auto x = solve(basis[t], a.mats[r] * basis[s]);
        if (!x || basis[t] * *x != a.mats[r] * basis[s])
            throw std::invalid_argument("induced_subrep: subspace not invariant");
        mats.push_back(std::move(*x));
    }
    return Rep<S>(a.quiver, a.field, dims, mats);
}

// Projective representation P_x over an acyclic quiver: the space at a
// vertex w has the paths from x to w as basis, and an arrow acts by
// appending itself to a path. Hom(P_x, M) is M(x) and Ext^1(P_x, -) = 0.
template <class S>
Rep<S> projective_rep(const Quiver& q, const FieldInfo& f, const std::string& vertex) {
    if (!q.is_acyclic()) throw std::invalid_argument("projective_rep: quiver has a cycle");
    size_t start = q.vertex_index(vertex);
    // Paths are grown breadth-first, arrows in id order, so the enumeration
    // and hence the chosen bases are deterministic.
    std::vector<std::vector<size_t>> paths{{}};
    std::vector<size_t> end{start}, local{0};
    std::map<std::vector<size_t>, size_t> pos{{{}, 0}};
    std::vector<std::vector<size_t>> at(q.num_vertices());
    at[start].push_back(0);
    for (size_t i = 0; i < paths.size(); ++i)
        for (size_t a : q.arrows_out(end[i])) {
            std::vector<size_t> p = paths[i];
            p.push_back(a);
            size_t t = q.tgt_index(a);
            pos[p] = paths.size();
            local.push_back(at[t].size());
            at[t].push_back(paths.size());
            end.push_back(t);
            paths.push_back(std::move(p));
        }
    std::vector<size_t> dims(q.num_vertices());
    for (size_t v = 0; v < dims.size(); ++v) dims[v] = at[v].size();
    std::vector<Matrix<S>> mats;
    for (size_t a = 0; a < q.num_arrows(); ++a) {
        size_t s = q.src_index(a), t = q.tgt_index(a);
        Matrix<S> m(dims[t], dims[s]);
        for (size_t j = 0; j < at[s].size(); ++j) {
            std::vector<size_t> p = paths[at[s][j]];
            p.push_back(a);
            m.at(local[pos.at(p)], j) = S(1);
        }
        mats.push_back(std::move(m));
    }
    return Rep<S>(q, f, dims, mats);
}

// The path algebra as a representation: the direct sum of all projectives
// in vertex order.
template <class S>
Rep<S> algebra_rep(const Quiver& q, const FieldInfo& f) {
    std::vector<Rep<S>> parts;
    for (const auto& v : q.vertices()) parts.push_back(projective_rep<S>(q, f, v));
    return direct_sum(parts);
}

// The evaluation W^{dim Hom(W,T)} -> T whose i-th component is the i-th
// basis homomorphism. Requires End(W) = k so that the factorization of any
// W^r -> T through the evaluation is unique.
template <class S>
struct UniversalHom {
    Rep<S> source;               // W^d
    std::vector<Matrix<S>> map;  // morphism source -> T
    size_t copies = 0;
};

template <class S>
UniversalHom<S> universal_hom(const Rep<S>& w, const Rep<S>& t) {
    if (hom_dim(w, w) != 1)
        throw std::invalid_argument("universal_hom: End dimension must be 1");
    auto basis = hom_basis(w, t);
    UniversalHom<S> u;
    u.copies = basis.size();
    u.source = direct_power(w, basis.size());
    for (size_t v = 0; v < w.dims.size(); ++v) {
        Matrix<S> m(t.dims[v], w.dims[v] * basis.size());
        for (size_t i = 0; i < basis.size(); ++i) m.set_block(0, i * w.dims[v], basis[i][v]);
        u.map.push_back(std::move(m));
    }
    return u;
}

// Minimal universal extension 0 -> y -> total -> m^copies -> 0 of objects
// in add(m) by y, with copies = dim Ext^1(m, y): the defining cocycle
// stacks a basis of Ext^1(m, y) blockwise.
template <class S>
struct UniversalExtension {
    Rep<S> total;
    std::vector<Matrix<S>> inc;   // y -> total
    std::vector<Matrix<S>> proj;  // total -> m^copies
    size_t copies = 0;
};

template <class S>
UniversalExtension<S> minimal_universal_extension_by(const Rep<S>& m, const Rep<S>& y) {
    if (hom_dim(m, m) != 1 || ext_dim(m, m) != 0)
        throw std::invalid_argument("minimal_universal_extension_by: not exceptional");
    ExtSpace<S> es = ext_space(m, y);
    size_t r = es.dim();
    Rep<S> mr = direct_power(m, r);
    std::vector<Matrix<S>> delta;
    for (size_t a = 0; a < m.quiver.num_arrows(); ++a) {
        size_t s = m.quiver.src_index(a), t = m.quiver.tgt_index(a);
        Matrix<S> d(y.dims[t], r * m.dims[s]);
        for (size_t i = 0; i < r; ++i) d.set_block(0, i * m.dims[s], es.reps[i][a]);
        delta.push_back(std::move(d));
    }
    UniversalExtension<S> u;
    u.copies = r;
    u.total = extension_from_cocycle(y, mr, delta);
    for (size_t v = 0; v < y.dims.size(); ++v) {
        Matrix<S> in(u.total.dims[v], y.dims[v]);
        in.set_block(0, 0, Matrix<S>::identity(y.dims[v]));
        Matrix<S> pr(mr.dims[v], u.total.dims[v]);
        pr.set_block(0, y.dims[v], Matrix<S>::identity(mr.dims[v]));
        u.inc.push_back(normalize_matrix(in, m.field));
        u.proj.push_back(normalize_matrix(pr, m.field));
    }
    // Universality: the connecting map Hom(m, m^r) -> Ext^1(m, y), which
    // pulls the stacked cocycle back along a hom, must be bijective.
    std::vector<std::vector<Matrix<S>>> hb = hom_basis(m, mr);
    if (hb.size() != r)
        throw std::logic_error("minimal_universal_extension_by: universality check failed");
    Matrix<S> conn(r, r);
    for (size_t c = 0; c < r; ++c) {
        std::vector<Matrix<S>> back;
        for (size_t a = 0; a < m.quiver.num_arrows(); ++a)
            back.push_back(delta[a] * hb[c][m.quiver.src_index(a)]);
        std::vector<S> co = ext_coords(es, back);
        for (size_t k = 0; k < r; ++k) conn.at(k, c) = co[k];
    }
    if (rank(normalize_matrix(conn, m.field)) != r)
        throw std::logic_error("minimal_universal_extension_by: universality check failed");
    return u;
}

// End(M) as a basis of vertex-map tuples, flattened coordinates, and exact
// structure constants: sc[i][j] holds the coordinates of basis[i] composed
// with basis[j].
template <class S>
struct EndAlgebra {
    Rep<S> rep;
    std::vector<std::vector<Matrix<S>>> basis;
    Matrix<S> flat;  // columns are the flattened basis elements
    std::vector<std::vector<std::vector<S>>> sc;
    std::vector<S> one;  // coordinates of the identity endomorphism

    size_t dim() const { return basis.size(); }

    std::vector<S> coords(const std::vector<Matrix<S>>& f) const {
        CochainLayout<S> lay(rep, rep);
        auto sol = solve(flat, lay.flatten0(f));
        if (!sol || flat * *sol != lay.flatten0(f))
            throw std::logic_error("EndAlgebra: element outside the algebra");
        std::vector<S> c;
        for (size_t i = 0; i < dim(); ++i)
            c.push_back(scalar_traits<S>::normalize(sol->at(i, 0), rep.field));
        return c;
    }

    std::vector<Matrix<S>> element(const std::vector<S>& coeff) const {
        std::vector<Matrix<S>> f;
        for (size_t v = 0; v < rep.dims.size(); ++v) {
            Matrix<S> m(rep.dims[v], rep.dims[v]);
            for (size_t i = 0; i < basis.size(); ++i)
                if (!coeff[i].is_zero()) m = m + basis[i][v].scaled(coeff[i]);
            f.push_back(std::move(m));
        }
        return f;
    }
};

template <class S>
EndAlgebra<S> end_algebra(const Rep<S>& m) {
    EndAlgebra<S> e;
    e.rep = m;
    e.basis = hom_basis(m, m);
    CochainLayout<S> lay(m, m);
    e.flat = Matrix<S>(lay.c0_dim, e.basis.size());
    for (size_t i = 0; i < e.basis.size(); ++i) {
        Matrix<S> v = lay.flatten0(e.basis[i]);
        for (size_t r = 0; r < lay.c0_dim; ++r) e.flat.at(r, i) = v.at(r, 0);
    }
    size_t n = e.basis.size();
    if (n > 0) {
        Matrix<S> prods(lay.c0_dim, n * n);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                Matrix<S> p = lay.flatten0(compose_morphisms(e.basis[i], e.basis[j]));
                for (size_t r = 0; r < lay.c0_dim; ++r) prods.at(r, i * n + j) = p.at(r, 0);
            }
        auto sol = solve(e.flat, prods);
        if (!sol) throw std::logic_error("end_algebra: composition outside the algebra");
        e.sc.assign(n, std::vector<std::vector<S>>(n, std::vector<S>(n)));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                for (size_t k = 0; k < n; ++k)
                    e.sc[i][j][k] = scalar_traits<S>::normalize(sol->at(k, i * n + j), m.field);
        e.one = e.coords(identity_morphism(m));
    }
    return e;
}

}  // namespace qrep
