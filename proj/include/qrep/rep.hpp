#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qrep/matrix.hpp"
#include "qrep/quiver.hpp"
#include "qrep/scalar.hpp"

namespace qrep {

// Finite-dimensional representation. dims and mats are indexed by the
// quiver's sorted vertex and arrow positions; the matrix of an arrow maps
// the space at its start to the space at its tip, acting on column vectors,
// so it has shape dims[tip] x dims[start]. Construction normalizes every
// entry into the stated field.
template <class S>
struct Rep {
    Quiver quiver;
    FieldInfo field;
    std::vector<size_t> dims;
    std::vector<Matrix<S>> mats;

    Rep() : field(FieldInfo::Q()) {}
    Rep(Quiver q, FieldInfo f, std::vector<size_t> d, std::vector<Matrix<S>> m)
        : quiver(std::move(q)), field(f), dims(std::move(d)), mats(std::move(m)) {
        if (dims.size() != quiver.num_vertices())
            throw std::invalid_argument("Rep: dimension vector size mismatch");
        if (mats.size() != quiver.num_arrows())
            throw std::invalid_argument("Rep: matrix list size mismatch");
        for (size_t a = 0; a < mats.size(); ++a) {
            if (mats[a].rows() != dims[quiver.tgt_index(a)] ||
                mats[a].cols() != dims[quiver.src_index(a)])
                throw std::invalid_argument("Rep: matrix shape mismatch at arrow " +
                                            quiver.arrow(a).id);
            Matrix<S> norm(mats[a].rows(), mats[a].cols());
            for (size_t i = 0; i < mats[a].rows(); ++i)
                for (size_t j = 0; j < mats[a].cols(); ++j)
                    norm.at(i, j) = scalar_traits<S>::normalize(mats[a].at(i, j), field);
            mats[a] = std::move(norm);
        }
    }

    size_t dim(const std::string& vertex) const { return dims[quiver.vertex_index(vertex)]; }
    const Matrix<S>& mat(const std::string& arrow) const {
        return mats[quiver.arrow_index(arrow)];
    }
    size_t total_dim() const {
        size_t t = 0;
        for (size_t d : dims) t += d;
        return t;
    }
    bool is_zero() const { return total_dim() == 0; }

    std::vector<std::string> support() const {
        std::vector<std::string> s;
        for (size_t v = 0; v < dims.size(); ++v)
            if (dims[v] > 0) s.push_back(quiver.vertex(v));
        return s;
    }

    bool operator==(const Rep& o) const {
        return quiver == o.quiver && field == o.field && dims == o.dims && mats == o.mats;
    }
    bool operator!=(const Rep& o) const { return !(*this == o); }
};

// Stamps every entry with the field. Matrices produced by field-agnostic
// helpers (identity blocks, kernel bases with their unit free coordinates)
// must pass through here before further elimination over F_p, where
// unreduced literal values would be unsound.
template <class S>
Matrix<S> normalize_matrix(Matrix<S> m, const FieldInfo& f) {
    for (size_t i = 0; i < m.rows(); ++i)
        for (size_t j = 0; j < m.cols(); ++j)
            m.at(i, j) = scalar_traits<S>::normalize(m.at(i, j), f);
    return m;
}

template <class S>
std::vector<Matrix<S>> normalize_matrices(std::vector<Matrix<S>> ms, const FieldInfo& f) {
    for (auto& m : ms) m = normalize_matrix(std::move(m), f);
    return ms;
}

template <class S>
Rep<S> zero_rep(const Quiver& q, const FieldInfo& f) {
    std::vector<size_t> dims(q.num_vertices(), 0);
    std::vector<Matrix<S>> mats;
    for (size_t a = 0; a < q.num_arrows(); ++a)
        mats.emplace_back(dims[q.tgt_index(a)], dims[q.src_index(a)]);
    return Rep<S>(q, f, dims, mats);
}

template <class S>
Rep<S> simple_rep(const Quiver& q, const FieldInfo& f, const std::string& vertex) {
    std::vector<size_t> dims(q.num_vertices(), 0);
    dims[q.vertex_index(vertex)] = 1;
    std::vector<Matrix<S>> mats;
    for (size_t a = 0; a < q.num_arrows(); ++a)
        mats.emplace_back(dims[q.tgt_index(a)], dims[q.src_index(a)]);
    return Rep<S>(q, f, dims, mats);
}

template <class S>
Rep<S> direct_sum(const Rep<S>& a, const Rep<S>& b) {
    if (a.quiver != b.quiver || !(a.field == b.field))
        throw std::invalid_argument("direct_sum: incompatible representations");
    std::vector<size_t> dims(a.dims.size());
    for (size_t v = 0; v < dims.size(); ++v) dims[v] = a.dims[v] + b.dims[v];
    std::vector<Matrix<S>> mats;
    for (size_t r = 0; r < a.mats.size(); ++r) {
        size_t s = a.quiver.src_index(r), t = a.quiver.tgt_index(r);
        Matrix<S> m(dims[t], dims[s]);
        m.set_block(0, 0, a.mats[r]);
        m.set_block(a.dims[t], a.dims[s], b.mats[r]);
        mats.push_back(std::move(m));
    }
    return Rep<S>(a.quiver, a.field, dims, mats);
}

template <class S>
Rep<S> direct_sum(const std::vector<Rep<S>>& parts) {
    if (parts.empty()) throw std::invalid_argument("direct_sum: empty list");
    Rep<S> r = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) r = direct_sum(r, parts[i]);
    return r;
}

template <class S>
Rep<S> direct_power(const Rep<S>& a, size_t n) {
    if (n == 0) return zero_rep<S>(a.quiver, a.field);
    Rep<S> r = a;
    for (size_t i = 1; i < n; ++i) r = direct_sum(r, a);
    return r;
}

// Dual representation over the opposite quiver: same spaces, transposed
// matrices.
template <class S>
Rep<S> dual_rep(const Rep<S>& a) {
    Quiver op = a.quiver.opposite();
    std::vector<Matrix<S>> mats;
    for (size_t r = 0; r < a.mats.size(); ++r) mats.push_back(a.mats[r].transpose());
    return Rep<S>(op, a.field, a.dims, mats);
}

// Rename vertices by a bijection; arrow ids are kept. Dimension and matrix
// data follow their vertices and arrows into the re-sorted order.
template <class S>
Rep<S> rename_vertices(const Rep<S>& a, const std::map<std::string, std::string>& names) {
    std::vector<std::string> verts;
    for (const auto& v : a.quiver.vertices()) {
        auto it = names.find(v);
        verts.push_back(it == names.end() ? v : it->second);
    }
    std::vector<Quiver::Arrow> arrows;
    for (const auto& ar : a.quiver.arrows()) {
        auto s = names.find(ar.src), t = names.find(ar.tgt);
        arrows.push_back({ar.id, s == names.end() ? ar.src : s->second,
                          t == names.end() ? ar.tgt : t->second});
    }
    Quiver q(verts, arrows);
    std::vector<size_t> dims(q.num_vertices());
    for (size_t v = 0; v < verts.size(); ++v) dims[q.vertex_index(verts[v])] = a.dims[v];
    std::vector<Matrix<S>> mats(q.num_arrows());
    for (size_t r = 0; r < arrows.size(); ++r) mats[q.arrow_index(arrows[r].id)] = a.mats[r];
    return Rep<S>(q, a.field, dims, mats);
}

template <class S, class Rng>
Rep<S> random_rep(const Quiver& q, const FieldInfo& f, const std::vector<size_t>& dims,
                  Rng& rng) {
    std::vector<Matrix<S>> mats;
    for (size_t a = 0; a < q.num_arrows(); ++a) {
        Matrix<S> m(dims[q.tgt_index(a)], dims[q.src_index(a)]);
        for (size_t i = 0; i < m.rows(); ++i)
            for (size_t j = 0; j < m.cols(); ++j) m.at(i, j) = random_scalar<S>(rng, f);
        mats.push_back(std::move(m));
    }
    return Rep<S>(q, f, dims, mats);
}

// The representation in new coordinates: the columns of basis[v] express a
// new basis of the space at v, and matrices become B_tip^{-1} M B_start.
template <class S>
Rep<S> change_basis(const Rep<S>& a, const std::vector<Matrix<S>>& raw_basis) {
    if (raw_basis.size() != a.quiver.num_vertices())
        throw std::invalid_argument("change_basis: basis list size mismatch");
    std::vector<Matrix<S>> basis = normalize_matrices(raw_basis, a.field);
    std::vector<Matrix<S>> inv(basis.size());
    for (size_t v = 0; v < basis.size(); ++v) {
        if (basis[v].rows() != a.dims[v] || basis[v].cols() != a.dims[v])
            throw std::invalid_argument("change_basis: basis shape mismatch");
        auto bi = inverse(basis[v]);
        if (!bi) throw std::invalid_argument("change_basis: singular basis matrix");
        inv[v] = *bi;
    }
    std::vector<Matrix<S>> mats;
    for (size_t r = 0; r < a.mats.size(); ++r)
        mats.push_back(inv[a.quiver.tgt_index(r)] * a.mats[r] * basis[a.quiver.src_index(r)]);
    return Rep<S>(a.quiver, a.field, a.dims, mats);
}

// Restriction to the full subquiver on a vertex subset.
template <class S>
Rep<S> restrict_rep(const Rep<S>& a, const std::vector<std::string>& vertices) {
    std::set<std::string> keep(vertices.begin(), vertices.end());
    std::vector<std::string> verts(keep.begin(), keep.end());
    for (const auto& v : verts) a.quiver.vertex_index(v);
    std::vector<Quiver::Arrow> arrows;
    for (const auto& ar : a.quiver.arrows())
        if (keep.count(ar.src) && keep.count(ar.tgt)) arrows.push_back(ar);
    Quiver q(verts, arrows);
    std::vector<size_t> dims(q.num_vertices());
    for (size_t v = 0; v < q.num_vertices(); ++v)
        dims[v] = a.dims[a.quiver.vertex_index(q.vertex(v))];
    std::vector<Matrix<S>> mats;
    for (size_t r = 0; r < q.num_arrows(); ++r)
        mats.push_back(a.mats[a.quiver.arrow_index(q.arrow(r).id)]);
    return Rep<S>(q, a.field, dims, mats);
}

// Inverse of restrict_rep: place a representation of an induced subquiver
// back into the ambient quiver, zero elsewhere.
template <class S>
Rep<S> extend_by_zeros(const Rep<S>& a, const Quiver& ambient) {
    for (const auto& v : a.quiver.vertices()) ambient.vertex_index(v);
    std::vector<size_t> dims(ambient.num_vertices(), 0);
    for (size_t v = 0; v < a.quiver.num_vertices(); ++v)
        dims[ambient.vertex_index(a.quiver.vertex(v))] = a.dims[v];
    std::vector<Matrix<S>> mats;
    for (size_t r = 0; r < ambient.num_arrows(); ++r) {
        const auto& ar = ambient.arrow(r);
        if (a.quiver.has_vertex(ar.src) && a.quiver.has_vertex(ar.tgt))
            mats.push_back(a.mats[a.quiver.arrow_index(ar.id)]);
        else
            mats.emplace_back(dims[ambient.tgt_index(r)], dims[ambient.src_index(r)]);
    }
    return Rep<S>(ambient, a.field, dims, mats);
}

// A morphism M -> N is a tuple of vertex maps f[v] with f_tip M(a) = N(a) f_start.
template <class S>
bool is_morphism(const Rep<S>& m, const Rep<S>& n, const std::vector<Matrix<S>>& f) {
    if (f.size() != m.quiver.num_vertices()) return false;
    for (size_t v = 0; v < f.size(); ++v)
        if (f[v].rows() != n.dims[v] || f[v].cols() != m.dims[v]) return false;
    for (size_t a = 0; a < m.mats.size(); ++a) {
        size_t s = m.quiver.src_index(a), t = m.quiver.tgt_index(a);
        if (f[t] * m.mats[a] != n.mats[a] * f[s]) return false;
    }
    return true;
}

// Euler form of the quiver; depends only on dimension vectors.
inline long long euler_form(const Quiver& q, const std::vector<long long>& d,
                            const std::vector<long long>& e) {
    if (d.size() != q.num_vertices() || e.size() != q.num_vertices())
        throw std::invalid_argument("euler_form: dimension vector size mismatch");
    long long t = 0;
    for (size_t v = 0; v < d.size(); ++v) t += d[v] * e[v];
    for (size_t a = 0; a < q.num_arrows(); ++a) t -= d[q.src_index(a)] * e[q.tgt_index(a)];
    return t;
}

inline long long tits_form(const Quiver& q, const std::vector<long long>& d) {
    return euler_form(q, d, d);
}

template <class S>
std::vector<long long> dim_vector(const Rep<S>& a) {
    std::vector<long long> d;
    for (size_t v : a.dims) d.push_back(static_cast<long long>(v));
    return d;
}

}  // namespace qrep
