#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "qrep/homext.hpp"
#include "qrep/poly.hpp"
#include "qrep/rep.hpp"

namespace qrep {

// Associative algebra by structure constants over a fixed basis.
template <class S>
struct AbstractAlgebra {
    size_t n = 0;
    std::vector<std::vector<std::vector<S>>> sc;  // sc[i][j] = coords of b_i b_j
    std::vector<S> one;

    std::vector<S> mul(const std::vector<S>& a, const std::vector<S>& b) const {
        std::vector<S> r(n, S(0));
        for (size_t i = 0; i < n; ++i) {
            if (a[i].is_zero()) continue;
            for (size_t j = 0; j < n; ++j) {
                if (b[j].is_zero()) continue;
                S c = a[i] * b[j];
                for (size_t k = 0; k < n; ++k) r[k] += c * sc[i][j][k];
            }
        }
        return r;
    }
    Matrix<S> left_mult(const std::vector<S>& a) const {
        Matrix<S> l(n, n);
        for (size_t j = 0; j < n; ++j) {
            std::vector<S> e(n, S(0));
            e[j] = S(1);
            std::vector<S> c = mul(a, e);
            for (size_t k = 0; k < n; ++k) l.at(k, j) = c[k];
        }
        return l;
    }
    bool is_commutative() const {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                if (sc[i][j] != sc[j][i]) return false;
        return true;
    }
};

template <class S>
AbstractAlgebra<S> algebra_table(const EndAlgebra<S>& e) {
    AbstractAlgebra<S> a;
    a.n = e.dim();
    a.sc = e.sc;
    a.one = e.one;
    return a;
}

namespace detail {

// Jacobson radical, as column coordinates over the algebra basis. Over Q
// this is the kernel of the trace form of the regular representation; in
// characteristic p the trace condition is iterated with higher
// characteristic-polynomial coefficients c_{p^t}, which on the shrinking
// chain of subspaces are F_p-linear in each argument.
template <class S>
Matrix<S> radical_basis(const AbstractAlgebra<S>& alg, const FieldInfo& field) {
    size_t n = alg.n;
    std::vector<Matrix<S>> lm;
    for (size_t i = 0; i < n; ++i) {
        std::vector<S> e(n, S(0));
        e[i] = S(1);
        lm.push_back(alg.left_mult(e));
    }
    // Current subspace basis as columns; starts as the whole algebra.
    Matrix<S> cur = normalize_matrix(Matrix<S>::identity(n), field);
    long long pt = 1;  // p^t, with t = 0 first (plain trace)
    while (true) {
        size_t k = cur.cols();
        if (k == 0) return cur;
        Matrix<S> cond(k, k);
        for (size_t xi = 0; xi < k; ++xi)
            for (size_t yj = 0; yj < k; ++yj) {
                // z = (basis x_i) * (basis y_j) in algebra coordinates.
                std::vector<S> x(n), y(n);
                for (size_t r = 0; r < n; ++r) {
                    x[r] = cur.at(r, xi);
                    y[r] = cur.at(r, yj);
                }
                std::vector<S> z = alg.mul(x, y);
                Matrix<S> lz(n, n);
                for (size_t r = 0; r < n; ++r)
                    if (!z[r].is_zero()) lz = lz + lm[r].scaled(z[r]);
                if (pt == 1) {
                    cond.at(yj, xi) = trace(lz);
                } else {
                    auto cp = charpoly(lz);
                    cond.at(yj, xi) = cp[n - static_cast<size_t>(pt)];
                }
            }
        Matrix<S> ker = normalize_matrix(kernel_basis(cond), field);
        cur = cur * ker;
        if (field.rational) return cur;  // one trace-form pass suffices in char 0
        pt *= field.p;
        if (static_cast<unsigned long long>(pt) > static_cast<unsigned long long>(n)) return cur;
    }
}

}  // namespace detail

enum class Locality { Local, NotLocal, Indeterminate };

// Exact locality test for End(M) given by structure constants. Decisive
// over prime fields (the semisimple quotient is a division ring iff it is
// commutative with one-dimensional Frobenius fixed space); over Q a
// quotient that is provably a field certifies Local, a coprime minimal
// polynomial split certifies NotLocal, anything else is Indeterminate.
template <class S>
Locality algebra_locality(const AbstractAlgebra<S>& alg, const FieldInfo& field,
                          uint64_t seed = 1729) {
    size_t n = alg.n;
    if (n == 0) return Locality::NotLocal;
    if (n == 1) return Locality::Local;
    Matrix<S> rad = detail::radical_basis(alg, field);
    size_t q = n - rad.cols();
    if (q == 1) return Locality::Local;

    // Quotient algebra on the standard vectors completing the radical.
    std::vector<size_t> comp = image_complement(rad);
    Matrix<S> lift(n, q);
    for (size_t c = 0; c < q; ++c) lift.at(comp[c], c) = S(1);
    lift = normalize_matrix(std::move(lift), field);
    Matrix<S> par = hstack(rad, lift);  // coordinates: radical part, class part
    auto pari = inverse(par);
    if (!pari) throw std::logic_error("algebra_locality: radical complement not a basis");
    AbstractAlgebra<S> quo;
    quo.n = q;
    quo.sc.assign(q, std::vector<std::vector<S>>(q, std::vector<S>(q)));
    auto project = [&](const std::vector<S>& v) {
        std::vector<S> r(q);
        for (size_t c = 0; c < q; ++c) {
            S acc(0);
            for (size_t i = 0; i < n; ++i) acc += pari->at(rad.cols() + c, i) * v[i];
            r[c] = acc;
        }
        return r;
    };
    auto lift_vec = [&](const std::vector<S>& v) {
        std::vector<S> r(n, S(0));
        for (size_t c = 0; c < q; ++c)
            if (!v[c].is_zero())
                for (size_t i = 0; i < n; ++i) r[i] += lift.at(i, c) * v[c];
        return r;
    };
    for (size_t i = 0; i < q; ++i)
        for (size_t j = 0; j < q; ++j) {
            std::vector<S> vi(q, S(0)), vj(q, S(0));
            vi[i] = S(1);
            vj[j] = S(1);
            quo.sc[i][j] = project(alg.mul(lift_vec(vi), lift_vec(vj)));
        }
    quo.one = project(alg.one);

    bool comm = quo.is_commutative();
    if (!field.rational) {
        if (!comm) return Locality::NotLocal;  // Wedderburn: finite division rings are fields
        // Frobenius x -> x^p is linear over the prime field on a commutative
        // semisimple quotient; fixed space has dimension = number of factors.
        Matrix<S> frob(q, q);
        for (size_t j = 0; j < q; ++j) {
            std::vector<S> e(q, S(0));
            e[j] = S(1);
            std::vector<S> pw = quo.one;
            long long r = field.p;
            std::vector<S> sq = e;
            while (r) {
                if (r & 1) pw = quo.mul(pw, sq);
                sq = quo.mul(sq, sq);
                r >>= 1;
            }
            for (size_t i = 0; i < q; ++i) frob.at(i, j) = pw[i];
        }
        Matrix<S> fix = kernel_basis(frob - Matrix<S>::identity(q));
        return fix.cols() == 1 ? Locality::Local : Locality::NotLocal;
    }
    // Rational case: hunt for a certificate either way.
    std::mt19937_64 rng(seed);
    for (size_t trial = 0; trial < q + 8; ++trial) {
        std::vector<S> v(q, S(0));
        if (trial < q)
            v[trial] = S(1);
        else
            for (size_t i = 0; i < q; ++i) v[i] = random_scalar<S>(rng, field);
        Poly<S> mp = minpoly(quo.left_mult(v), field);
        auto sp = try_split_poly(mp, field, seed);
        if (sp.status == SplitStatus::Split) return Locality::NotLocal;
        if (comm && sp.status == SplitStatus::PrimePower &&
            mp.degree() == static_cast<int>(q)) {
            // Primitive element with irreducible minimal polynomial: the
            // quotient is a field.
            auto cls = squarefree_decomposition(mp, field);
            if (cls.size() == 1 && cls[0].second == 1) return Locality::Local;
        }
    }
    return Locality::Indeterminate;
}

// Literal Fitting splitting along an endomorphism: M = ker(e^N) + im(e^N)
// with N the total dimension. Present exactly when e is neither nilpotent
// nor invertible.
template <class S>
std::optional<std::pair<Rep<S>, Rep<S>>> fitting_split(const Rep<S>& m,
                                                       const std::vector<Matrix<S>>& e) {
    if (!is_morphism(m, m, e))
        throw std::invalid_argument("fitting_split: not an endomorphism");
    size_t n = m.total_dim();
    std::vector<Matrix<S>> pw = e;
    for (size_t v = 0; v < pw.size(); ++v) {
        Matrix<S> acc = Matrix<S>::identity(m.dims[v]);
        Matrix<S> base = e[v];
        size_t r = n;
        while (r) {
            if (r & 1) acc = acc * base;
            base = base * base;
            r >>= 1;
        }
        pw[v] = acc;
    }
    std::vector<Matrix<S>> ker, img;
    size_t kdim = 0, idim = 0;
    for (size_t v = 0; v < pw.size(); ++v) {
        ker.push_back(kernel_basis(pw[v]));
        img.push_back(column_space_basis(pw[v]));
        kdim += ker.back().cols();
        idim += img.back().cols();
    }
    if (kdim == 0 || idim == 0) return std::nullopt;
    return std::make_pair(induced_subrep(m, ker), induced_subrep(m, img));
}

namespace detail {

// Split M along an endomorphism whose minimal polynomial admits a coprime
// factorization mu = f1 f2: then M = ker f1(e) + ker f2(e). Returns the two
// subspace bases in M's coordinates. Catches splittings the plain Fitting
// construction misses, e.g. invertible e with two eigenvalues.
template <class S>
std::optional<std::pair<std::vector<Matrix<S>>, std::vector<Matrix<S>>>> split_along(
    const Rep<S>& m, const std::vector<Matrix<S>>& e, uint64_t seed) {
    Poly<S> mu = Poly<S>::constant(scalar_traits<S>::from_long(1, m.field));
    for (size_t v = 0; v < e.size(); ++v)
        if (e[v].rows() > 0) mu = poly_lcm(mu, minpoly(e[v], m.field));
    if (mu.degree() <= 1) return std::nullopt;
    auto sp = try_split_poly(mu, m.field, seed);
    if (sp.status != SplitStatus::Split) return std::nullopt;
    std::vector<Matrix<S>> u, w;
    size_t ud = 0, wd = 0;
    for (size_t v = 0; v < e.size(); ++v) {
        u.push_back(normalize_matrix(kernel_basis(eval_matrix(sp.f1, e[v])), m.field));
        w.push_back(normalize_matrix(kernel_basis(eval_matrix(sp.f2, e[v])), m.field));
        ud += u.back().cols();
        wd += w.back().cols();
    }
    if (ud == 0 || wd == 0 || ud + wd != m.total_dim())
        throw std::logic_error("split_along: coprime factors failed to split");
    return std::make_pair(std::move(u), std::move(w));
}

template <class S>
std::vector<Matrix<S>> random_end_element(const EndAlgebra<S>& e, std::mt19937_64& rng,
                                          const FieldInfo& field) {
    std::vector<S> c(e.dim());
    for (size_t i = 0; i < c.size(); ++i) c[i] = random_scalar<S>(rng, field);
    return e.element(c);
}

// Endomorphism candidates likely to reveal a splitting: basis elements,
// a bounded exhaustive sweep of small combinations, then seeded random
// combinations.
template <class S>
std::optional<std::pair<std::vector<Matrix<S>>, std::vector<Matrix<S>>>> find_split(
    const Rep<S>& m, const EndAlgebra<S>& end, uint64_t seed, size_t random_draws) {
    size_t n = end.dim();
    for (size_t i = 0; i < n; ++i)
        if (auto s = split_along(m, end.basis[i], seed)) return s;
    // Exhaustive sweep over small coefficient tuples when affordable.
    double combos = 1;
    long long radius = scalar_traits<S>::is_rational ? 5 : m.field.p;
    for (size_t i = 0; i < n && combos < 3e4; ++i) combos *= static_cast<double>(radius);
    if (combos < 3e4) {
        std::vector<long long> digits(n, 0);
        while (true) {
            size_t pos = 0;
            while (pos < n && digits[pos] == radius - 1) digits[pos++] = 0;
            if (pos == n) break;
            ++digits[pos];
            std::vector<S> c(n);
            for (size_t i = 0; i < n; ++i)
                c[i] = scalar_traits<S>::is_rational
                           ? S(static_cast<long>(digits[i] - 2))
                           : scalar_traits<S>::from_long(digits[i], m.field);
            bool zero = true;
            for (const auto& x : c) zero = zero && x.is_zero();
            if (zero) continue;
            if (auto s = split_along(m, end.element(c), seed)) return s;
        }
    }
    std::mt19937_64 rng(seed);
    for (size_t t = 0; t < random_draws; ++t)
        if (auto s = split_along(m, random_end_element(end, rng, m.field), seed + t)) return s;
    return std::nullopt;
}

}  // namespace detail

struct IndecompOptions {
    uint64_t seed = 1729;
    bool paranoid = false;
};

// Indecomposability = locality of End. Procedure: reject via any Fitting or
// minimal-polynomial splitting over basis elements, small combinations, and
// seeded random combinations; when no splitting appears, an exact locality
// computation arbitrates whenever it is cheap, the field is small, or
// paranoid mode asks for it. Otherwise the randomized evidence is accepted.
template <class S>
bool is_indecomposable(const Rep<S>& m, const IndecompOptions& opt = {}) {
    if (m.is_zero()) throw std::invalid_argument("is_indecomposable: zero representation");
    EndAlgebra<S> end = end_algebra(m);
    size_t n = end.dim();
    if (n == 1) return true;
    if (auto s = detail::find_split(m, end, opt.seed, 3 * n)) return false;
    bool small_field = !m.field.rational && static_cast<size_t>(m.field.p) <= n;
    bool cheap = m.total_dim() <= 40 && n <= 12;
    if (opt.paranoid || small_field || cheap) {
        Locality loc = algebra_locality(algebra_table(end), m.field, opt.seed);
        if (loc == Locality::Local) return true;
        if (loc == Locality::NotLocal) {
            // A splitting exists; hunt harder before giving up.
            if (detail::find_split(m, end, opt.seed + 1, 30 * n + 100)) return false;
            throw std::logic_error(
                "is_indecomposable: End is not local but no splitting element was found");
        }
        // Indeterminate: a rational division-algebra quotient resisted
        // certification; fall through to the randomized verdict.
    }
    return true;
}

// Invertible intertwiner search; returns a witness when found.
template <class S>
std::optional<std::vector<Matrix<S>>> find_isomorphism(const Rep<S>& m, const Rep<S>& n,
                                                       uint64_t seed = 1729) {
    if (m.quiver != n.quiver || !(m.field == n.field))
        throw std::invalid_argument("find_isomorphism: incompatible representations");
    if (m.dims != n.dims) return std::nullopt;
    if (m.total_dim() == 0) return std::optional<std::vector<Matrix<S>>>(identity_morphism(m));
    auto basis = hom_basis(m, n);
    size_t d = basis.size();
    auto invertible_everywhere = [&](const std::vector<Matrix<S>>& f) {
        for (size_t v = 0; v < f.size(); ++v)
            if (!is_invertible(f[v])) return false;
        return true;
    };
    for (const auto& b : basis)
        if (invertible_everywhere(b)) return b;
    auto combine = [&](const std::vector<S>& c) {
        std::vector<Matrix<S>> f;
        for (size_t v = 0; v < m.dims.size(); ++v) {
            Matrix<S> fv(n.dims[v], m.dims[v]);
            for (size_t i = 0; i < d; ++i)
                if (!c[i].is_zero()) fv = fv + basis[i][v].scaled(c[i]);
            f.push_back(std::move(fv));
        }
        return f;
    };
    std::mt19937_64 rng(seed);
    for (int t = 0; t < 20; ++t) {
        std::vector<S> c(d);
        for (size_t i = 0; i < d; ++i) c[i] = random_scalar<S>(rng, m.field);
        auto f = combine(c);
        if (invertible_everywhere(f)) return f;
    }
    // Exhaustive search over small hom spaces.
    bool feasible = false;
    long long radius = 0;
    if (!m.field.rational && d <= 3) {
        double total = 1;
        for (size_t i = 0; i < d; ++i) total *= static_cast<double>(m.field.p);
        feasible = total <= 1e5;
        radius = m.field.p;
    } else if (m.field.rational && d <= 3) {
        feasible = true;
        radius = 7;  // coefficients -3..3
    }
    if (feasible && d > 0) {
        std::vector<long long> digits(d, 0);
        while (true) {
            size_t pos = 0;
            while (pos < d && digits[pos] == radius - 1) digits[pos++] = 0;
            if (pos == d) break;
            ++digits[pos];
            std::vector<S> c(d);
            for (size_t i = 0; i < d; ++i)
                c[i] = m.field.rational ? S(static_cast<long>(digits[i] - 3))
                                        : scalar_traits<S>::from_long(digits[i], m.field);
            auto f = combine(c);
            if (invertible_everywhere(f)) return f;
        }
    }
    return std::nullopt;
}

template <class S>
bool is_isomorphic(const Rep<S>& m, const Rep<S>& n, uint64_t seed = 1729) {
    return find_isomorphism(m, n, seed).has_value();
}

template <class S>
struct Decomposition {
    std::vector<std::pair<Rep<S>, size_t>> summands;  // representative, multiplicity
    std::vector<Matrix<S>> change_of_basis;           // per-vertex invertible

    size_t total_summands() const {
        size_t t = 0;
        for (const auto& [r, m] : summands) t += m;
        return t;
    }
};

// Krull-Remak-Schmidt decomposition by repeated splitting. Isomorphic
// summands are grouped, and the change of basis conjugates the input to the
// block-diagonal sum of the grouped representatives.
template <class S>
Decomposition<S> decompose(const Rep<S>& m, uint64_t seed = 1729) {
    struct Part {
        std::vector<Matrix<S>> basis;  // columns, in m's coordinates
        Rep<S> rep;
    };
    std::vector<Part> work, finals;
    if (m.total_dim() > 0) {
        Part whole;
        for (size_t v = 0; v < m.dims.size(); ++v)
            whole.basis.push_back(normalize_matrix(Matrix<S>::identity(m.dims[v]), m.field));
        whole.rep = m;
        work.push_back(whole);
    }
    while (!work.empty()) {
        Part p = std::move(work.back());
        work.pop_back();
        EndAlgebra<S> end = end_algebra(p.rep);
        std::optional<std::pair<std::vector<Matrix<S>>, std::vector<Matrix<S>>>> split;
        if (end.dim() > 1) {
            split = detail::find_split(p.rep, end, seed, 3 * end.dim());
            if (!split) {
                // Cheap exact confirmation in the same situations as
                // is_indecomposable; failing that, accept indecomposability.
                bool small_field =
                    !m.field.rational && static_cast<size_t>(m.field.p) <= end.dim();
                bool cheap = p.rep.total_dim() <= 40 && end.dim() <= 12;
                if (small_field || cheap) {
                    Locality loc = algebra_locality(algebra_table(end), m.field, seed);
                    if (loc == Locality::NotLocal)
                        split = detail::find_split(p.rep, end, seed + 1, 30 * end.dim() + 100);
                }
            }
        }
        if (!split) {
            finals.push_back(std::move(p));
            continue;
        }
        for (const auto& base : {split->first, split->second}) {
            Part sub;
            for (size_t v = 0; v < base.size(); ++v) sub.basis.push_back(p.basis[v] * base[v]);
            sub.rep = induced_subrep(p.rep, base);
            work.push_back(std::move(sub));
        }
    }
    // Group by isomorphism; align each member's basis so its induced
    // representation equals the class representative on the nose.
    Decomposition<S> dec;
    std::vector<std::vector<Part>> classes;
    for (auto& p : finals) {
        bool placed = false;
        for (size_t c = 0; c < classes.size() && !placed; ++c) {
            auto iso = find_isomorphism(p.rep, classes[c][0].rep, seed);
            if (iso) {
                for (size_t v = 0; v < p.basis.size(); ++v) {
                    auto inv = inverse((*iso)[v]);
                    if (!inv) throw std::logic_error("decompose: witness not invertible");
                    p.basis[v] = p.basis[v] * *inv;
                }
                p.rep = classes[c][0].rep;
                classes[c].push_back(std::move(p));
                placed = true;
            }
        }
        if (!placed) classes.push_back({std::move(p)});
    }
    std::vector<Rep<S>> expanded;
    for (const auto& cls : classes) {
        dec.summands.push_back({cls[0].rep, cls.size()});
        for (const auto& p : cls) expanded.push_back(p.rep);
    }
    for (size_t v = 0; v < m.dims.size(); ++v) {
        Matrix<S> b(m.dims[v], m.dims[v]);
        size_t col = 0;
        for (const auto& cls : classes)
            for (const auto& p : cls) {
                b.set_block(0, col, p.basis[v]);
                col += p.basis[v].cols();
            }
        dec.change_of_basis.push_back(std::move(b));
    }
    if (m.total_dim() > 0) {
        if (change_basis(m, dec.change_of_basis) != direct_sum(expanded))
            throw std::logic_error("decompose: change of basis fails to block-diagonalize");
    }
    return dec;
}

}  // namespace qrep
