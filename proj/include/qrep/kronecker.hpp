#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "qrep/decomp.hpp"
#include "qrep/poly.hpp"
#include "qrep/reflect.hpp"
#include "qrep/rep.hpp"

namespace qrep {

// a_0 = 0, a_1 = 1, a_{i+1} = n a_i - a_{i-1}. For n >= 2 these are the
// dimension coordinates of the preprojective and preinjective modules.
inline long long a_seq(long long n, long long i) {
    if (i < 0) return -a_seq(n, -i);  // the recursion extends oddly
    long long prev = 0, cur = 1;
    if (i == 0) return 0;
    for (long long k = 1; k < i; ++k) {
        long long next = n * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

struct ASequence {
    long long n = 2;
    std::vector<long long> values;  // a_0 .. a_m

    static ASequence up_to(long long n, size_t m) {
        ASequence s;
        s.n = n;
        for (size_t i = 0; i <= m; ++i) s.values.push_back(a_seq(n, static_cast<long long>(i)));
        return s;
    }
};

// Point of the projective line over the coefficient field: a finite value
// or infinity. lambda corresponds to [1 : lambda], infinity to [0 : 1].
template <class S>
struct ProjPoint {
    bool infinite = false;
    S value = S(0);

    static ProjPoint finite(const S& v) { return {false, v}; }
    static ProjPoint infinity() { return {true, S(0)}; }

    bool operator==(const ProjPoint& o) const {
        if (infinite != o.infinite) return false;
        return infinite || value == o.value;
    }
    bool operator!=(const ProjPoint& o) const { return !(*this == o); }

    std::string str() const { return infinite ? "inf" : value.str(); }
};

// Moebius action of an invertible 2x2 matrix on the projective line,
// h * [x : y] = [h00 x + h01 y : h10 x + h11 y].
template <class S>
ProjPoint<S> mobius(const Matrix<S>& h, const ProjPoint<S>& p) {
    if (h.rows() != 2 || h.cols() != 2 || !is_invertible(h))
        throw std::invalid_argument("mobius: need an invertible 2x2 matrix");
    S x = p.infinite ? S(0) : S(1);
    S y = p.infinite ? S(1) : p.value;
    S nx = h.at(0, 0) * x + h.at(0, 1) * y;
    S ny = h.at(1, 0) * x + h.at(1, 1) * y;
    if (nx.is_zero()) return ProjPoint<S>::infinity();
    return ProjPoint<S>::finite(ny / nx);
}

enum class StdKind { P, I, R };

// The standard Kronecker modules over Q_2. P_n has dimension (n, n+1) with
// alpha = identity over a zero row and beta = zero row over identity; I_n is
// the transpose shape (n+1, n); R_{n,lambda} is square with alpha = identity
// and beta the lower Jordan block with eigenvalue lambda, and for
// lambda = infinity the roles of alpha and beta swap.
template <class S>
Rep<S> std_kronecker(StdKind kind, size_t n, const FieldInfo& f,
                     std::optional<ProjPoint<S>> lambda = std::nullopt) {
    Quiver q = kronecker_quiver(2);
    auto lower_jordan = [&](const S& diag) {
        Matrix<S> j(n, n);
        for (size_t i = 0; i < n; ++i) j.at(i, i) = diag;
        for (size_t i = 0; i + 1 < n; ++i) j.at(i + 1, i) = S(1);
        return j;
    };
    switch (kind) {
        case StdKind::P: {
            if (lambda) throw std::invalid_argument("std_kronecker: invalid params");
            Matrix<S> a(n + 1, n), b(n + 1, n);
            for (size_t i = 0; i < n; ++i) {
                a.at(i, i) = S(1);
                b.at(i + 1, i) = S(1);
            }
            return Rep<S>(q, f, {n, n + 1}, {a, b});
        }
        case StdKind::I: {
            if (lambda) throw std::invalid_argument("std_kronecker: invalid params");
            Matrix<S> a(n, n + 1), b(n, n + 1);
            for (size_t i = 0; i < n; ++i) {
                a.at(i, i) = S(1);
                b.at(i, i + 1) = S(1);
            }
            return Rep<S>(q, f, {n + 1, n}, {a, b});
        }
        case StdKind::R: {
            if (n < 1 || !lambda) throw std::invalid_argument("std_kronecker: invalid params");
            if (lambda->infinite)
                return Rep<S>(q, f, {n, n}, {lower_jordan(S(0)), Matrix<S>::identity(n)});
            return Rep<S>(q, f, {n, n},
                          {Matrix<S>::identity(n), lower_jordan(lambda->value)});
        }
    }
    throw std::invalid_argument("std_kronecker: invalid params");
}

// Preprojective module P_i over the n-Kronecker quiver, built by iterated
// Coxeter reflection from the two projectives: P_0 is the simple at the
// sink, P_1 the projective at the source, and P_{i+2} = Phi^-(P_i). The
// dimension vector is (a_i, a_{i+1}).
template <class S>
Rep<S> preprojective(size_t n, size_t i, const FieldInfo& f) {
    Quiver q = kronecker_quiver(n);
    Rep<S> m = [&] {
        if (i % 2 == 0) return simple_rep<S>(q, f, "y");
        std::vector<Matrix<S>> mats;
        for (size_t l = 0; l < n; ++l) {
            Matrix<S> e(n, 1);
            e.at(l, 0) = S(1);
            mats.push_back(std::move(e));
        }
        return Rep<S>(q, f, {1, n}, mats);
    }();
    for (size_t k = 0; k < i / 2; ++k) m = coxeter_minus(m);
    return m;
}

template <class S>
Rep<S> preinjective(size_t n, size_t i, const FieldInfo& f) {
    Rep<S> d = dual_rep(preprojective<S>(n, i, f));
    return rename_vertices(d, {{"x", "y"}, {"y", "x"}});
}

// One indecomposable Kronecker summand up to isomorphism. Regular tags hold
// the length and the monic irreducible parameter polynomial p; the summand
// has dimension (len * deg p, len * deg p), and for deg p = 1 the eigenvalue
// form R_{len, lambda} applies, with lambda = infinity kept separately.
template <class S>
struct KroneckerTag {
    enum class Kind { Preproj, Preinj, Regular, RegularIrreducible };
    Kind kind;
    size_t index = 0;  // k for Preproj/Preinj
    size_t len = 0;    // regular length
    ProjPoint<S> lambda;
    Poly<S> param;  // monic irreducible, degree >= 2, RegularIrreducible only

    static KroneckerTag preproj(size_t k) { return {Kind::Preproj, k, 0, {}, {}}; }
    static KroneckerTag preinj(size_t k) { return {Kind::Preinj, k, 0, {}, {}}; }
    static KroneckerTag regular(size_t len, const ProjPoint<S>& l) {
        return {Kind::Regular, 0, len, l, {}};
    }
    static KroneckerTag regular_irreducible(size_t len, const Poly<S>& p) {
        return {Kind::RegularIrreducible, 0, len, {}, p};
    }

    std::vector<long long> dim_vector() const {
        switch (kind) {
            case Kind::Preproj:
                return {static_cast<long long>(index), static_cast<long long>(index) + 1};
            case Kind::Preinj:
                return {static_cast<long long>(index) + 1, static_cast<long long>(index)};
            case Kind::Regular: {
                long long d = static_cast<long long>(len);
                return {d, d};
            }
            case Kind::RegularIrreducible: {
                long long d = static_cast<long long>(len) * param.degree();
                return {d, d};
            }
        }
        return {};
    }

    std::string str() const {
        switch (kind) {
            case Kind::Preproj: return "P_" + std::to_string(index);
            case Kind::Preinj: return "I_" + std::to_string(index);
            case Kind::Regular:
                return "R_{" + std::to_string(len) + "," + lambda.str() + "}";
            case Kind::RegularIrreducible: {
                std::string s = "R_{" + std::to_string(len) + ",[";
                for (int d = 0; d <= param.degree(); ++d) {
                    if (d) s += " ";
                    s += param[static_cast<size_t>(d)].str();
                }
                return s + "]}";
            }
        }
        return "?";
    }

    std::tuple<int, size_t, size_t, std::string> key() const {
        std::string tail;
        if (kind == Kind::Regular) tail = lambda.str();
        if (kind == Kind::RegularIrreducible) tail = str();
        return {static_cast<int>(kind), index, len, tail};
    }

    bool operator==(const KroneckerTag& o) const {
        if (kind != o.kind || index != o.index || len != o.len) return false;
        if (kind == Kind::Regular && lambda != o.lambda) return false;
        if (kind == Kind::RegularIrreducible && param != o.param) return false;
        return true;
    }
};

// Multiset of summand tags, kept sorted by a canonical key.
template <class S>
struct KroneckerType {
    std::vector<KroneckerTag<S>> tags;

    void add(KroneckerTag<S> t) {
        tags.push_back(std::move(t));
        std::sort(tags.begin(), tags.end(),
                  [](const KroneckerTag<S>& a, const KroneckerTag<S>& b) {
                      return a.key() < b.key();
                  });
    }
    bool operator==(const KroneckerType& o) const { return tags == o.tags; }
    bool operator!=(const KroneckerType& o) const { return !(*this == o); }

    std::vector<long long> dim_vector() const {
        std::vector<long long> d{0, 0};
        for (const auto& t : tags) {
            auto td = t.dim_vector();
            d[0] += td[0];
            d[1] += td[1];
        }
        return d;
    }

    std::string str() const {
        std::string s;
        for (const auto& t : tags) {
            if (!s.empty()) s += " + ";
            s += t.str();
        }
        return s.empty() ? "0" : s;
    }
};

namespace detail {

// Classify one indecomposable Q_2 module. Square summands carry their type
// in the similarity class of beta alpha^{-1} (or the swap when alpha is
// singular, which by the classification forces the nilpotent infinity type).
template <class S>
KroneckerTag<S> classify_q2_summand(const Rep<S>& m) {
    size_t dx = m.dims[0], dy = m.dims[1];
    if (dy == dx + 1) return KroneckerTag<S>::preproj(dx);
    if (dx == dy + 1) return KroneckerTag<S>::preinj(dy);
    if (dx != dy) throw std::logic_error("classify_q2: impossible summand dimensions");
    const Matrix<S>& a = m.mats[0];
    const Matrix<S>& b = m.mats[1];
    if (is_invertible(a)) {
        auto ai = inverse(a);
        Poly<S> cp = normalize_poly(Poly<S>(charpoly(b * *ai)), m.field);
        auto classes = squarefree_decomposition(cp, m.field);
        if (classes.size() != 1)
            throw std::logic_error("classify_q2: square summand with split spectrum");
        const Poly<S>& p = classes[0].first;
        size_t mult = classes[0].second;
        if (p.degree() == 1) {
            // monic x - lambda
            S lambda = -p[0];
            return KroneckerTag<S>::regular(mult, ProjPoint<S>::finite(lambda));
        }
        return KroneckerTag<S>::regular_irreducible(mult, p);
    }
    if (is_invertible(b)) {
        auto bi = inverse(b);
        Poly<S> cp = normalize_poly(Poly<S>(charpoly(a * *bi)), m.field);
        auto classes = squarefree_decomposition(cp, m.field);
        if (classes.size() != 1 || classes[0].first.degree() != 1 ||
            !classes[0].first[0].is_zero())
            throw std::logic_error("classify_q2: singular alpha without nilpotent swap");
        return KroneckerTag<S>::regular(classes[0].second, ProjPoint<S>::infinity());
    }
    throw std::logic_error("classify_q2: summand matches no Kronecker type");
}

}  // namespace detail

template <class S>
KroneckerType<S> classify_q2(const Rep<S>& m, uint64_t seed = 1729) {
    if (m.quiver != kronecker_quiver(2))
        throw std::invalid_argument("classify_q2: quiver is not the 2-Kronecker quiver");
    KroneckerType<S> type;
    Decomposition<S> dec = decompose(m, seed);
    for (const auto& [s, mult] : dec.summands) {
        KroneckerTag<S> tag = detail::classify_q2_summand(s);
        for (size_t i = 0; i < mult; ++i) type.add(tag);
    }
    return type;
}

enum class PIKind { P, I };
enum class HomOrExt { Hom, Ext };

// Closed-form Hom/Ext dimensions between preprojective and preinjective
// modules over the n-Kronecker algebra, in terms of the a-sequence.
inline long long hom_ext_formula(long long n, PIKind a, long long i, PIKind b, long long j,
                                 HomOrExt which) {
    if (n < 2) throw std::invalid_argument("hom_ext_formula: need n >= 2");
    if (i < 0 || j < 0) throw std::invalid_argument("hom_ext_formula: negative index");
    if (which == HomOrExt::Hom) {
        if (a == PIKind::P && b == PIKind::P) return i <= j ? a_seq(n, j - i + 1) : 0;
        if (a == PIKind::I && b == PIKind::I) return j <= i ? a_seq(n, i - j + 1) : 0;
        if (a == PIKind::I && b == PIKind::P) return 0;
        return a_seq(n, i + j);  // Hom(P_i, I_j)
    }
    if (a == PIKind::P && b == PIKind::P) return i >= j + 2 ? a_seq(n, i - j - 1) : 0;
    if (a == PIKind::I && b == PIKind::I) return j >= i + 2 ? a_seq(n, j - i - 1) : 0;
    if (a == PIKind::I && b == PIKind::P) return a_seq(n, i + j + 2);
    return 0;  // Ext(P_i, I_j)
}

}  // namespace qrep
