#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "qrep/matrix.hpp"
#include "qrep/scalar.hpp"

namespace qrep {

// Dense univariate polynomial, coefficients ascending, trailing zeros trimmed.
template <class S>
class Poly {
public:
    Poly() {}
    explicit Poly(std::vector<S> c) : c_(std::move(c)) { trim(); }
    static Poly constant(const S& v) { return Poly(std::vector<S>{v}); }
    static Poly x() { return Poly(std::vector<S>{S(0), S(1)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    const S& operator[](size_t i) const { return c_[i]; }
    const std::vector<S>& coeffs() const { return c_; }
    const S& lead() const { return c_.back(); }

    bool operator==(const Poly& o) const { return c_ == o.c_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly operator+(const Poly& o) const {
        std::vector<S> r(std::max(c_.size(), o.c_.size()), S(0));
        for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
        return Poly(std::move(r));
    }
    Poly operator-(const Poly& o) const {
        std::vector<S> r(std::max(c_.size(), o.c_.size()), S(0));
        for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
        for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
        return Poly(std::move(r));
    }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<S> r(c_.size() + o.c_.size() - 1, S(0));
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        }
        return Poly(std::move(r));
    }
    Poly scaled(const S& v) const {
        std::vector<S> r = c_;
        for (auto& x : r) x *= v;
        return Poly(std::move(r));
    }
    Poly monic() const {
        if (is_zero()) return *this;
        return scaled(lead().inv());
    }

    // Quotient and remainder; divisor must be nonzero.
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) throw std::invalid_argument("Poly: division by zero");
        if (degree() < d.degree()) return {Poly(), *this};
        std::vector<S> rem = c_;
        std::vector<S> quo(c_.size() - d.c_.size() + 1, S(0));
        S li = d.lead().inv();
        for (int i = static_cast<int>(quo.size()) - 1; i >= 0; --i) {
            S f = rem[i + d.degree()] * li;
            if (f.is_zero()) continue;
            quo[i] = f;
            for (size_t j = 0; j < d.c_.size(); ++j) rem[i + j] -= f * d.c_[j];
        }
        return {Poly(std::move(quo)), Poly(std::move(rem))};
    }
    Poly operator/(const Poly& d) const { return divmod(d).first; }
    Poly operator%(const Poly& d) const { return divmod(d).second; }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<S> r(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * S(static_cast<long>(i));
        return Poly(std::move(r));
    }

    S eval(const S& v) const {
        S r(0);
        for (size_t i = c_.size(); i-- > 0;) r = r * v + c_[i];
        return r;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<S> c_;
};

template <class S>
Poly<S> poly_gcd(Poly<S> a, Poly<S> b) {
    while (!b.is_zero()) {
        Poly<S> r = a % b;
        a = std::move(b);
        b = r.monic();
    }
    return a.monic();
}

template <class S>
Poly<S> poly_lcm(const Poly<S>& a, const Poly<S>& b) {
    if (a.is_zero() || b.is_zero()) return Poly<S>();
    Poly<S> g = poly_gcd(a, b);
    return ((a * b) / g).monic();
}

// b^e mod m by binary exponentiation.
template <class S>
Poly<S> pow_mod(Poly<S> b, unsigned long long e, const Poly<S>& m) {
    Poly<S> r = Poly<S>::constant(S(1)) % m;
    b = b % m;
    while (e) {
        if (e & 1) r = (r * b) % m;
        b = (b * b) % m;
        e >>= 1;
    }
    return r;
}

// Replaces x^p by x; valid for polynomials with zero derivative over F_p,
// since coefficients of the prime field are fixed by Frobenius.
template <class S>
Poly<S> pth_root(const Poly<S>& f, long long p) {
    std::vector<S> r;
    for (int i = 0; i * p <= f.degree(); ++i) r.push_back(f[static_cast<size_t>(i * p)]);
    return Poly<S>(std::move(r));
}

// Squarefree decomposition f = prod a_i^{m_i} with the a_i squarefree,
// pairwise coprime, multiplicities strictly increasing. Handles char p.
template <class S>
std::vector<std::pair<Poly<S>, int>> squarefree_decomposition(Poly<S> f, const FieldInfo& fld) {
    std::vector<std::pair<Poly<S>, int>> out;
    if (f.degree() < 1) return out;
    f = f.monic();
    long long p = fld.rational ? 0 : fld.p;
    Poly<S> df = f.derivative();
    if (df.is_zero()) {
        for (auto& [a, m] : squarefree_decomposition(pth_root(f, p), fld))
            out.emplace_back(a, m * static_cast<int>(p));
        return out;
    }
    Poly<S> c = poly_gcd(f, df);
    Poly<S> w = f / c;
    int i = 1;
    while (w.degree() > 0) {
        Poly<S> y = poly_gcd(w, c);
        Poly<S> z = w / y;
        if (z.degree() > 0) out.emplace_back(z.monic(), i);
        w = y;
        c = c / y;
        ++i;
    }
    if (c.degree() > 0) {
        // Remaining factors all have multiplicity divisible by p.
        for (auto& [a, m] : squarefree_decomposition(pth_root(c, p), fld)) {
            bool merged = false;
            for (auto& [b, k] : out)
                if (k == m * p && !merged) { b = b * a; merged = true; }
            if (!merged) out.emplace_back(a, m * static_cast<int>(p));
        }
        std::sort(out.begin(), out.end(),
                  [](const auto& l, const auto& r) { return l.second < r.second; });
    }
    return out;
}

enum class SplitStatus {
    Split,        // f = f1 * f2, both nonconstant, gcd(f1, f2) = 1
    PrimePower,   // f is a power of a single irreducible; no coprime split exists
    Unknown,      // could not decide within budget (rational factorization only)
};

template <class S>
struct PolySplit {
    SplitStatus status = SplitStatus::Unknown;
    Poly<S> f1, f2;
};

namespace detail {

// Berlekamp: dimension of the Frobenius fixed algebra of F_p[x]/(a) equals
// the number of irreducible factors of squarefree a. A non-constant fixed
// element v is constant mod every factor, so gcd(a, v - s) cuts a apart.
inline PolySplit<Fp> split_squarefree_fp(const Poly<Fp>& a, long long p, uint64_t seed) {
    PolySplit<Fp> res;
    int n = a.degree();
    if (n <= 1) { res.status = SplitStatus::PrimePower; return res; }
    Matrix<Fp> q(static_cast<size_t>(n), static_cast<size_t>(n));
    Poly<Fp> xp = pow_mod(Poly<Fp>::x(), static_cast<unsigned long long>(p), a);
    Poly<Fp> pw = Poly<Fp>::constant(Fp(1, p));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i <= pw.degree(); ++i) q.at(static_cast<size_t>(i), static_cast<size_t>(j)) = pw[static_cast<size_t>(i)];
        q.at(static_cast<size_t>(j), static_cast<size_t>(j)) -= Fp(1, p);
        pw = (pw * xp) % a;
    }
    Matrix<Fp> ker = kernel_basis(q);
    if (ker.cols() <= 1) { res.status = SplitStatus::PrimePower; return res; }
    auto try_element = [&](const Poly<Fp>& v) -> bool {
        if (v.degree() < 1) return false;
        if (p <= 4096) {
            for (long long s = 0; s < p; ++s) {
                Poly<Fp> g = poly_gcd(a, v - Poly<Fp>::constant(Fp(s, p)));
                if (g.degree() > 0 && g.degree() < a.degree()) {
                    res.status = SplitStatus::Split;
                    res.f1 = g;
                    res.f2 = (a / g).monic();
                    return true;
                }
            }
            return false;
        }
        // Large modulus: v - c is a square mod some factors and not others
        // for about half the shifts c, so a few random draws succeed.
        std::mt19937_64 rng(seed);
        for (int t = 0; t < 64; ++t) {
            Fp c(static_cast<long long>(rng() % static_cast<uint64_t>(p)), p);
            Poly<Fp> w = pow_mod(v - Poly<Fp>::constant(c), static_cast<unsigned long long>((p - 1) / 2), a)
                         - Poly<Fp>::constant(Fp(1, p));
            Poly<Fp> g = poly_gcd(a, w);
            if (g.degree() > 0 && g.degree() < a.degree()) {
                res.status = SplitStatus::Split;
                res.f1 = g;
                res.f2 = (a / g).monic();
                return true;
            }
        }
        return false;
    };
    for (size_t c = 0; c < ker.cols(); ++c) {
        std::vector<Fp> coef;
        for (size_t i = 0; i < ker.rows(); ++i) coef.push_back(ker.at(i, c));
        if (try_element(Poly<Fp>(std::move(coef)))) return res;
    }
    throw std::logic_error("split_squarefree_fp: no separating element found");
}

// Exact rational roots of a squarefree rational polynomial. Complete when
// the integer content factors within the trial division budget; the flag
// reports completeness.
inline std::pair<std::vector<Rat>, bool> rational_roots(const Poly<Rat>& f) {
    std::vector<Rat> roots;
    mpz_class den(1);
    for (int i = 0; i <= f.degree(); ++i)
        den = den * f[static_cast<size_t>(i)].value().get_den() / gcd(den, mpz_class(f[static_cast<size_t>(i)].value().get_den()));
    std::vector<mpz_class> ic;
    for (int i = 0; i <= f.degree(); ++i)
        ic.push_back(mpz_class(f[static_cast<size_t>(i)].value() * den));
    size_t lo = 0;
    while (lo < ic.size() && ic[lo] == 0) ++lo;
    if (lo > 0) roots.push_back(Rat(0));
    auto divisors = [](mpz_class v, bool& complete) {
        std::vector<mpz_class> ds{1};
        v = abs(v);
        complete = true;
        for (mpz_class d = 2; d * d <= v; ++d) {
            if (d > 200000) { complete = false; break; }
            if (v % d == 0) {
                size_t n = ds.size();
                mpz_class pw = 1;
                while (v % d == 0) { v /= d; pw *= d; for (size_t i = 0; i < n; ++i) ds.push_back(ds[i] * pw); }
            }
        }
        if (v > 1) {
            size_t n = ds.size();
            for (size_t i = 0; i < n; ++i) ds.push_back(ds[i] * v);
        }
        return ds;
    };
    bool c0 = true, c1 = true;
    std::vector<mpz_class> num = divisors(ic[lo], c0);
    std::vector<mpz_class> dnm = divisors(ic.back(), c1);
    for (const auto& n : num)
        for (const auto& d : dnm) {
            Rat r(mpq_class(n, d));
            for (int s = 0; s < 2; ++s, r = -r)
                if (f.eval(r).is_zero() &&
                    std::find(roots.begin(), roots.end(), r) == roots.end())
                    roots.push_back(r);
        }
    return {roots, c0 && c1};
}

inline bool is_rational_square(const Rat& v, Rat& root) {
    if (v.value() < 0) return false;
    mpz_class n = v.value().get_num(), d = v.value().get_den();
    if (mpz_perfect_square_p(n.get_mpz_t()) && mpz_perfect_square_p(d.get_mpz_t())) {
        mpz_class rn, rd;
        mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
        mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
        root = Rat(mpq_class(rn, rd));
        return true;
    }
    return false;
}

// Squarefree rational polynomial: find any nontrivial factor split.
inline PolySplit<Rat> split_squarefree_q(const Poly<Rat>& a) {
    PolySplit<Rat> res;
    if (a.degree() <= 1) { res.status = SplitStatus::PrimePower; return res; }
    if (a.degree() == 2) {
        Rat disc = a[1] * a[1] - Rat(4) * a[2] * a[0];
        Rat sq;
        if (!is_rational_square(disc, sq)) { res.status = SplitStatus::PrimePower; return res; }
        Rat r1 = (-a[1] + sq) / (Rat(2) * a[2]);
        Rat r2 = (-a[1] - sq) / (Rat(2) * a[2]);
        if (r1 == r2) throw std::logic_error("split_squarefree_q: repeated root in squarefree input");
        res.status = SplitStatus::Split;
        res.f1 = Poly<Rat>({-r1, Rat(1)});
        res.f2 = Poly<Rat>({-r2, Rat(1)});
        return res;
    }
    auto [roots, complete] = rational_roots(a);
    if (!roots.empty()) {
        res.status = SplitStatus::Split;
        res.f1 = Poly<Rat>({-roots[0], Rat(1)});
        res.f2 = (a / res.f1).monic();
        return res;
    }
    // Cubics without a rational root are irreducible; beyond that we do not
    // attempt full rational factorization.
    res.status = (a.degree() == 3 && complete) ? SplitStatus::PrimePower : SplitStatus::Unknown;
    return res;
}

template <class S>
PolySplit<S> split_squarefree(const Poly<S>& a, const FieldInfo& fld, uint64_t seed) {
    if constexpr (scalar_traits<S>::is_rational) {
        (void)fld; (void)seed;
        return split_squarefree_q(a);
    } else {
        return split_squarefree_fp(a, fld.p, seed);
    }
}

}  // namespace detail

// Coprime split of f: either f = f1 * f2 with gcd(f1, f2) = 1 and both
// nonconstant, or a certificate that none exists, or Unknown (rational
// factorization beyond the implemented budget).
template <class S>
PolySplit<S> try_split_poly(const Poly<S>& f, const FieldInfo& fld, uint64_t seed = 1729) {
    PolySplit<S> res;
    if (f.degree() <= 1) { res.status = SplitStatus::PrimePower; return res; }
    auto classes = squarefree_decomposition(f, fld);
    if (classes.size() > 1) {
        // Distinct multiplicities give a coprime split directly.
        Poly<S> f1 = Poly<S>::constant(S(1));
        for (int k = 0; k < classes[0].second; ++k) f1 = f1 * classes[0].first;
        res.status = SplitStatus::Split;
        res.f1 = f1.monic();
        res.f2 = (f.monic() / res.f1).monic();
        return res;
    }
    const auto& [a, mult] = classes[0];
    PolySplit<S> sub = detail::split_squarefree(a, fld, seed);
    if (sub.status != SplitStatus::Split) { res.status = sub.status; return res; }
    Poly<S> f1 = Poly<S>::constant(S(1));
    for (int k = 0; k < mult; ++k) f1 = f1 * sub.f1;
    res.status = SplitStatus::Split;
    res.f1 = f1.monic();
    res.f2 = (f.monic() / res.f1).monic();
    return res;
}

// Stamps every coefficient with the field; over F_p this also reduces
// literal values and re-trims, so field-agnostic producers can be cleaned
// before modulus-sensitive arithmetic.
template <class S>
Poly<S> normalize_poly(const Poly<S>& p, const FieldInfo& f) {
    std::vector<S> c = p.coeffs();
    for (auto& x : c) x = scalar_traits<S>::normalize(x, f);
    return Poly<S>(std::move(c));
}

template <class S>
Matrix<S> eval_matrix(const Poly<S>& f, const Matrix<S>& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eval_matrix: not square");
    Matrix<S> r(a.rows(), a.cols());
    if (f.is_zero()) return r;
    for (int i = f.degree(); i >= 0; --i) {
        r = r * a;
        for (size_t d = 0; d < a.rows(); ++d) r.at(d, d) += f[static_cast<size_t>(i)];
    }
    return r;
}

// Minimal polynomial via Krylov chains from the standard basis vectors.
template <class S>
Poly<S> minpoly(const Matrix<S>& a, const FieldInfo& fld) {
    if (a.rows() != a.cols()) throw std::invalid_argument("minpoly: not square");
    size_t n = a.rows();
    S one = scalar_traits<S>::from_long(1, fld);
    Poly<S> m = Poly<S>::constant(one);
    if (n == 0) return m;
    for (size_t s = 0; s < n; ++s) {
        if (m.degree() == static_cast<int>(n)) break;
        Matrix<S> v(n, 1);
        v.at(s, 0) = one;
        Matrix<S> kry(n, n + 1);
        size_t k = 0;
        for (; k <= n; ++k) {
            if (k) v = a * v;
            kry.set_block(0, k, v);
            if (k == n) break;
        }
        Rref<S> r = rref(kry);
        size_t first_free = 0;
        {
            std::vector<bool> is_p(n + 1, false);
            for (size_t p : r.pivots) is_p[p] = true;
            while (first_free <= n && is_p[first_free]) ++first_free;
        }
        // Krylov columns are independent up to the first dependent power, so
        // the first free column yields the monic annihilator of v.
        std::vector<S> coef(first_free + 1, scalar_traits<S>::from_long(0, fld));
        coef[first_free] = one;
        for (size_t i = 0; i < r.rank && r.pivots[i] < first_free; ++i)
            coef[r.pivots[i]] = scalar_traits<S>::normalize(-r.mat.at(i, first_free), fld);
        m = poly_lcm(m, Poly<S>(std::move(coef)));
    }
    return m;
}

}  // namespace qrep
