#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace qrep {

// Exact rational scalar backed by GMP. Values are always canonical: lowest
// terms, denominator positive, zero stored as 0/1.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(long n, long d) : v_(n, d) {
        if (d == 0) throw std::invalid_argument("Rat: zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpq_class& v) : v_(v) { v_.canonicalize(); }

    static Rat from_string(const std::string& s) {
        mpq_class v;
        if (v.set_str(s, 10) != 0)
            throw std::invalid_argument("Rat: cannot parse '" + s + "'");
        v.canonicalize();
        return Rat(v);
    }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Rat operator+(const Rat& o) const { return Rat(mpq_class(v_ + o.v_)); }
    Rat operator-(const Rat& o) const { return Rat(mpq_class(v_ - o.v_)); }
    Rat operator*(const Rat& o) const { return Rat(mpq_class(v_ * o.v_)); }
    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }

    Rat inv() const {
        if (is_zero()) throw std::invalid_argument("Rat: division by zero");
        return Rat(mpq_class(1 / v_));
    }
    Rat operator/(const Rat& o) const { return *this * o.inv(); }

    bool operator==(const Rat& o) const { return v_ == o.v_; }
    bool operator!=(const Rat& o) const { return v_ != o.v_; }
    // Total order, used only for deterministic tie-breaking.
    bool operator<(const Rat& o) const { return v_ < o.v_; }

    std::string str() const { return v_.get_str(); }
    const mpq_class& value() const { return v_; }

private:
    mpq_class v_;
};

// Prime-field scalar with runtime modulus, residue stored in [0, p).
// Modulus 0 marks an integer literal (as produced by generic code writing
// S(0), S(1), identity blocks); it adopts the other operand's modulus on
// first contact. Representations normalize all entries on construction, so
// modulus-less values never survive into field-sensitive computations.
class Fp {
public:
    Fp() : v_(0), p_(0) {}
    Fp(long long v) : v_(v), p_(0) {}
    Fp(long long v, long long p) : v_(v), p_(p) { reduce(); }

    static Fp from_string(const std::string& s, long long p) {
        return Fp(std::stoll(s), p);
    }

    long long value() const { return v_; }
    long long modulus() const { return p_; }

    void set_modulus(long long p) {
        if (p <= 1) throw std::invalid_argument("Fp: modulus must be >= 2");
        p_ = p;
        reduce();
    }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Fp operator+(const Fp& o) const {
        long long p = join(o);
        return p ? Fp(v_ + o.v_, p) : Fp(v_ + o.v_);
    }
    Fp operator-(const Fp& o) const {
        long long p = join(o);
        return p ? Fp(v_ - o.v_, p) : Fp(v_ - o.v_);
    }
    Fp operator*(const Fp& o) const {
        long long p = join(o);
        if (!p) return Fp(v_ * o.v_);
        return Fp(static_cast<long long>(static_cast<__int128>(v_) * o.v_ % p), p);
    }
    Fp operator-() const { return p_ ? Fp(-v_, p_) : Fp(-v_); }
    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }

    Fp inv() const {
        if (v_ == 0) throw std::invalid_argument("Fp: division by zero");
        if (p_ == 0) {
            if (v_ == 1 || v_ == -1) return *this;
            throw std::logic_error("Fp: inverse of modulus-less value");
        }
        long long t = 0, nt = 1, r = p_, nr = v_;
        while (nr != 0) {
            long long q = r / nr;
            long long tmp = t - q * nt; t = nt; nt = tmp;
            tmp = r - q * nr; r = nr; nr = tmp;
        }
        if (r != 1) throw std::invalid_argument("Fp: modulus not prime");
        return Fp(t, p_);
    }
    Fp operator/(const Fp& o) const { return *this * o.inv(); }

    bool operator==(const Fp& o) const {
        if (p_ && o.p_ && p_ != o.p_)
            throw std::logic_error("Fp: modulus mismatch");
        if (p_ == o.p_) return v_ == o.v_;
        long long p = p_ ? p_ : o.p_;
        return Fp(v_, p).v_ == Fp(o.v_, p).v_;
    }
    bool operator!=(const Fp& o) const { return !(*this == o); }
    bool operator<(const Fp& o) const { return v_ < o.v_; }

    std::string str() const { return std::to_string(v_); }

private:
    void reduce() {
        if (p_ <= 1) throw std::invalid_argument("Fp: modulus must be >= 2");
        v_ %= p_;
        if (v_ < 0) v_ += p_;
    }
    long long join(const Fp& o) const {
        if (p_ && o.p_ && p_ != o.p_)
            throw std::logic_error("Fp: modulus mismatch");
        return p_ ? p_ : o.p_;
    }

    long long v_;
    long long p_;
};

// Field descriptor attached to representations and serialized files.
struct FieldInfo {
    bool rational = true;
    long long p = 0;  // modulus when rational == false

    bool operator==(const FieldInfo& o) const {
        return rational == o.rational && p == o.p;
    }
    std::string str() const {
        return rational ? "Q" : ("F" + std::to_string(p));
    }
    static FieldInfo Q() { return {true, 0}; }
    static FieldInfo Fp(long long p) {
        if (p < 2) throw std::invalid_argument("FieldInfo: modulus must be >= 2");
        return {false, p};
    }
};

template <class S> struct scalar_traits;

template <> struct scalar_traits<Rat> {
    static constexpr bool is_rational = true;
    static Rat normalize(const Rat& x, const FieldInfo& f) {
        if (!f.rational) throw std::invalid_argument("field mismatch: expected Q");
        return x;
    }
    static Rat from_long(long long v, const FieldInfo&) { return Rat(static_cast<long>(v)); }
    static Rat parse(const std::string& s, const FieldInfo&) { return Rat::from_string(s); }
    static FieldInfo field_of(const Rat&) { return FieldInfo::Q(); }
};

template <> struct scalar_traits<Fp> {
    static constexpr bool is_rational = false;
    static Fp normalize(const Fp& x, const FieldInfo& f) {
        if (f.rational) throw std::invalid_argument("field mismatch: expected F_p");
        if (x.modulus() != 0 && x.modulus() != f.p)
            throw std::invalid_argument("field mismatch: wrong modulus");
        return Fp(x.value(), f.p);
    }
    static Fp from_long(long long v, const FieldInfo& f) { return Fp(v, f.p); }
    static Fp parse(const std::string& s, const FieldInfo& f) {
        return Fp::from_string(s, f.p);
    }
    static FieldInfo field_of(const Fp& x) {
        return x.modulus() ? FieldInfo::Fp(x.modulus()) : FieldInfo::Q();
    }
};

// Deterministic pseudo-random scalars for seeded searches. Rationals draw
// small integers; prime fields draw uniform residues.
template <class S, class Rng> S random_scalar(Rng& rng, const FieldInfo& f) {
    if constexpr (scalar_traits<S>::is_rational) {
        (void)f;
        return S(static_cast<long>(rng() % 9) - 4);
    } else {
        return S(static_cast<long long>(rng() % static_cast<uint64_t>(f.p)), f.p);
    }
}

}  // namespace qrep
