#include "gpfq/field.hpp"

#include <algorithm>
#include <string>

namespace gpfq {

namespace {

constexpr std::uint64_t kTableLimit = 4096;

// Factor q as p^k with p prime; throws NotPrimePower otherwise.
void factor_prime_power(std::uint64_t q, std::uint64_t& p, unsigned& k) {
    if (q < 2) throw NotPrimePower("q must be >= 2, got " + std::to_string(q));
    std::uint64_t m = q;
    std::uint64_t f = 0;
    for (std::uint64_t c = 2; c * c <= m; ++c) {
        if (m % c == 0) {
            f = c;
            break;
        }
    }
    if (f == 0) {  // q itself is prime
        p = q;
        k = 1;
        return;
    }
    p = f;
    k = 0;
    while (m % p == 0) {
        m /= p;
        ++k;
    }
    if (m != 1) throw NotPrimePower(std::to_string(q) + " is not a prime power");
}

// Digits of n in base p, least significant first, padded to width.
std::vector<felem> digits(std::uint64_t n, std::uint64_t p, unsigned width) {
    std::vector<felem> d(width, 0);
    for (unsigned i = 0; i < width && n; ++i) {
        d[i] = static_cast<felem>(n % p);
        n /= p;
    }
    return d;
}

// Polynomial arithmetic over F_p on coefficient vectors (constant term first).
// Vectors may carry trailing zeros; degree() ignores them.
int degree(const std::vector<felem>& a) {
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        if (a[i] != 0) return i;
    return -1;
}

std::vector<felem> poly_mul(const std::vector<felem>& a, const std::vector<felem>& b,
                            std::uint64_t p) {
    std::vector<felem> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = static_cast<felem>((r[i + j] + std::uint64_t(a[i]) * b[j]) % p);
    }
    return r;
}

// Reduce a modulo the monic polynomial m, in place.
void poly_mod(std::vector<felem>& a, const std::vector<felem>& m, std::uint64_t p) {
    const int dm = degree(m);
    for (int da = degree(a); da >= dm; da = degree(a)) {
        const std::uint64_t c = a[da];  // leading coefficient to cancel
        const int shift = da - dm;
        for (int i = 0; i <= dm; ++i) {
            const std::uint64_t t = std::uint64_t(m[i]) * c % p;
            a[i + shift] = static_cast<felem>((a[i + shift] + p - t) % p);
        }
    }
}

}  // namespace

bool is_irreducible(std::uint64_t p, const std::vector<felem>& poly) {
    const int deg = degree(poly);
    if (deg < 1) return false;
    if (deg == 1) return true;
    // Trial division by every monic polynomial of degree 1..deg/2.
    for (int dd = 1; dd * 2 <= deg; ++dd) {
        std::uint64_t count = 1;
        for (int i = 0; i < dd; ++i) count *= p;  // p^dd candidate lower parts
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::vector<felem> div = digits(idx, p, dd + 1);
            div[dd] = 1;  // monic
            std::vector<felem> rem = poly;
            poly_mod(rem, div, p);
            if (degree(rem) < 0) return false;
        }
    }
    return true;
}

std::vector<felem> lowest_irreducible(std::uint64_t p, unsigned k) {
    std::uint64_t count = 1;
    for (unsigned i = 0; i < k; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::vector<felem> cand = digits(idx, p, k + 1);
        cand[k] = 1;  // monic
        if (is_irreducible(p, cand)) return cand;
    }
    // Unreachable: irreducible polynomials of every degree exist over F_p.
    throw std::logic_error("no irreducible polynomial found");
}

Field::Field(std::uint64_t q) {
    factor_prime_power(q, p_, k_);
    q_ = q;
    modulus_ = lowest_irreducible(p_, k_);
    if (q_ <= kTableLimit) {
        mul_table_.assign(q_ * q_, 0);
        inv_table_.assign(q_, 0);
        for (std::uint64_t a = 0; a < q_; ++a)
            for (std::uint64_t b = a; b < q_; ++b) {
                const felem r = mul_nocache(static_cast<felem>(a), static_cast<felem>(b));
                mul_table_[a * q_ + b] = static_cast<std::uint16_t>(r);
                mul_table_[b * q_ + a] = static_cast<std::uint16_t>(r);
            }
        for (std::uint64_t a = 1; a < q_; ++a) {
            // Find the inverse by scanning the row; each row of the
            // multiplication table of a field is a permutation.
            for (std::uint64_t b = 1; b < q_; ++b)
                if (mul_table_[a * q_ + b] == 1) {
                    inv_table_[a] = static_cast<std::uint16_t>(b);
                    break;
                }
        }
    }
}

felem Field::check(felem a) const {
    if (a >= q_) throw std::out_of_range("field element " + std::to_string(a) +
                                         " out of range for q=" + std::to_string(q_));
    return a;
}

felem Field::add(felem a, felem b) const {
    check(a);
    check(b);
    if (k_ == 1) return static_cast<felem>((std::uint64_t(a) + b) % p_);
    felem r = 0;
    std::uint64_t mult = 1;
    for (unsigned i = 0; i < k_; ++i) {
        const std::uint64_t da = (a / mult) % p_, db = (b / mult) % p_;
        r += static_cast<felem>(((da + db) % p_) * mult);
        mult *= p_;
    }
    return r;
}

felem Field::neg(felem a) const {
    check(a);
    if (k_ == 1) return a == 0 ? 0 : static_cast<felem>(p_ - a);
    felem r = 0;
    std::uint64_t mult = 1;
    for (unsigned i = 0; i < k_; ++i) {
        const std::uint64_t da = (a / mult) % p_;
        r += static_cast<felem>(((p_ - da) % p_) * mult);
        mult *= p_;
    }
    return r;
}

felem Field::sub(felem a, felem b) const { return add(a, neg(b)); }

felem Field::mul_nocache(felem a, felem b) const {
    if (k_ == 1) return static_cast<felem>(std::uint64_t(a) * b % p_);
    std::vector<felem> pa = digits(a, p_, k_), pb = digits(b, p_, k_);
    std::vector<felem> r = poly_mul(pa, pb, p_);
    poly_mod(r, modulus_, p_);
    felem out = 0;
    std::uint64_t mult = 1;
    for (unsigned i = 0; i < k_ && i < r.size(); ++i) {
        out += static_cast<felem>(r[i] * mult);
        mult *= p_;
    }
    return out;
}

felem Field::mul(felem a, felem b) const {
    check(a);
    check(b);
    if (!mul_table_.empty()) return mul_table_[std::uint64_t(a) * q_ + b];
    return mul_nocache(a, b);
}

felem Field::inv(felem a) const {
    check(a);
    if (a == 0) throw DivisionByZero("inverse of 0 in GF(" + std::to_string(q_) + ")");
    if (!inv_table_.empty()) return inv_table_[a];
    return pow(a, q_ - 2);
}

felem Field::div(felem a, felem b) const { return mul(a, inv(b)); }

felem Field::pow(felem a, std::uint64_t e) const {
    check(a);
    felem r = 1, base = a;
    while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

}  // namespace gpfq
