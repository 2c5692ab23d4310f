#include "gpfq/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <istream>
#include <ostream>
#include <string>

namespace gpfq {

namespace {

using u128 = unsigned __int128;

u128 mul_checked(u128 a, u128 b) {
    if (a != 0 && b > static_cast<u128>(-1) / a)
        throw std::overflow_error("128-bit overflow in exact count");
    return a * b;
}

u128 pow_checked(std::uint64_t base, unsigned exp) {
    u128 r = 1;
    for (unsigned i = 0; i < exp; ++i) r = mul_checked(r, base);
    return r;
}

std::uint64_t narrow64(u128 v, const char* what) {
    if (v > static_cast<u128>(UINT64_MAX))
        throw std::overflow_error(std::string(what) + " exceeds 64 bits");
    return static_cast<std::uint64_t>(v);
}

constexpr std::uint64_t kEnumBudget = 1'000'000;   // max q^d for enumeration
constexpr std::uint64_t kFlatBudget = 100'000'000; // max flats visited

// Reduced row echelon form in place; returns the pivot columns (ascending).
// Rows at indices >= pivots.size() are zero afterwards.
std::vector<unsigned> rref(const Field& F, std::vector<std::vector<felem>>& rows,
                           unsigned d) {
    std::vector<unsigned> pivots;
    std::size_t r = 0;
    for (unsigned col = 0; col < d && r < rows.size(); ++col) {
        std::size_t sel = r;
        while (sel < rows.size() && rows[sel][col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[r], rows[sel]);
        const felem pinv = F.inv(rows[r][col]);
        for (unsigned j = 0; j < d; ++j) rows[r][j] = F.mul(rows[r][j], pinv);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][col] == 0) continue;
            const felem c = rows[i][col];
            for (unsigned j = 0; j < d; ++j)
                rows[i][j] = F.sub(rows[i][j], F.mul(c, rows[r][j]));
        }
        pivots.push_back(col);
        ++r;
    }
    return pivots;
}

unsigned pivot_of(const std::vector<felem>& row) {
    for (unsigned j = 0; j < row.size(); ++j)
        if (row[j] != 0) return j;
    return static_cast<unsigned>(row.size());
}

// Builds the canonical Flat spanned by `rows` (independent RREF rows assumed)
// through the point with coordinates base_coords: zeroes the pivot
// coordinates of the base, making it the lexicographically least point.
Flat canonical_flat(const Space& s, std::vector<felem> base_coords,
                    std::vector<std::vector<felem>> rows,
                    const std::vector<unsigned>& pivots) {
    const Field& F = s.field();
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        const felem c = base_coords[pivots[i]];
        if (c == 0) continue;
        for (unsigned j = 0; j < s.d(); ++j)
            base_coords[j] = F.sub(base_coords[j], F.mul(c, rows[i][j]));
    }
    Flat f;
    f.q = s.q();
    f.d = s.d();
    f.k = static_cast<unsigned>(rows.size());
    f.base = s.index_of(base_coords);
    f.basis = std::move(rows);
    return f;
}

}  // namespace

bool Flat::operator<(const Flat& o) const {
    if (k != o.k) return k < o.k;
    if (base != o.base) return base < o.base;
    return basis < o.basis;
}

Space::Space(std::uint64_t q, unsigned d) : Space(std::make_shared<Field>(q), d) {}

Space::Space(std::shared_ptr<const Field> field, unsigned d)
    : field_(std::move(field)), d_(d) {
    if (d_ < 1) throw std::invalid_argument("space dimension must be >= 1");
    u128 n = pow_checked(field_->q(), d_);
    n_ = narrow64(n, "q^d");
    stride_.resize(d_);
    std::uint64_t acc = 1;
    for (unsigned i = 0; i < d_; ++i) {
        stride_[d_ - 1 - i] = acc;
        if (i + 1 < d_) acc *= field_->q();
    }
}

Point Space::point(std::uint64_t index) const {
    if (index >= n_) throw std::out_of_range("point index out of range");
    Point p;
    p.index = index;
    p.coords.resize(d_);
    decode(index, p.coords.data());
    return p;
}

void Space::decode(std::uint64_t index, felem* out) const {
    for (unsigned i = 0; i < d_; ++i)
        out[i] = static_cast<felem>((index / stride_[i]) % field_->q());
}

std::uint64_t Space::index_of(std::span<const felem> coords) const {
    if (coords.size() != d_) throw std::invalid_argument("wrong coordinate count");
    std::uint64_t idx = 0;
    for (unsigned i = 0; i < d_; ++i) {
        if (coords[i] >= field_->q()) throw std::out_of_range("coordinate out of range");
        idx += std::uint64_t(coords[i]) * stride_[i];
    }
    return idx;
}

PointSet::PointSet(std::uint64_t q, unsigned d) : q_(q), d_(d) {
    n_ = narrow64(pow_checked(q, d), "q^d");
    words_.assign((n_ + 63) / 64, 0);
}

void PointSet::add(std::uint64_t index) {
    if (index >= n_) throw std::out_of_range("point index out of range");
    std::uint64_t& w = words_[index >> 6];
    const std::uint64_t bit = 1ULL << (index & 63);
    if (!(w & bit)) {
        w |= bit;
        ++count_;
    }
}

void PointSet::remove(std::uint64_t index) {
    if (index >= n_) throw std::out_of_range("point index out of range");
    std::uint64_t& w = words_[index >> 6];
    const std::uint64_t bit = 1ULL << (index & 63);
    if (w & bit) {
        w &= ~bit;
        --count_;
    }
}

std::vector<std::uint64_t> PointSet::indices() const {
    std::vector<std::uint64_t> out;
    out.reserve(count_);
    for (std::uint64_t w = 0; w < words_.size(); ++w) {
        std::uint64_t bits = words_[w];
        while (bits) {
            const int b = std::countr_zero(bits);
            out.push_back((w << 6) | unsigned(b));
            bits &= bits - 1;
        }
    }
    return out;
}

bool PointSet::is_subset_of(const PointSet& other) const {
    if (q_ != other.q_ || d_ != other.d_)
        throw MixedAmbient("is_subset_of: point sets live in different spaces");
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~other.words_[i]) return false;
    return true;
}

PointSet PointSet::full(const Space& s) {
    PointSet P(s);
    for (std::uint64_t i = 0; i < s.point_count(); ++i) P.add(i);
    return P;
}

void PointSet::serialize(std::ostream& os) const {
    os << q_ << ' ' << d_ << '\n';
    static const char* hex = "0123456789abcdef";
    const std::uint64_t bytes = (n_ + 7) / 8;
    std::string line;
    line.reserve(bytes * 2);
    for (std::uint64_t j = 0; j < bytes; ++j) {
        const unsigned v = (words_[j >> 3] >> ((j & 7) * 8)) & 0xff;
        line.push_back(hex[v >> 4]);
        line.push_back(hex[v & 0xf]);
    }
    os << line << '\n';
}

PointSet PointSet::deserialize(std::istream& is) {
    std::uint64_t q = 0;
    unsigned d = 0;
    if (!(is >> q >> d)) throw std::invalid_argument("point set header malformed");
    std::string hexline;
    if (!(is >> hexline)) throw std::invalid_argument("point set bitmap missing");
    PointSet P(q, d);
    const std::uint64_t bytes = (P.n_ + 7) / 8;
    if (hexline.size() != bytes * 2)
        throw std::invalid_argument("point set bitmap has wrong length");
    auto nibble = [](char c) -> unsigned {
        if (c >= '0' && c <= '9') return unsigned(c - '0');
        if (c >= 'a' && c <= 'f') return unsigned(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return unsigned(c - 'A' + 10);
        throw std::invalid_argument("point set bitmap has a non-hex character");
    };
    for (std::uint64_t j = 0; j < bytes; ++j) {
        const std::uint64_t v = (std::uint64_t(nibble(hexline[2 * j])) << 4) |
                                nibble(hexline[2 * j + 1]);
        P.words_[j >> 3] |= v << ((j & 7) * 8);
    }
    // Bits beyond the universe must be zero.
    for (std::uint64_t i = P.n_; i < bytes * 8; ++i)
        if ((P.words_[i >> 6] >> (i & 63)) & 1)
            throw std::invalid_argument("point set bitmap has padding bits set");
    std::uint64_t cnt = 0;
    for (const std::uint64_t w : P.words_) cnt += std::uint64_t(std::popcount(w));
    P.count_ = cnt;
    return P;
}

void require_same_ambient(const Space& s, const PointSet& P) {
    if (P.q() != s.q() || P.d() != s.d())
        throw MixedAmbient("point set ambient (" + std::to_string(P.q()) + "," +
                           std::to_string(P.d()) + ") does not match space (" +
                           std::to_string(s.q()) + "," + std::to_string(s.d()) + ")");
}

std::uint64_t gaussian_binomial(unsigned d, unsigned k, std::uint64_t q) {
    if (q < 2) throw NotPrimePower("q must be >= 2");
    if (k > d) return 0;
    if (k == 0 || k == d) return 1;
    // Product of (q^{d-k+i} - 1)/(q^i - 1); every partial product is itself a
    // Gaussian binomial, so the division is exact at each step.
    u128 r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r = mul_checked(r, pow_checked(q, d - k + i) - 1);
        r /= pow_checked(q, i) - 1;
    }
    return narrow64(r, "gaussian binomial");
}

std::uint64_t flat_count(unsigned d, unsigned k, std::uint64_t q) {
    if (k > d) return 0;
    return narrow64(mul_checked(pow_checked(q, d - k), gaussian_binomial(d, k, q)),
                    "flat count");
}

Flat affine_span(const Space& s, std::span<const std::uint64_t> points) {
    if (points.empty()) throw std::invalid_argument("affine span of no points");
    const Field& F = s.field();
    const unsigned d = s.d();
    std::vector<felem> base(d);
    s.decode(points[0], base.data());
    std::vector<std::vector<felem>> rows;
    rows.reserve(points.size() - 1);
    std::vector<felem> tmp(d);
    for (std::size_t i = 1; i < points.size(); ++i) {
        s.decode(points[i], tmp.data());
        std::vector<felem> diff(d);
        for (unsigned j = 0; j < d; ++j) diff[j] = F.sub(tmp[j], base[j]);
        rows.push_back(std::move(diff));
    }
    const std::vector<unsigned> pivots = rref(F, rows, d);
    rows.resize(pivots.size());
    return canonical_flat(s, std::move(base), std::move(rows), pivots);
}

unsigned affine_rank(const Space& s, std::span<const std::uint64_t> points) {
    if (points.empty()) return 0;
    return affine_span(s, points).k + 1;
}

std::vector<std::uint64_t> flat_points(const Space& s, const Flat& f) {
    if (f.q != s.q() || f.d != s.d()) throw MixedAmbient("flat from another space");
    const Field& F = s.field();
    const unsigned d = s.d(), k = f.k;
    std::uint64_t total = 1;
    for (unsigned i = 0; i < k; ++i) total *= s.q();
    std::vector<std::uint64_t> out;
    out.reserve(total);
    std::vector<felem> base(d), coords(d);
    s.decode(f.base, base.data());
    std::vector<felem> t(k, 0);
    for (std::uint64_t n = 0; n < total; ++n) {
        coords = base;
        for (unsigned i = 0; i < k; ++i) {
            if (t[i] == 0) continue;
            for (unsigned j = 0; j < d; ++j)
                coords[j] = F.add(coords[j], F.mul(t[i], f.basis[i][j]));
        }
        out.push_back(s.index_of(coords));
        for (unsigned i = k; i-- > 0;) {  // odometer
            if (++t[i] < s.q()) break;
            t[i] = 0;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool flat_contains(const Space& s, const Flat& f, std::uint64_t point) {
    if (f.q != s.q() || f.d != s.d()) throw MixedAmbient("flat from another space");
    const Field& F = s.field();
    const unsigned d = s.d();
    std::vector<felem> diff(d), base(d);
    s.decode(point, diff.data());
    s.decode(f.base, base.data());
    for (unsigned j = 0; j < d; ++j) diff[j] = F.sub(diff[j], base[j]);
    for (const auto& row : f.basis) {
        const unsigned p = pivot_of(row);
        const felem c = diff[p];
        if (c == 0) continue;
        for (unsigned j = 0; j < d; ++j) diff[j] = F.sub(diff[j], F.mul(c, row[j]));
    }
    return std::all_of(diff.begin(), diff.end(), [](felem x) { return x == 0; });
}

void for_each_flat(const Space& s, unsigned k,
                   const std::function<bool(const Flat&)>& fn) {
    if (k > s.d()) throw std::invalid_argument("flat dimension exceeds space dimension");
    if (s.point_count() > kEnumBudget)
        throw BudgetExceeded("flat enumeration needs q^d <= 1e6, got q^d = " +
                             std::to_string(s.point_count()));
    if (flat_count(s.d(), k, s.q()) > kFlatBudget)
        throw BudgetExceeded("flat enumeration would visit too many flats");
    const Field& F = s.field();
    const unsigned d = s.d();
    const std::uint64_t q = s.q();

    if (k == 0) {
        Flat f;
        f.q = q;
        f.d = d;
        f.k = 0;
        for (std::uint64_t i = 0; i < s.point_count(); ++i) {
            f.base = i;
            if (!fn(f)) return;
        }
        return;
    }

    // Pivot columns p[0] < ... < p[k-1] of the RREF direction basis.
    std::vector<unsigned> piv(k);
    for (unsigned i = 0; i < k; ++i) piv[i] = i;
    std::vector<bool> is_piv(d, false);
    while (true) {
        std::fill(is_piv.begin(), is_piv.end(), false);
        for (unsigned i = 0; i < k; ++i) is_piv[piv[i]] = true;

        // Free entries of the basis: (row i, column c) with c > piv[i], c not
        // a pivot.  Free coordinates of the base: the non-pivot columns.
        std::vector<std::pair<unsigned, unsigned>> cells;
        for (unsigned i = 0; i < k; ++i)
            for (unsigned c = piv[i] + 1; c < d; ++c)
                if (!is_piv[c]) cells.emplace_back(i, c);
        std::vector<unsigned> free_cols;
        for (unsigned c = 0; c < d; ++c)
            if (!is_piv[c]) free_cols.push_back(c);

        std::vector<std::vector<felem>> basis(k, std::vector<felem>(d, 0));
        for (unsigned i = 0; i < k; ++i) basis[i][piv[i]] = 1;

        std::vector<felem> cellval(cells.size(), 0);
        while (true) {  // over basis free entries
            for (std::size_t i = 0; i < cells.size(); ++i)
                basis[cells[i].first][cells[i].second] = cellval[i];

            std::vector<felem> base(d, 0);
            std::vector<felem> baseval(free_cols.size(), 0);
            while (true) {  // over base free coordinates
                for (std::size_t i = 0; i < free_cols.size(); ++i)
                    base[free_cols[i]] = baseval[i];
                Flat f;
                f.q = q;
                f.d = d;
                f.k = k;
                f.base = s.index_of(base);
                f.basis = basis;
                if (!fn(f)) return;
                std::size_t i = baseval.size();
                while (i-- > 0) {
                    if (++baseval[i] < q) break;
                    baseval[i] = 0;
                    if (i == 0) goto base_done;
                }
                if (free_cols.empty()) break;
            }
        base_done:;
            std::size_t i = cellval.size();
            while (i-- > 0) {
                if (++cellval[i] < q) break;
                cellval[i] = 0;
                if (i == 0) goto cells_done;
            }
            if (cells.empty()) break;
        }
    cells_done:;
        // Next pivot combination.
        int i = int(k) - 1;
        while (i >= 0 && piv[i] == d - k + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (unsigned j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
    }
    (void)F;
}

std::vector<Flat> enumerate_flats(const Space& s, unsigned k) {
    std::vector<Flat> out;
    for_each_flat(s, k, [&](const Flat& f) {
        out.push_back(f);
        return true;
    });
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Flat> hyperplanes_containing(const Space& s, const Flat& f) {
    if (f.q != s.q() || f.d != s.d()) throw MixedAmbient("flat from another space");
    if (f.k > s.d() - 1)
        throw PreconditionFailed("hyperplanes_containing needs flat dim <= d-1");
    const Field& F = s.field();
    const unsigned d = s.d(), k = f.k;
    const std::uint64_t q = s.q();

    // Nullspace of the (RREF) direction basis: one vector per free column.
    std::vector<unsigned> piv(k);
    std::vector<bool> is_piv(d, false);
    for (unsigned i = 0; i < k; ++i) {
        piv[i] = pivot_of(f.basis[i]);
        is_piv[piv[i]] = true;
    }
    std::vector<std::vector<felem>> null_basis;
    for (unsigned c = 0; c < d; ++c) {
        if (is_piv[c]) continue;
        std::vector<felem> v(d, 0);
        v[c] = 1;
        for (unsigned i = 0; i < k; ++i) v[piv[i]] = F.neg(f.basis[i][c]);
        null_basis.push_back(std::move(v));
    }
    const unsigned m = static_cast<unsigned>(null_basis.size());  // d - k

    std::vector<felem> base_coords(d);
    s.decode(f.base, base_coords.data());

    std::vector<Flat> out;
    // Nonzero combinations with first nonzero coefficient 1: one
    // representative per projective normal direction.
    std::vector<felem> alpha(m, 0);
    std::function<void(unsigned, bool)> rec = [&](unsigned i, bool fixed) {
        if (i == m) {
            if (!fixed) return;
            std::vector<felem> a(d, 0);
            for (unsigned t = 0; t < m; ++t) {
                if (alpha[t] == 0) continue;
                for (unsigned j = 0; j < d; ++j)
                    a[j] = F.add(a[j], F.mul(alpha[t], null_basis[t][j]));
            }
            felem b = 0;
            for (unsigned j = 0; j < d; ++j) b = F.add(b, F.mul(a[j], base_coords[j]));
            // Hyperplane {x : a.x = b}: particular solution plus nullspace of a.
            unsigned lead = 0;
            while (a[lead] == 0) ++lead;
            std::vector<felem> x0(d, 0);
            x0[lead] = F.div(b, a[lead]);
            std::vector<std::vector<felem>> dirs;
            for (unsigned c = 0; c < d; ++c) {
                if (c == lead) continue;
                std::vector<felem> w(d, 0);
                w[c] = 1;
                w[lead] = F.neg(F.div(a[c], a[lead]));
                dirs.push_back(std::move(w));
            }
            const std::vector<unsigned> pv = rref(F, dirs, d);
            dirs.resize(pv.size());
            out.push_back(canonical_flat(s, std::move(x0), std::move(dirs), pv));
            return;
        }
        if (!fixed) {
            alpha[i] = 0;
            rec(i + 1, false);
            alpha[i] = 1;  // first nonzero coefficient normalized to 1
            rec(i + 1, true);
        } else {
            for (std::uint64_t v = 0; v < q; ++v) {
                alpha[i] = static_cast<felem>(v);
                rec(i + 1, true);
            }
        }
        alpha[i] = 0;
    };
    rec(0, false);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_evasive(const Space& s, const PointSet& P, unsigned k, std::uint64_t c) {
    require_same_ambient(s, P);
    if (k > s.d() - 1) throw std::invalid_argument("is_evasive needs 0 <= k <= d-1");
    bool ok = true;
    for_each_flat(s, k, [&](const Flat& f) {
        std::uint64_t cnt = 0;
        for (const std::uint64_t pt : flat_points(s, f)) {
            if (P.contains(pt) && ++cnt > c) {
                ok = false;
                return false;
            }
        }
        return true;
    });
    return ok;
}

bool is_general_position(const Space& s, const PointSet& P) {
    return is_evasive(s, P, s.d() - 1, s.d());
}

PointSet moment_curve(const Space& s) {
    const Field& F = s.field();
    PointSet P(s);
    std::vector<felem> coords(s.d());
    for (std::uint64_t x = 0; x < s.q(); ++x) {
        for (unsigned i = 0; i < s.d(); ++i)
            coords[i] = F.pow(static_cast<felem>(x), i + 1);
        P.add(s.index_of(coords));
    }
    return P;
}

}  // namespace gpfq
