#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "gpfq/errors.hpp"
#include "gpfq/field.hpp"

namespace gpfq {

// Points of the affine space F_q^d are indexed by integers in [0, q^d).
// The index is the big-endian base-q encoding of the coordinate tuple
// (coords[0] is the most significant digit), so index order coincides with
// lexicographic order on coordinate tuples.
struct Point {
    std::vector<felem> coords;
    std::uint64_t index = 0;
};

// The ambient affine space F_q^d.
class Space {
  public:
    Space(std::uint64_t q, unsigned d);
    Space(std::shared_ptr<const Field> field, unsigned d);

    std::uint64_t q() const { return field_->q(); }
    unsigned d() const { return d_; }
    std::uint64_t point_count() const { return n_; }
    const Field& field() const { return *field_; }
    std::shared_ptr<const Field> field_ptr() const { return field_; }

    Point point(std::uint64_t index) const;
    std::uint64_t index_of(std::span<const felem> coords) const;
    // Writes the d coordinates of `index` into out[0..d).
    void decode(std::uint64_t index, felem* out) const;

    bool same_ambient(const Space& other) const {
        return q() == other.q() && d_ == other.d_;
    }

  private:
    std::shared_ptr<const Field> field_;
    unsigned d_;
    std::uint64_t n_;
    std::vector<std::uint64_t> stride_;  // q^{d-1-i} for coordinate i
};

// A k-flat of F_q^d in canonical form: `basis` is the reduced row-echelon
// basis of the direction space (rows ordered by pivot column) and `base` is
// the lexicographically least point of the flat (equivalently: its pivot
// coordinates are zero).  Two Flat values describe the same flat iff they
// compare equal.
struct Flat {
    std::uint64_t q = 0;
    unsigned d = 0;
    unsigned k = 0;
    std::uint64_t base = 0;
    std::vector<std::vector<felem>> basis;

    bool operator==(const Flat&) const = default;
    // Total order: (k, base, basis rows lexicographically).
    bool operator<(const Flat& o) const;
};

// Membership bitmap over the q^d points of an ambient space.
class PointSet {
  public:
    PointSet() = default;
    PointSet(std::uint64_t q, unsigned d);
    explicit PointSet(const Space& s) : PointSet(s.q(), s.d()) {}

    std::uint64_t q() const { return q_; }
    unsigned d() const { return d_; }
    std::uint64_t universe_size() const { return n_; }
    std::uint64_t size() const { return count_; }

    bool contains(std::uint64_t index) const {
        return (words_[index >> 6] >> (index & 63)) & 1;
    }
    void add(std::uint64_t index);
    void remove(std::uint64_t index);
    std::vector<std::uint64_t> indices() const;

    // True when every member also lies in `other` (same ambient required).
    bool is_subset_of(const PointSet& other) const;

    // Every point of the space.
    static PointSet full(const Space& s);

    // Text format: one line "q d", then one line of hex encoding the bitmap
    // (byte j covers indices 8j..8j+7, bit i of the byte = index 8j+i).
    void serialize(std::ostream& os) const;
    static PointSet deserialize(std::istream& is);

    bool operator==(const PointSet&) const = default;

  private:
    std::uint64_t q_ = 0;
    unsigned d_ = 0;
    std::uint64_t n_ = 0;
    std::uint64_t count_ = 0;
    std::vector<std::uint64_t> words_;
};

// Gaussian binomial coefficient binom(d, k)_q: the number of k-dimensional
// linear subspaces of F_q^d.  Exact; raises std::overflow_error if the value
// (or an intermediate product) does not fit the 128-bit computation or the
// 64-bit result.
std::uint64_t gaussian_binomial(unsigned d, unsigned k, std::uint64_t q);

// Number of k-flats of F_q^d: q^{d-k} * binom(d, k)_q.
std::uint64_t flat_count(unsigned d, unsigned k, std::uint64_t q);

// Affine span of a nonempty list of points: the smallest flat containing
// them, in canonical form.
Flat affine_span(const Space& s, std::span<const std::uint64_t> points);

// Number of affinely independent points among `points`
// (= dim of affine hull + 1).
unsigned affine_rank(const Space& s, std::span<const std::uint64_t> points);

// The q^k point indices of a flat, sorted ascending.
std::vector<std::uint64_t> flat_points(const Space& s, const Flat& f);

bool flat_contains(const Space& s, const Flat& f, std::uint64_t point);

// Calls fn once per k-flat of the space, in an unspecified order; stops early
// if fn returns false.  Enumeration budget: q^d <= 10^6 (BudgetExceeded).
void for_each_flat(const Space& s, unsigned k,
                   const std::function<bool(const Flat&)>& fn);

// All k-flats, canonical, duplicate-free, sorted by Flat::operator<.
// Length equals flat_count(d, k, q).  Budget: q^d <= 10^6.
std::vector<Flat> enumerate_flats(const Space& s, unsigned k);

// All hyperplanes ((d-1)-flats) containing the given flat, sorted.
// Pre: f.k <= d-1.  Length is (q^{d-f.k} - 1)/(q - 1).
std::vector<Flat> hyperplanes_containing(const Space& s, const Flat& f);

// True iff every k-flat meets P in at most c points.
bool is_evasive(const Space& s, const PointSet& P, unsigned k, std::uint64_t c);

// True iff every (d+1)-subset of P has affine rank d+1; equivalent to
// is_evasive(P, d-1, d).
bool is_general_position(const Space& s, const PointSet& P);

// The moment curve {(x, x^2, ..., x^d) : x in F_q}; q points in general
// position for every q and d.
PointSet moment_curve(const Space& s);

// Throws MixedAmbient unless the set belongs to the space.
void require_same_ambient(const Space& s, const PointSet& P);

}  // namespace gpfq
