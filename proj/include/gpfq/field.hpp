#pragma once

#include <cstdint>
#include <vector>

#include "gpfq/errors.hpp"

namespace gpfq {

// Element of a finite field, stored as an index in [0, q).
// The base-p digits of the index are the coefficients of the residue
// polynomial, least-significant digit = constant term.  Index 0 is the
// additive identity and index 1 the multiplicative identity.
using felem = std::uint32_t;

// Exact arithmetic in GF(p^k).
//
// The modulus is the monic irreducible polynomial of degree k over F_p with
// the smallest index, where a monic x^k + c_{k-1}x^{k-1} + ... + c_0 is
// indexed by the base-p value of (c_0, ..., c_{k-1}).  This makes the field
// construction deterministic; e.g. GF(4) always uses x^2 + x + 1.
//
// For q <= 4096 full multiplication/inverse tables are precomputed and all
// operations are table lookups; above that, products are computed by
// polynomial multiplication with modular reduction and inverses by
// exponentiation.
class Field {
  public:
    explicit Field(std::uint64_t q);

    std::uint64_t q() const { return q_; }
    std::uint64_t p() const { return p_; }
    unsigned k() const { return k_; }

    // Coefficients of the modulus, constant term first; length k+1, monic.
    const std::vector<felem>& modulus() const { return modulus_; }

    felem add(felem a, felem b) const;
    felem sub(felem a, felem b) const;
    felem neg(felem a) const;
    felem mul(felem a, felem b) const;
    felem inv(felem a) const;  // throws DivisionByZero on 0
    felem div(felem a, felem b) const;
    felem pow(felem a, std::uint64_t e) const;  // pow(0, 0) == 1

    bool has_tables() const { return !mul_table_.empty(); }

  private:
    felem check(felem a) const;
    felem mul_nocache(felem a, felem b) const;

    std::uint64_t q_ = 0;
    std::uint64_t p_ = 0;
    unsigned k_ = 0;
    std::vector<felem> modulus_;
    std::vector<std::uint16_t> mul_table_;  // q*q entries when q <= 4096
    std::vector<std::uint16_t> inv_table_;  // q entries when q <= 4096
};

// Smallest-index monic irreducible polynomial of degree k over F_p,
// coefficients constant-term first (length k+1).  Exposed for tests.
std::vector<felem> lowest_irreducible(std::uint64_t p, unsigned k);

// True iff the monic polynomial (constant term first) is irreducible over F_p.
bool is_irreducible(std::uint64_t p, const std::vector<felem>& poly);

}  // namespace gpfq
