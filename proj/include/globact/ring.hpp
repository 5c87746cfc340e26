#pragma once

/*
  Exact arithmetic for the finite commutative rings everything else is
  computed over.  Three kinds are supported:

    Zmod:m           integers mod m, m >= 2
    GF:p             prime field
    GFpoly:p:c0,...  F_p[x]/(f) for a monic f given by its coefficient
                     list c0,c1,...,1 from the constant term up to the
                     leading 1 (degree = list length - 1)

  Elements are canonical indices 0..size()-1 with 0 = zero and 1 = one.
  For Zmod the index is the least nonnegative residue; for GFpoly the
  index is sum c_i p^i over the reduced coefficient vector.
*/

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "globact/caps.hpp"

namespace globact {

class FiniteRing;
using RingPtr = std::shared_ptr<const FiniteRing>;

class FiniteRing {
  public:
    enum class Kind { zmod, prime_field, poly_quotient };

    // Parses the ring-spec grammar.  Throws ConfigError on malformed
    // specs, nonprime p, non-monic quotient, or a zero/trivial ring.
    static RingPtr parse(const std::string& spec);

    Kind kind() const { return kind_; }
    std::uint32_t size() const { return q_; }
    const std::string& spec() const { return spec_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t neg(std::uint32_t a) const;
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
    std::optional<std::uint32_t> inv(std::uint32_t a) const;
    bool is_unit(std::uint32_t a) const { return inv(a).has_value(); }

    // Element as printable canonical representative ("3" or "x+1").
    std::string elem_str(std::uint32_t a) const;

    // Every element exactly once, 0 first, 1 second.
    std::vector<std::uint32_t> enumerate() const;

    bool same_ring(const FiniteRing& other) const {
        return this == &other || spec_ == other.spec_;
    }

  private:
    FiniteRing() = default;

    Kind kind_ = Kind::zmod;
    std::string spec_;
    std::uint32_t q_ = 0;        // element count
    std::uint32_t m_ = 0;        // modulus (zmod) or characteristic p (poly)
    std::uint32_t deg_ = 1;      // quotient degree for poly rings
    std::vector<std::uint32_t> quot_;  // monic quotient coefficients c0..c_{deg} (c_deg = 1)
    // Lookup tables for poly rings (q <= 1024 enforced at parse).
    std::vector<std::uint32_t> mul_table_;
    std::vector<std::uint32_t> add_table_;
};

// A ring element with its ring; equality is representational.
struct RingElem {
    RingPtr ring;
    std::uint32_t idx = 0;

    bool operator==(const RingElem& o) const {
        return ring->same_ring(*o.ring) && idx == o.idx;
    }
};

enum class ArithOp { add, mul, neg };

// Dispatch form used by the CLI; throws DomainError on mixed-ring operands.
RingElem arith(ArithOp op, const RingElem& a, const RingElem& b);

std::optional<RingElem> try_invert(const RingElem& a);

}  // namespace globact
