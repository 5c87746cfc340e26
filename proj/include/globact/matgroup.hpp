#pragma once

/*
  Matrices over a finite ring, the elementary generators E_ij(r), the
  nilpotent index set Phi_n with its standard unipotent local subgroups,
  and explicit subgroup materialization by breadth-first closure.

  Subgroup elements are stored as packed canonical encodings (one u64
  per matrix when the entry width allows, a byte string otherwise) so
  membership during closure is a hash lookup.
*/

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "globact/caps.hpp"
#include "globact/ring.hpp"

namespace globact {

class Matrix {
  public:
    Matrix() = default;
    Matrix(RingPtr ring, std::uint32_t n)
        : ring_(std::move(ring)), n_(n), e_(std::size_t(n) * n, 0) {}

    static Matrix identity(RingPtr ring, std::uint32_t n);
    // E_ij(r) = I + r e_ij ; i, j are 1-based, i != j.
    static Matrix elementary(RingPtr ring, std::uint32_t n, std::uint32_t i, std::uint32_t j,
                             std::uint32_t r);

    std::uint32_t n() const { return n_; }
    const RingPtr& ring() const { return ring_; }

    std::uint32_t at(std::uint32_t i, std::uint32_t j) const { return e_[std::size_t(i) * n_ + j]; }
    void set(std::uint32_t i, std::uint32_t j, std::uint32_t v) { e_[std::size_t(i) * n_ + j] = v; }

    Matrix mul(const Matrix& o) const;
    std::uint32_t det() const;                 // exact, subset expansion (no division)
    std::optional<Matrix> inverse() const;     // adjugate; empty if det is a non-unit

    // Right action on row vectors: v -> v * this.
    std::vector<std::uint32_t> apply_row(const std::vector<std::uint32_t>& v) const;

    bool operator==(const Matrix& o) const { return n_ == o.n_ && e_ == o.e_; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }
    bool operator<(const Matrix& o) const { return e_ < o.e_; }

    const std::vector<std::uint32_t>& entries() const { return e_; }
    std::string to_string() const;

  private:
    void check_compatible(const Matrix& o) const;

    RingPtr ring_;
    std::uint32_t n_ = 0;
    std::vector<std::uint32_t> e_;
};

// ---------------------------------------------------------------------------
// Nilpotent subsets of J_n = {(i,j) : i != j}, 1-based pairs.

struct NilpotentSet {
    std::uint32_t n = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;  // sorted

    bool operator==(const NilpotentSet& o) const { return n == o.n && pairs == o.pairs; }
    std::string name() const;
};

bool is_nilpotent_set(std::uint32_t n,
                      const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs);
NilpotentSet make_nilpotent(std::uint32_t n,
                            std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs);
NilpotentSet intersect(const NilpotentSet& a, const NilpotentSet& b);
NilpotentSet max_delta(std::uint32_t n);  // {(i,j) : i < j}

// All nilpotent subsets of J_n, deterministic order (by size then lex).
std::vector<NilpotentSet> enumerate_phi(std::uint32_t n);
// The maximal ones (= S_n images of delta).
std::vector<NilpotentSet> maximal_nilpotent_sets(std::uint32_t n);

// S_n actions of Prop 2.12: pi is a 1-based image table pi[i-1] = pi(i).
Matrix permutation_matrix(RingPtr ring, const std::vector<std::uint32_t>& pi);
Matrix sn_conjugate(const std::vector<std::uint32_t>& pi, const Matrix& m);
NilpotentSet sn_on_index(const std::vector<std::uint32_t>& pi, const NilpotentSet& a);

// ---------------------------------------------------------------------------
// Packed canonical matrix keys for hashed membership.

class MatrixCodec {
  public:
    MatrixCodec(RingPtr ring, std::uint32_t n);
    bool packable() const { return packable_; }
    std::uint64_t pack(const Matrix& m) const;
    Matrix unpack(std::uint64_t key) const;
    std::string pack_str(const Matrix& m) const;

    const RingPtr& ring() const { return ring_; }
    std::uint32_t n() const { return n_; }

  private:
    RingPtr ring_;
    std::uint32_t n_;
    std::uint32_t bits_;
    bool packable_;
};

// A finite subgroup materialized as an explicit element set.  Elements
// are indexed in discovery (BFS) order; index 0 is the identity.
class SubgroupClosure {
  public:
    // Breadth-first closure of the generated subgroup.  Throws CapExceeded
    // when the projected size passes caps.closure_max.  Generators must be
    // invertible and share ring/dimension.
    static SubgroupClosure closure(RingPtr ring, std::uint32_t n,
                                   const std::vector<Matrix>& generators, const Caps& caps = {});

    // Wraps an already-closed element set (verified when verify = true).
    static SubgroupClosure from_elements(RingPtr ring, std::uint32_t n,
                                         std::vector<Matrix> elements,
                                         std::vector<Matrix> generators, bool verify);

    std::size_t size() const { return packed_ ? keys_.size() : raw_.size(); }
    Matrix element(std::size_t i) const;
    std::optional<std::uint32_t> index_of(const Matrix& m) const;
    bool contains(const Matrix& m) const { return index_of(m).has_value(); }

    const std::vector<Matrix>& generators() const { return gens_; }
    const RingPtr& ring() const { return ring_; }
    std::uint32_t n() const { return n_; }

    // Factorization of element i as a word in the generators (indices into
    // generators()), from the closure BFS tree.  Empty for the identity.
    std::vector<std::uint32_t> factor(std::uint32_t i) const;

    bool is_subset_of(const SubgroupClosure& o) const;

  private:
    SubgroupClosure() = default;
    void index_elements();

    RingPtr ring_;
    std::uint32_t n_ = 0;
    bool packed_ = true;
    std::vector<std::uint64_t> keys_;    // packed path
    std::vector<Matrix> raw_;            // fallback path
    std::vector<Matrix> gens_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> parent_;  // (parent elt, generator)
    std::unordered_map<std::uint64_t, std::uint32_t> map_;
    std::unordered_map<std::string, std::uint32_t> map_str_;
    std::shared_ptr<MatrixCodec> codec_;
};

// Closure of {E_ij(r) : (i,j) in alpha, r in R}; trivial group for empty alpha.
SubgroupClosure local_subgroup(const NilpotentSet& alpha, const RingPtr& ring,
                               const Caps& caps = {});

// All E_ij(r), r != 0, in deterministic order.
std::vector<Matrix> elementary_generators(const RingPtr& ring, std::uint32_t n);

// {g in G : e * g = e}, i.e. first row (1,0,...,0).
SubgroupClosure stabilizer_of_e(const SubgroupClosure& G);

// Orbit of a row under the subgroup, as a sorted set of rows.
std::vector<std::vector<std::uint32_t>> row_orbit(const SubgroupClosure& G,
                                                  const std::vector<std::uint32_t>& row);

}  // namespace globact
