#pragma once

/*
  Steinberg group words on the generators X_ij(r), the homomorphism
  theta sending X_ij(r) to E_ij(r), and the local isomorphisms between
  (St_n)_alpha and the standard unipotent subgroups.

  No general word problem is attempted: words are compared through
  theta and, inside a nilpotent local subgroup, through the entry-wise
  normal form (where the canonical map to matrices is bijective).
*/

#include <cstdint>
#include <optional>
#include <vector>

#include "globact/matgroup.hpp"
#include "globact/ring.hpp"

namespace globact {

struct SteinbergLetter {
    std::uint32_t i = 1, j = 2;   // 1-based, i != j
    std::uint32_t r = 0;          // ring element index
    std::int32_t exp = 1;         // +1 or -1
};

class SteinbergWord {
  public:
    SteinbergWord(RingPtr ring, std::uint32_t n) : ring_(std::move(ring)), n_(n) {}
    SteinbergWord(RingPtr ring, std::uint32_t n, std::vector<SteinbergLetter> letters);

    // Appends X_ij(r)^exp and re-canonicalizes (exponents folded into the
    // coefficient, adjacent same-position letters merged, X_ij(0) dropped).
    void append(std::uint32_t i, std::uint32_t j, std::uint32_t r, std::int32_t exp = 1);

    SteinbergWord concat(const SteinbergWord& o) const;
    SteinbergWord inverse() const;

    const std::vector<SteinbergLetter>& letters() const { return letters_; }
    const RingPtr& ring() const { return ring_; }
    std::uint32_t n() const { return n_; }
    bool empty() const { return letters_.empty(); }

    bool operator==(const SteinbergWord& o) const;

  private:
    void canonicalize();

    RingPtr ring_;
    std::uint32_t n_;
    std::vector<SteinbergLetter> letters_;
};

// Product of the elementary images, in order.
Matrix theta(const SteinbergWord& w);

// Smallest nilpotent set containing all letter positions, if any.
std::optional<NilpotentSet> is_local(const SteinbergWord& w);

// Inverse of theta on a local subgroup: a word with letters in alpha
// whose image is m.  Requires m in local_subgroup(alpha).
SteinbergWord local_matrix_to_word(const NilpotentSet& alpha, const Matrix& m);

// Entry-wise normal form inside alpha: one letter per position of alpha
// in a fixed chain-length order; bijective onto local_subgroup(alpha).
SteinbergWord local_normal_form(const NilpotentSet& alpha, const SteinbergWord& w);

// theta(w) == I, i.e. the word witnesses an element of K_{2,n}(R).
bool k2_witness(const SteinbergWord& w);

}  // namespace globact
