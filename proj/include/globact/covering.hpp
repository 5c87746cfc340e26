#pragma once

/*
  Coset-space global actions, the H_2 subgroup, the covering-morphism
  criterion, the universal cover E_n/(EP_n)_2, and the algebraic pi_1.

  H_2 of H inside G is generated by the elements of H of the form
  x^{-1} eps_alpha eps_beta x with eps local.  Products over pairs of
  maximal nilpotent sets already realize all such products (every local
  subgroup embeds in a maximal one), and sweeping x over all of G is
  organized as one conjugacy-class walk per distinct product, which is
  the full sweep with the centralizer cosets factored out.
*/

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "globact/action.hpp"
#include "globact/matgroup.hpp"
#include "globact/ring.hpp"

namespace globact {

using GroupPtr = std::shared_ptr<const SubgroupClosure>;

struct CosetAction {
    GroupPtr group;      // G
    GroupPtr subgroup;   // H
    std::vector<std::uint32_t> coset_rep;  // per coset: index in G of the minimal representative
    std::vector<std::uint32_t> coset_of;   // per G element index: coset id
    PointedAction pointed;                 // carrier = cosets, base = H*1
};

// Right-coset action of G/H with the given local subgroups of G.  extra_leq
// holds non-reflexive index comparabilities (reflexive pairs are added).
CosetAction make_coset_action(GroupPtr G, GroupPtr H, const std::vector<GroupPtr>& locals,
                              const std::vector<std::string>& names,
                              const std::vector<std::pair<std::uint32_t, std::uint32_t>>&
                                  extra_leq = {});

// The subgroup of H generated by {h in H : h = x^{-1} e_a e_b x, x in G}.
SubgroupClosure h2(const SubgroupClosure& H, const SubgroupClosure& G,
                   const std::vector<GroupPtr>& max_locals, const Caps& caps = {});

// Reference implementation sweeping x over all of G; for cross-checks on
// small groups only.
SubgroupClosure h2_full_sweep(const SubgroupClosure& H, const SubgroupClosure& G,
                              const std::vector<GroupPtr>& max_locals, const Caps& caps = {});

struct CoveringCheck {
    bool ok = true;
    std::string defect;            // names the failing star and the reason
    std::optional<Point> witness;  // point whose star fails
};

// Star-isomorphism covering test for a surjective point map f: B -> A.
CoveringCheck is_covering(const GlobalAction& B, const GlobalAction& A,
                          const std::vector<Point>& f);

// Finite group as an explicit multiplication table; element 0 is the identity.
struct GroupTable {
    std::vector<std::string> labels;
    std::vector<std::vector<std::uint32_t>> table;
    std::size_t order() const { return labels.size(); }
    bool verify_axioms() const;
};

bool tables_isomorphic(const GroupTable& a, const GroupTable& b);

// H/K with an explicit normality check (throws on failure).
GroupTable quotient_group(const SubgroupClosure& H, const SubgroupClosure& K);

// pi1-related data for one (n, ring) instance.
struct Pi1Algebraic {
    GroupPtr en;    // E_n(R)
    GroupPtr ep;    // EP_n(R)
    GroupPtr ep2;   // (EP_n(R))_2
    GroupTable pi1; // EP/(EP)_2
};

Pi1Algebraic pi1_algebraic(std::uint32_t n, const RingPtr& ring, const Caps& caps = {});

struct UniversalCover {
    CosetAction total;   // E_n/(EP_n)_2
    CosetAction base;    // E_n/EP_n
    std::vector<Point> projection;
    CoveringCheck check;
};

UniversalCover universal_cover(std::uint32_t n, const RingPtr& ring, const Caps& caps = {});

// The manufactured coset action with nontrivial pi1 used by the tests:
// G = <ten face 3-cycles of the 6-vertex projective plane> x <z> realized
// as 8x8 permutation matrices over F_2 (z swaps the two spare points),
// H = <stabilizer of vertex 6, z>.  The face cycles generate A_6 x 1, so
// H_2 = A_5 x 1 has index 2 in H and the orbit complex of G/H is the
// projective plane itself.
struct ToyAction {
    CosetAction action;
    GroupPtr ambient;
    GroupPtr h;
    GroupPtr h_two;
    std::vector<GroupPtr> locals;
};
ToyAction make_toy_action(const Caps& caps = {});

}  // namespace globact
