#pragma once

/*
  The K-theory side of the exact sequence: K_1 classes GL_n/E_n, the
  quotient K_{1,n-1}/(K_{1,n-1})_2, the seven arrows delta, eta, mu,
  lambda, alpha, beta, gamma, and the exactness verifier.

  K_0^s over a finite commutative ring carries rank only (stably free
  modules are free), so gamma is the rank-preserving base map; beta
  still produces an explicit kernel basis as evidence.
*/

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "globact/covering.hpp"
#include "globact/matgroup.hpp"
#include "globact/ring.hpp"
#include "globact/steinberg.hpp"
#include "globact/unimodular.hpp"

namespace globact {

struct K1Data {
    GroupPtr gl;                          // GL_n(R)
    GroupPtr en;                          // E_n(R), normal in GL (checked)
    std::vector<std::uint32_t> class_rep;  // per class: GL index of minimal representative
    std::vector<std::uint32_t> class_of;   // per GL element index
    std::vector<std::uint32_t> det_of_class;
    GroupTable group;                      // GL/E as a group

    std::size_t size() const { return class_rep.size(); }
    std::uint32_t class_of_matrix(const Matrix& m) const;
};

K1Data k1(std::uint32_t n, const RingPtr& ring, const Caps& caps = {});
// Variant reusing an already-computed E_n closure.
K1Data k1_with(std::uint32_t n, const RingPtr& ring, const Caps& caps, GroupPtr en);

struct K0sClass {
    std::uint32_t rank = 0;
    std::vector<std::vector<std::uint32_t>> kernel_basis;  // evidence rows, empty for base ranks
    bool operator==(const K0sClass& o) const { return rank == o.rank; }
};

// All data the sequence checks need for one (n, ring) instance.
struct KstabContext {
    std::uint32_t n;
    RingPtr ring;
    K1Data k1n;          // K_{1,n}
    K1Data k1m;          // K_{1,n-1}
    Pi1Algebraic pi1;    // E_n, EP_n, (EP_n)_2, pi1 table
    UmAction um;
    Pi0Result um_pi0;

    // (K_{1,n-1})_2 = (GL_{n-1} cap (EP_n)_2)/E_{n-1}, as a set of K_{1,n-1} class ids.
    std::vector<std::uint32_t> k1m2_classes;
    // quotient labels: K_{1,n-1} class id -> class id mod (K_{1,n-1})_2
    std::vector<std::uint32_t> k1m_quot_of;
    std::uint32_t k1m_quot_size = 0;
};

KstabContext make_kstab_context(std::uint32_t n, const RingPtr& ring, const Caps& caps = {});

// sigma |-> pi0 class of e*sigma.
std::uint32_t alpha_map(const KstabContext& c, std::uint32_t k1_class);

// [v] |-> class of ker(w -> w v^t); explicit basis from an elementary completion.
K0sClass beta_map(const KstabContext& c, Point v);

// rank r class |-> rank r+1 class (P |-> P + R).
K0sClass gamma_map(const K0sClass& x);

// pi1 class (as an (EP)_2-coset of sigma in EP) |-> [right diagonal block]
// in K_{1,n-1}/(K_{1,n-1})_2.
std::uint32_t mu_map(const KstabContext& c, const Matrix& sigma_in_ep);

// [tau] (K_{1,n-1})_2 |-> class of diag(1, tau) in K_{1,n}.
std::uint32_t lambda_map(const KstabContext& c, std::uint32_t k1m_class);

// K_2 witness word |-> its pi1 class through theta (the base class).
std::uint32_t eta_map(const KstabContext& c, const SteinbergWord& w);

// Natural inclusion of (K_{2,n})_2 witnesses into K_2 witnesses.
SteinbergWord delta_map(const SteinbergWord& w);

struct ArrowCheck {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct SequenceReport {
    std::string ring_spec;
    std::uint32_t n = 0;
    std::vector<ArrowCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Runs every composite-triviality and exactness check of the eight-term
// sequence that is computable on the instance, with witnesses.
SequenceReport verify_sequence(std::uint32_t n, const RingPtr& ring, const Caps& caps = {});

}  // namespace globact
