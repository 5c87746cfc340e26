#include "globact/covering.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace globact {

// ---------------------------------------------------------------------------
// Coset actions

CosetAction make_coset_action(GroupPtr G, GroupPtr H, const std::vector<GroupPtr>& locals,
                              const std::vector<std::string>& names,
                              const std::vector<std::pair<std::uint32_t, std::uint32_t>>&
                                  extra_leq) {
    if (!H->is_subset_of(*G)) throw DomainError("H is not a subgroup of G");
    CosetAction ca;
    ca.group = G;
    ca.subgroup = H;

    const std::size_t N = G->size();
    ca.coset_of.assign(N, UINT32_MAX);
    std::vector<Matrix> h_elems;
    h_elems.reserve(H->size());
    for (std::size_t i = 0; i < H->size(); ++i) h_elems.push_back(H->element(i));
    for (std::uint32_t gi = 0; gi < N; ++gi) {
        if (ca.coset_of[gi] != UINT32_MAX) continue;
        std::uint32_t cid = static_cast<std::uint32_t>(ca.coset_rep.size());
        Matrix g = G->element(gi);
        std::uint32_t min_idx = gi;
        for (const auto& h : h_elems) {
            auto idx = G->index_of(h.mul(g));
            if (!idx) throw DomainError("H does not act inside G");
            ca.coset_of[*idx] = cid;
            min_idx = std::min(min_idx, *idx);
        }
        ca.coset_rep.push_back(min_idx);
    }

    GlobalAction& a = ca.pointed.action;
    a.num_points = static_cast<std::uint32_t>(ca.coset_rep.size());
    for (std::uint32_t c = 0; c < a.num_points; ++c)
        a.point_labels.push_back("Hg" + std::to_string(ca.coset_rep[c]));

    for (std::size_t li = 0; li < locals.size(); ++li) {
        LocalAction loc;
        loc.name = li < names.size() ? names[li] : ("local" + std::to_string(li));
        for (Point c = 0; c < a.num_points; ++c) loc.local_set.push_back(c);
        for (std::size_t k = 0; k < locals[li]->size(); ++k) {
            Matrix u = locals[li]->element(k);
            Perm perm(a.num_points);
            for (Point c = 0; c < a.num_points; ++c) {
                auto idx = G->index_of(G->element(ca.coset_rep[c]).mul(u));
                if (!idx) throw DomainError("local subgroup does not act inside G");
                perm[c] = ca.coset_of[*idx];
            }
            loc.elements.push_back(std::move(perm));
        }
        a.locals.push_back(std::move(loc));
    }
    for (std::uint32_t i = 0; i < a.locals.size(); ++i) a.leq.emplace_back(i, i);
    for (auto [p, q] : extra_leq)
        if (p != q) a.leq.emplace_back(p, q);
    a.index_orbits();
    ca.pointed.base = ca.coset_of[0];
    return ca;
}

// ---------------------------------------------------------------------------
// H_2

namespace {

// Distinct products e_a * e_b over the given local subgroups, as G indices.
std::vector<std::uint32_t> pair_products(const SubgroupClosure& G,
                                         const std::vector<GroupPtr>& locals) {
    std::unordered_set<std::uint32_t> seen;
    std::vector<std::uint32_t> out;
    for (const auto& A : locals)
        for (const auto& B : locals)
            for (std::size_t ai = 0; ai < A->size(); ++ai) {
                Matrix a = A->element(ai);
                for (std::size_t bi = 0; bi < B->size(); ++bi) {
                    auto idx = G.index_of(a.mul(B->element(bi)));
                    if (!idx) throw DomainError("local product escapes G");
                    if (seen.insert(*idx).second) out.push_back(*idx);
                }
            }
    std::sort(out.begin(), out.end());
    return out;
}

// Generator-inverse pairs for conjugation walks, deduplicated.
std::vector<std::pair<Matrix, Matrix>> conjugator_pairs(const SubgroupClosure& G) {
    std::vector<Matrix> base = G.generators();
    if (base.empty())
        for (std::size_t i = 0; i < G.size(); ++i) base.push_back(G.element(i));
    std::vector<Matrix> all;
    for (const auto& g : base) {
        all.push_back(g);
        all.push_back(*g.inverse());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::vector<std::pair<Matrix, Matrix>> out;
    out.reserve(all.size());
    for (auto& g : all) out.emplace_back(g, *g.inverse());
    return out;
}

// Closure with the generator list pruned to the ones that enlarge the group;
// keeps later normality sweeps over the generators cheap.
SubgroupClosure closure_pruned(const RingPtr& ring, std::uint32_t n,
                               const std::vector<Matrix>& candidates, const Caps& caps) {
    std::vector<Matrix> kept;
    std::optional<SubgroupClosure> cur;
    for (const auto& m : candidates) {
        if (cur && cur->contains(m)) continue;
        kept.push_back(m);
        cur = SubgroupClosure::closure(ring, n, kept, caps);
    }
    if (!cur) return SubgroupClosure::closure(ring, n, {}, caps);
    return *cur;
}

}  // namespace

SubgroupClosure h2(const SubgroupClosure& H, const SubgroupClosure& G,
                   const std::vector<GroupPtr>& max_locals, const Caps& caps) {
    if (!H.is_subset_of(G)) throw DomainError("h2: H not contained in G");
    std::vector<std::uint32_t> products = pair_products(G, max_locals);
    auto conj = conjugator_pairs(G);

    std::unordered_set<std::uint32_t> visited;
    std::set<std::uint32_t> gen_indices;  // G indices of generators found, sorted
    for (std::uint32_t pi : products) {
        if (visited.count(pi)) continue;
        std::deque<std::uint32_t> q;
        visited.insert(pi);
        q.push_back(pi);
        while (!q.empty()) {
            std::uint32_t cur = q.front();
            q.pop_front();
            Matrix m = G.element(cur);
            if (H.contains(m)) gen_indices.insert(cur);
            for (const auto& [c, cinv] : conj) {
                auto idx = G.index_of(cinv.mul(m).mul(c));
                if (!idx) throw DomainError("conjugate escapes G");
                if (visited.insert(*idx).second) q.push_back(*idx);
            }
        }
    }
    std::vector<Matrix> gens;
    gens.reserve(gen_indices.size());
    for (std::uint32_t gi : gen_indices) gens.push_back(G.element(gi));
    return closure_pruned(G.ring(), G.n(), gens, caps);
}

SubgroupClosure h2_full_sweep(const SubgroupClosure& H, const SubgroupClosure& G,
                              const std::vector<GroupPtr>& max_locals, const Caps& caps) {
    std::vector<std::uint32_t> products = pair_products(G, max_locals);
    std::set<std::uint32_t> gen_indices;
    for (std::size_t xi = 0; xi < G.size(); ++xi) {
        Matrix x = G.element(xi);
        Matrix xinv = *x.inverse();
        for (std::uint32_t pi : products) {
            Matrix cand = xinv.mul(G.element(pi)).mul(x);
            if (H.contains(cand)) gen_indices.insert(*G.index_of(cand));
        }
    }
    std::vector<Matrix> gens;
    for (std::uint32_t gi : gen_indices) gens.push_back(G.element(gi));
    return closure_pruned(G.ring(), G.n(), gens, caps);
}

// ---------------------------------------------------------------------------
// Covering criterion

CoveringCheck is_covering(const GlobalAction& B, const GlobalAction& A,
                          const std::vector<Point>& f) {
    CoveringCheck out;
    if (f.size() != B.num_points) throw DomainError("is_covering: map size mismatch");
    std::vector<char> hit(A.num_points, 0);
    for (Point b = 0; b < B.num_points; ++b) hit[f[b]] = 1;
    for (Point a = 0; a < A.num_points; ++a)
        if (!hit[a]) throw DomainError("is_covering requires a surjective map");

    if (!is_morphism(f, B, A)) {
        out.ok = false;
        out.defect = "point map is not a morphism of global actions";
        return out;
    }

    for (Point b = 0; b < B.num_points; ++b) {
        std::vector<Point> sb = star_points(B, b);
        std::vector<Point> sa = star_points(A, f[b]);
        std::set<Point> image;
        for (Point x : sb) image.insert(f[x]);
        if (image.size() != sb.size()) {
            out.ok = false;
            out.witness = b;
            out.defect = "star at point " + std::to_string(b) + " maps non-injectively";
            return out;
        }
        if (image != std::set<Point>(sa.begin(), sa.end())) {
            out.ok = false;
            out.witness = b;
            out.defect = "star at point " + std::to_string(b) + " does not map onto the base star";
            return out;
        }
        GlobalAction star_b = star(B, b);
        GlobalAction star_a = star(A, f[b]);
        std::map<Point, Point> to_local_a;
        for (std::uint32_t i = 0; i < sa.size(); ++i) to_local_a[sa[i]] = i;
        std::vector<Point> fr(sb.size());
        for (std::uint32_t i = 0; i < sb.size(); ++i) fr[i] = to_local_a[f[sb[i]]];
        if (!is_morphism(fr, star_b, star_a)) {
            out.ok = false;
            out.witness = b;
            out.defect = "restriction to star at " + std::to_string(b) + " is not a morphism";
            return out;
        }
        std::vector<Point> frinv(sa.size());
        for (std::uint32_t i = 0; i < sb.size(); ++i) frinv[fr[i]] = i;
        if (!is_morphism(frinv, star_a, star_b)) {
            out.ok = false;
            out.witness = b;
            out.defect = "inverse on star at " + std::to_string(b) + " is not a morphism";
            return out;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Group tables and quotients

bool GroupTable::verify_axioms() const {
    std::size_t k = order();
    for (std::size_t i = 0; i < k; ++i)
        if (table[0][i] != i || table[i][0] != i) return false;
    for (std::size_t i = 0; i < k; ++i) {
        bool inv = false;
        for (std::size_t j = 0; j < k; ++j)
            if (table[i][j] == 0 && table[j][i] == 0) inv = true;
        if (!inv) return false;
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t l = 0; l < k; ++l)
                if (table[table[i][j]][l] != table[i][table[j][l]]) return false;
    return true;
}

bool tables_isomorphic(const GroupTable& a, const GroupTable& b) {
    std::size_t k = a.order();
    if (k != b.order()) return false;
    auto orders = [](const GroupTable& t) {
        std::vector<std::uint32_t> out;
        for (std::uint32_t i = 0; i < t.order(); ++i) {
            std::uint32_t x = i, ord = 1;
            while (x != 0) {
                x = t.table[x][i];
                ++ord;
            }
            out.push_back(ord);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    if (orders(a) != orders(b)) return false;
    // backtracking bijection search with the identity pinned
    std::vector<std::uint32_t> perm(k, UINT32_MAX);
    perm[0] = 0;
    std::vector<char> used(k, 0);
    used[0] = 1;
    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (i == k) return true;
        for (std::uint32_t img = 1; img < k; ++img) {
            if (used[img]) continue;
            perm[i] = img;
            used[img] = 1;
            bool ok = true;
            for (std::size_t x = 0; x <= i && ok; ++x)
                for (std::size_t y = 0; y <= i && ok; ++y) {
                    std::uint32_t prod = a.table[x][y];
                    if (prod <= i) ok = b.table[perm[x]][perm[y]] == perm[prod];
                }
            if (ok && go(i + 1)) return true;
            used[img] = 0;
            perm[i] = UINT32_MAX;
        }
        return false;
    };
    return go(1);
}

GroupTable quotient_group(const SubgroupClosure& H, const SubgroupClosure& K) {
    if (!K.is_subset_of(H)) throw DomainError("quotient_group: K not contained in H");
    std::vector<Matrix> kgens = K.generators();
    if (kgens.empty())
        for (std::size_t ki = 0; ki < K.size(); ++ki) kgens.push_back(K.element(ki));
    for (std::size_t hi = 0; hi < H.size(); ++hi) {
        Matrix h = H.element(hi);
        Matrix hinv = *h.inverse();
        for (const auto& g : kgens)
            if (!K.contains(hinv.mul(g).mul(h)))
                throw DomainError("quotient_group: K is not normal in H");
    }

    std::vector<std::uint32_t> coset_of(H.size(), UINT32_MAX);
    std::vector<std::uint32_t> reps;
    for (std::uint32_t hi = 0; hi < H.size(); ++hi) {
        if (coset_of[hi] != UINT32_MAX) continue;
        std::uint32_t cid = static_cast<std::uint32_t>(reps.size());
        Matrix g = H.element(hi);
        for (std::size_t ki = 0; ki < K.size(); ++ki) {
            auto idx = H.index_of(K.element(ki).mul(g));
            if (!idx) throw DomainError("quotient_group: Kg escapes H");
            coset_of[*idx] = cid;
        }
        reps.push_back(hi);
    }

    GroupTable t;
    std::size_t k = reps.size();
    for (std::size_t i = 0; i < k; ++i) t.labels.push_back("Kg" + std::to_string(reps[i]));
    t.table.assign(k, std::vector<std::uint32_t>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            Matrix prod = H.element(reps[i]).mul(H.element(reps[j]));
            t.table[i][j] = coset_of[*H.index_of(prod)];
        }
    if (!t.verify_axioms()) throw DomainError("quotient table failed group axioms");
    return t;
}

// ---------------------------------------------------------------------------
// E_n instances

Pi1Algebraic pi1_algebraic(std::uint32_t n, const RingPtr& ring, const Caps& caps) {
    if (n < 3) throw ConfigError("n >= 3 required");
    auto en = std::make_shared<SubgroupClosure>(
        SubgroupClosure::closure(ring, n, elementary_generators(ring, n), caps));
    auto ep = std::make_shared<SubgroupClosure>(stabilizer_of_e(*en));
    std::vector<GroupPtr> maxes;
    for (const auto& alpha : maximal_nilpotent_sets(n))
        maxes.push_back(std::make_shared<SubgroupClosure>(local_subgroup(alpha, ring, caps)));
    auto ep2 = std::make_shared<SubgroupClosure>(h2(*ep, *en, maxes, caps));
    GroupTable pi1 = quotient_group(*ep, *ep2);
    return Pi1Algebraic{en, ep, ep2, std::move(pi1)};
}

UniversalCover universal_cover(std::uint32_t n, const RingPtr& ring, const Caps& caps) {
    Pi1Algebraic alg = pi1_algebraic(n, ring, caps);
    std::vector<GroupPtr> locals;
    std::vector<std::string> names;
    auto phi = enumerate_phi(n);
    for (const auto& alpha : phi) {
        locals.push_back(std::make_shared<SubgroupClosure>(local_subgroup(alpha, ring, caps)));
        names.push_back(alpha.name());
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> leq;
    for (std::uint32_t i = 0; i < phi.size(); ++i)
        for (std::uint32_t j = 0; j < phi.size(); ++j)
            if (i != j && std::includes(phi[j].pairs.begin(), phi[j].pairs.end(),
                                        phi[i].pairs.begin(), phi[i].pairs.end()))
                leq.emplace_back(i, j);

    UniversalCover uc{make_coset_action(alg.en, alg.ep2, locals, names, leq),
                      make_coset_action(alg.en, alg.ep, locals, names, leq),
                      {},
                      {}};
    uc.projection.assign(uc.total.pointed.action.num_points, 0);
    for (Point c = 0; c < uc.total.pointed.action.num_points; ++c)
        uc.projection[c] = uc.base.coset_of[uc.total.coset_rep[c]];
    uc.check = is_covering(uc.total.pointed.action, uc.base.pointed.action, uc.projection);
    return uc;
}

// ---------------------------------------------------------------------------
// The toy with nontrivial pi1

ToyAction make_toy_action(const Caps& caps) {
    RingPtr f2 = FiniteRing::parse("GF:2");
    const std::uint32_t N = 8;
    auto cycle = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c) {
        std::vector<std::uint32_t> img(N);
        for (std::uint32_t i = 0; i < N; ++i) img[i] = i + 1;
        img[a - 1] = b;
        img[b - 1] = c;
        img[c - 1] = a;
        return permutation_matrix(f2, img);
    };
    // hemi-icosahedron faces on vertices 1..6
    const std::vector<std::array<std::uint32_t, 3>> faces = {
        {1, 2, 3}, {1, 3, 4}, {1, 4, 5}, {1, 5, 6}, {1, 2, 6},
        {2, 3, 5}, {3, 4, 6}, {4, 5, 2}, {5, 6, 3}, {6, 2, 4}};
    Matrix z = permutation_matrix(f2, {1, 2, 3, 4, 5, 6, 8, 7});

    std::vector<Matrix> ggens;
    for (auto f : faces) ggens.push_back(cycle(f[0], f[1], f[2]));
    ggens.push_back(z);
    auto ambient =
        std::make_shared<SubgroupClosure>(SubgroupClosure::closure(f2, N, ggens, caps));

    std::vector<Matrix> hgens;
    for (auto f : faces)
        if (f[0] != 6 && f[1] != 6 && f[2] != 6) hgens.push_back(cycle(f[0], f[1], f[2]));
    hgens.push_back(z);
    auto h = std::make_shared<SubgroupClosure>(SubgroupClosure::closure(f2, N, hgens, caps));

    std::vector<GroupPtr> locals;
    std::vector<std::string> names;
    for (std::size_t k = 0; k < faces.size(); ++k) {
        locals.push_back(std::make_shared<SubgroupClosure>(
            SubgroupClosure::closure(f2, N, {ggens[k]}, caps)));
        names.push_back("face" + std::to_string(k + 1));
    }
    auto h_two = std::make_shared<SubgroupClosure>(h2(*h, *ambient, locals, caps));
    CosetAction action = make_coset_action(ambient, h, locals, names);
    return ToyAction{std::move(action), ambient, h, h_two, std::move(locals)};
}

}  // namespace globact
