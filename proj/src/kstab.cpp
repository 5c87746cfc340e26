#include "globact/kstab.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace globact {

namespace {

std::vector<Matrix> gl_generators(std::uint32_t n, const RingPtr& ring) {
    std::vector<Matrix> gens = elementary_generators(ring, n);
    for (std::uint32_t u = 2; u < ring->size(); ++u) {
        if (!ring->is_unit(u)) continue;
        Matrix d = Matrix::identity(ring, n);
        d.set(0, 0, u);
        gens.push_back(std::move(d));
    }
    return gens;
}

}  // namespace

std::uint32_t K1Data::class_of_matrix(const Matrix& m) const {
    auto idx = gl->index_of(m);
    if (!idx) throw DomainError("matrix is not in GL_n (closure)");
    return class_of[*idx];
}

K1Data k1_with(std::uint32_t n, const RingPtr& ring, const Caps& caps, GroupPtr en) {
    K1Data out;
    out.gl = std::make_shared<SubgroupClosure>(
        SubgroupClosure::closure(ring, n, gl_generators(n, ring), caps));
    out.en = en ? en
                : std::make_shared<SubgroupClosure>(
                      SubgroupClosure::closure(ring, n, elementary_generators(ring, n), caps));

    // E_n normal in GL_n: conjugate the E generators by the GL generators.
    for (const auto& g : out.gl->generators()) {
        Matrix ginv = *g.inverse();
        for (const auto& e : out.en->generators())
            if (!out.en->contains(ginv.mul(e).mul(g)))
                throw DomainError("E_n is not normal in GL_n");
    }

    const std::size_t N = out.gl->size();
    out.class_of.assign(N, UINT32_MAX);
    for (std::uint32_t gi = 0; gi < N; ++gi) {
        if (out.class_of[gi] != UINT32_MAX) continue;
        std::uint32_t cid = static_cast<std::uint32_t>(out.class_rep.size());
        Matrix g = out.gl->element(gi);
        std::uint32_t min_idx = gi;
        for (std::size_t ei = 0; ei < out.en->size(); ++ei) {
            auto idx = out.gl->index_of(out.en->element(ei).mul(g));
            if (!idx) throw DomainError("E g escapes GL");
            out.class_of[*idx] = cid;
            min_idx = std::min(min_idx, *idx);
        }
        out.class_rep.push_back(min_idx);
        out.det_of_class.push_back(g.det());
    }

    std::size_t k = out.class_rep.size();
    for (std::size_t i = 0; i < k; ++i) out.group.labels.push_back("E*g" + std::to_string(i));
    out.group.table.assign(k, std::vector<std::uint32_t>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            Matrix prod = out.gl->element(out.class_rep[i]).mul(out.gl->element(out.class_rep[j]));
            out.group.table[i][j] = out.class_of[*out.gl->index_of(prod)];
        }
    if (!out.group.verify_axioms()) throw DomainError("K1 table failed group axioms");
    return out;
}

K1Data k1(std::uint32_t n, const RingPtr& ring, const Caps& caps) {
    return k1_with(n, ring, caps, nullptr);
}

// ---------------------------------------------------------------------------

KstabContext make_kstab_context(std::uint32_t n, const RingPtr& ring, const Caps& caps) {
    if (n < 3) throw ConfigError("n >= 3 required");
    KstabContext c{n,
                   ring,
                   K1Data{},
                   K1Data{},
                   pi1_algebraic(n, ring, caps),
                   build_um_action(n, ring, caps),
                   Pi0Result{},
                   {},
                   {},
                   0};
    c.k1n = k1_with(n, ring, caps, c.pi1.en);
    c.k1m = k1_with(n - 1, ring, caps, nullptr);
    c.um_pi0 = pi0(c.um.pointed.action, c.um.pointed.base);

    // (K_{1,n-1})_2 = (GL_{n-1} cap (EP_n)_2) / E_{n-1}
    std::set<std::uint32_t> sub_classes;
    for (std::size_t i = 0; i < c.pi1.ep2->size(); ++i) {
        Matrix m = c.pi1.ep2->element(i);
        bool block = true;
        for (std::uint32_t r = 1; r < n && block; ++r) block = m.at(r, 0) == 0;
        if (!block) continue;  // first column must be e^t for the diagonal embedding
        Matrix tau(ring, n - 1);
        for (std::uint32_t r = 1; r < n; ++r)
            for (std::uint32_t s = 1; s < n; ++s) tau.set(r - 1, s - 1, m.at(r, s));
        sub_classes.insert(c.k1m.class_of_matrix(tau));
    }
    c.k1m2_classes.assign(sub_classes.begin(), sub_classes.end());

    // quotient labeling of K_{1,n-1} by the subgroup
    std::size_t k = c.k1m.size();
    std::vector<std::uint32_t> min_in_coset(k, UINT32_MAX);
    for (std::uint32_t cl = 0; cl < k; ++cl) {
        std::uint32_t mn = cl;
        for (std::uint32_t s : c.k1m2_classes) mn = std::min(mn, c.k1m.group.table[s][cl]);
        min_in_coset[cl] = mn;
    }
    std::map<std::uint32_t, std::uint32_t> relabel;
    c.k1m_quot_of.assign(k, 0);
    for (std::uint32_t cl = 0; cl < k; ++cl) {
        auto it = relabel.emplace(min_in_coset[cl], static_cast<std::uint32_t>(relabel.size()))
                      .first;
        c.k1m_quot_of[cl] = it->second;
    }
    c.k1m_quot_size = static_cast<std::uint32_t>(relabel.size());
    return c;
}

std::uint32_t alpha_map(const KstabContext& c, std::uint32_t k1_class) {
    Matrix sigma = c.k1n.gl->element(c.k1n.class_rep[k1_class]);
    std::vector<std::uint32_t> row(c.n);
    for (std::uint32_t j = 0; j < c.n; ++j) row[j] = sigma.at(0, j);
    auto pt = c.um.point_of(row);
    if (!pt) throw DomainError("alpha: e*sigma is not unimodular");
    return c.um_pi0.class_of[*pt];
}

K0sClass beta_map(const KstabContext& c, Point v) {
    auto ep = find_path(c.um, v, c.um.pointed.base);
    if (!ep) throw DomainError("beta: row is not elementarily completable");
    Matrix eps = Matrix::identity(c.ring, c.n);
    for (const auto& s : ep->steps) eps = eps.mul(s);
    // v * eps = e, so ker(w -> w v^t) is spanned by columns 2..n of eps.
    K0sClass out;
    out.rank = c.n - 1;
    const FiniteRing& R = *c.ring;
    const auto& row = c.um.rows[v].entries;
    for (std::uint32_t j = 1; j < c.n; ++j) {
        std::vector<std::uint32_t> b(c.n);
        for (std::uint32_t i = 0; i < c.n; ++i) b[i] = eps.at(i, j);
        std::uint32_t dot = 0;
        for (std::uint32_t i = 0; i < c.n; ++i) dot = R.add(dot, R.mul(b[i], row[i]));
        if (dot != 0) throw DomainError("beta: kernel basis vector fails <b, v> = 0");
        out.kernel_basis.push_back(std::move(b));
    }
    return out;
}

K0sClass gamma_map(const K0sClass& x) { return K0sClass{x.rank + 1, {}}; }

std::uint32_t mu_map(const KstabContext& c, const Matrix& sigma_in_ep) {
    const Matrix& m = sigma_in_ep;
    if (m.at(0, 0) != 1) throw DomainError("mu: matrix does not fix e");
    for (std::uint32_t j = 1; j < c.n; ++j)
        if (m.at(0, j) != 0) throw DomainError("mu: matrix does not fix e");
    Matrix tau(c.ring, c.n - 1);
    for (std::uint32_t r = 1; r < c.n; ++r)
        for (std::uint32_t s = 1; s < c.n; ++s) tau.set(r - 1, s - 1, m.at(r, s));
    if (!c.ring->is_unit(tau.det())) throw DomainError("mu: right diagonal block not invertible");
    return c.k1m_quot_of[c.k1m.class_of_matrix(tau)];
}

std::uint32_t lambda_map(const KstabContext& c, std::uint32_t k1m_class) {
    Matrix tau = c.k1m.gl->element(c.k1m.class_rep[k1m_class]);
    Matrix emb = Matrix::identity(c.ring, c.n);
    for (std::uint32_t r = 0; r + 1 < c.n; ++r)
        for (std::uint32_t s = 0; s + 1 < c.n; ++s) emb.set(r + 1, s + 1, tau.at(r, s));
    return c.k1n.class_of_matrix(emb);
}

std::uint32_t eta_map(const KstabContext& c, const SteinbergWord& w) {
    Matrix img = theta(w);
    if (!(img == Matrix::identity(c.ring, c.n)))
        throw DomainError("eta: word is not a K2 witness (theta != I)");
    // identity coset of (EP)_2 in EP
    return 0;
}

SteinbergWord delta_map(const SteinbergWord& w) {
    if (!k2_witness(w)) throw DomainError("delta: word is not a K2 witness");
    return w;
}

// ---------------------------------------------------------------------------
// verify_sequence

namespace {

std::string join_ids(const std::vector<std::uint32_t>& v) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i];
    }
    os << "}";
    return os.str();
}

// Deterministic family of K2 witness words: relator words plus
// closure-factorization cancellations.
std::vector<SteinbergWord> witness_words(const KstabContext& c) {
    const RingPtr& R = c.ring;
    std::vector<SteinbergWord> out;
    out.emplace_back(R, c.n);  // empty word

    std::vector<std::uint32_t> coeffs{1};
    if (R->size() > 2) coeffs.push_back(R->size() - 1);
    for (std::uint32_t r : coeffs)
        for (std::uint32_t s : coeffs) {
            // [X_12(r), X_23(s)] X_13(rs)^{-1}
            SteinbergWord w(R, c.n);
            w.append(1, 2, r);
            w.append(2, 3, s);
            w.append(1, 2, r, -1);
            w.append(2, 3, s, -1);
            w.append(1, 3, R->mul(r, s), -1);
            out.push_back(std::move(w));
        }

    // a nontrivial-looking cancellation through the closure's factorization
    SteinbergWord w(R, c.n);
    w.append(1, 2, 1);
    w.append(2, 3, 1);
    w.append(3, 1, 1);
    Matrix img = theta(w);
    auto idx = c.pi1.en->index_of(img);
    if (idx) {
        SteinbergWord fac(R, c.n);
        for (std::uint32_t gi : c.pi1.en->factor(*idx)) {
            const Matrix& g = c.pi1.en->generators()[gi];
            for (std::uint32_t i = 0; i < c.n; ++i)
                for (std::uint32_t j = 0; j < c.n; ++j)
                    if (i != j && g.at(i, j) != 0) fac.append(i + 1, j + 1, g.at(i, j));
        }
        out.push_back(w.concat(fac.inverse()));
    }
    return out;
}

}  // namespace

SequenceReport verify_sequence(std::uint32_t n, const RingPtr& ring, const Caps& caps) {
    KstabContext c = make_kstab_context(n, ring, caps);
    SequenceReport rep;
    rep.ring_spec = ring->spec();
    rep.n = n;

    // pi1 classes as explicit EP/(EP)_2 coset representatives
    std::vector<std::uint32_t> ep_coset_of(c.pi1.ep->size(), UINT32_MAX);
    std::vector<std::uint32_t> ep_coset_rep;
    for (std::uint32_t hi = 0; hi < c.pi1.ep->size(); ++hi) {
        if (ep_coset_of[hi] != UINT32_MAX) continue;
        std::uint32_t cid = static_cast<std::uint32_t>(ep_coset_rep.size());
        Matrix g = c.pi1.ep->element(hi);
        for (std::size_t ki = 0; ki < c.pi1.ep2->size(); ++ki) {
            auto idx = c.pi1.ep->index_of(c.pi1.ep2->element(ki).mul(g));
            ep_coset_of[*idx] = cid;
        }
        ep_coset_rep.push_back(hi);
    }

    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        rep.checks.push_back(ArrowCheck{name, pass, detail});
    };

    // --- composite triviality ---
    {
        auto ws = witness_words(c);
        bool pass = true;
        for (const auto& w : ws) {
            SteinbergWord d = delta_map(w);
            if (eta_map(c, d) != 0) pass = false;
        }
        add("eta_after_delta_base", pass,
            std::to_string(ws.size()) + " witness words, image class 0");
        bool pass2 = true;
        for (const auto& w : ws) {
            std::uint32_t cls = eta_map(c, w);
            Matrix sigma = c.pi1.ep->element(ep_coset_rep[cls]);
            if (mu_map(c, sigma) != c.k1m_quot_of[c.k1m.class_of_matrix(
                                        Matrix::identity(ring, n - 1))])
                pass2 = false;
        }
        add("mu_after_eta_base", pass2, "through theta images");
    }
    {
        bool pass = true;
        std::uint32_t base_k1n =
            c.k1n.class_of_matrix(Matrix::identity(ring, n));
        for (std::uint32_t cls = 0; cls < ep_coset_rep.size(); ++cls) {
            Matrix sigma = c.pi1.ep->element(ep_coset_rep[cls]);
            std::uint32_t q = mu_map(c, sigma);
            // lambda on the quotient class via any k1m class in the fiber
            for (std::uint32_t k1c = 0; k1c < c.k1m.size(); ++k1c) {
                if (c.k1m_quot_of[k1c] != q) continue;
                if (lambda_map(c, k1c) != base_k1n) pass = false;
                break;
            }
        }
        add("lambda_after_mu_base", pass,
            std::to_string(ep_coset_rep.size()) + " pi1 classes swept");
    }

    // --- lambda well-defined on the quotient ---
    {
        bool pass = true;
        for (std::uint32_t q = 0; q < c.k1m_quot_size && pass; ++q) {
            std::int64_t seen = -1;
            for (std::uint32_t k1c = 0; k1c < c.k1m.size(); ++k1c) {
                if (c.k1m_quot_of[k1c] != q) continue;
                std::uint32_t img = lambda_map(c, k1c);
                if (seen < 0)
                    seen = img;
                else if (seen != img)
                    pass = false;
            }
        }
        add("lambda_well_defined", pass, "constant on (K_{1,n-1})_2 cosets");
    }

    // --- exactness at pi1: ker mu = im eta, via the column/diagonal factorization ---
    {
        std::uint32_t quot_base = c.k1m_quot_of[c.k1m.class_of_matrix(
            Matrix::identity(ring, n - 1))];
        // witnesses tau' in GL_{n-1} cap (EP_n)_2 per subgroup class
        std::map<std::uint32_t, Matrix> tau_witness;
        for (std::size_t i = 0; i < c.pi1.ep2->size(); ++i) {
            Matrix m = c.pi1.ep2->element(i);
            bool block = true;
            for (std::uint32_t r = 1; r < n && block; ++r) block = m.at(r, 0) == 0;
            if (!block) continue;
            Matrix tau(ring, n - 1);
            for (std::uint32_t r = 1; r < n; ++r)
                for (std::uint32_t s = 1; s < n; ++s) tau.set(r - 1, s - 1, m.at(r, s));
            tau_witness.emplace(c.k1m.class_of_matrix(tau), tau);
        }
        // embedded E_{n-1} lies in (EP_n)_2
        bool embed_ok = true;
        for (const auto& g : elementary_generators(ring, n - 1)) {
            Matrix emb = Matrix::identity(ring, n);
            for (std::uint32_t r = 0; r + 1 < n; ++r)
                for (std::uint32_t s = 0; s + 1 < n; ++s) emb.set(r + 1, s + 1, g.at(r, s));
            if (!c.pi1.ep2->contains(emb)) embed_ok = false;
        }
        add("embedded_E_{n-1}_in_(EP_n)_2", embed_ok, "all elementary generators");

        bool pass = true;
        std::string detail;
        std::vector<std::uint32_t> ker_mu;
        for (std::uint32_t cls = 0; cls < ep_coset_rep.size(); ++cls) {
            Matrix sigma = c.pi1.ep->element(ep_coset_rep[cls]);
            if (mu_map(c, sigma) != quot_base) continue;
            ker_mu.push_back(cls);
            // sigma = (1 0; v tau) = (1 0; v I) (1 0; 0 tau)
            Matrix col = Matrix::identity(ring, n);
            for (std::uint32_t r = 1; r < n; ++r) col.set(r, 0, sigma.at(r, 0));
            if (!c.pi1.ep2->contains(col)) {
                pass = false;
                detail = "column factor outside (EP_n)_2 at class " + std::to_string(cls);
                continue;
            }
            Matrix tau(ring, n - 1);
            for (std::uint32_t r = 1; r < n; ++r)
                for (std::uint32_t s = 1; s < n; ++s) tau.set(r - 1, s - 1, sigma.at(r, s));
            auto wit = tau_witness.find(c.k1m.class_of_matrix(tau));
            if (wit == tau_witness.end()) {
                pass = false;
                detail = "no (EP_n)_2 witness for the diagonal block at class " +
                         std::to_string(cls);
                continue;
            }
            Matrix ratio = wit->second.inverse()->mul(tau);
            if (!c.k1m.en->contains(ratio)) {
                pass = false;
                detail = "diagonal block not E_{n-1}-equivalent to its witness";
                continue;
            }
            if (cls != 0) {
                pass = false;
                detail = "ker mu contains a class outside im eta";
            }
        }
        if (pass) detail = "ker mu = " + join_ids(ker_mu) + " = im eta = {0}";
        add("exact_at_pi1", pass, detail);
    }

    // --- exactness at K_{1,n-1}/(K_{1,n-1})_2: ker lambda = im mu ---
    {
        std::uint32_t base_k1n = c.k1n.class_of_matrix(Matrix::identity(ring, n));
        std::set<std::uint32_t> im_mu;
        for (std::uint32_t cls = 0; cls < ep_coset_rep.size(); ++cls)
            im_mu.insert(mu_map(c, c.pi1.ep->element(ep_coset_rep[cls])));
        std::set<std::uint32_t> ker_lambda;
        for (std::uint32_t q = 0; q < c.k1m_quot_size; ++q) {
            for (std::uint32_t k1c = 0; k1c < c.k1m.size(); ++k1c) {
                if (c.k1m_quot_of[k1c] != q) continue;
                if (lambda_map(c, k1c) == base_k1n) ker_lambda.insert(q);
                break;
            }
        }
        bool pass = std::includes(im_mu.begin(), im_mu.end(), ker_lambda.begin(),
                                  ker_lambda.end()) &&
                    std::includes(ker_lambda.begin(), ker_lambda.end(), im_mu.begin(),
                                  im_mu.end());
        add("exact_at_K1_{n-1}_quot", pass,
            "ker lambda = " + join_ids({ker_lambda.begin(), ker_lambda.end()}) +
                ", im mu = " + join_ids({im_mu.begin(), im_mu.end()}));
    }

    // --- exactness at K_{1,n}: ker alpha = im lambda ---
    {
        std::set<std::uint32_t> ker_alpha;
        for (std::uint32_t cls = 0; cls < c.k1n.size(); ++cls)
            if (alpha_map(c, cls) == *c.um_pi0.base_class) ker_alpha.insert(cls);
        std::set<std::uint32_t> im_lambda;
        for (std::uint32_t k1c = 0; k1c < c.k1m.size(); ++k1c)
            im_lambda.insert(lambda_map(c, k1c));
        bool pass = ker_alpha == im_lambda;
        add("exact_at_K1_n", pass,
            "ker alpha = " + join_ids({ker_alpha.begin(), ker_alpha.end()}) +
                ", im lambda = " + join_ids({im_lambda.begin(), im_lambda.end()}));
    }

    // --- alpha well-defined and composites through pi0 ---
    {
        bool pass = true;
        for (std::uint32_t cls = 0; cls < c.k1n.size(); ++cls) {
            std::uint32_t p0 = alpha_map(c, cls);
            Point v = c.um_pi0.classes[p0].front();
            K0sClass b = beta_map(c, v);
            if (b.rank != n - 1) pass = false;
            K0sClass g = gamma_map(b);
            if (g.rank != n) pass = false;
        }
        add("beta_after_alpha_base_and_gamma", pass,
            "beta lands in the rank n-1 base class with explicit kernel bases");
    }

    // --- exactness at pi0: ker beta = im alpha ---
    {
        std::set<std::uint32_t> im_alpha;
        for (std::uint32_t cls = 0; cls < c.k1n.size(); ++cls) im_alpha.insert(alpha_map(c, cls));
        std::set<std::uint32_t> ker_beta;
        for (std::uint32_t p0 = 0; p0 < c.um_pi0.classes.size(); ++p0) {
            K0sClass b = beta_map(c, c.um_pi0.classes[p0].front());
            if (b.rank == n - 1) ker_beta.insert(p0);  // base class of K^s_{0,n-1}
        }
        bool pass = ker_beta == im_alpha;
        add("exact_at_pi0", pass,
            "ker beta = " + join_ids({ker_beta.begin(), ker_beta.end()}) +
                ", im alpha = " + join_ids({im_alpha.begin(), im_alpha.end()}));
    }

    // --- (K_{1,n-1})_2 is a subgroup, normal in ker(K_{1,n-1} -> K_{1,n}) ---
    {
        std::set<std::uint32_t> sub(c.k1m2_classes.begin(), c.k1m2_classes.end());
        bool closed = true;
        for (std::uint32_t a : sub)
            for (std::uint32_t b : sub)
                if (!sub.count(c.k1m.group.table[a][b])) closed = false;
        std::set<std::uint32_t> ker;
        std::uint32_t base_k1n = c.k1n.class_of_matrix(Matrix::identity(ring, n));
        for (std::uint32_t k1c = 0; k1c < c.k1m.size(); ++k1c)
            if (lambda_map(c, k1c) == base_k1n) ker.insert(k1c);
        bool inside = std::includes(ker.begin(), ker.end(), sub.begin(), sub.end());
        bool normal = true;
        for (std::uint32_t g : ker) {
            // find inverse class of g
            std::uint32_t ginv = 0;
            for (std::uint32_t h = 0; h < c.k1m.size(); ++h)
                if (c.k1m.group.table[g][h] == 0) ginv = h;
            for (std::uint32_t s : sub)
                if (!sub.count(c.k1m.group.table[c.k1m.group.table[ginv][s]][g]))
                    normal = false;
        }
        add("(K1_{n-1})_2_normal_in_ker", closed && inside && normal,
            "subgroup classes " + join_ids(c.k1m2_classes));
    }

    return rep;
}

}  // namespace globact
