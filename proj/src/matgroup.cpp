#include "globact/matgroup.hpp"

#include <algorithm>
#include <deque>
#include <iostream>
#include <set>
#include <sstream>

namespace globact {

// ---------------------------------------------------------------------------
// Matrix

Matrix Matrix::identity(RingPtr ring, std::uint32_t n) {
    Matrix m(std::move(ring), n);
    for (std::uint32_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Matrix Matrix::elementary(RingPtr ring, std::uint32_t n, std::uint32_t i, std::uint32_t j,
                          std::uint32_t r) {
    if (i == j) throw DomainError("elementary matrix requires i != j");
    if (i < 1 || i > n || j < 1 || j > n) throw DomainError("elementary index out of range");
    Matrix m = identity(std::move(ring), n);
    m.set(i - 1, j - 1, r);
    return m;
}

void Matrix::check_compatible(const Matrix& o) const {
    if (n_ != o.n_) throw DomainError("matrix dimension mismatch");
    if (!ring_->same_ring(*o.ring_)) throw DomainError("matrix ring mismatch");
}

Matrix Matrix::mul(const Matrix& o) const {
    check_compatible(o);
    const FiniteRing& R = *ring_;
    Matrix out(ring_, n_);
    for (std::uint32_t i = 0; i < n_; ++i)
        for (std::uint32_t j = 0; j < n_; ++j) {
            std::uint32_t acc = 0;
            for (std::uint32_t k = 0; k < n_; ++k)
                acc = R.add(acc, R.mul(at(i, k), o.at(k, j)));
            out.set(i, j, acc);
        }
    return out;
}

// det of the submatrix on rows 0..k-1 and the column subset encoded in the
// mask, by DP over subsets; exact over any commutative ring.
std::uint32_t Matrix::det() const {
    const FiniteRing& R = *ring_;
    std::vector<std::uint32_t> dp(std::size_t(1) << n_, 0);
    dp[0] = 1;
    for (std::uint32_t mask = 1; mask < (1u << n_); ++mask) {
        std::uint32_t row = static_cast<std::uint32_t>(__builtin_popcount(mask)) - 1;
        std::uint32_t acc = 0;
        std::uint32_t colpos = 0;
        for (std::uint32_t j = 0; j < n_; ++j) {
            if (!(mask & (1u << j))) continue;
            std::uint32_t term = R.mul(at(row, j), dp[mask ^ (1u << j)]);
            if (colpos % 2 == 1) term = R.neg(term);
            acc = R.add(acc, term);
            ++colpos;
        }
        dp[mask] = acc;
    }
    return dp[(1u << n_) - 1];
}

std::optional<Matrix> Matrix::inverse() const {
    const FiniteRing& R = *ring_;
    auto dinv = R.inv(det());
    if (!dinv) return std::nullopt;
    // adjugate via cofactors of (n-1)-minors
    Matrix adj(ring_, n_);
    for (std::uint32_t i = 0; i < n_; ++i)
        for (std::uint32_t j = 0; j < n_; ++j) {
            Matrix minor(ring_, n_ - 1);
            for (std::uint32_t r = 0, rr = 0; r < n_; ++r) {
                if (r == i) continue;
                for (std::uint32_t c = 0, cc = 0; c < n_; ++c) {
                    if (c == j) continue;
                    minor.set(rr, cc, at(r, c));
                    ++cc;
                }
                ++rr;
            }
            std::uint32_t cof = minor.det();
            if ((i + j) % 2 == 1) cof = R.neg(cof);
            adj.set(j, i, R.mul(cof, *dinv));
        }
    return adj;
}

std::vector<std::uint32_t> Matrix::apply_row(const std::vector<std::uint32_t>& v) const {
    const FiniteRing& R = *ring_;
    std::vector<std::uint32_t> out(n_, 0);
    for (std::uint32_t j = 0; j < n_; ++j) {
        std::uint32_t acc = 0;
        for (std::uint32_t k = 0; k < n_; ++k) acc = R.add(acc, R.mul(v[k], at(k, j)));
        out[j] = acc;
    }
    return out;
}

std::string Matrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::uint32_t i = 0; i < n_; ++i) {
        if (i) os << "; ";
        for (std::uint32_t j = 0; j < n_; ++j) {
            if (j) os << ",";
            os << ring_->elem_str(at(i, j));
        }
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------------------
// Nilpotent sets

bool is_nilpotent_set(std::uint32_t n,
                      const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> s(pairs.begin(), pairs.end());
    for (auto [i, j] : s) {
        if (i == j || i < 1 || j < 1 || i > n || j > n) return false;
        if (s.count({j, i})) return false;
    }
    for (auto [i, j] : s)
        for (auto [k, l] : s)
            if (j == k && !s.count({i, l})) return false;
    return true;
}

NilpotentSet make_nilpotent(std::uint32_t n,
                            std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    if (!is_nilpotent_set(n, pairs)) throw DomainError("pair set is not nilpotent");
    return NilpotentSet{n, std::move(pairs)};
}

NilpotentSet intersect(const NilpotentSet& a, const NilpotentSet& b) {
    if (a.n != b.n) throw DomainError("nilpotent set dimension mismatch");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    std::set_intersection(a.pairs.begin(), a.pairs.end(), b.pairs.begin(), b.pairs.end(),
                          std::back_inserter(out));
    return NilpotentSet{a.n, std::move(out)};
}

NilpotentSet max_delta(std::uint32_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (std::uint32_t i = 1; i <= n; ++i)
        for (std::uint32_t j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);
    return NilpotentSet{n, std::move(pairs)};
}

std::string NilpotentSet::name() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (k) os << ",";
        os << "(" << pairs[k].first << "," << pairs[k].second << ")";
    }
    os << "}";
    return os.str();
}

std::vector<NilpotentSet> enumerate_phi(std::uint32_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> jn;
    for (std::uint32_t i = 1; i <= n; ++i)
        for (std::uint32_t j = 1; j <= n; ++j)
            if (i != j) jn.emplace_back(i, j);
    if (jn.size() > 20) throw DomainError("Phi_n enumeration limited to n <= 4");
    std::vector<NilpotentSet> out;
    for (std::uint32_t mask = 0; mask < (1u << jn.size()); ++mask) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
        for (std::size_t k = 0; k < jn.size(); ++k)
            if (mask & (1u << k)) pairs.push_back(jn[k]);
        std::sort(pairs.begin(), pairs.end());
        if (is_nilpotent_set(n, pairs)) out.push_back(NilpotentSet{n, std::move(pairs)});
    }
    std::sort(out.begin(), out.end(), [](const NilpotentSet& a, const NilpotentSet& b) {
        if (a.pairs.size() != b.pairs.size()) return a.pairs.size() < b.pairs.size();
        return a.pairs < b.pairs;
    });
    return out;
}

std::vector<NilpotentSet> maximal_nilpotent_sets(std::uint32_t n) {
    std::vector<std::uint32_t> pi(n);
    for (std::uint32_t i = 0; i < n; ++i) pi[i] = i + 1;
    NilpotentSet delta = max_delta(n);
    std::vector<NilpotentSet> out;
    do {
        NilpotentSet image = sn_on_index(pi, delta);
        if (std::find(out.begin(), out.end(), image) == out.end()) out.push_back(image);
    } while (std::next_permutation(pi.begin(), pi.end()));
    std::sort(out.begin(), out.end(),
              [](const NilpotentSet& a, const NilpotentSet& b) { return a.pairs < b.pairs; });
    return out;
}

Matrix permutation_matrix(RingPtr ring, const std::vector<std::uint32_t>& pi) {
    std::uint32_t n = static_cast<std::uint32_t>(pi.size());
    Matrix m(std::move(ring), n);
    for (std::uint32_t i = 0; i < n; ++i) m.set(i, pi[i] - 1, 1);
    return m;
}

Matrix sn_conjugate(const std::vector<std::uint32_t>& pi, const Matrix& m) {
    std::vector<std::uint32_t> inv(pi.size());
    for (std::uint32_t i = 0; i < pi.size(); ++i) inv[pi[i] - 1] = i + 1;
    Matrix mp = permutation_matrix(m.ring(), pi);
    Matrix mpinv = permutation_matrix(m.ring(), inv);
    return mpinv.mul(m).mul(mp);
}

NilpotentSet sn_on_index(const std::vector<std::uint32_t>& pi, const NilpotentSet& a) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (auto [i, j] : a.pairs) pairs.emplace_back(pi[i - 1], pi[j - 1]);
    std::sort(pairs.begin(), pairs.end());
    return NilpotentSet{a.n, std::move(pairs)};
}

// ---------------------------------------------------------------------------
// MatrixCodec

MatrixCodec::MatrixCodec(RingPtr ring, std::uint32_t n) : ring_(std::move(ring)), n_(n) {
    std::uint32_t q = ring_->size();
    bits_ = 1;
    while ((1u << bits_) < q) ++bits_;
    packable_ = std::size_t(bits_) * n * n <= 64;
}

std::uint64_t MatrixCodec::pack(const Matrix& m) const {
    std::uint64_t key = 0;
    for (std::uint32_t k = 0; k < n_ * n_; ++k)
        key |= std::uint64_t(m.entries()[k]) << (std::size_t(k) * bits_);
    return key;
}

Matrix MatrixCodec::unpack(std::uint64_t key) const {
    Matrix m(ring_, n_);
    std::uint64_t mask = (bits_ == 64) ? ~0ull : ((1ull << bits_) - 1);
    for (std::uint32_t i = 0; i < n_; ++i)
        for (std::uint32_t j = 0; j < n_; ++j) {
            m.set(i, j, static_cast<std::uint32_t>(key & mask));
            key >>= bits_;
        }
    return m;
}

std::string MatrixCodec::pack_str(const Matrix& m) const {
    std::string s;
    s.reserve(m.entries().size() * 4);
    for (std::uint32_t v : m.entries()) {
        s.push_back(static_cast<char>(v & 0xff));
        s.push_back(static_cast<char>((v >> 8) & 0xff));
        s.push_back(static_cast<char>((v >> 16) & 0xff));
        s.push_back(static_cast<char>((v >> 24) & 0xff));
    }
    return s;
}

// ---------------------------------------------------------------------------
// SubgroupClosure

SubgroupClosure SubgroupClosure::closure(RingPtr ring, std::uint32_t n,
                                         const std::vector<Matrix>& generators, const Caps& caps) {
    if (ring->size() > caps.ring_soft_cap)
        std::cerr << "warning: closure over ring " << ring->spec() << " with " << ring->size()
                  << " elements exceeds the soft cap of " << caps.ring_soft_cap << "\n";

    SubgroupClosure g;
    g.ring_ = ring;
    g.n_ = n;
    g.codec_ = std::make_shared<MatrixCodec>(ring, n);
    g.packed_ = g.codec_->packable();
    g.gens_ = generators;
    for (const auto& m : generators) {
        if (m.n() != n || !m.ring()->same_ring(*ring))
            throw DomainError("closure generators must share ring and dimension");
        if (!m.inverse()) throw DomainError("closure generators must be invertible");
    }

    Matrix id = Matrix::identity(ring, n);
    auto push = [&](const Matrix& m, std::uint32_t parent, std::uint32_t gen) -> bool {
        if (g.packed_) {
            std::uint64_t key = g.codec_->pack(m);
            auto [it, inserted] = g.map_.emplace(key, static_cast<std::uint32_t>(g.keys_.size()));
            if (!inserted) return false;
            g.keys_.push_back(key);
        } else {
            auto [it, inserted] =
                g.map_str_.emplace(g.codec_->pack_str(m), static_cast<std::uint32_t>(g.raw_.size()));
            if (!inserted) return false;
            g.raw_.push_back(m);
        }
        g.parent_.emplace_back(parent, gen);
        if (g.size() > caps.closure_max)
            throw CapExceeded("closure exceeded cap for ring " + ring->spec(), g.size());
        return true;
    };

    push(id, 0, 0);
    std::size_t head = 0;
    while (head < g.size()) {
        Matrix cur = g.element(head);
        for (std::size_t k = 0; k < generators.size(); ++k)
            push(cur.mul(generators[k]), static_cast<std::uint32_t>(head),
                 static_cast<std::uint32_t>(k));
        ++head;
    }
    return g;
}

SubgroupClosure SubgroupClosure::from_elements(RingPtr ring, std::uint32_t n,
                                               std::vector<Matrix> elements,
                                               std::vector<Matrix> generators, bool verify) {
    SubgroupClosure g;
    g.ring_ = ring;
    g.n_ = n;
    g.codec_ = std::make_shared<MatrixCodec>(ring, n);
    g.packed_ = g.codec_->packable();
    g.gens_ = std::move(generators);

    // identity first, then the given order
    Matrix id = Matrix::identity(ring, n);
    std::vector<Matrix> ordered;
    ordered.push_back(id);
    for (auto& m : elements)
        if (m != id) ordered.push_back(std::move(m));

    for (const auto& m : ordered) {
        if (g.packed_) {
            std::uint64_t key = g.codec_->pack(m);
            if (g.map_.emplace(key, static_cast<std::uint32_t>(g.keys_.size())).second)
                g.keys_.push_back(key);
        } else {
            if (g.map_str_
                    .emplace(g.codec_->pack_str(m), static_cast<std::uint32_t>(g.raw_.size()))
                    .second)
                g.raw_.push_back(m);
        }
    }
    g.parent_.assign(g.size(), {0, 0});

    if (verify) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            Matrix a = g.element(i);
            auto ainv = a.inverse();
            if (!ainv || !g.contains(*ainv))
                throw DomainError("element set not closed under inverse");
            for (std::size_t j = 0; j < g.size(); ++j)
                if (!g.contains(a.mul(g.element(j))))
                    throw DomainError("element set not closed under multiplication");
        }
        for (const auto& m : g.gens_)
            if (!g.contains(m)) throw DomainError("generator not a member of element set");
    }
    return g;
}

Matrix SubgroupClosure::element(std::size_t i) const {
    return packed_ ? codec_->unpack(keys_[i]) : raw_[i];
}

std::optional<std::uint32_t> SubgroupClosure::index_of(const Matrix& m) const {
    if (m.n() != n_) return std::nullopt;
    if (packed_) {
        auto it = map_.find(codec_->pack(m));
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }
    auto it = map_str_.find(codec_->pack_str(m));
    if (it == map_str_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::uint32_t> SubgroupClosure::factor(std::uint32_t i) const {
    std::vector<std::uint32_t> word;
    while (i != 0) {
        word.push_back(parent_[i].second);
        i = parent_[i].first;
    }
    std::reverse(word.begin(), word.end());
    return word;
}

bool SubgroupClosure::is_subset_of(const SubgroupClosure& o) const {
    for (std::size_t i = 0; i < size(); ++i)
        if (!o.contains(element(i))) return false;
    return true;
}

// ---------------------------------------------------------------------------

std::vector<Matrix> elementary_generators(const RingPtr& ring, std::uint32_t n) {
    std::vector<Matrix> gens;
    for (std::uint32_t i = 1; i <= n; ++i)
        for (std::uint32_t j = 1; j <= n; ++j) {
            if (i == j) continue;
            for (std::uint32_t r = 1; r < ring->size(); ++r)
                gens.push_back(Matrix::elementary(ring, n, i, j, r));
        }
    return gens;
}

SubgroupClosure local_subgroup(const NilpotentSet& alpha, const RingPtr& ring, const Caps& caps) {
    std::vector<Matrix> gens;
    for (auto [i, j] : alpha.pairs)
        for (std::uint32_t r = 1; r < ring->size(); ++r)
            gens.push_back(Matrix::elementary(ring, alpha.n, i, j, r));
    return SubgroupClosure::closure(ring, alpha.n, gens, caps);
}

SubgroupClosure stabilizer_of_e(const SubgroupClosure& G) {
    std::vector<Matrix> stab;
    for (std::size_t i = 0; i < G.size(); ++i) {
        Matrix m = G.element(i);
        bool fixes = m.at(0, 0) == 1;
        for (std::uint32_t j = 1; fixes && j < G.n(); ++j) fixes = m.at(0, j) == 0;
        if (fixes) stab.push_back(std::move(m));
    }
    return SubgroupClosure::from_elements(G.ring(), G.n(), std::move(stab), {}, false);
}

std::vector<std::vector<std::uint32_t>> row_orbit(const SubgroupClosure& G,
                                                  const std::vector<std::uint32_t>& row) {
    std::set<std::vector<std::uint32_t>> orbit;
    for (std::size_t i = 0; i < G.size(); ++i) orbit.insert(G.element(i).apply_row(row));
    return {orbit.begin(), orbit.end()};
}

}  // namespace globact
