#include "globact/steinberg.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace globact {

SteinbergWord::SteinbergWord(RingPtr ring, std::uint32_t n, std::vector<SteinbergLetter> letters)
    : ring_(std::move(ring)), n_(n), letters_(std::move(letters)) {
    for (const auto& l : letters_) {
        if (l.i == l.j || l.i < 1 || l.j < 1 || l.i > n_ || l.j > n_)
            throw DomainError("Steinberg letter index out of range");
        if (l.r >= ring_->size()) throw DomainError("Steinberg letter coefficient out of range");
        if (l.exp != 1 && l.exp != -1) throw DomainError("Steinberg letter exponent must be +-1");
    }
    canonicalize();
}

void SteinbergWord::append(std::uint32_t i, std::uint32_t j, std::uint32_t r, std::int32_t exp) {
    letters_.push_back(SteinbergLetter{i, j, r, exp});
    canonicalize();
}

void SteinbergWord::canonicalize() {
    std::vector<SteinbergLetter> out;
    for (auto l : letters_) {
        if (l.exp == -1) {  // X_ij(r)^{-1} = X_ij(-r)
            l.r = ring_->neg(l.r);
            l.exp = 1;
        }
        if (!out.empty() && out.back().i == l.i && out.back().j == l.j) {
            out.back().r = ring_->add(out.back().r, l.r);
            if (out.back().r == 0) out.pop_back();
            continue;
        }
        if (l.r == 0) continue;
        out.push_back(l);
    }
    // merging may expose new adjacencies; iterate to a fixpoint
    while (true) {
        bool changed = false;
        std::vector<SteinbergLetter> next;
        for (auto l : out) {
            if (!next.empty() && next.back().i == l.i && next.back().j == l.j) {
                next.back().r = ring_->add(next.back().r, l.r);
                changed = true;
                if (next.back().r == 0) next.pop_back();
                continue;
            }
            next.push_back(l);
        }
        out = std::move(next);
        if (!changed) break;
    }
    letters_ = std::move(out);
}

SteinbergWord SteinbergWord::concat(const SteinbergWord& o) const {
    if (!ring_->same_ring(*o.ring_) || n_ != o.n_)
        throw DomainError("Steinberg word ring/dimension mismatch");
    std::vector<SteinbergLetter> all = letters_;
    all.insert(all.end(), o.letters_.begin(), o.letters_.end());
    return SteinbergWord(ring_, n_, std::move(all));
}

SteinbergWord SteinbergWord::inverse() const {
    std::vector<SteinbergLetter> inv;
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
        SteinbergLetter l = *it;
        l.r = ring_->neg(l.r);
        inv.push_back(l);
    }
    return SteinbergWord(ring_, n_, std::move(inv));
}

bool SteinbergWord::operator==(const SteinbergWord& o) const {
    if (!ring_->same_ring(*o.ring_) || n_ != o.n_ || letters_.size() != o.letters_.size())
        return false;
    for (std::size_t k = 0; k < letters_.size(); ++k) {
        const auto &a = letters_[k], &b = o.letters_[k];
        if (a.i != b.i || a.j != b.j || a.r != b.r || a.exp != b.exp) return false;
    }
    return true;
}

Matrix theta(const SteinbergWord& w) {
    Matrix m = Matrix::identity(w.ring(), w.n());
    for (const auto& l : w.letters())
        m = m.mul(Matrix::elementary(w.ring(), w.n(), l.i, l.j,
                                     l.exp == 1 ? l.r : w.ring()->neg(l.r)));
    return m;
}

std::optional<NilpotentSet> is_local(const SteinbergWord& w) {
    std::set<std::pair<std::uint32_t, std::uint32_t>> pos;
    for (const auto& l : w.letters()) pos.emplace(l.i, l.j);
    // transitive closure = the smallest candidate containing the positions
    bool grew = true;
    while (grew) {
        grew = false;
        for (auto [i, j] : std::set<std::pair<std::uint32_t, std::uint32_t>>(pos))
            for (auto [k, l] : std::set<std::pair<std::uint32_t, std::uint32_t>>(pos))
                if (j == k && i != l && !pos.count({i, l})) {
                    pos.emplace(i, l);
                    grew = true;
                }
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs(pos.begin(), pos.end());
    if (!is_nilpotent_set(w.n(), pairs)) return std::nullopt;
    return NilpotentSet{w.n(), std::move(pairs)};
}

namespace {

// Positions of alpha ordered by longest-chain length, then lexicographically;
// clearing in this order never disturbs already-cleared entries.
std::vector<std::pair<std::uint32_t, std::uint32_t>> chain_order(const NilpotentSet& alpha) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> len;
    for (auto p : alpha.pairs) len[p] = 1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto p : alpha.pairs)
            for (auto q : alpha.pairs)
                if (p.second == q.first) {
                    auto r = std::make_pair(p.first, q.second);
                    std::uint32_t v = len[p] + len[q];
                    if (len[r] < v) {
                        len[r] = v;
                        changed = true;
                    }
                }
    }
    auto order = alpha.pairs;
    std::stable_sort(order.begin(), order.end(),
                     [&](const auto& a, const auto& b) { return len[a] < len[b]; });
    return order;
}

}  // namespace

SteinbergWord local_matrix_to_word(const NilpotentSet& alpha, const Matrix& m) {
    const RingPtr& ring = m.ring();
    std::set<std::pair<std::uint32_t, std::uint32_t>> allowed(alpha.pairs.begin(),
                                                              alpha.pairs.end());
    // membership check: unit diagonal... unitriangular support inside alpha
    for (std::uint32_t i = 0; i < m.n(); ++i)
        for (std::uint32_t j = 0; j < m.n(); ++j) {
            if (i == j) {
                if (m.at(i, j) != 1) throw DomainError("matrix outside the local subgroup");
            } else if (m.at(i, j) != 0 && !allowed.count({i + 1, j + 1})) {
                throw DomainError("matrix outside the local subgroup");
            }
        }

    SteinbergWord w(ring, m.n());
    Matrix cur = m;
    for (auto [i, j] : chain_order(alpha)) {
        std::uint32_t c = cur.at(i - 1, j - 1);
        if (c == 0) continue;
        w.append(i, j, c);
        // left-peel: E_ij(-c) * cur
        cur = Matrix::elementary(ring, m.n(), i, j, ring->neg(c)).mul(cur);
    }
    Matrix id = Matrix::identity(ring, m.n());
    if (cur != id) throw DomainError("local factorization failed");  // cannot happen
    return w;
}

SteinbergWord local_normal_form(const NilpotentSet& alpha, const SteinbergWord& w) {
    return local_matrix_to_word(alpha, theta(w));
}

bool k2_witness(const SteinbergWord& w) {
    return theta(w) == Matrix::identity(w.ring(), w.n());
}

}  // namespace globact
