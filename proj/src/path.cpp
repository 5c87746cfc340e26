#include "globact/path.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <unordered_map>

namespace globact {

namespace {

struct VecHash {
    std::size_t operator()(const std::vector<Point>& v) const {
        std::uint64_t h = 1469598103934665603ull;
        for (Point p : v) {
            h ^= p;
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

struct UF {
    std::vector<std::uint32_t> p;
    std::uint32_t find(std::uint32_t x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void join(std::uint32_t a, std::uint32_t b) { p[find(a)] = find(b); }
    std::uint32_t add() {
        p.push_back(static_cast<std::uint32_t>(p.size()));
        return p.back();
    }
};

}  // namespace

Path canonical_path(std::vector<Point> window, int ld) {
    if (window.empty()) throw DomainError("empty path window");
    std::size_t lo = 0, hi = window.size() - 1;
    while (lo < hi && window[lo] == window[lo + 1]) ++lo;
    while (hi > lo && window[hi] == window[hi - 1]) --hi;
    std::vector<Point> w(window.begin() + lo, window.begin() + hi + 1);
    int new_ld = ld + static_cast<int>(lo);
    if (w.size() == 1) new_ld = 0;  // constant paths are anchored at 0
    return Path{std::move(w), new_ld};
}

bool is_valid_path(const GlobalAction& a, const Path& p) {
    for (Point x : p.window)
        if (x >= a.num_points) return false;
    for (std::size_t i = 0; i + 1 < p.window.size(); ++i)
        if (!a.adjacent(p.window[i], p.window[i + 1])) return false;
    if (p.window.size() > 1 &&
        (p.window[0] == p.window[1] || p.window[p.window.size() - 1] == p.window[p.window.size() - 2]))
        return false;
    return true;
}

Path make_path(const GlobalAction& a, std::vector<Point> window, int ld) {
    Path p = canonical_path(std::move(window), ld);
    for (Point x : p.window)
        if (x >= a.num_points) throw DomainError("path point outside carrier");
    for (std::size_t i = 0; i + 1 < p.window.size(); ++i)
        if (!a.adjacent(p.window[i], p.window[i + 1]))
            throw DomainError("path adjacency violated at window position " + std::to_string(i));
    return p;
}

Path compose(const Path& omega, const Path& omega2) {
    if (omega.ter_point() != omega2.in_point())
        throw DomainError("compose: ter(first) != in(second)");
    if (omega.constant()) return omega2;
    if (omega2.constant()) return omega;
    std::vector<Point> w = omega.window;
    w.insert(w.end(), omega2.window.begin() + 1, omega2.window.end());
    return canonical_path(std::move(w), omega.ld);
}

Path inverse(const Path& omega) {
    std::vector<Point> w(omega.window.rbegin(), omega.window.rend());
    return canonical_path(std::move(w), -omega.ud());
}

// ---------------------------------------------------------------------------
// HomotopyContext

HomotopyContext::HomotopyContext(const GlobalAction& a) : a_(&a) {
    std::uint32_t nl = static_cast<std::uint32_t>(a.locals.size());
    words_ = (nl + 63) / 64;
    mask_.assign(std::size_t(a.num_points) * a.num_points * words_, 0);
    for (std::uint32_t li = 0; li < nl; ++li) {
        const auto& loc = a.locals[li];
        std::vector<std::vector<Point>> orbits(loc.orbit_count);
        for (Point x : loc.local_set) orbits[loc.orbit_id[x]].push_back(x);
        for (const auto& orb : orbits)
            for (Point x : orb)
                for (Point y : orb)
                    mask_[(std::size_t(x) * a.num_points + y) * words_ + li / 64] |=
                        1ull << (li % 64);
    }
}

bool HomotopyContext::same_orbit(Point x, Point y, Point z) const {
    const std::uint64_t* my = &mask_[(std::size_t(x) * a_->num_points + y) * words_];
    const std::uint64_t* mz = &mask_[(std::size_t(x) * a_->num_points + z) * words_];
    for (std::uint32_t w = 0; w < words_; ++w)
        if (my[w] & mz[w]) return true;
    return false;
}

std::vector<std::vector<Point>> HomotopyContext::neighbor_windows(const std::vector<Point>& w,
                                                                  std::size_t max_window,
                                                                  bool* pruned) const {
    // Positions -1 .. len over the stabilized extension of the window.
    std::vector<std::vector<Point>> out;
    const int len = static_cast<int>(w.size());
    auto val = [&](int t) -> Point {
        if (t <= 0) return w.front();
        if (t >= len - 1) return w.back();
        return w[static_cast<std::size_t>(t)];
    };
    for (int t = -1; t <= len; ++t) {
        Point prev = val(t - 1), cur = val(t), next = val(t + 1);
        for (Point c = 0; c < a_->num_points; ++c) {
            if (!same_orbit(cur, prev, c) || !same_orbit(cur, next, c)) continue;
            // build the changed window over [-1, len]
            std::vector<Point> nw;
            nw.reserve(w.size() + 2);
            for (int s = -1; s <= len; ++s) nw.push_back(s == t ? c : val(s));
            Path np = canonical_path(std::move(nw), -1);
            if (np.window.size() > max_window) {
                if (pruned) *pruned = true;
                continue;
            }
            out.push_back(std::move(np.window));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Path> HomotopyContext::elementary_neighbors(const Path& p) const {
    std::vector<Path> out;
    const int lo = p.ld - 1, hi = p.ud() + 1;
    for (int t = lo; t <= hi; ++t) {
        Point prev = p.at(t - 1), cur = p.at(t), next = p.at(t + 1);
        for (Point c = 0; c < a_->num_points; ++c) {
            if (!same_orbit(cur, prev, c) || !same_orbit(cur, next, c)) continue;
            std::vector<Point> nw;
            nw.reserve(p.window.size() + 2);
            for (int s = lo; s <= hi; ++s) nw.push_back(s == t ? c : p.at(s));
            Path np = canonical_path(std::move(nw), lo);
            bool dup = false;
            for (const auto& q : out)
                if (q.window == np.window) {
                    dup = true;
                    break;
                }
            if (!dup) out.push_back(std::move(np));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Trace handling

bool validate_trace(const GlobalAction& a, const HomotopyTrace& t) {
    if (t.rows.empty()) return false;
    HomotopyContext ctx(a);
    for (const auto& r : t.rows)
        if (!is_valid_path(a, r)) return false;
    Point in0 = t.rows.front().in_point(), ter0 = t.rows.front().ter_point();
    for (const auto& r : t.rows)
        if (r.in_point() != in0 || r.ter_point() != ter0) return false;
    for (std::size_t k = 0; k + 1 < t.rows.size(); ++k) {
        const Path& x = t.rows[k];
        const Path& y = t.rows[k + 1];
        int lo = std::min(x.ld, y.ld) - 1, hi = std::max(x.ud(), y.ud()) + 1;
        int diffs = 0, at = 0;
        for (int s = lo; s <= hi; ++s)
            if (x.at(s) != y.at(s)) {
                ++diffs;
                at = s;
            }
        if (diffs > 1) return false;
        if (diffs == 1) {
            Point prev = x.at(at - 1), cur = x.at(at), nxt = x.at(at + 1), c = y.at(at);
            if (!ctx.same_orbit(cur, prev, c) || !ctx.same_orbit(cur, nxt, c)) return false;
        }
    }
    return true;
}

namespace {

// Appends the one-move rows realizing a translation of `p` by +1/-1 steps
// until its ld equals target_ld.  Each emitted row is a valid path and
// differs from its predecessor at exactly one position.
void emit_translation(std::vector<Path>& rows, Path p, int target_ld) {
    while (p.ld != target_ld && !p.constant()) {
        Path cur = p;
        if (target_ld > p.ld) {
            // hybrids with the +1 shift applied at positions >= t
            for (int t = p.ud() + 1; t > p.ld; --t) {
                std::vector<Point> hw;
                int lo = p.ld, hi = p.ud() + 1;
                for (int s = lo; s <= hi; ++s) hw.push_back(s >= t ? p.at(s - 1) : p.at(s));
                Path next = canonical_path(std::move(hw), lo);
                if (!(next == cur)) rows.push_back(next);
                cur = next;
            }
        } else {
            for (int t = p.ld - 1; t < p.ud(); ++t) {
                std::vector<Point> hw;
                int lo = p.ld - 1, hi = p.ud();
                for (int s = lo; s <= hi; ++s) hw.push_back(s <= t ? p.at(s + 1) : p.at(s));
                Path next = canonical_path(std::move(hw), lo);
                if (!(next == cur)) rows.push_back(next);
                cur = next;
            }
        }
        p = cur;
    }
}

// Re-anchors a normalized window sequence as an honest trace starting at
// `start`; consecutive rows differ at one position.
std::vector<Path> replay_windows(const std::vector<std::vector<Point>>& seq, const Path& start) {
    std::vector<Path> rows{start};
    Path cur = start;
    for (std::size_t k = 1; k < seq.size(); ++k) {
        const auto& wn = seq[k];
        bool placed = false;
        for (int off = cur.ld - 2 - static_cast<int>(wn.size());
             off <= cur.ud() + 2 && !placed; ++off) {
            Path cand{wn, off};
            if (wn.size() == 1) cand.ld = 0;
            int lo = std::min(cur.ld, cand.ld) - 1, hi = std::max(cur.ud(), cand.ud()) + 1;
            int diffs = 0;
            for (int s = lo; s <= hi && diffs <= 1; ++s)
                if (cur.at(s) != cand.at(s)) ++diffs;
            if (diffs <= 1) {
                if (diffs == 1) rows.push_back(cand);
                cur = cand;
                placed = true;
            }
        }
        if (!placed) {
            // constant paths are pinned at ld = 0; allow re-anchoring via translation
            Path cand{wn, 0};
            rows.push_back(cand);  // will be caught by validate_trace if wrong
            cur = cand;
        }
    }
    return rows;
}

}  // namespace

// ---------------------------------------------------------------------------
// Stable homotopy search

HomotopyResult stably_homotopic(const GlobalAction& a, const Path& omega, const Path& omega2,
                                const Caps& caps) {
    if (!is_valid_path(a, omega) || !is_valid_path(a, omega2))
        throw DomainError("stably_homotopic: invalid input path");
    if (omega.in_point() != omega2.in_point() || omega.ter_point() != omega2.ter_point())
        throw DomainError("stably_homotopic: endpoint mismatch");

    HomotopyContext ctx(a);
    const std::size_t longer = std::max(omega.window.size(), omega2.window.size());
    const std::size_t max_window =
        std::max(caps.homotopy_window_factor * longer, longer + 2);

    HomotopyResult res;

    // Greedy contraction: strictly shrinking moves only (always sound).
    auto greedy = [&](std::vector<Point> w, std::vector<std::vector<Point>>& chain) {
        chain.push_back(w);
        bool progress = true;
        while (progress && w.size() > 1) {
            progress = false;
            for (auto& nb : ctx.neighbor_windows(w, max_window)) {
                if (nb.size() < w.size()) {
                    w = nb;
                    chain.push_back(w);
                    progress = true;
                    break;
                }
            }
        }
        return w;
    };

    std::vector<std::vector<Point>> chain1, chain2;
    std::vector<Point> w1 = greedy(omega.window, chain1);
    std::vector<Point> w2 = greedy(omega2.window, chain2);

    // Bidirectional BFS between the reduced forms.
    std::unordered_map<std::vector<Point>, std::uint32_t, VecHash> seen;  // -> state id
    std::vector<std::vector<Point>> states;
    std::vector<std::uint32_t> parent;
    std::vector<std::uint8_t> side_of;
    bool pruned = false;

    auto add_state = [&](const std::vector<Point>& w, std::uint32_t par, std::uint8_t side,
                         std::deque<std::uint32_t>& q) {
        auto it = seen.find(w);
        if (it != seen.end()) return;
        std::uint32_t id = static_cast<std::uint32_t>(states.size());
        seen.emplace(w, id);
        states.push_back(w);
        parent.push_back(par);
        side_of.push_back(side);
        q.push_back(id);
    };

    std::deque<std::uint32_t> qa, qb;
    add_state(w1, UINT32_MAX, 0, qa);
    std::int64_t meet_a = -1, meet_b = -1;
    if (w1 == w2) {
        meet_a = 0;
        meet_b = 0;
    } else {
        add_state(w2, UINT32_MAX, 1, qb);
    }

    while (meet_a < 0 && (!qa.empty() || !qb.empty())) {
        bool pick_a = !qa.empty() && (qb.empty() || qa.size() <= qb.size());
        std::deque<std::uint32_t>& q = pick_a ? qa : qb;
        std::uint8_t side = pick_a ? 0 : 1;
        std::uint32_t cur = q.front();
        q.pop_front();
        std::vector<Point> w = states[cur];

        auto nbs = ctx.neighbor_windows(w, max_window, &pruned);
        for (auto& nb : nbs) {
            auto it = seen.find(nb);
            if (it != seen.end()) {
                if (side_of[it->second] != side) {  // frontiers met on this edge
                    meet_a = side == 0 ? static_cast<std::int64_t>(cur) : it->second;
                    meet_b = side == 0 ? static_cast<std::int64_t>(it->second) : cur;
                    break;
                }
                continue;
            }
            add_state(nb, cur, side, pick_a ? qa : qb);
            if (states.size() > caps.homotopy_max_steps) {
                res.status = HomotopyStatus::undecided;
                res.states = states.size();
                return res;
            }
        }
        if (meet_a >= 0) break;
    }

    res.states = states.size();
    if (meet_a < 0) {
        res.status = pruned ? HomotopyStatus::undecided : HomotopyStatus::no;
        return res;
    }

    // window sequence: chain1 .. (meet_a ancestors reversed) meet edge (meet_b chain) .. reverse(chain2)
    std::vector<std::vector<Point>> mid_a, mid_b;
    for (std::int64_t v = meet_a; v >= 0 && v != UINT32_MAX;) {
        mid_a.push_back(states[static_cast<std::size_t>(v)]);
        std::uint32_t par = parent[static_cast<std::size_t>(v)];
        if (par == UINT32_MAX) break;
        v = par;
    }
    std::reverse(mid_a.begin(), mid_a.end());
    for (std::int64_t v = meet_b; v >= 0 && v != UINT32_MAX;) {
        mid_b.push_back(states[static_cast<std::size_t>(v)]);
        std::uint32_t par = parent[static_cast<std::size_t>(v)];
        if (par == UINT32_MAX) break;
        v = par;
    }

    std::vector<std::vector<Point>> seq = chain1;
    seq.insert(seq.end(), mid_a.begin(), mid_a.end());
    seq.insert(seq.end(), mid_b.begin(), mid_b.end());
    for (auto it = chain2.rbegin(); it != chain2.rend(); ++it) seq.push_back(*it);
    seq.erase(std::unique(seq.begin(), seq.end()), seq.end());

    std::vector<Path> rows = replay_windows(seq, omega);
    if (!(rows.back() == omega2)) emit_translation(rows, rows.back(), omega2.ld);
    res.status = HomotopyStatus::yes;
    res.trace.rows = std::move(rows);
    return res;
}

// ---------------------------------------------------------------------------
// pi0

Pi0Result pi0(const GlobalAction& a, std::optional<Point> base) {
    UF uf;
    for (Point x = 0; x < a.num_points; ++x) uf.add();
    for (const auto& loc : a.locals) {
        std::vector<std::int64_t> first(loc.orbit_count, -1);
        for (Point x : loc.local_set) {
            std::int32_t o = loc.orbit_id[x];
            if (first[o] < 0)
                first[o] = x;
            else
                uf.join(static_cast<std::uint32_t>(first[o]), x);
        }
    }
    Pi0Result r;
    r.class_of.assign(a.num_points, 0);
    std::unordered_map<std::uint32_t, std::uint32_t> root_to_class;
    for (Point x = 0; x < a.num_points; ++x) {
        std::uint32_t root = uf.find(x);
        auto [it, fresh] = root_to_class.emplace(root, static_cast<std::uint32_t>(r.classes.size()));
        if (fresh) r.classes.emplace_back();
        r.class_of[x] = it->second;
        r.classes[it->second].push_back(x);
    }
    if (base) r.base_class = r.class_of[*base];
    return r;
}

// ---------------------------------------------------------------------------
// pi1 by bounded search

namespace {

void enumerate_loops(const GlobalAction& a, Point base, std::size_t max_edges,
                     std::vector<std::vector<Point>>& out) {
    // reduced windows (no immediate repeats) from base back to base
    std::vector<std::vector<Point>> adj(a.num_points);
    for (Point x = 0; x < a.num_points; ++x)
        for (Point y = 0; y < a.num_points; ++y)
            if (x != y && a.adjacent(x, y)) adj[x].push_back(y);

    std::vector<Point> walk{base};
    std::function<void()> dfs = [&]() {
        if (walk.size() > 1 && walk.back() == base) out.push_back(walk);
        if (walk.size() > max_edges) return;
        for (Point y : adj[walk.back()]) {
            walk.push_back(y);
            dfs();
            walk.pop_back();
        }
    };
    dfs();
    out.push_back({base});
}

}  // namespace

Pi1SearchResult pi1_by_search(const PointedAction& pa, const Caps& caps) {
    const GlobalAction& a = pa.action;
    Pi0Result comps = pi0(a, pa.base);
    if (comps.classes.size() != 1)
        throw DomainError("pi1_by_search requires a path-connected carrier");

    HomotopyContext ctx(a);
    std::vector<std::vector<Point>> seeds;
    enumerate_loops(a, pa.base, caps.pi1_loop_window, seeds);

    Pi1SearchResult out;
    for (std::size_t slack = 2; slack <= 6; slack += 2) {
        const std::size_t max_window = caps.pi1_loop_window + 1 + slack;
        std::unordered_map<std::vector<Point>, std::uint32_t, VecHash> seen;
        std::vector<std::vector<Point>> states;
        UF uf;
        std::deque<std::uint32_t> queue;
        bool capped = false;

        auto intern = [&](const std::vector<Point>& w) -> std::uint32_t {
            auto it = seen.find(w);
            if (it != seen.end()) return it->second;
            std::uint32_t id = static_cast<std::uint32_t>(states.size());
            seen.emplace(w, id);
            states.push_back(w);
            uf.add();
            queue.push_back(id);
            return id;
        };

        std::vector<std::uint32_t> seed_ids;
        for (auto& s : seeds) seed_ids.push_back(intern(canonical_path(s, 0).window));

        while (!queue.empty() && !capped) {
            std::uint32_t cur = queue.front();
            queue.pop_front();
            auto w = states[cur];
            for (auto& nb : ctx.neighbor_windows(w, max_window)) {
                std::uint32_t nid = intern(nb);
                uf.join(cur, nid);
                if (states.size() > caps.homotopy_max_steps) {
                    capped = true;
                    break;
                }
            }
        }
        out.states = states.size();
        if (capped) {
            out.decided = false;
            out.note = "state cap exceeded at window slack " + std::to_string(slack);
            break;  // larger windows can only add states
        }

        // classes among seeds, with minimal representatives over all states
        std::unordered_map<std::uint32_t, std::uint32_t> root_to_class;
        std::vector<std::uint32_t> class_roots;
        std::uint32_t base_root = uf.find(seed_ids.back());  // constant loop interned last
        root_to_class.emplace(base_root, 0);
        class_roots.push_back(base_root);
        for (std::uint32_t sid : seed_ids) {
            std::uint32_t root = uf.find(sid);
            if (root_to_class.emplace(root, static_cast<std::uint32_t>(class_roots.size())).second)
                class_roots.push_back(root);
        }
        std::size_t k = class_roots.size();
        std::vector<std::vector<Point>> rep(k);
        for (std::uint32_t id = 0; id < states.size(); ++id) {
            auto it = root_to_class.find(uf.find(id));
            if (it == root_to_class.end()) continue;
            auto& r = rep[it->second];
            if (r.empty() || states[id].size() < r.size() ||
                (states[id].size() == r.size() && states[id] < r))
                r = states[id];
        }

        auto locate = [&](const std::vector<Point>& w) -> std::int64_t {
            // find the class of a loop window, extending the BFS if needed
            std::unordered_map<std::vector<Point>, std::uint32_t, VecHash> local_seen;
            std::deque<std::vector<Point>> q;
            q.push_back(w);
            local_seen.emplace(w, 0);
            std::size_t budget = 200000;
            std::size_t mw = std::max(max_window, w.size() + 2);
            while (!q.empty() && budget--) {
                auto cur = q.front();
                q.pop_front();
                auto it = seen.find(cur);
                if (it != seen.end()) {
                    auto rc = root_to_class.find(uf.find(it->second));
                    if (rc != root_to_class.end()) return rc->second;
                }
                for (auto& nb : ctx.neighbor_windows(cur, mw))
                    if (local_seen.emplace(nb, 0).second) q.push_back(nb);
            }
            return -1;
        };

        // composition table
        bool ok = true;
        out.table.assign(k, std::vector<std::uint32_t>(k, 0));
        for (std::size_t i = 0; i < k && ok; ++i)
            for (std::size_t j = 0; j < k && ok; ++j) {
                std::vector<Point> comp = rep[i];
                comp.insert(comp.end(), rep[j].begin() + 1, rep[j].end());
                std::int64_t c = locate(canonical_path(comp, 0).window);
                if (c < 0) {
                    ok = false;
                    out.note = "composite class not located within caps";
                } else {
                    out.table[i][j] = static_cast<std::uint32_t>(c);
                }
            }
        if (ok) {
            // group axioms on the table
            for (std::size_t i = 0; i < k && ok; ++i)
                ok = out.table[0][i] == i && out.table[i][0] == i;
            for (std::size_t i = 0; i < k && ok; ++i) {
                bool has_inv = false;
                for (std::size_t j = 0; j < k; ++j)
                    if (out.table[i][j] == 0 && out.table[j][i] == 0) has_inv = true;
                ok = has_inv;
            }
            for (std::size_t i = 0; i < k && ok; ++i)
                for (std::size_t j = 0; j < k && ok; ++j)
                    for (std::size_t l = 0; l < k && ok; ++l)
                        ok = out.table[out.table[i][j]][l] == out.table[i][out.table[j][l]];
            if (!ok && out.note.empty()) out.note = "table failed group axioms (caps too small)";
        }
        if (ok) {
            out.decided = true;
            out.order = k;
            out.reps.clear();
            for (auto& r : rep) out.reps.push_back(canonical_path(r, 0));
            out.note = "window slack " + std::to_string(slack);
            return out;
        }
    }
    out.decided = false;
    if (out.note.empty()) out.note = "undecided within caps";
    return out;
}

}  // namespace globact
