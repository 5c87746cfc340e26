#include "globact/action.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace globact {

namespace {

// union-find over point ids
struct UF {
    std::vector<Point> p;
    explicit UF(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0u); }
    Point find(Point x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void join(Point a, Point b) { p[find(a)] = find(b); }
};

Perm identity_perm(std::uint32_t n) {
    Perm id(n);
    std::iota(id.begin(), id.end(), 0u);
    return id;
}

bool is_permutation(const Perm& f, std::uint32_t n) {
    if (f.size() != n) return false;
    std::vector<bool> seen(n, false);
    for (Point v : f) {
        if (v >= n || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

}  // namespace

bool GlobalAction::single_domain() const {
    for (const auto& loc : locals)
        if (loc.local_set.size() != num_points) return false;
    return true;
}

void GlobalAction::index_orbits() {
    for (auto& loc : locals) {
        UF uf(num_points);
        for (const auto& g : loc.elements)
            for (Point x : loc.local_set) uf.join(x, g[x]);
        loc.orbit_id.assign(num_points, -1);
        std::map<Point, std::int32_t> roots;
        for (Point x : loc.local_set) {
            Point r = uf.find(x);
            auto [it, fresh] = roots.emplace(r, static_cast<std::int32_t>(roots.size()));
            loc.orbit_id[x] = it->second;
        }
        loc.orbit_count = static_cast<std::uint32_t>(roots.size());
    }
}

bool GlobalAction::adjacent(Point a, Point b) const {
    for (const auto& loc : locals)
        if (loc.orbit_id[a] >= 0 && loc.orbit_id[a] == loc.orbit_id[b]) return true;
    return false;
}

bool GlobalAction::same_orbit3(Point a, Point b, Point c) const {
    for (const auto& loc : locals) {
        std::int32_t oa = loc.orbit_id[a];
        if (oa >= 0 && oa == loc.orbit_id[b] && oa == loc.orbit_id[c]) return true;
    }
    return false;
}

std::vector<std::string> validate(const GlobalAction& a) {
    std::vector<std::string> bad;
    auto complain = [&](const std::string& s) { bad.push_back(s); };

    // reflexivity of <=
    std::set<std::pair<std::uint32_t, std::uint32_t>> rel(a.leq.begin(), a.leq.end());
    for (std::uint32_t i = 0; i < a.locals.size(); ++i)
        if (!rel.count({i, i}))
            complain("relation not reflexive at index " + a.locals[i].name);

    for (std::uint32_t i = 0; i < a.locals.size(); ++i) {
        const auto& loc = a.locals[i];
        std::set<Point> lset(loc.local_set.begin(), loc.local_set.end());
        bool has_id = false;
        for (const auto& g : loc.elements) {
            if (!is_permutation(g, a.num_points)) {
                complain("non-permutation element in local group " + loc.name);
                continue;
            }
            bool is_id = true;
            for (Point x : loc.local_set)
                if (g[x] != x) is_id = false;
            has_id = has_id || is_id;
            for (Point x : loc.local_set)
                if (!lset.count(g[x]))
                    complain("local group " + loc.name + " does not preserve its local set");
        }
        if (!has_id) complain("local group " + loc.name + " lacks the identity");

        // composition closure on the local set (group action laws)
        std::set<std::vector<Point>> restricted;
        auto restrict_elem = [&](const Perm& g) {
            std::vector<Point> r;
            r.reserve(loc.local_set.size());
            for (Point x : loc.local_set) r.push_back(g[x]);
            return r;
        };
        for (const auto& g : loc.elements) restricted.insert(restrict_elem(g));
        for (const auto& g : loc.elements) {
            for (const auto& h : loc.elements) {
                Perm gh(a.num_points);
                for (Point x = 0; x < a.num_points; ++x) gh[x] = h[g[x]];
                if (!restricted.count(restrict_elem(gh))) {
                    complain("local group " + loc.name + " not closed under composition");
                    goto next_local;
                }
            }
        }
    next_local:;
    }

    // compatibility across alpha <= beta
    for (auto [ai, bi] : a.leq) {
        if (ai == bi) continue;
        const auto& la = a.locals[ai];
        const auto& lb = a.locals[bi];
        std::set<Point> inter;
        std::set<Point> bset(lb.local_set.begin(), lb.local_set.end());
        for (Point x : la.local_set)
            if (bset.count(x)) inter.insert(x);
        for (const auto& g : la.elements) {
            for (Point x : inter)
                if (!inter.count(g[x])) {
                    complain("G_" + la.name + " does not leave X_" + la.name + " ∩ X_" + lb.name +
                             " invariant");
                    goto next_pair;
                }
            {
                bool found = false;
                for (const auto& h : lb.elements) {
                    bool agrees = true;
                    for (Point x : inter)
                        if (h[x] != g[x]) {
                            agrees = false;
                            break;
                        }
                    if (agrees) {
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    complain("no structure image in G_" + lb.name + " for an element of G_" +
                             la.name + " (compatibility condition)");
                    goto next_pair;
                }
            }
        }
    next_pair:;
    }
    return bad;
}

bool is_frame(const GlobalAction& a, const std::vector<Point>& points, std::uint32_t alpha) {
    if (points.empty() || alpha >= a.locals.size()) return false;
    const auto& loc = a.locals[alpha];
    std::int32_t o = loc.orbit_id[points[0]];
    if (o < 0) return false;
    for (Point x : points)
        if (loc.orbit_id[x] != o) return false;
    return true;
}

bool is_morphism(const std::vector<Point>& f, const GlobalAction& A, const GlobalAction& B) {
    if (f.size() != A.num_points) return false;
    for (const auto& loc : A.locals) {
        // group points of each alpha-orbit
        std::vector<std::vector<Point>> orbits(loc.orbit_count);
        for (Point x : loc.local_set) orbits[loc.orbit_id[x]].push_back(x);
        for (const auto& orb : orbits) {
            bool ok = false;
            for (const auto& locB : B.locals) {
                std::int32_t o = locB.orbit_id[f[orb[0]]];
                if (o < 0) continue;
                bool all = true;
                for (Point x : orb)
                    if (locB.orbit_id[f[x]] != o) {
                        all = false;
                        break;
                    }
                if (all) {
                    ok = true;
                    break;
                }
            }
            if (!ok) return false;
        }
    }
    return true;
}

std::vector<Point> star_points(const GlobalAction& a, Point x) {
    std::set<Point> pts;
    pts.insert(x);
    for (const auto& loc : a.locals) {
        std::int32_t o = loc.orbit_id[x];
        if (o < 0) continue;
        for (Point y : loc.local_set)
            if (loc.orbit_id[y] == o) pts.insert(y);
    }
    return {pts.begin(), pts.end()};
}

GlobalAction star(const GlobalAction& a, Point x) {
    if (x >= a.num_points) throw DomainError("star: point not in carrier");
    std::vector<Point> pts = star_points(a, x);
    std::vector<std::uint32_t> new_id(a.num_points, UINT32_MAX);
    for (std::uint32_t i = 0; i < pts.size(); ++i) new_id[pts[i]] = i;

    GlobalAction s;
    s.num_points = static_cast<std::uint32_t>(pts.size());
    for (Point p : pts) s.point_labels.push_back(a.point_labels.empty() ? "" : a.point_labels[p]);

    std::vector<std::uint32_t> kept;
    for (std::uint32_t ai = 0; ai < a.locals.size(); ++ai) {
        const auto& loc = a.locals[ai];
        std::int32_t o = loc.orbit_id[x];
        if (o < 0) continue;
        kept.push_back(ai);
        LocalAction nl;
        nl.name = loc.name;
        for (Point y : loc.local_set)
            if (loc.orbit_id[y] == o) nl.local_set.push_back(new_id[y]);
        std::sort(nl.local_set.begin(), nl.local_set.end());
        std::set<Perm> elems;
        for (const auto& g : loc.elements) {
            Perm ng(s.num_points);
            std::iota(ng.begin(), ng.end(), 0u);
            for (Point y : loc.local_set)
                if (loc.orbit_id[y] == o) ng[new_id[y]] = new_id[g[y]];
            elems.insert(std::move(ng));
        }
        nl.elements.assign(elems.begin(), elems.end());
        s.locals.push_back(std::move(nl));
    }
    // inherited ordering
    std::vector<std::uint32_t> pos(a.locals.size(), UINT32_MAX);
    for (std::uint32_t i = 0; i < kept.size(); ++i) pos[kept[i]] = i;
    for (auto [p, q] : a.leq)
        if (pos[p] != UINT32_MAX && pos[q] != UINT32_MAX) s.leq.emplace_back(pos[p], pos[q]);
    s.index_orbits();
    return s;
}

GlobalAction product(const GlobalAction& a, const GlobalAction& b) {
    GlobalAction p;
    p.num_points = a.num_points * b.num_points;
    auto pid = [&](Point x, Point y) { return x * b.num_points + y; };
    for (Point x = 0; x < a.num_points; ++x)
        for (Point y = 0; y < b.num_points; ++y) {
            std::string la = a.point_labels.empty() ? std::to_string(x) : a.point_labels[x];
            std::string lb = b.point_labels.empty() ? std::to_string(y) : b.point_labels[y];
            p.point_labels.push_back("(" + la + "," + lb + ")");
        }
    for (std::uint32_t ai = 0; ai < a.locals.size(); ++ai)
        for (std::uint32_t bi = 0; bi < b.locals.size(); ++bi) {
            const auto& la = a.locals[ai];
            const auto& lb = b.locals[bi];
            LocalAction nl;
            nl.name = "(" + la.name + "," + lb.name + ")";
            for (Point x : la.local_set)
                for (Point y : lb.local_set) nl.local_set.push_back(pid(x, y));
            std::sort(nl.local_set.begin(), nl.local_set.end());
            for (const auto& g : la.elements)
                for (const auto& h : lb.elements) {
                    Perm ng(p.num_points);
                    for (Point x = 0; x < a.num_points; ++x)
                        for (Point y = 0; y < b.num_points; ++y) ng[pid(x, y)] = pid(g[x], h[y]);
                    nl.elements.push_back(std::move(ng));
                }
            p.locals.push_back(std::move(nl));
        }
    auto idx = [&](std::uint32_t ai, std::uint32_t bi) { return ai * b.locals.size() + bi; };
    std::set<std::pair<std::uint32_t, std::uint32_t>> ra(a.leq.begin(), a.leq.end());
    std::set<std::pair<std::uint32_t, std::uint32_t>> rb(b.leq.begin(), b.leq.end());
    for (auto [a1, a2] : ra)
        for (auto [b1, b2] : rb) p.leq.emplace_back(idx(a1, b1), idx(a2, b2));
    p.index_orbits();
    return p;
}

GlobalAction line_action(int lo, int hi) {
    if (lo > hi) throw DomainError("line action window is empty");
    GlobalAction l;
    l.num_points = static_cast<std::uint32_t>(hi - lo + 1);
    for (int v = lo; v <= hi; ++v) l.point_labels.push_back(std::to_string(v));
    for (int v = lo; v < hi; ++v) {
        LocalAction swap;
        swap.name = "swap@" + std::to_string(v);
        Point i = static_cast<Point>(v - lo);
        swap.local_set = {i, i + 1};
        Perm id = identity_perm(l.num_points);
        Perm tr = id;
        std::swap(tr[i], tr[i + 1]);
        swap.elements = {id, tr};
        l.locals.push_back(std::move(swap));
    }
    LocalAction global;
    global.name = "*";
    for (Point i = 0; i < l.num_points; ++i) global.local_set.push_back(i);
    global.elements = {identity_perm(l.num_points)};
    l.locals.push_back(std::move(global));

    std::uint32_t star_idx = static_cast<std::uint32_t>(l.locals.size()) - 1;
    for (std::uint32_t i = 0; i < l.locals.size(); ++i) {
        l.leq.emplace_back(i, i);
        if (i != star_idx) l.leq.emplace_back(star_idx, i);
    }
    l.index_orbits();
    return l;
}

}  // namespace globact
