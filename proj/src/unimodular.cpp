#include "globact/unimodular.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace globact {

namespace {

std::string row_label(const RingPtr& ring, const std::vector<std::uint32_t>& row) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ",";
        os << ring->elem_str(row[i]);
    }
    os << ")";
    return os.str();
}

}  // namespace

std::optional<std::vector<std::uint32_t>> find_witness(const RingPtr& ring,
                                                       const std::vector<std::uint32_t>& row) {
    const FiniteRing& R = *ring;
    const std::uint32_t n = static_cast<std::uint32_t>(row.size());
    // shortcut: a unit entry gives a witness directly
    for (std::uint32_t i = 0; i < n; ++i) {
        if (auto u = R.inv(row[i])) {
            std::vector<std::uint32_t> w(n, 0);
            w[i] = *u;
            return w;
        }
    }
    // BFS over the ideal v1 R + ... + vn R, tracking one witness per value.
    std::vector<char> seen(R.size(), 0);
    std::vector<std::vector<std::uint32_t>> wit(R.size());
    std::deque<std::uint32_t> q;
    seen[0] = 1;
    wit[0].assign(n, 0);
    q.push_back(0);
    while (!q.empty()) {
        std::uint32_t x = q.front();
        q.pop_front();
        if (x == 1) return wit[1];
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t r = 1; r < R.size(); ++r) {
                std::uint32_t y = R.add(x, R.mul(row[i], r));
                if (seen[y]) continue;
                seen[y] = 1;
                wit[y] = wit[x];
                wit[y][i] = R.add(wit[y][i], r);
                q.push_back(y);
            }
    }
    return std::nullopt;
}

std::vector<UnimodularRow> enumerate_um(std::uint32_t n, const RingPtr& ring, const Caps& caps) {
    const FiniteRing& R = *ring;
    double total = 1;
    for (std::uint32_t i = 0; i < n; ++i) total *= R.size();
    if (total > static_cast<double>(caps.closure_max))
        throw CapExceeded("row enumeration exceeds cap", caps.closure_max);

    std::vector<UnimodularRow> out;
    std::vector<std::uint32_t> row(n, 0);
    while (true) {
        auto w = find_witness(ring, row);
        if (w) out.push_back(UnimodularRow{row, *w});
        // lexicographic increment
        std::uint32_t k = n;
        while (k > 0) {
            if (++row[k - 1] < R.size()) break;
            row[k - 1] = 0;
            --k;
        }
        if (k == 0) break;
    }
    return out;
}

std::optional<Point> UmAction::point_of(const std::vector<std::uint32_t>& row) const {
    auto cmp = [](const UnimodularRow& a, const std::vector<std::uint32_t>& b) {
        return a.entries < b;
    };
    auto it = std::lower_bound(rows.begin(), rows.end(), row, cmp);
    if (it == rows.end() || it->entries != row) return std::nullopt;
    return static_cast<Point>(it - rows.begin());
}

UmAction build_um_action(std::uint32_t n, const RingPtr& ring, const Caps& caps) {
    if (n < 3) throw ConfigError("n >= 3 required");
    UmAction um;
    um.ring = ring;
    um.n = n;
    um.rows = enumerate_um(n, ring, caps);

    GlobalAction& a = um.pointed.action;
    a.num_points = static_cast<std::uint32_t>(um.rows.size());
    for (const auto& r : um.rows) a.point_labels.push_back(row_label(ring, r.entries));

    std::map<std::vector<std::uint32_t>, Point> row_ids;
    for (Point i = 0; i < a.num_points; ++i) row_ids.emplace(um.rows[i].entries, i);

    um.index_sets = enumerate_phi(n);
    for (const auto& alpha : um.index_sets) {
        SubgroupClosure g = local_subgroup(alpha, ring, caps);
        LocalAction loc;
        loc.name = alpha.name();
        for (Point i = 0; i < a.num_points; ++i) loc.local_set.push_back(i);
        for (std::size_t k = 0; k < g.size(); ++k) {
            Matrix m = g.element(k);
            Perm perm(a.num_points);
            for (Point i = 0; i < a.num_points; ++i) {
                auto it = row_ids.find(m.apply_row(um.rows[i].entries));
                if (it == row_ids.end())
                    throw DomainError("local group does not preserve Um_n");  // cannot happen
                perm[i] = it->second;
            }
            loc.elements.push_back(std::move(perm));
        }
        a.locals.push_back(std::move(loc));
    }
    // ordering: subset inclusion on the nilpotent index sets
    for (std::uint32_t i = 0; i < um.index_sets.size(); ++i)
        for (std::uint32_t j = 0; j < um.index_sets.size(); ++j)
            if (std::includes(um.index_sets[j].pairs.begin(), um.index_sets[j].pairs.end(),
                              um.index_sets[i].pairs.begin(), um.index_sets[i].pairs.end()))
                a.leq.emplace_back(i, j);
    a.index_orbits();

    std::vector<std::uint32_t> e(n, 0);
    e[0] = 1;
    auto base = row_ids.find(e);
    if (base == row_ids.end()) throw DomainError("base row e is missing");
    um.pointed.base = base->second;
    return um;
}

std::optional<ElementaryPath> find_path(const UmAction& um, Point v, Point w) {
    const GlobalAction& a = um.pointed.action;
    if (v >= a.num_points || w >= a.num_points) throw DomainError("find_path: point out of range");
    if (v == w) return ElementaryPath{Path{{v}, 0}, {}};

    // BFS over single elementary-generator steps E_ij(r).
    std::vector<Matrix> gens = elementary_generators(um.ring, um.n);
    std::vector<std::int64_t> prev(a.num_points, -1);
    std::vector<std::uint32_t> via(a.num_points, 0);
    std::deque<Point> q;
    prev[v] = v;
    q.push_back(v);
    while (!q.empty() && prev[w] < 0) {
        Point x = q.front();
        q.pop_front();
        for (std::uint32_t k = 0; k < gens.size(); ++k) {
            auto img = um.point_of(gens[k].apply_row(um.rows[x].entries));
            if (!img || prev[*img] >= 0) continue;
            prev[*img] = x;
            via[*img] = k;
            q.push_back(*img);
        }
    }
    if (prev[w] < 0) return std::nullopt;

    std::vector<Point> window;
    std::vector<Matrix> steps;
    for (Point x = w; x != v; x = static_cast<Point>(prev[x])) {
        window.push_back(x);
        steps.push_back(gens[via[x]]);
    }
    window.push_back(v);
    std::reverse(window.begin(), window.end());
    std::reverse(steps.begin(), steps.end());
    return ElementaryPath{make_path(a, std::move(window), 0), std::move(steps)};
}

EumComponent eum_component(const UmAction& um) {
    const GlobalAction& a = um.pointed.action;
    Pi0Result comps = pi0(a, um.pointed.base);
    const auto& cls = comps.classes[*comps.base_class];

    EumComponent out;
    out.carrier_points = cls;
    std::vector<std::uint32_t> new_id(a.num_points, UINT32_MAX);
    for (std::uint32_t i = 0; i < cls.size(); ++i) new_id[cls[i]] = i;

    GlobalAction& b = out.pointed.action;
    b.num_points = static_cast<std::uint32_t>(cls.size());
    for (Point p : cls) b.point_labels.push_back(a.point_labels[p]);
    for (const auto& loc : a.locals) {
        LocalAction nl;
        nl.name = loc.name;
        for (std::uint32_t i = 0; i < b.num_points; ++i) nl.local_set.push_back(i);
        for (const auto& g : loc.elements) {
            Perm ng(b.num_points);
            for (Point p : cls) ng[new_id[p]] = new_id[g[p]];  // component is invariant
            nl.elements.push_back(std::move(ng));
        }
        b.locals.push_back(std::move(nl));
    }
    b.leq = a.leq;
    b.index_orbits();
    out.pointed.base = new_id[um.pointed.base];
    return out;
}

}  // namespace globact
