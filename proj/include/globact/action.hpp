#pragma once

/*
  Generic finite global actions: an indexed family of group actions on
  subsets of a carrier, with the compatibility condition between
  comparable indices.  Local groups are materialized as permutations of
  their local set, plus the induced orbit partition (the only thing the
  path machinery needs).

  Structure homomorphisms are not stored explicitly: all instances here
  use inclusions, so compatibility is checked semantically (for every
  alpha <= beta and g in G_alpha there must be an h in G_beta acting the
  same on the intersection).
*/

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "globact/caps.hpp"

namespace globact {

using Point = std::uint32_t;
using Perm = std::vector<Point>;  // image table over carrier point ids

struct LocalAction {
    std::string name;
    std::vector<Point> local_set;   // sorted carrier point ids
    std::vector<Perm> elements;     // permutations of the full carrier; fix points outside local_set
    std::vector<std::int32_t> orbit_id;  // per carrier point, -1 outside local_set
    std::uint32_t orbit_count = 0;
};

struct GlobalAction {
    std::uint32_t num_points = 0;
    std::vector<std::string> point_labels;
    std::vector<LocalAction> locals;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> leq;  // (a,b) meaning a <= b, reflexive

    bool single_domain() const;
    // Fills orbit_id/orbit_count for every local action; call after building.
    void index_orbits();
    // True iff some local group has points a and b in one orbit.
    bool adjacent(Point a, Point b) const;
    // True iff some local group has a, b, c in one orbit.
    bool same_orbit3(Point a, Point b, Point c) const;
};

struct PointedAction {
    GlobalAction action;
    Point base = 0;
};

// Checks the global action axioms; returns human-readable violations
// (empty means valid).  Cost is quadratic in the largest local group.
std::vector<std::string> validate(const GlobalAction& a);

// Is {points[0], points[1], ...} an alpha-frame at points[0]?
bool is_frame(const GlobalAction& a, const std::vector<Point>& points, std::uint32_t alpha);

// Frame preservation at orbit level: for every index alpha of A and
// point x, f(orbit_alpha(x)) must land inside one beta-orbit of f(x).
bool is_morphism(const std::vector<Point>& f, const GlobalAction& A, const GlobalAction& B);

// star(A, x): union of the orbits of x, indexed by the local groups
// acting on x, with local sets restricted to those orbits.
GlobalAction star(const GlobalAction& a, Point x);
// Point ids of star(a, x) in the carrier of a (sorted).
std::vector<Point> star_points(const GlobalAction& a, Point x);

// Product global action (componentwise index set and groups).
GlobalAction product(const GlobalAction& a, const GlobalAction& b);

// The line action on the finite window [lo, hi]: adjacent-swap Z/2
// groups plus the global index * with trivial group.
GlobalAction line_action(int lo, int hi);

}  // namespace globact
