#pragma once

/*
  Paths as stabilized windows, composition and inverse, single-position
  homotopy moves, bounded stable-homotopy search, pi0, and the
  search-based pi1 oracle.

  A path L -> A is stored as its window [x_ld, ..., x_ud] together with
  ld, extended constantly on both sides.  Windows are canonical: the
  first two and last two entries differ unless the path is constant
  (stored as a single point).

  A move replaces the value c at one integer position by c', and is
  valid exactly when the two 2x2 squares of the corresponding one-step
  homotopy land in single local orbits: some orbit contains
  {prev, c, c'} and some orbit contains {c, c', next}.  The four
  textbook patterns (x,x,y)<->(x,y,y) and (x,x,x)<->(x,y,x) are the
  special cases c' = next, c' = prev and prev = next; the general form
  is needed for completeness (any one-step stable homotopy factors into
  such moves, but not into the four patterns alone).
*/

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "globact/action.hpp"
#include "globact/caps.hpp"

namespace globact {

struct Path {
    std::vector<Point> window;
    int ld = 0;

    int ud() const { return ld + static_cast<int>(window.size()) - 1; }
    bool constant() const { return window.size() == 1; }
    Point in_point() const { return window.front(); }
    Point ter_point() const { return window.back(); }
    // Value of the stabilized extension at an arbitrary position.
    Point at(int t) const {
        if (t <= ld) return window.front();
        if (t >= ud()) return window.back();
        return window[static_cast<std::size_t>(t - ld)];
    }

    bool operator==(const Path& o) const { return ld == o.ld && window == o.window; }
};

// Trims constant runs at both ends so degrees are the sup/inf values.
Path canonical_path(std::vector<Point> window, int ld);

// Validates the adjacency invariant and canonicalizes.
Path make_path(const GlobalAction& a, std::vector<Point> window, int ld = 0);

bool is_valid_path(const GlobalAction& a, const Path& p);

// Composition traverses omega then omega2; requires ter(omega) == in(omega2).
Path compose(const Path& omega, const Path& omega2);

// omega^{-1}(n) = omega(-n).
Path inverse(const Path& omega);

// Precomputed orbit-coincidence masks for fast move checks.
class HomotopyContext {
  public:
    explicit HomotopyContext(const GlobalAction& a);

    const GlobalAction& action() const { return *a_; }
    bool adjacent(Point x, Point y) const { return same_orbit(x, y, y); }
    bool same_orbit(Point x, Point y, Point z) const;

    // All single-position moves from p, deduplicated as paths (the
    // unchanged path itself appears via the c' = c move).
    std::vector<Path> elementary_neighbors(const Path& p) const;

    // Neighbor windows of a translation-normalized window.  Sets *pruned
    // when a move was dropped for exceeding max_window.
    std::vector<std::vector<Point>> neighbor_windows(const std::vector<Point>& w,
                                                     std::size_t max_window,
                                                     bool* pruned = nullptr) const;

  private:
    const GlobalAction* a_;
    std::uint32_t words_;
    std::vector<std::uint64_t> mask_;  // [x*n+y] -> bitset of locals with x ~ y
};

struct HomotopyTrace {
    std::vector<Path> rows;  // consecutive rows differ by one elementary move
};

enum class HomotopyStatus { yes, no, undecided };

struct HomotopyResult {
    HomotopyStatus status = HomotopyStatus::undecided;
    HomotopyTrace trace;      // filled when status == yes
    std::size_t states = 0;   // BFS states visited
};

// Verifies a trace: all rows valid paths with fixed endpoints, each
// consecutive pair one elementary move apart.
bool validate_trace(const GlobalAction& a, const HomotopyTrace& t);

HomotopyResult stably_homotopic(const GlobalAction& a, const Path& omega, const Path& omega2,
                                const Caps& caps = {});

struct Pi0Result {
    std::vector<std::vector<Point>> classes;  // each sorted; classes sorted by min element
    std::vector<std::uint32_t> class_of;      // per point
    std::optional<std::uint32_t> base_class;
};

Pi0Result pi0(const GlobalAction& a, std::optional<Point> base = std::nullopt);

struct Pi1SearchResult {
    bool decided = false;            // table closed within caps
    std::size_t order = 0;
    std::vector<Path> reps;          // class representatives, reps[0] = identity class
    std::vector<std::vector<std::uint32_t>> table;  // table[i][j] = class of rep_i . rep_j
    std::size_t states = 0;
    std::string note;
};

Pi1SearchResult pi1_by_search(const PointedAction& pa, const Caps& caps = {});

}  // namespace globact
