#pragma once

/*
  The unimodular row global action Um_n(R): all rows admitting a witness
  w with <v, w> = 1, carrying the standard unipotent local groups, and
  explicit elementary paths between rows.
*/

#include <cstdint>
#include <optional>
#include <vector>

#include "globact/action.hpp"
#include "globact/matgroup.hpp"
#include "globact/path.hpp"
#include "globact/ring.hpp"

namespace globact {

struct UnimodularRow {
    std::vector<std::uint32_t> entries;
    std::vector<std::uint32_t> witness;  // <entries, witness> = 1
};

// All unimodular rows, lexicographic order.  Witnesses come from a
// breadth-first sweep of the ideal generated by the entries.
std::vector<UnimodularRow> enumerate_um(std::uint32_t n, const RingPtr& ring,
                                        const Caps& caps = {});

// Witness search for a single row; empty when the row is not unimodular.
std::optional<std::vector<std::uint32_t>> find_witness(const RingPtr& ring,
                                                       const std::vector<std::uint32_t>& row);

struct UmAction {
    PointedAction pointed;                       // base = e = (1,0,...,0)
    std::vector<UnimodularRow> rows;             // point id -> row
    std::vector<NilpotentSet> index_sets;        // per local action
    RingPtr ring;
    std::uint32_t n = 0;

    std::optional<Point> point_of(const std::vector<std::uint32_t>& row) const;
};

UmAction build_um_action(std::uint32_t n, const RingPtr& ring, const Caps& caps = {});

// A path from v to w through single elementary-generator steps, with the
// generator sequence (as matrices) realizing it; empty when unreachable.
struct ElementaryPath {
    Path path;
    std::vector<Matrix> steps;  // product of steps maps v to w
};
std::optional<ElementaryPath> find_path(const UmAction& um, Point v, Point w);

// Restriction of the action to the path component of the base point.
struct EumComponent {
    PointedAction pointed;
    std::vector<Point> carrier_points;  // ids in the parent Um action
};
EumComponent eum_component(const UmAction& um);

}  // namespace globact
