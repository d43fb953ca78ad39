#pragma once

#include <map>
#include <vector>

#include "rieszlab/manifold.hpp"

namespace rieszlab {

// One spherical Voronoi cell: its vertices (unit vectors, the circumcenter
// directions of the Delaunay triangles incident to the generator) in cyclic
// walk order, after merging consecutive near-duplicates.
struct VoronoiCell {
    std::vector<Vec3> vertices;
    int sides() const { return static_cast<int>(vertices.size()); }
};

struct VoronoiDiagram {
    std::vector<VoronoiCell> cells;  // one per generator, same order
    std::vector<int> side_counts;    // sides per cell

    // Total topological charge sum over cells of (6 - sides); 12 on the
    // sphere whenever every Voronoi vertex is simple.
    int total_charge() const;
};

// Spherical Voronoi diagram via the convex hull of the generators.
// Requirements: at least 4 points, not all within one closed hemisphere
// (origin strictly inside the hull), and simple Voronoi vertices after the
// 1e-9 merge tolerance.  Violations throw UnsupportedConfiguration.  Only
// sphere configurations are accepted.
VoronoiDiagram spherical_voronoi(const Configuration& config);

// Defect census of a diagram.
struct DefectSummary {
    int n = 0;                    // number of cells
    std::map<int, int> counts;    // sides -> number of cells
    int defect_count = 0;         // cells with sides != 6
    double hex_fraction = 0.0;    // fraction of cells with exactly 6 sides
};

DefectSummary defect_summary(const VoronoiDiagram& diagram);

// Reference curves for the hexagon fraction at n generators:
//   upper:     (n - 12) / n   -- twelve pentagons are unavoidable
//   scar_line: (n - 36) / n   -- twelve minimal scars (three defects each)
// Both clamp to 0 for small n; `clamped` reports that n <= 36 made one of
// them degenerate.
struct BoundCurves {
    double upper = 0.0;
    double scar_line = 0.0;
    bool clamped = false;
};

BoundCurves bound_curves(int n);

}  // namespace rieszlab
