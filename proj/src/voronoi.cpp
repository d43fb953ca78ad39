#include "rieszlab/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>

namespace rieszlab {

namespace {

constexpr double kPlaneTol = 1e-11;   // strict-visibility plane distance
constexpr double kMergeTol = 1e-9;    // Voronoi vertex merge distance
constexpr double kInteriorTol = 1e-9; // required origin-to-face clearance

struct Face {
    int a, b, c;       // vertex indices, counterclockwise from outside
    Vec3 unit_normal;  // outward
    bool alive = true;
};

std::uint64_t edge_key(int u, int v) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
}

// Incremental convex hull of points assumed to be in general position up to
// kPlaneTol.  Exact robust predicates are unnecessary here: near-degenerate
// hull facets only perturb Voronoi vertices below the merge tolerance.
class HullBuilder {
public:
    explicit HullBuilder(const std::vector<Vec3>& pts) : pts_(pts) {}

    std::vector<Face> build() {
        const int n = static_cast<int>(pts_.size());
        init_simplex();
        for (int p = 0; p < n; ++p) {
            if (used_[static_cast<std::size_t>(p)]) continue;
            insert(p);
        }
        std::vector<Face> out;
        for (const Face& f : faces_)
            if (f.alive) out.push_back(f);
        verify(out);
        return out;
    }

private:
    const std::vector<Vec3>& pts_;
    std::vector<Face> faces_;
    std::unordered_map<std::uint64_t, int> edge_to_face_;  // directed edge -> face
    std::vector<bool> used_;
    Vec3 interior_{};  // centroid of the starting simplex, inside ever after

    void add_face(int a, int b, int c) {
        Vec3 nrm = (pts_[static_cast<std::size_t>(b)] - pts_[static_cast<std::size_t>(a)])
                       .cross(pts_[static_cast<std::size_t>(c)] - pts_[static_cast<std::size_t>(a)]);
        const double len = nrm.norm();
        if (!(len > 0.0))
            throw UnsupportedConfiguration("voronoi: degenerate hull facet");
        nrm = nrm / len;
        if (nrm.dot(pts_[static_cast<std::size_t>(a)] - interior_) < 0.0) {
            std::swap(b, c);
            nrm = -1.0 * nrm;
        }
        const int id = static_cast<int>(faces_.size());
        faces_.push_back(Face{a, b, c, nrm, true});
        // Duplicate directed edges mean the winding turned inconsistent --
        // only possible for degenerate input, so fail loudly rather than
        // silently corrupting the adjacency map.
        auto put = [&](int u, int v) {
            if (!edge_to_face_.emplace(edge_key(u, v), id).second)
                throw UnsupportedConfiguration(
                    "voronoi: inconsistent hull winding (degenerate input)");
        };
        put(a, b);
        put(b, c);
        put(c, a);
    }

    void kill_face(int id) {
        Face& f = faces_[static_cast<std::size_t>(id)];
        f.alive = false;
        edge_to_face_.erase(edge_key(f.a, f.b));
        edge_to_face_.erase(edge_key(f.b, f.c));
        edge_to_face_.erase(edge_key(f.c, f.a));
    }

    void init_simplex() {
        const int n = static_cast<int>(pts_.size());
        used_.assign(static_cast<std::size_t>(n), false);

        // Greedy max-extent simplex: farthest pair seed would cost O(n^2);
        // a fixed anchor plus three maximizations is robust enough here.
        int i0 = 0;
        int i1 = -1;
        double best = -1.0;
        for (int i = 1; i < n; ++i) {
            const double d = (pts_[static_cast<std::size_t>(i)] - pts_[0]).squared_norm();
            if (d > best) { best = d; i1 = i; }
        }
        int i2 = -1;
        best = -1.0;
        for (int i = 0; i < n; ++i) {
            if (i == i0 || i == i1) continue;
            const double d = (pts_[static_cast<std::size_t>(i1)] - pts_[static_cast<std::size_t>(i0)])
                                 .cross(pts_[static_cast<std::size_t>(i)] - pts_[static_cast<std::size_t>(i0)])
                                 .squared_norm();
            if (d > best) { best = d; i2 = i; }
        }
        if (!(best > 1e-24))
            throw UnsupportedConfiguration("voronoi: points are collinear");
        const Vec3 base_nrm =
            (pts_[static_cast<std::size_t>(i1)] - pts_[static_cast<std::size_t>(i0)])
                .cross(pts_[static_cast<std::size_t>(i2)] - pts_[static_cast<std::size_t>(i0)]);
        int i3 = -1;
        best = -1.0;
        for (int i = 0; i < n; ++i) {
            if (i == i0 || i == i1 || i == i2) continue;
            const double d = std::fabs(base_nrm.dot(pts_[static_cast<std::size_t>(i)] -
                                                     pts_[static_cast<std::size_t>(i0)]));
            if (d > best) { best = d; i3 = i; }
        }
        if (!(best > 1e-12))
            throw UnsupportedConfiguration("voronoi: points are coplanar");

        interior_ = 0.25 * (pts_[static_cast<std::size_t>(i0)] + pts_[static_cast<std::size_t>(i1)] +
                            pts_[static_cast<std::size_t>(i2)] + pts_[static_cast<std::size_t>(i3)]);
        add_face(i0, i1, i2);
        add_face(i0, i2, i3);
        add_face(i0, i3, i1);
        add_face(i1, i3, i2);
        used_[static_cast<std::size_t>(i0)] = used_[static_cast<std::size_t>(i1)] = true;
        used_[static_cast<std::size_t>(i2)] = used_[static_cast<std::size_t>(i3)] = true;
    }

    void insert(int p) {
        const Vec3& x = pts_[static_cast<std::size_t>(p)];

        std::vector<int> visible;
        for (int id = 0; id < static_cast<int>(faces_.size()); ++id) {
            const Face& f = faces_[static_cast<std::size_t>(id)];
            if (!f.alive) continue;
            if (f.unit_normal.dot(x - pts_[static_cast<std::size_t>(f.a)]) > kPlaneTol)
                visible.push_back(id);
        }
        if (visible.empty())
            throw UnsupportedConfiguration(
                "voronoi: generator " + std::to_string(p) +
                " is not a hull vertex (cospherical degeneracy)");

        std::vector<bool> is_visible(faces_.size(), false);
        for (int id : visible) is_visible[static_cast<std::size_t>(id)] = true;

        // Horizon: directed edges of visible faces whose twin face survives.
        std::vector<std::pair<int, int>> horizon;
        for (int id : visible) {
            const Face& f = faces_[static_cast<std::size_t>(id)];
            const int e[3][2] = {{f.a, f.b}, {f.b, f.c}, {f.c, f.a}};
            for (const auto& uv : e) {
                const auto it = edge_to_face_.find(edge_key(uv[1], uv[0]));
                if (it == edge_to_face_.end()) continue;  // should not happen
                if (!is_visible[static_cast<std::size_t>(it->second)])
                    horizon.emplace_back(uv[0], uv[1]);
            }
        }
        if (horizon.empty())
            throw UnsupportedConfiguration("voronoi: degenerate horizon");

        for (int id : visible) kill_face(id);
        for (const auto& [u, v] : horizon) add_face(p, u, v);
        used_[static_cast<std::size_t>(p)] = true;
    }

    void verify(const std::vector<Face>& out) const {
        // Every generator must be a hull vertex...
        std::vector<bool> on_hull(pts_.size(), false);
        for (const Face& f : out) {
            on_hull[static_cast<std::size_t>(f.a)] = true;
            on_hull[static_cast<std::size_t>(f.b)] = true;
            on_hull[static_cast<std::size_t>(f.c)] = true;
        }
        for (std::size_t i = 0; i < pts_.size(); ++i)
            if (!on_hull[i])
                throw UnsupportedConfiguration("voronoi: generator " + std::to_string(i) +
                                               " is not a hull vertex");
        // ...and the origin strictly inside: otherwise the generators fit in
        // a closed hemisphere and circumcenter directions are ill-defined.
        for (const Face& f : out)
            if (f.unit_normal.dot(pts_[static_cast<std::size_t>(f.a)]) < kInteriorTol)
                throw UnsupportedConfiguration(
                    "voronoi: generators lie within a hemisphere");
    }
};

}  // namespace

int VoronoiDiagram::total_charge() const {
    int charge = 0;
    for (int s : side_counts) charge += 6 - s;
    return charge;
}

VoronoiDiagram spherical_voronoi(const Configuration& config) {
    if (!config.manifold.is_sphere())
        throw UnsupportedConfiguration("voronoi: only sphere configurations are supported");
    const int n = config.n();
    if (n < 4)
        throw UnsupportedConfiguration("voronoi: need at least 4 generators");

    const std::vector<Vec3> pts = embed(config);
    HullBuilder builder(pts);
    const std::vector<Face> faces = builder.build();

    // Directed-edge map over the final triangulation for the cell walks.
    std::unordered_map<std::uint64_t, int> edge_to_face;
    edge_to_face.reserve(faces.size() * 3);
    std::vector<int> some_face(static_cast<std::size_t>(n), -1);
    for (int id = 0; id < static_cast<int>(faces.size()); ++id) {
        const Face& f = faces[static_cast<std::size_t>(id)];
        edge_to_face[edge_key(f.a, f.b)] = id;
        edge_to_face[edge_key(f.b, f.c)] = id;
        edge_to_face[edge_key(f.c, f.a)] = id;
        some_face[static_cast<std::size_t>(f.a)] = id;
        some_face[static_cast<std::size_t>(f.b)] = id;
        some_face[static_cast<std::size_t>(f.c)] = id;
    }

    VoronoiDiagram diagram;
    diagram.cells.resize(static_cast<std::size_t>(n));
    diagram.side_counts.resize(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        const int start = some_face[static_cast<std::size_t>(i)];
        if (start < 0)
            throw UnsupportedConfiguration("voronoi: isolated generator " + std::to_string(i));

        // Walk the triangles incident to generator i in cyclic order: from
        // face (i, x, y), the next one counterclockwise shares edge (i, y).
        std::vector<Vec3> ring;
        int fid = start;
        const std::size_t face_cap = faces.size() + 1;
        for (std::size_t guard = 0; guard <= face_cap; ++guard) {
            const Face& f = faces[static_cast<std::size_t>(fid)];
            int x, y;
            if (f.a == i) { x = f.b; y = f.c; }
            else if (f.b == i) { x = f.c; y = f.a; }
            else { x = f.a; y = f.b; }
            (void)x;
            ring.push_back(f.unit_normal);  // the circumcenter direction
            const auto it = edge_to_face.find(edge_key(i, y));
            if (it == edge_to_face.end())
                throw UnsupportedConfiguration("voronoi: open triangle fan at generator " +
                                               std::to_string(i));
            fid = it->second;
            if (fid == start) break;
            if (guard == face_cap)
                throw UnsupportedConfiguration("voronoi: triangle fan failed to close");
        }

        // Merge consecutive circumcenters closer than the tolerance (they
        // come from near-cocircular quadruples split into two triangles).
        std::vector<Vec3> merged;
        for (const Vec3& v : ring) {
            if (!merged.empty() && (v - merged.back()).norm() < kMergeTol) continue;
            merged.push_back(v);
        }
        while (merged.size() > 1 && (merged.front() - merged.back()).norm() < kMergeTol)
            merged.pop_back();
        if (merged.size() < 3)
            throw UnsupportedConfiguration("voronoi: cell of generator " + std::to_string(i) +
                                           " collapsed under vertex merging");

        diagram.cells[static_cast<std::size_t>(i)].vertices = std::move(merged);
        diagram.side_counts[static_cast<std::size_t>(i)] =
            diagram.cells[static_cast<std::size_t>(i)].sides();
    }

    if (diagram.total_charge() != 12)
        throw UnsupportedConfiguration(
            "voronoi: non-simple Voronoi vertices (total charge " +
            std::to_string(diagram.total_charge()) + ", expected 12)");
    return diagram;
}

DefectSummary defect_summary(const VoronoiDiagram& diagram) {
    DefectSummary s;
    s.n = static_cast<int>(diagram.side_counts.size());
    int hex = 0;
    for (int sides : diagram.side_counts) {
        ++s.counts[sides];
        if (sides == 6) ++hex; else ++s.defect_count;
    }
    s.hex_fraction = s.n > 0 ? static_cast<double>(hex) / s.n : 0.0;
    return s;
}

BoundCurves bound_curves(int n) {
    if (n < 1) throw std::invalid_argument("bound_curves requires n >= 1");
    BoundCurves b;
    b.upper = n > 12 ? static_cast<double>(n - 12) / n : 0.0;
    b.scar_line = n > 36 ? static_cast<double>(n - 36) / n : 0.0;
    b.clamped = (n <= 36);
    return b;
}

}  // namespace rieszlab
