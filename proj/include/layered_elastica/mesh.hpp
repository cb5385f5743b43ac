#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "layered_elastica/types.hpp"

namespace le {

// Interface x2 = f(x1); f vanishes for |x1| >= support_radius.
struct SurfaceProfile {
    std::function<double(double)> f;
    std::function<double(double)> df;
    double support_radius = 0.0;
    double lipschitz_bound = 0.0;
    std::string type = "flat";

    double operator()(double x1) const { return f ? f(x1) : 0.0; }
    double slope(double x1) const { return df ? df(x1) : 0.0; }
    bool is_flat() const { return type == "flat"; }
    double max_abs(int samples = 4001) const;

    static SurfaceProfile flat();
    // height * exp(1 - 1/(1 - s^2)), s = (x1 - center) / half_width.
    static SurfaceProfile bump(double height, double half_width, double center = 0.0);
    // Clamped cubic spline through (x_i, f_i) with zero end slopes; the end values
    // must be zero.
    static SurfaceProfile samples(const std::vector<double>& x, const std::vector<double>& f);
};

// {"type": "flat"} | {"type": "bump", "height", "half_width", "center"} |
// {"type": "samples", "x": [...], "f": [...]}
SurfaceProfile profile_from_json(const std::string& text);

// P2 triangle: corners 0..2, then mid-edge nodes (0,1), (1,2), (2,0).
using Tri6 = std::array<int, 6>;

struct BoundaryEdge {
    std::array<int, 3> nodes;  // start, middle, end
    double theta0, theta1;     // angles of start and end, theta1 > theta0
};

struct InterfaceEdge {
    std::array<int, 3> nodes;  // ordered by x1
    int tri_plus, tri_minus;
};

// Curved P2 mesh of the disk |x| < R conforming to the interface.
struct DiskMesh {
    double R = 0.0;
    double h = 0.0;
    int core_cells = 0, ring_cells = 0;
    std::vector<Vec2> nodes;
    std::vector<Tri6> tris;
    std::vector<Side> region;
    std::vector<BoundaryEdge> boundary;
    std::vector<InterfaceEdge> interface;

    // Triangle containing x and its reference coordinates, -1 if outside the mesh.
    int locate(const Vec2& x, Vec2& ref) const;
};

// O-grid of the disk: a core square of half width R/2 with core_cells (even) cells
// per side and four ring blocks with ring_cells radial cells. The interface
// deformation moves nodes by f(x1) chi(x2) with chi smooth and supported in
// |x2| < R/2.
DiskMesh make_disk_mesh(double R, int core_cells, int ring_cells, const SurfaceProfile& profile);
// Cells chosen for element size about h.
DiskMesh make_disk_mesh(double R, double h, const SurfaceProfile& profile);

// One uniform refinement (cell counts doubled).
DiskMesh refine(const DiskMesh& mesh, const SurfaceProfile& profile);

// Validates R against the profile: support inside R/2 and an invertible deformation.
void check_profile(const SurfaceProfile& profile, double R);

// Reference P2 shape functions and their (xi, eta) derivatives.
void p2_shape(double xi, double eta, double N[6], double dN[6][2]);

// Isoparametric map of triangle t at reference point.
Vec2 map_point(const DiskMesh& m, int t, double xi, double eta);

// Collapsed Gauss rule on the reference triangle (weights sum to 1/2).
struct TriRule {
    std::vector<double> xi, eta, w;
};
TriRule triangle_rule(int n);

}  // namespace le
