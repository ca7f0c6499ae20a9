#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "zerocert/linalg.hpp"

namespace zerocert {

struct Segment {
    Vec a;
    Vec b;
};

struct Polytope {
    std::vector<Vec> vertices;  // V-representation, order not significant
};

struct BallBody {
    Vec center;
    double radius = 0.0;
};

using ConvexBody = std::variant<Segment, Polytope, BallBody>;

int body_dim(const ConvexBody& body);

/// Throws std::invalid_argument unless dimensions agree, entries are finite,
/// d >= 2, the vertex list is nonempty and the radius is nonnegative.
void validate_body(const ConvexBody& body);

/// True when the body is a single point (segment with a == b, one-vertex
/// polytope after deduplication, or a radius-zero ball).
bool is_singleton(const ConvexBody& body);

double diameter(const ConvexBody& body);

struct SampleGrid {
    ConvexBody body;
    std::vector<Vec> points;
    double covering_radius = 0.0;
};

/// Deterministic grids with a certified covering radius:
///  - Segment: resolution+1 equally spaced points, radius |b-a|/(2 res).
///  - Polytope, planar span: fan triangulation of the extreme points around
///    an interior point, barycentric lattice of mesh 1/res per triangle,
///    radius max circumradius / res.
///  - Polytope otherwise: composition lattice over the vertex list, radius
///    (sum_i |v_i - c|) / res with c the vertex MEB center.
///  - Ball, d = 2: concentric rings, ring j of ceil(2 pi j) points,
///    radius (r/res) sqrt(5/8).
///  - Ball, d >= 3: cube lattice intersected with the ball plus radial
///    boundary projections, radius (2r/res) sqrt(d).
SampleGrid sample(const ConvexBody& body, int resolution);

/// Extreme points of a Segment or Polytope; redundant vertices are removed
/// by an LP membership test against the others. Ball input throws.
std::vector<Vec> extreme_points(const ConvexBody& body);

bool contains(const ConvexBody& body, const Vec& p, double tol);

/// Affine rank of the vertex set (0 = point, 1 = collinear, ...).
int affine_rank(const std::vector<Vec>& pts, double tol = 1e-12);

}  // namespace zerocert
