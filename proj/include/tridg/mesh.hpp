#pragma once

#include <array>
#include <string>
#include <vector>

#include "tridg/geom.hpp"

namespace tridg {

constexpr int kNoNeighbor = -1;

/// Conforming triangulation with full edge connectivity and the per-cell
/// geometric quantities the solver and limiter need.  Local edge e of
/// triangle k runs from vertex tris[k][e] to tris[k][(e+1)%3]; triangles are
/// normalized to counterclockwise orientation on construction.
struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> tris;

  // Per-triangle, per-edge connectivity.  neighbor < 0 means boundary.
  std::vector<std::array<int, 3>> neighbor;
  std::vector<std::array<int, 3>> neighbor_edge;  // matching edge slot in the neighbor
  std::vector<std::array<int, 3>> edge_tag;       // physical tag id, -1 for interior
  // Translation that moves the neighbor next to this cell (nonzero only for
  // periodic pairs): neighbor vertex + shift lies across the shared edge.
  std::vector<std::array<Vec2, 3>> neighbor_shift;

  std::vector<std::array<Vec2, 3>> edge_normal;  // outward unit normals
  std::vector<std::array<double, 3>> edge_length;

  std::vector<double> area;
  std::vector<Vec2> centroid;
  std::vector<double> circumradius;
  std::vector<double> inradius;
  std::vector<double> hsize;  // average side length

  std::vector<std::string> tag_names;  // physical-group names indexed by tag id

  int num_cells() const { return static_cast<int>(tris.size()); }

  Tri cell_tri(int k) const {
    return {vertices[tris[k][0]], vertices[tris[k][1]], vertices[tris[k][2]]};
  }

  int tag_id(const std::string& name) const;
};

/// Builds connectivity, geometry and CCW normalization from raw vertex and
/// triangle lists.  boundary_lines carry (v0, v1, tag) triples used to tag
/// boundary edges; tag ids index into tag_names.
Mesh build_connectivity(std::vector<Vec2> vertices,
                        std::vector<std::array<int, 3>> tris,
                        const std::vector<std::array<int, 3>>& boundary_lines = {},
                        std::vector<std::string> tag_names = {});

/// Reads a Gmsh ASCII .msh file (format 2.2 or 4.1) containing 3-node
/// triangles and 2-node boundary lines.
Mesh load_gmsh(const std::string& path);

/// Writes the mesh back out as Gmsh ASCII v2.2.  Vertex coordinates
/// round-trip bit-exactly for values representable in binary floating point.
void write_gmsh(const Mesh& mesh, const std::string& path);

/// Pairs opposite boundary edges across a periodic box.  periodic_x/y select
/// the directions; box is (xmin, ymin, xmax, ymax).  Paired edges become
/// interior edges with a nonzero neighbor_shift.
void apply_periodicity(Mesh& mesh, bool periodic_x, bool periodic_y,
                       const std::array<double, 4>& box);

struct SubcellChild {
  Tri v;
  double area = 0.0;
  Vec2 centroid;
};

/// Subdivision of one neighbor of a troubled cell.  level1[0] is the child
/// adjacent to the troubled cell; level1[1] and level1[2] follow in CCW
/// order from the shared edge.  For order >= 2, level2[0] and level2[1] are
/// the perpendicular-foot children of level1[1] and level1[2] nearer the
/// troubled cell, and level2b holds the far halves of the same splits
/// (omitted when a clamped foot makes one degenerate).  Together level2 and
/// level2b tile level1[1] and level1[2], so the cubic and quartic stencils
/// see data covering the whole neighbor.
struct SubcellDecomposition {
  int parent = -1;
  std::array<SubcellChild, 3> level1;
  std::vector<SubcellChild> level2;
  std::vector<SubcellChild> level2b;
  bool clamped_foot = false;  // perpendicular foot fell outside the segment
};

/// Centroid split of the neighbor across edge slot (0..2) of the troubled
/// cell, with the level-2 perpendicular-foot children when order >= 2.
/// Throws if the slot is a boundary edge.
SubcellDecomposition subdivide_neighbor(const Mesh& mesh, int troubled,
                                        int slot, int order);

}  // namespace tridg
