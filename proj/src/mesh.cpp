#include "tridg/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace tridg {

namespace {

struct EdgeKey {
  int a, b;  // a < b
  bool operator==(const EdgeKey& o) const { return a == o.a && b == o.b; }
};

struct EdgeKeyHash {
  size_t operator()(const EdgeKey& k) const {
    return std::hash<int64_t>()((int64_t(k.a) << 32) | uint32_t(k.b));
  }
};

EdgeKey make_key(int u, int v) { return u < v ? EdgeKey{u, v} : EdgeKey{v, u}; }

}  // namespace

int Mesh::tag_id(const std::string& name) const {
  for (size_t i = 0; i < tag_names.size(); ++i)
    if (tag_names[i] == name) return static_cast<int>(i);
  return -1;
}

Mesh build_connectivity(std::vector<Vec2> vertices,
                        std::vector<std::array<int, 3>> tris,
                        const std::vector<std::array<int, 3>>& boundary_lines,
                        std::vector<std::string> tag_names) {
  Mesh m;
  m.vertices = std::move(vertices);
  m.tris = std::move(tris);
  m.tag_names = std::move(tag_names);

  const int K = m.num_cells();
  const int V = static_cast<int>(m.vertices.size());
  for (int k = 0; k < K; ++k)
    for (int v : m.tris[k])
      if (v < 0 || v >= V)
        throw std::runtime_error("vertex index out of range in triangle " + std::to_string(k));

  // Normalize to CCW and reject degenerate triangles.
  for (int k = 0; k < K; ++k) {
    auto& t = m.tris[k];
    const double a = tri_area_signed(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
    if (a == 0.0)
      throw std::runtime_error("degenerate (zero-area) triangle " + std::to_string(k));
    if (a < 0.0) std::swap(t[1], t[2]);
  }

  m.neighbor.assign(K, {kNoNeighbor, kNoNeighbor, kNoNeighbor});
  m.neighbor_edge.assign(K, {-1, -1, -1});
  m.edge_tag.assign(K, {-1, -1, -1});
  m.neighbor_shift.assign(K, {Vec2{}, Vec2{}, Vec2{}});
  m.edge_normal.resize(K);
  m.edge_length.resize(K);
  m.area.resize(K);
  m.centroid.resize(K);
  m.circumradius.resize(K);
  m.inradius.resize(K);
  m.hsize.resize(K);

  std::unordered_map<EdgeKey, std::pair<int, int>, EdgeKeyHash> edge_owner;
  edge_owner.reserve(3 * K);
  for (int k = 0; k < K; ++k) {
    for (int e = 0; e < 3; ++e) {
      const EdgeKey key = make_key(m.tris[k][e], m.tris[k][(e + 1) % 3]);
      auto it = edge_owner.find(key);
      if (it == edge_owner.end()) {
        edge_owner.emplace(key, std::make_pair(k, e));
      } else if (it->second.first == -1) {
        throw std::runtime_error("non-conforming mesh: edge shared by more than 2 triangles");
      } else {
        const auto [k2, e2] = it->second;
        m.neighbor[k][e] = k2;
        m.neighbor_edge[k][e] = e2;
        m.neighbor[k2][e2] = k;
        m.neighbor_edge[k2][e2] = e;
        it->second.first = -1;  // consumed; a third incidence is an error
      }
    }
  }

  for (const auto& line : boundary_lines) {
    const EdgeKey key = make_key(line[0], line[1]);
    auto it = edge_owner.find(key);
    if (it == edge_owner.end())
      throw std::runtime_error("boundary line does not match any triangle edge");
    if (it->second.first == -1) continue;  // interior edge, tag ignored
    const auto [k, e] = it->second;
    m.edge_tag[k][e] = line[2];
  }

  for (int k = 0; k < K; ++k) {
    const Tri t = m.cell_tri(k);
    m.area[k] = tri_area(t);
    m.centroid[k] = tri_centroid(t);
    m.circumradius[k] = tri_circumradius(t);
    m.inradius[k] = tri_inradius(t);
    m.hsize[k] = tri_hsize(t);
    for (int e = 0; e < 3; ++e) {
      const Vec2 d = t[(e + 1) % 3] - t[e];
      m.edge_length[k][e] = norm(d);
      m.edge_normal[k][e] = Vec2{d.y, -d.x} / m.edge_length[k][e];  // outward for CCW
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Gmsh ASCII reader (v2.2 and v4.1)

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

struct LineReader {
  std::ifstream in;
  std::string path;
  int lineno = 0;
  explicit LineReader(const std::string& p) : in(p), path(p) {
    if (!in) throw std::runtime_error("cannot open mesh file: " + p);
  }
  bool next(std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (!out.empty()) return true;
    }
    return false;
  }
  std::string require(const std::string& context) {
    std::string s;
    if (!next(s)) parse_fail(path, lineno, "unexpected end of file while reading " + context);
    return s;
  }
};

}  // namespace

Mesh load_gmsh(const std::string& path) {
  LineReader rd(path);

  std::string line = rd.require("$MeshFormat");
  if (line != "$MeshFormat") parse_fail(path, rd.lineno, "expected $MeshFormat");
  line = rd.require("format version");
  std::istringstream fmt(line);
  double version = 0;
  int is_binary = 0;
  fmt >> version >> is_binary;
  if (is_binary) parse_fail(path, rd.lineno, "binary .msh files are not supported");
  const bool v41 = version >= 4.0;
  if (!v41 && std::abs(version - 2.2) > 1e-9)
    parse_fail(path, rd.lineno, "unsupported .msh version (need 2.2 or 4.1)");
  rd.require("$EndMeshFormat");

  std::map<int, std::string> phys_names;           // physical tag -> name
  std::map<int, int> node_id_map;                  // file node id -> index
  std::vector<Vec2> verts;
  std::vector<std::array<int, 3>> tris;
  std::vector<std::array<int, 3>> blines;          // v0, v1, physical tag
  // v4.1 entity -> physical tag maps, per dimension.
  std::map<int, int> curve_phys, surf_phys;

  while (rd.next(line)) {
    if (line == "$PhysicalNames") {
      const int n = std::stoi(rd.require("count"));
      for (int i = 0; i < n; ++i) {
        std::istringstream ss(rd.require("physical name"));
        int dim, tag;
        std::string name;
        ss >> dim >> tag >> name;
        if (name.size() >= 2 && name.front() == '"' && name.back() == '"')
          name = name.substr(1, name.size() - 2);
        phys_names[tag] = name;
      }
      rd.require("$EndPhysicalNames");
    } else if (line == "$Entities" && v41) {
      std::istringstream hs(rd.require("entity counts"));
      long np, nc, ns, nv;
      hs >> np >> nc >> ns >> nv;
      for (long i = 0; i < np; ++i) rd.require("point entity");
      for (long i = 0; i < nc; ++i) {
        std::istringstream ss(rd.require("curve entity"));
        int tag;
        double b;
        ss >> tag;
        for (int j = 0; j < 6; ++j) ss >> b;
        long nphys;
        ss >> nphys;
        if (nphys > 0) {
          int p;
          ss >> p;
          curve_phys[tag] = p;
        }
      }
      for (long i = 0; i < ns; ++i) {
        std::istringstream ss(rd.require("surface entity"));
        int tag;
        double b;
        ss >> tag;
        for (int j = 0; j < 6; ++j) ss >> b;
        long nphys;
        ss >> nphys;
        if (nphys > 0) {
          int p;
          ss >> p;
          surf_phys[tag] = p;
        }
      }
      rd.require("$EndEntities");
    } else if (line == "$Nodes") {
      if (!v41) {
        const long n = std::stol(rd.require("node count"));
        for (long i = 0; i < n; ++i) {
          std::istringstream ss(rd.require("node"));
          long id;
          double x, y, z;
          if (!(ss >> id >> x >> y >> z)) parse_fail(path, rd.lineno, "malformed node line");
          node_id_map[static_cast<int>(id)] = static_cast<int>(verts.size());
          verts.push_back({x, y});
        }
      } else {
        std::istringstream hs(rd.require("nodes header"));
        long nblocks, nnodes, mn, mx;
        hs >> nblocks >> nnodes >> mn >> mx;
        for (long b = 0; b < nblocks; ++b) {
          std::istringstream bs(rd.require("node block header"));
          int dim, etag, param;
          long nb;
          bs >> dim >> etag >> param >> nb;
          std::vector<long> ids(nb);
          for (long i = 0; i < nb; ++i) ids[i] = std::stol(rd.require("node tag"));
          for (long i = 0; i < nb; ++i) {
            std::istringstream ss(rd.require("node coords"));
            double x, y, z;
            if (!(ss >> x >> y >> z)) parse_fail(path, rd.lineno, "malformed node coordinates");
            node_id_map[static_cast<int>(ids[i])] = static_cast<int>(verts.size());
            verts.push_back({x, y});
          }
        }
      }
      rd.require("$EndNodes");
    } else if (line == "$Elements") {
      auto map_node = [&](long id) {
        auto it = node_id_map.find(static_cast<int>(id));
        if (it == node_id_map.end())
          parse_fail(path, rd.lineno, "element references unknown node " + std::to_string(id));
        return it->second;
      };
      if (!v41) {
        const long n = std::stol(rd.require("element count"));
        for (long i = 0; i < n; ++i) {
          std::istringstream ss(rd.require("element"));
          long id;
          int type, ntags;
          ss >> id >> type >> ntags;
          int phys = 0, skip;
          for (int j = 0; j < ntags; ++j) {
            ss >> skip;
            if (j == 0) phys = skip;
          }
          if (type == 2) {
            long a, b, c;
            if (!(ss >> a >> b >> c)) parse_fail(path, rd.lineno, "malformed triangle element");
            tris.push_back({map_node(a), map_node(b), map_node(c)});
          } else if (type == 1) {
            long a, b;
            if (!(ss >> a >> b)) parse_fail(path, rd.lineno, "malformed line element");
            blines.push_back({map_node(a), map_node(b), phys});
          } else if (type == 15) {
            // point element, ignored
          } else {
            parse_fail(path, rd.lineno, "unsupported element type " + std::to_string(type));
          }
        }
      } else {
        std::istringstream hs(rd.require("elements header"));
        long nblocks, nelems, mn, mx;
        hs >> nblocks >> nelems >> mn >> mx;
        for (long b = 0; b < nblocks; ++b) {
          std::istringstream bs(rd.require("element block header"));
          int dim, etag, type;
          long nb;
          bs >> dim >> etag >> type >> nb;
          for (long i = 0; i < nb; ++i) {
            std::istringstream ss(rd.require("element"));
            long id;
            ss >> id;
            if (type == 2) {
              long a, c, d;
              ss >> a >> c >> d;
              tris.push_back({map_node(a), map_node(c), map_node(d)});
            } else if (type == 1) {
              long a, c;
              ss >> a >> c;
              auto it = curve_phys.find(etag);
              blines.push_back({map_node(a), map_node(c), it == curve_phys.end() ? 0 : it->second});
            } else if (type == 15) {
              // ignored
            } else {
              parse_fail(path, rd.lineno, "unsupported element type " + std::to_string(type));
            }
          }
        }
      }
      rd.require("$EndElements");
    }
    // other sections are skipped until their $End marker
    else if (!line.empty() && line[0] == '$' && line.substr(0, 4) != "$End") {
      const std::string end = "$End" + line.substr(1);
      std::string s;
      while (rd.next(s))
        if (s == end) break;
    }
  }

  if (tris.empty()) throw std::runtime_error(path + ": no triangles found");

  // Compact physical tags into sequential ids.
  std::vector<std::string> tag_names;
  std::map<int, int> tag_remap;
  for (auto& bl : blines) {
    auto it = tag_remap.find(bl[2]);
    if (it == tag_remap.end()) {
      const int id = static_cast<int>(tag_names.size());
      auto nm = phys_names.find(bl[2]);
      tag_names.push_back(nm != phys_names.end() ? nm->second
                                                 : "tag" + std::to_string(bl[2]));
      tag_remap.emplace(bl[2], id);
      bl[2] = id;
    } else {
      bl[2] = it->second;
    }
  }
  return build_connectivity(std::move(verts), std::move(tris), blines, std::move(tag_names));
}

void write_gmsh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.precision(17);
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  if (!mesh.tag_names.empty()) {
    out << "$PhysicalNames\n" << mesh.tag_names.size() << "\n";
    for (size_t i = 0; i < mesh.tag_names.size(); ++i)
      out << "1 " << i + 1 << " \"" << mesh.tag_names[i] << "\"\n";
    out << "$EndPhysicalNames\n";
  }
  out << "$Nodes\n" << mesh.vertices.size() << "\n";
  for (size_t i = 0; i < mesh.vertices.size(); ++i)
    out << i + 1 << " " << mesh.vertices[i].x << " " << mesh.vertices[i].y << " 0\n";
  out << "$EndNodes\n";

  long id = 0;
  std::ostringstream elems;
  for (int k = 0; k < mesh.num_cells(); ++k)
    for (int e = 0; e < 3; ++e)
      if (mesh.edge_tag[k][e] >= 0)
        elems << ++id << " 1 2 " << mesh.edge_tag[k][e] + 1 << " 0 "
              << mesh.tris[k][e] + 1 << " " << mesh.tris[k][(e + 1) % 3] + 1 << "\n";
  for (int k = 0; k < mesh.num_cells(); ++k)
    elems << ++id << " 2 2 0 0 " << mesh.tris[k][0] + 1 << " "
          << mesh.tris[k][1] + 1 << " " << mesh.tris[k][2] + 1 << "\n";
  out << "$Elements\n" << id << "\n" << elems.str() << "$EndElements\n";
}

void apply_periodicity(Mesh& mesh, bool periodic_x, bool periodic_y,
                       const std::array<double, 4>& box) {
  const double Lx = box[2] - box[0];
  const double Ly = box[3] - box[1];

  struct BEdge {
    int k, e;
    Vec2 mid;
  };
  std::vector<BEdge> edges;
  double hmin = 1e300;
  for (int k = 0; k < mesh.num_cells(); ++k)
    for (int e = 0; e < 3; ++e)
      if (mesh.neighbor[k][e] == kNoNeighbor) {
        const Vec2 a = mesh.vertices[mesh.tris[k][e]];
        const Vec2 b = mesh.vertices[mesh.tris[k][(e + 1) % 3]];
        edges.push_back({k, e, (a + b) * 0.5});
        hmin = std::min(hmin, norm(b - a));
      }
  const double tol = 1e-6 * hmin;

  std::vector<Vec2> shifts;
  if (periodic_x) shifts.push_back({Lx, 0.0});
  if (periodic_y) shifts.push_back({0.0, Ly});

  for (const Vec2& shift : shifts) {
    for (const auto& a : edges) {
      if (mesh.neighbor[a.k][a.e] != kNoNeighbor) continue;
      for (const auto& b : edges) {
        if (mesh.neighbor[b.k][b.e] != kNoNeighbor) continue;
        const Vec2 d = b.mid - a.mid;
        if (std::abs(d.x - shift.x) < tol && std::abs(d.y - shift.y) < tol) {
          mesh.neighbor[a.k][a.e] = b.k;
          mesh.neighbor_edge[a.k][a.e] = b.e;
          mesh.neighbor_shift[a.k][a.e] = Vec2{-shift.x, -shift.y};
          mesh.neighbor[b.k][b.e] = a.k;
          mesh.neighbor_edge[b.k][b.e] = a.e;
          mesh.neighbor_shift[b.k][b.e] = shift;
          break;
        }
      }
    }
  }
}

SubcellDecomposition subdivide_neighbor(const Mesh& mesh, int troubled,
                                        int slot, int order) {
  const int nb = mesh.neighbor[troubled][slot];
  if (nb == kNoNeighbor)
    throw std::runtime_error("stencil incomplete: boundary neighbor slot " +
                             std::to_string(slot) + " of cell " + std::to_string(troubled));

  const Vec2 shift = mesh.neighbor_shift[troubled][slot];
  Tri p = mesh.cell_tri(nb);
  for (auto& v : p) v += shift;
  const Vec2 g = tri_centroid(p);

  auto make_child = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    SubcellChild ch;
    ch.v = {a, b, c};
    ch.area = tri_area(ch.v);
    ch.centroid = tri_centroid(ch.v);
    return ch;
  };

  // Child i spans the parent's edge i.  The child adjacent to the troubled
  // cell spans the shared edge; the other two follow in CCW order.
  const int shared = mesh.neighbor_edge[troubled][slot];
  SubcellDecomposition d;
  d.parent = nb;
  for (int i = 0; i < 3; ++i) {
    const int e = (shared + i) % 3;
    d.level1[i] = make_child(g, p[e], p[(e + 1) % 3]);
  }

  if (order >= 2) {
    for (int i = 1; i <= 2; ++i) {
      const SubcellChild& outer = d.level1[i];
      const Vec2 a = outer.v[1], b = outer.v[2];
      // Perpendicular foot from the centroid vertex onto the opposite side,
      // clamped to the segment on obtuse children.
      const Vec2 ab = b - a;
      double t = dot(g - a, ab) / dot(ab, ab);
      if (t < 0.0 || t > 1.0) {
        t = std::clamp(t, 0.0, 1.0);
        d.clamped_foot = true;
      }
      const Vec2 f = a + t * ab;
      SubcellChild c1 = make_child(g, a, f);
      SubcellChild c2 = make_child(g, f, b);
      // The sub-triangle nearer the troubled cell goes to level2; the far
      // half goes to level2b.  A clamped foot can collapse one side to zero
      // area, in which case the surviving half goes to level2 alone.
      const Vec2 t0 = mesh.centroid[troubled];
      const double amin = 1e-12 * outer.area;
      if (c1.area < amin) {
        d.level2.push_back(c2);
      } else if (c2.area < amin) {
        d.level2.push_back(c1);
      } else if (norm(c1.centroid - t0) <= norm(c2.centroid - t0)) {
        d.level2.push_back(c1);
        d.level2b.push_back(c2);
      } else {
        d.level2.push_back(c2);
        d.level2b.push_back(c1);
      }
    }
  }
  return d;
}

}  // namespace tridg
