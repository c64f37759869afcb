#include "biotfv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>

#include "biotfv/log.hpp"

namespace biotfv {

namespace {

double polygon_area(const std::vector<Vec2>& pts) {
  double a = 0.0;
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& p = pts[i];
    const Vec2& q = pts[(i + 1) % n];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

double tri_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

Vec2 polygon_centroid(const std::vector<Vec2>& pts, double area) {
  Vec2 c = Vec2::Zero();
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    const Vec2& p = pts[i];
    const Vec2& q = pts[(i + 1) % n];
    const double w = p.x() * q.y() - q.x() * p.y();
    c += w * (p + q);
  }
  return c / (6.0 * area);
}

std::vector<Vec2> cell_points(const MeshTriplet& mesh, int K) {
  std::vector<Vec2> pts;
  pts.reserve(mesh.cells[K].size());
  for (int v : mesh.cells[K]) pts.push_back(mesh.vertices[v]);
  return pts;
}

}  // namespace

void MeshTriplet::build_topology() {
  faces.clear();
  cell_faces.assign(cells.size(), {});
  vertex_cells.assign(vertices.size(), {});
  vertex_faces.assign(vertices.size(), {});

  std::map<std::pair<int, int>, int> face_of;
  for (int K = 0; K < n_cells(); ++K) {
    const auto& loop = cells[K];
    const int nv = static_cast<int>(loop.size());
    if (nv < 3) throw MeshError("cell " + std::to_string(K) + " has fewer than 3 vertices");
    for (int i = 0; i < nv; ++i) {
      const int a = loop[i], b = loop[(i + 1) % nv];
      const auto key = std::minmax(a, b);
      auto it = face_of.find(key);
      int f;
      if (it == face_of.end()) {
        f = n_faces();
        face_of.emplace(key, f);
        Face face;
        face.v0 = key.first;
        face.v1 = key.second;
        face.cells[0] = K;
        faces.push_back(face);
      } else {
        f = it->second;
        Face& face = faces[f];
        if (face.cells[1] != -1)
          throw MeshError("face shared by more than two cells near vertex " + std::to_string(a));
        face.cells[1] = K;
        if (face.cells[0] > face.cells[1]) std::swap(face.cells[0], face.cells[1]);
      }
      cell_faces[K].push_back(f);
    }
    for (int v : loop) vertex_cells[v].push_back(K);
  }
  for (auto& f : faces) f.boundary = (f.cells[1] == -1);
  for (int f = 0; f < n_faces(); ++f) {
    vertex_faces[faces[f].v0].push_back(f);
    vertex_faces[faces[f].v1].push_back(f);
  }
  for (auto& tc : vertex_cells) std::sort(tc.begin(), tc.end());
  for (auto& tf : vertex_faces) std::sort(tf.begin(), tf.end());
}

void MeshTriplet::validate(double domain_area) const {
  if (faces.empty()) throw MeshError("validate: topology not built");
  double total = 0.0;
  for (int K = 0; K < n_cells(); ++K) {
    const auto pts = cell_points(*this, K);
    const double a = polygon_area(pts);
    if (a <= 0.0)
      throw MeshError("cell " + std::to_string(K) + " has non-positive area");
    const Vec2 xc = polygon_centroid(pts, a);
    const int nv = static_cast<int>(pts.size());
    for (int i = 0; i < nv; ++i) {
      if (tri_area(xc, pts[i], pts[(i + 1) % nv]) <= 1e-12 * a)
        throw MeshError("cell " + std::to_string(K) +
                        " is not star-shaped w.r.t. its centroid");
    }
    total += a;
  }
  if (std::abs(total - domain_area) > 1e-12 * domain_area)
    throw MeshError("cells do not partition the domain: total area " + std::to_string(total));
  for (int f = 0; f < n_faces(); ++f) {
    if (faces[f].cells[0] == -1) throw MeshError("face with no adjacent cell");
  }
}

SubfaceRule general_rule() {
  SubfaceRule r;
  const double d = 0.5 / std::sqrt(3.0);
  r.qpos = {0.5 - d, 0.5 + d};
  r.qweight = {0.5, 0.5};
  r.cont_pos = 1.0;
  return r;
}

SubfaceRule simplex_rule() {
  SubfaceRule r;
  r.qpos = {2.0 / 3.0};
  r.qweight = {1.0};
  r.cont_pos = 2.0 / 3.0;
  return r;
}

SubcellFaces subcell_faces(const MeshTriplet& mesh, int K, int lv) {
  const auto& loop = mesh.cells[K];
  const int nv = static_cast<int>(loop.size());
  const int v = loop[lv];
  SubcellFaces sf;
  sf.face[0] = mesh.cell_faces[K][(lv + nv - 1) % nv];  // edge (v_{lv-1}, v_lv)
  sf.face[1] = mesh.cell_faces[K][lv];                  // edge (v_lv, v_{lv+1})
  for (int i = 0; i < 2; ++i)
    sf.end[i] = (mesh.faces[sf.face[i]].v0 == v) ? 0 : 1;
  return sf;
}

Geometry compute_geometry(const MeshTriplet& mesh, const SubfaceRule& rule) {
  Geometry g;
  g.rule = rule;
  g.nq = static_cast<int>(rule.qpos.size());

  const int nc = mesh.n_cells(), nf = mesh.n_faces();
  g.cell_area.resize(nc);
  g.cell_center.resize(nc);
  g.cell_diam.resize(nc);
  g.subcell_area.resize(nc);

  for (int K = 0; K < nc; ++K) {
    const auto pts = cell_points(mesh, K);
    const double a = polygon_area(pts);
    if (a <= 0.0) throw MeshError("cell " + std::to_string(K) + " has non-positive area");
    g.cell_area[K] = a;
    g.cell_center[K] = polygon_centroid(pts, a);
    double diam = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j)
        diam = std::max(diam, (pts[i] - pts[j]).norm());
    g.cell_diam[K] = diam;
  }
  g.h = *std::max_element(g.cell_diam.begin(), g.cell_diam.end());

  g.face_len.resize(nf);
  g.face_mid.resize(nf);
  g.face_normal.resize(nf);
  g.face_dist.resize(nf);
  g.subface_len.resize(nf);
  g.subface_mid.resize(nf);
  g.qpoint.resize(nf);
  g.qweight.resize(nf);
  g.cont_point.resize(nf);

  for (int f = 0; f < nf; ++f) {
    const auto& face = mesh.faces[f];
    const Vec2 a = mesh.vertices[face.v0], b = mesh.vertices[face.v1];
    const Vec2 t = b - a;
    g.face_len[f] = t.norm();
    if (g.face_len[f] <= 0.0) throw MeshError("zero-length face " + std::to_string(f));
    g.face_mid[f] = 0.5 * (a + b);
    Vec2 n(t.y(), -t.x());
    n /= g.face_len[f];
    // orient out of cells[0]
    if (n.dot(g.face_mid[f] - g.cell_center[face.cells[0]]) < 0.0) n = -n;
    g.face_normal[f] = n;
    for (int side = 0; side < 2; ++side) {
      const int K = face.cells[side];
      g.face_dist[f][side] =
          (K == -1) ? 0.0 : std::abs(n.dot(g.face_mid[f] - g.cell_center[K]));
    }
    for (int e = 0; e < 2; ++e) {
      const Vec2 xv = (e == 0) ? a : b;
      const Vec2 xm = g.face_mid[f];
      g.subface_len[f][e] = 0.5 * g.face_len[f];
      g.subface_mid[f][e] = 0.5 * (xv + xm);
      g.cont_point[f][e] = xv + rule.cont_pos * (xm - xv);
      auto& qp = g.qpoint[f][e];
      auto& qw = g.qweight[f][e];
      qp.resize(g.nq);
      qw.resize(g.nq);
      for (int q = 0; q < g.nq; ++q) {
        qp[q] = xv + rule.qpos[q] * (xm - xv);
        qw[q] = rule.qweight[q] * g.subface_len[f][e];
      }
    }
  }

  for (int K = 0; K < nc; ++K) {
    const auto& loop = mesh.cells[K];
    const int nv = static_cast<int>(loop.size());
    g.subcell_area[K].resize(nv);
    double sum = 0.0;
    for (int lv = 0; lv < nv; ++lv) {
      const auto sf = subcell_faces(mesh, K, lv);
      const Vec2 xs = mesh.vertices[loop[lv]];
      const Vec2 m0 = g.face_mid[sf.face[0]];
      const Vec2 m1 = g.face_mid[sf.face[1]];
      const Vec2 xc = g.cell_center[K];
      // quad (x_K, mid_prev, s, mid_next), CCW for CCW loops
      const double a = tri_area(xc, m0, xs) + tri_area(xc, xs, m1);
      if (a <= 0.0)
        throw MeshError("cell " + std::to_string(K) +
                        " is not star-shaped w.r.t. its centroid (subcell)");
      g.subcell_area[K][lv] = a;
      sum += a;
    }
    // subcell partition holds exactly up to roundoff by construction
    (void)sum;
  }
  return g;
}

// ---- generators ----

MeshTriplet build_cartesian(int n) {
  if (n < 1) throw MeshError("build_cartesian: n must be >= 1");
  MeshTriplet m;
  const auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  m.vertices.resize((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.vertices[vid(i, j)] = Vec2(static_cast<double>(i) / n, static_cast<double>(j) / n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      m.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  m.build_topology();
  return m;
}

MeshTriplet build_triangular(int n) {
  if (n < 1) throw MeshError("build_triangular: n must be >= 1");
  MeshTriplet m;
  const auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  m.vertices.resize((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      m.vertices[vid(i, j)] = Vec2(static_cast<double>(i) / n, static_cast<double>(j) / n);
  // fixed diagonal from (i,j) to (i+1,j+1)
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      m.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      m.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  m.build_topology();
  return m;
}

MeshTriplet build_dual(const MeshTriplet& tri) {
  for (const auto& c : tri.cells)
    if (c.size() != 3) throw MeshError("build_dual: input is not a triangulation");

  const int np = tri.n_vertices();
  // triangle centroids
  std::vector<Vec2> centroid(tri.n_cells());
  for (int K = 0; K < tri.n_cells(); ++K) {
    Vec2 c = Vec2::Zero();
    for (int v : tri.cells[K]) c += tri.vertices[v];
    centroid[K] = c / 3.0;
  }

  MeshTriplet dual;
  std::map<std::pair<double, double>, int> point_id;
  const auto add_point = [&](const Vec2& p) {
    const auto key = std::make_pair(p.x(), p.y());
    auto it = point_id.find(key);
    if (it != point_id.end()) return it->second;
    const int id = dual.n_vertices();
    point_id.emplace(key, id);
    dual.vertices.push_back(p);
    return id;
  };

  for (int s = 0; s < np; ++s) {
    const Vec2 xs = tri.vertices[s];
    struct Pt {
      Vec2 p;
      double ang;
    };
    std::vector<Pt> pts;
    for (int K : tri.vertex_cells[s]) {
      const Vec2 d = centroid[K] - xs;
      pts.push_back({centroid[K], std::atan2(d.y(), d.x())});
    }
    bool on_boundary = false;
    for (int f : tri.vertex_faces[s]) {
      if (!tri.faces[f].boundary) continue;
      on_boundary = true;
      const Vec2 mid =
          0.5 * (tri.vertices[tri.faces[f].v0] + tri.vertices[tri.faces[f].v1]);
      const Vec2 d = mid - xs;
      pts.push_back({mid, std::atan2(d.y(), d.x())});
    }
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) { return a.ang < b.ang; });
    if (on_boundary) {
      // close through the primal vertex; rotate so the angular gap (the
      // exterior) sits between the last and first point
      const int n = static_cast<int>(pts.size());
      int gap = 0;
      double best = -1.0;
      for (int i = 0; i < n; ++i) {
        double d = pts[(i + 1) % n].ang - pts[i].ang;
        if (d < 0) d += 2.0 * std::numbers::pi;
        if (d > best) {
          best = d;
          gap = i;
        }
      }
      std::rotate(pts.begin(), pts.begin() + (gap + 1) % n, pts.end());
      pts.push_back({xs, 0.0});
    }
    std::vector<int> loop;
    loop.reserve(pts.size());
    for (const auto& pt : pts) loop.push_back(add_point(pt.p));
    std::vector<Vec2> poly;
    for (int v : loop) poly.push_back(dual.vertices[v]);
    const double a = polygon_area(poly);
    if (std::abs(a) < 1e-14)
      throw MeshError("build_dual: degenerate dual cell at primal vertex " + std::to_string(s));
    if (a < 0.0) std::reverse(loop.begin(), loop.end());
    dual.cells.push_back(std::move(loop));
  }
  dual.build_topology();
  return dual;
}

namespace {

// uniform in [-1,1), reproducible across platforms
double sym_uniform(std::uint64_t& state) {
  // splitmix64 step
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z = z ^ (z >> 31);
  return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace

MeshTriplet perturb(const MeshTriplet& mesh, double amplitude, std::uint64_t seed) {
  if (amplitude < 0.0 || amplitude > 0.5)
    throw MeshError("perturb: amplitude must lie in [0, 0.5]");

  // classify vertices against the unit-square boundary
  const double tol = 1e-12;
  std::vector<double> local_len(mesh.n_vertices(), std::numeric_limits<double>::max());
  for (const auto& f : mesh.faces) {
    const double len = (mesh.vertices[f.v0] - mesh.vertices[f.v1]).norm();
    local_len[f.v0] = std::min(local_len[f.v0], len);
    local_len[f.v1] = std::min(local_len[f.v1], len);
  }

  MeshTriplet out = mesh;
  std::uint64_t state = seed ^ 0x5851f42d4c957f2dULL;
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    const double d1 = sym_uniform(state);
    const double d2 = sym_uniform(state);
    if (amplitude == 0.0) continue;
    const Vec2 x = mesh.vertices[v];
    const bool on_x0 = std::abs(x.x()) < tol, on_x1 = std::abs(x.x() - 1.0) < tol;
    const bool on_y0 = std::abs(x.y()) < tol, on_y1 = std::abs(x.y() - 1.0) < tol;
    const int nsides = int(on_x0) + int(on_x1) + int(on_y0) + int(on_y1);
    const double a = amplitude * local_len[v];
    if (nsides >= 2) continue;  // corner
    if (nsides == 1) {
      // tangential only
      Vec2 t = (on_x0 || on_x1) ? Vec2(0.0, 1.0) : Vec2(1.0, 0.0);
      out.vertices[v] = x + a * d1 * t;
    } else {
      out.vertices[v] = x + Vec2(a * d1, a * d2);
    }
  }
  out.build_topology();
  out.validate();
  return out;
}

MeshTriplet build_grid(GridType type, int n, double amplitude, std::uint64_t seed,
                       int max_retries) {
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    const std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(attempt);
    try {
      switch (type) {
        case GridType::A:
          return amplitude > 0.0 ? perturb(build_cartesian(n), amplitude, s)
                                 : build_cartesian(n);
        case GridType::B:
          return amplitude > 0.0 ? perturb(build_triangular(n), amplitude, s)
                                 : build_triangular(n);
        case GridType::C: {
          MeshTriplet primal = build_triangular(n);
          if (amplitude > 0.0) primal = perturb(primal, amplitude, s);
          return build_dual(primal);
        }
      }
    } catch (const MeshError& e) {
      BIOTFV_LOG_WARN(std::string("perturbed grid rejected (attempt ") +
                      std::to_string(attempt) + "): " + e.what());
    }
  }
  throw MeshError("build_grid: no valid perturbed mesh after retries");
}

BoundarySpec BoundarySpec::all_dirichlet(const MeshTriplet& mesh) {
  BoundarySpec bc;
  bc.u_kind.assign(mesh.n_faces(), BCKind::Dirichlet);
  bc.p_kind.assign(mesh.n_faces(), BCKind::Dirichlet);
  return bc;
}

void BoundarySpec::check(const MeshTriplet& mesh) const {
  bool has_ud = false, has_pd = false;
  for (int f = 0; f < mesh.n_faces(); ++f) {
    if (!mesh.faces[f].boundary) continue;
    if (u_kind[f] == BCKind::Dirichlet) has_ud = true;
    if (p_kind[f] == BCKind::Dirichlet) has_pd = true;
  }
  if (!has_ud || !has_pd)
    throw MeshError("boundary spec: both displacement and pressure need at least one "
                    "Dirichlet face");
}

// ---- mesh file format ----

void save_mesh(const MeshTriplet& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open " + path + " for writing");
  out.precision(17);
  out << "biotfv-mesh v1\n";
  out << mesh.n_vertices() << "\n";
  for (const auto& v : mesh.vertices) out << v.x() << " " << v.y() << "\n";
  out << mesh.n_cells() << "\n";
  for (const auto& c : mesh.cells) {
    out << c.size();
    for (int v : c) out << " " << v;
    out << "\n";
  }
}

MeshTriplet load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open " + path);
  std::string header, version;
  in >> header >> version;
  if (header != "biotfv-mesh" || version != "v1")
    throw MeshError(path + ": not a biotfv-mesh v1 file");
  int nv = 0;
  in >> nv;
  if (nv <= 0) throw MeshError(path + ": bad vertex count");
  MeshTriplet m;
  m.vertices.resize(nv);
  for (auto& v : m.vertices) in >> v.x() >> v.y();
  int nc = 0;
  in >> nc;
  if (nc <= 0) throw MeshError(path + ": bad cell count");
  m.cells.resize(nc);
  for (auto& c : m.cells) {
    int k = 0;
    in >> k;
    if (k < 3) throw MeshError(path + ": bad cell size");
    c.resize(k);
    for (int& v : c) {
      in >> v;
      if (v < 0 || v >= nv) throw MeshError(path + ": vertex index out of range");
    }
  }
  if (!in) throw MeshError(path + ": truncated file");
  m.build_topology();
  return m;
}

}  // namespace biotfv
