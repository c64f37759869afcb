#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace biotfv {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Polygonal tessellation of the unit square: cells, faces, vertices,
/// with full cell/face/vertex adjacency. Faces are derived from the
/// cell loops; every interior face has exactly two adjacent cells.
struct MeshTriplet {
  struct Face {
    int v0 = -1, v1 = -1;          // endpoint vertex ids
    std::array<int, 2> cells{-1, -1};  // adjacent cells, cells[0] < cells[1]; cells[1]=-1 on boundary
    bool boundary = false;
  };

  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> cells;  // CCW vertex loops
  std::vector<Face> faces;

  // adjacency
  std::vector<std::vector<int>> cell_faces;    // F_K, loop-edge order
  std::vector<std::vector<int>> vertex_cells;  // T_s, ascending cell id
  std::vector<std::vector<int>> vertex_faces;  // F_s, ascending face id

  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }
  int n_vertices() const { return static_cast<int>(vertices.size()); }

  /// Rebuild faces and adjacency from vertices+cells. Throws MeshError on
  /// inconsistent topology (face shared by >2 cells, etc.).
  void build_topology();

  /// Check the structural invariants: area partition, face-cell
  /// compatibility, star-shapedness of every cell w.r.t. its centroid.
  /// Throws MeshError with a diagnostic if violated.
  void validate(double domain_area = 1.0) const;
};

/// Per-subface quadrature / continuity-point layout. Positions are
/// relative coordinates on the subface segment [vertex, face midpoint]:
/// 0 at the vertex, 1 at the face midpoint.
struct SubfaceRule {
  std::vector<double> qpos;     // quadrature point positions
  std::vector<double> qweight;  // relative weights, sum to 1
  double cont_pos = 1.0;        // value-continuity point position
};

/// Two-point Gauss rule on the subface (exact for quadratics); the
/// continuity point sits at the face midpoint.
SubfaceRule general_rule();

/// Single-point rule at one third of the face from the vertex. On
/// simplex cells this choice makes the finite volume and consistent
/// gradients coincide, so the resulting discretization is symmetric.
SubfaceRule simplex_rule();

/// All geometric measures of the mesh triplet: cell areas/centroids,
/// face lengths/normals/distances, subcell areas, subface quadrature.
struct Geometry {
  // cells
  std::vector<double> cell_area;     // m_K
  std::vector<Vec2> cell_center;     // x_K (area centroid)
  std::vector<double> cell_diam;     // d_K
  // faces (normal oriented out of faces[f].cells[0])
  std::vector<double> face_len;      // m_sigma
  std::vector<Vec2> face_mid;        // x_sigma
  std::vector<Vec2> face_normal;
  std::vector<std::array<double, 2>> face_dist;  // d_{K,sigma} per side
  // subcells: aligned with the cell vertex loop
  std::vector<std::vector<double>> subcell_area;  // m_K^s
  // subfaces: [face][end] with end 0/1 = face.v0/v1
  std::vector<std::array<double, 2>> subface_len;       // m_sigma^s
  std::vector<std::array<Vec2, 2>> subface_mid;         // x_sigma^s
  std::vector<std::array<std::vector<Vec2>, 2>> qpoint; // x_beta
  std::vector<std::array<std::vector<double>, 2>> qweight;  // omega_beta, sums to m_sigma^s
  std::vector<std::array<Vec2, 2>> cont_point;          // value-continuity point

  double h = 0.0;        // max cell diameter
  int nq = 0;            // quadrature points per subface
  SubfaceRule rule;

  /// Outward normal of face f seen from cell K.
  Vec2 normal_from(const MeshTriplet& mesh, int f, int K) const {
    return mesh.faces[f].cells[0] == K ? face_normal[f] : Vec2(-face_normal[f]);
  }
  double dist_from(const MeshTriplet& mesh, int f, int K) const {
    return mesh.faces[f].cells[0] == K ? face_dist[f][0] : face_dist[f][1];
  }
};

Geometry compute_geometry(const MeshTriplet& mesh, const SubfaceRule& rule = general_rule());

/// For cell K and one of its vertices (loop position lv), the two faces
/// of K incident on that vertex and which endpoint of each face it is.
struct SubcellFaces {
  std::array<int, 2> face;  // prev-edge face, next-edge face (loop order)
  std::array<int, 2> end;   // endpoint index of the vertex on that face
};
SubcellFaces subcell_faces(const MeshTriplet& mesh, int K, int lv);

// ---- generators ----

MeshTriplet build_cartesian(int n);
MeshTriplet build_triangular(int n);
MeshTriplet build_dual(const MeshTriplet& tri);

/// Displace vertices by independent uniform offsets scaled by the
/// smallest incident face length: interior vertices in both coordinates,
/// boundary vertices tangentially, corners fixed. Deterministic in
/// (mesh, amplitude, seed); throws MeshError if a displaced cell fails
/// the star-shape check.
MeshTriplet perturb(const MeshTriplet& mesh, double amplitude, std::uint64_t seed);

enum class GridType { A, B, C };

/// Grid ladder used by the convergence harness: type A = Cartesian(n),
/// B = bisected Cartesian(n), C = dual of the (perturbed) type-B grid.
/// Perturbation is applied to the primal grid for type C.
MeshTriplet build_grid(GridType type, int n, double amplitude, std::uint64_t seed,
                       int max_retries = 20);

// ---- boundary conditions ----

enum class BCKind { Dirichlet, Neumann };

struct BoundarySpec {
  std::vector<BCKind> u_kind;  // per face; meaningful on boundary faces
  std::vector<BCKind> p_kind;
  std::function<Vec2(const Vec2&)> g_u_dirichlet = [](const Vec2&) { return Vec2::Zero().eval(); };
  std::function<Vec2(const Vec2&)> g_u_neumann = [](const Vec2&) { return Vec2::Zero().eval(); };
  std::function<double(const Vec2&)> g_p_dirichlet = [](const Vec2&) { return 0.0; };
  std::function<double(const Vec2&)> g_p_neumann = [](const Vec2&) { return 0.0; };

  static BoundarySpec all_dirichlet(const MeshTriplet& mesh);
  void check(const MeshTriplet& mesh) const;  // Gamma_{u,D}, Gamma_{p,D} nonempty
};

// ---- file format: biotfv-mesh v1 ----

void save_mesh(const MeshTriplet& mesh, const std::string& path);
MeshTriplet load_mesh(const std::string& path);

}  // namespace biotfv
