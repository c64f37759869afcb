#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "biotfv/mesh.hpp"

namespace biotfv {

/// Piecewise-constant cell field, scalar or 2-vector, components
/// interleaved per cell.
struct CellField {
  int ncomp = 1;
  Eigen::VectorXd data;

  static CellField zeros(int ncells, int ncomp = 1) {
    CellField f;
    f.ncomp = ncomp;
    f.data = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ncells) * ncomp);
    return f;
  }
  int n_cells() const { return static_cast<int>(data.size()) / ncomp; }
  double& at(int K, int c = 0) { return data[static_cast<Eigen::Index>(K) * ncomp + c]; }
  double at(int K, int c = 0) const { return data[static_cast<Eigen::Index>(K) * ncomp + c]; }
  Vec2 vec(int K) const { return Vec2(at(K, 0), at(K, 1)); }
};

/// Index layout for the subface quadrature values of a mesh: one slot
/// per (cell side, face, endpoint vertex, quadrature point).
struct SubfaceLayout {
  int nq = 0;
  std::vector<int> base;           // per face
  std::vector<int> nsides;         // 1 or 2
  int total = 0;

  SubfaceLayout() = default;
  SubfaceLayout(const MeshTriplet& mesh, const Geometry& geom);

  // side: 0 = faces[f].cells[0], 1 = cells[1]
  int index(int f, int end, int side, int q) const {
    return base[f] + ((end * nsides[f]) + side) * nq + q;
  }
};

/// Cell values plus independent values at every subface quadrature
/// point on both sides of each face.
struct SubfaceField {
  int ncomp = 1;
  SubfaceLayout layout;
  Eigen::VectorXd cell;  // interleaved
  Eigen::VectorXd face;  // interleaved over layout slots

  static SubfaceField zeros(const MeshTriplet& mesh, const Geometry& geom, int ncomp = 1);
  double cell_at(int K, int c = 0) const { return cell[static_cast<Eigen::Index>(K) * ncomp + c]; }
  double& cell_at(int K, int c = 0) { return cell[static_cast<Eigen::Index>(K) * ncomp + c]; }
  double face_at(int f, int end, int side, int q, int c = 0) const {
    return face[static_cast<Eigen::Index>(layout.index(f, end, side, q)) * ncomp + c];
  }
  double& face_at(int f, int end, int side, int q, int c = 0) {
    return face[static_cast<Eigen::Index>(layout.index(f, end, side, q)) * ncomp + c];
  }
};

/// Cell values plus one shared value per subface (face, endpoint).
struct FaceContinuousField {
  int ncomp = 1;
  Eigen::VectorXd cell;
  Eigen::VectorXd face;  // per (face, end), interleaved

  static FaceContinuousField zeros(const MeshTriplet& mesh, int ncomp = 1);
  double cell_at(int K, int c = 0) const { return cell[static_cast<Eigen::Index>(K) * ncomp + c]; }
  double& cell_at(int K, int c = 0) { return cell[static_cast<Eigen::Index>(K) * ncomp + c]; }
  double face_at(int f, int end, int c = 0) const {
    return face[(static_cast<Eigen::Index>(f) * 2 + end) * ncomp + c];
  }
  double& face_at(int f, int end, int c = 0) {
    return face[(static_cast<Eigen::Index>(f) * 2 + end) * ncomp + c];
  }
};

// ---- face interpolation and H_T norms ----

/// Distance-weighted face value of a cell field; zero on Dirichlet
/// faces, the single-cell value on other boundary faces.
double gamma_face(const MeshTriplet& mesh, const Geometry& geom,
                  const std::vector<bool>& dirichlet, const CellField& u, int f, int c = 0);

double inner_T(const MeshTriplet& mesh, const Geometry& geom,
               const std::vector<bool>& dirichlet, const CellField& u, const CellField& v);
double norm_T(const MeshTriplet& mesh, const Geometry& geom,
              const std::vector<bool>& dirichlet, const CellField& u);
/// Restriction of the squared T-norm to the subfaces at vertex s
/// (uses m_sigma^s weights, so the vertex sum recovers the full norm).
double norm_T_local_sq(const MeshTriplet& mesh, const Geometry& geom,
                       const std::vector<bool>& dirichlet, const CellField& u, int s);

double inner_T0(const Geometry& geom, const CellField& u, const CellField& v);
double norm_T0(const Geometry& geom, const CellField& u);
/// Quotient seminorm: T0-norm of the field minus its volume-weighted mean.
double quotient_seminorm(const Geometry& geom, const CellField& u);

// ---- H_D operators and norms ----

/// Jump across an interior subface quadrature point (higher cell id
/// minus lower); zero on boundary subfaces.
double jump(const MeshTriplet& mesh, const SubfaceField& u, int f, int end, int q, int c = 0);
/// Quadrature-weighted two-sided average over a subface; one-sided on
/// the boundary.
double average(const MeshTriplet& mesh, const Geometry& geom, const SubfaceField& u,
               int f, int end, int c = 0);
/// One-sided quadrature average seen from the given side.
double average_side(const Geometry& geom, const SubfaceField& u, int f, int end, int side,
                    int c = 0);

double norm_D(const MeshTriplet& mesh, const Geometry& geom, const SubfaceField& u);
double norm_D_local_sq(const MeshTriplet& mesh, const Geometry& geom, const SubfaceField& u,
                       int s);

double norm_C(const MeshTriplet& mesh, const Geometry& geom, const FaceContinuousField& u);

// ---- interpolation operators ----

CellField project_T(const SubfaceField& u);
CellField project_T(const FaceContinuousField& u);
CellField project_T(const MeshTriplet& mesh, const Geometry& geom,
                    const std::function<double(const Vec2&)>& u);
CellField project_T(const MeshTriplet& mesh, const Geometry& geom,
                    const std::function<Vec2(const Vec2&)>& u);
FaceContinuousField project_C(const MeshTriplet& mesh, const Geometry& geom,
                              const SubfaceField& u);
SubfaceField embed_D(const MeshTriplet& mesh, const Geometry& geom,
                     const FaceContinuousField& u);

// ---- subcell gradients (Definitions 3.1 and the g-vector system) ----

/// Finite volume gradient of a face-continuous field on subcell (K, lv):
/// (1/m_K^s) sum_sigma m_sigma^s (u_s^sigma - u_K) otimes n_{K,sigma}.
/// Scalar fields give the gradient vector in row 0.
Eigen::Matrix<double, 2, 2> fv_gradient(const MeshTriplet& mesh, const Geometry& geom,
                                        const FaceContinuousField& u, int K, int lv);

// ---- field snapshot format: biotfv-field v1 ----

void save_field(const CellField& f, const std::string& path);
CellField load_field(const std::string& path);

}  // namespace biotfv
