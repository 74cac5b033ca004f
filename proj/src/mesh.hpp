#ifndef RDLOC_MESH_HPP
#define RDLOC_MESH_HPP

#include "error.hpp"
#include "geometry.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace rdloc {

/// One node of the bisection forest. Elements are append-only: bisected
/// elements stay in the array with their children recorded, leaves form the
/// current triangulation.
struct Element {
  std::array<int, 3> v{-1, -1, -1}; // vertex ids, counterclockwise
  int refine_edge = 0;              // edge r is opposite vertex r
  int parent = -1;
  std::array<int, 2> child{-1, -1};
  int depth = 0;

  bool is_leaf() const { return child[0] < 0; }
};

struct MeshStats {
  double mu = 1.0;       // max sqrt(|K|/|K~|) over touching elements
  double sigma = 1.0;    // max h_{K~}/rho_K over touching elements
  int nbar = 0;          // max number of elements meeting at a vertex
  bool face_connected = true;
};

enum class PatchKind { SingleElement, Pair, MinimalPair };

/// A patch triangle may be a mesh element or a virtual bisection child of
/// one; boundary flags are resolved against the owning mesh at construction.
struct PatchTri {
  Triangle xy;
  int host = -1; // mesh element containing this triangle
  std::array<bool, 3> edge_on_boundary{false, false, false};
  std::array<bool, 3> vertex_on_boundary{false, false, false};
};

/// Realization of omega(F) and omega_star(F): one or two triangles glued
/// along the generating face.
struct Patch {
  PatchKind kind = PatchKind::SingleElement;
  std::vector<PatchTri> tris;
  std::array<int, 2> shared_local_edge{-1, -1};
  Vec2 face_a, face_b; // endpoints of the generating face F
  int face_id = -1;

  double face_length() const { return norm(face_b - face_a); }
  double total_area() const;
  bool touches_boundary() const;
};

/// Conforming triangular mesh under tagged newest-vertex bisection.
/// Immutable: refinement operations return new meshes. Geometry queries use
/// an absolute tolerance of 1e-12 scaled by the root mesh diameter.
class Mesh {
public:
  struct Face {
    std::array<int, 2> v{-1, -1};          // sorted vertex ids
    std::array<int, 2> elem{-1, -1};       // incident leaves, ascending (elem[1] = -1 on boundary)
    std::array<int, 2> local_edge{-1, -1}; // edge index within each incident element

    bool boundary() const { return elem[1] < 0; }
  };

  /// tris entries are {i, j, k, refine_edge}. Verifies conformity, positive
  /// orientation and index validity of the root mesh.
  static Mesh from_root(std::vector<Vec2> vertices, const std::vector<std::array<int, 4>>& tris);

  static Mesh unit_square();
  /// (-2,2)x(-1,1) split into 8 unit squares of 2 triangles each, subordinate
  /// to the decomposition at x=0; all refinement edges on the diagonals.
  static Mesh counterexample_domain();

  static Mesh load(const std::string& path);
  static Mesh parse(std::istream& in, const std::string& origin = "<stream>");
  void save(const std::string& path) const;
  std::string serialize() const;

  Mesh bisect_conforming(int element_id) const;
  Mesh uniform_refine(int rounds) const;

  int element_count() const { return static_cast<int>(elements_.size()); }
  const Element& element(int id) const;
  const std::vector<int>& leaves() const { return leaves_; }
  int leaf_count() const { return static_cast<int>(leaves_.size()); }
  bool is_leaf(int id) const { return element(id).is_leaf(); }
  Triangle triangle(int id) const;
  double element_area(int id) const { return area(triangle(id)); }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  const Vec2& vertex(int id) const { return vertices_[id]; }
  bool vertex_on_boundary(int id) const { return boundary_vertex_[id]; }

  const std::vector<Face>& faces() const { return faces_; }
  int face_count() const { return static_cast<int>(faces_.size()); }
  int interior_face_count() const { return interior_faces_; }
  const Face& face(int face_id) const;
  int find_face(int va, int vb) const;
  /// Face ids of the (up to 3) leaf faces of element id, ascending.
  std::array<int, 3> element_faces(int id) const;

  Patch pair_patch(int face_id) const;
  Patch minimal_pair_patch(int face_id) const;

  MeshStats stats() const;

  /// Throws Error on any conformity violation; used by tests after mutations.
  void audit_conformity() const;
  /// Detector for root tag assignments where closure would not terminate
  /// within #roots * 64 cascades.
  bool closure_terminates() const;

  double root_diameter() const { return root_diameter_; }
  double geom_tol() const { return 1e-12 * root_diameter_; }
  uint64_t content_hash() const;

  int root_element_count() const { return root_elements_; }
  int root_vertex_count() const { return root_vertices_; }
  const std::vector<int>& bisection_log() const { return log_; }

  bool is_descendant_of(int id, int ancestor) const;
  /// Leaves of the subtree rooted at id (id itself if a leaf).
  std::vector<int> descendant_leaves(int id) const;
  /// Leaf containing p, or -1. Walks the forest from the roots.
  int locate_leaf(const Vec2& p) const;

private:
  std::vector<Vec2> vertices_;
  std::vector<Element> elements_;
  int root_elements_ = 0;
  int root_vertices_ = 0;
  std::vector<int> log_;
  std::map<std::pair<int, int>, int> midpoints_;
  std::map<std::pair<int, int>, std::vector<int>> edge_leaves_;

  // derived, rebuilt after each mutation batch
  std::vector<int> leaves_;
  std::vector<Face> faces_;
  int interior_faces_ = 0;
  std::vector<bool> boundary_vertex_;
  double root_diameter_ = 1.0;

  void rebuild_derived();
  int midpoint_vertex(int a, int b);
  void split_leaf(int id, int mid_vertex);
  void bisect_with_closure(int id, int& cascade_budget);
  int leaf_across_edge(int a, int b, int self) const;
  PatchTri make_patch_tri(int elem_id) const;
  PatchTri make_virtual_child(int elem_id, int fa, int fb) const;
};

} // namespace rdloc

#endif
