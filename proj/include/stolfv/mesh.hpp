#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace stolfv {

using Point = std::array<double, 3>;

/// Axis-aligned box in R^dim; unused trailing coordinates are zero.
struct Box {
    int dim = 1;
    Point lo{0.0, 0.0, 0.0};
    Point hi{1.0, 0.0, 0.0};

    static Box interval(double a, double b);
    static Box unit(int dim);

    double volume() const;
    double diameter() const;
    double extent(int axis) const { return hi[axis] - lo[axis]; }
    bool contains(const Point& p, double tol) const;
    bool on_boundary(const Point& p, double tol) const;
};

/// A control volume. Cells are boxes for both supported mesh families.
///
/// A cell whose node lies on the domain boundary is a Dirichlet node: it
/// carries a prescribed value and is not an unknown of the discrete system.
struct Cell {
    std::size_t index = 0;
    Point center{};
    Point lo{};
    Point hi{};
    double volume = 0.0;
    bool dirichlet = false;
};

/// Interface between two nodes. `left` is always a cell; `right` is a cell
/// (interior interface) or a boundary point y_sigma (boundary interface).
/// Node indices below `Mesh::num_cells()` are cells, the rest are boundary
/// points.
struct Interface {
    std::size_t left = 0;
    std::size_t right = 0;
    bool boundary = false;
    double area = 0.0;           // m_ij
    double node_distance = 0.0;  // h_ij, or d_{i,sigma} on the boundary
    std::array<double, 2> sub_distances{0.0, 0.0};
    Point midpoint{};  // intersection of the node line with the interface
    Point normal{};    // unit normal oriented left -> right
};

/// Finite volume mesh: cells, boundary points and the interfaces joining them.
/// Immutable after construction.
class Mesh {
public:
    Mesh(Box domain, std::vector<Cell> cells, std::vector<Point> boundary_points,
         std::vector<Interface> interfaces);

    int dim() const { return domain_.dim; }
    const Box& domain() const { return domain_; }
    std::span<const Cell> cells() const { return cells_; }
    std::span<const Point> boundary_points() const { return boundary_points_; }
    std::span<const Interface> interfaces() const { return interfaces_; }

    std::size_t num_cells() const { return cells_.size(); }
    std::size_t num_nodes() const { return cells_.size() + boundary_points_.size(); }
    const Point& node(std::size_t k) const;
    /// Volume of the cell owning node k; zero for boundary points.
    double node_volume(std::size_t k) const;
    /// True for boundary points and for cells whose node lies on the boundary.
    bool is_dirichlet(std::size_t k) const;

    /// sup over i~j of h_ij.
    double diameter() const { return diameter_; }
    /// Interfaces incident to node k.
    std::span<const std::size_t> incident(std::size_t k) const;

private:
    Box domain_;
    std::vector<Cell> cells_;
    std::vector<Point> boundary_points_;
    std::vector<Interface> interfaces_;
    std::vector<std::size_t> incident_offsets_;
    std::vector<std::size_t> incident_;
    double diameter_ = 0.0;
};

/// Uniform cell-centered mesh of [a,b] with n equal cells and Dirichlet points
/// at a and b.
Mesh build_interval_mesh(double a, double b, int n);

/// Voronoi mesh of [a,b] for strictly increasing nodes in [a,b]. A node equal
/// to a or b becomes a Dirichlet node owning a half cell; otherwise the
/// corresponding end carries a boundary point.
Mesh build_interval_mesh(double a, double b, std::span<const double> nodes);

/// Vertex-centered uniform mesh: n_nodes equidistant nodes including both
/// endpoints, which become Dirichlet nodes with half-width cells.
Mesh build_vertex_mesh(double a, double b, int n_nodes);

/// Cubic mesh: cells x_i + [-h/2, h/2]^d filling the box.
Mesh build_cubic_mesh(const Box& domain, double h);

/// Checks the admissibility properties of a mesh; empty result means valid.
std::vector<std::string> validate_mesh(const Mesh& mesh);

double distance(const Point& a, const Point& b);

}  // namespace stolfv
