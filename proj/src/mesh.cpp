#include "stolfv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stolfv/errors.hpp"

namespace stolfv {

namespace {

constexpr double kGeomTol = 1e-10;

Point unit_axis(int axis, double sign) {
    Point p{0.0, 0.0, 0.0};
    p[axis] = sign;
    return p;
}

std::string describe(const char* what, std::size_t k) {
    std::ostringstream os;
    os << what << " " << k;
    return os.str();
}

}  // namespace

Box Box::interval(double a, double b) {
    Box box;
    box.dim = 1;
    box.lo = {a, 0.0, 0.0};
    box.hi = {b, 0.0, 0.0};
    return box;
}

Box Box::unit(int dim) {
    if (dim < 1 || dim > 3) throw InvalidArgument("box dimension must be 1, 2 or 3");
    Box box;
    box.dim = dim;
    box.lo = {0.0, 0.0, 0.0};
    box.hi = {0.0, 0.0, 0.0};
    for (int k = 0; k < dim; ++k) box.hi[k] = 1.0;
    return box;
}

double Box::volume() const {
    double v = 1.0;
    for (int k = 0; k < dim; ++k) v *= extent(k);
    return v;
}

double Box::diameter() const {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += extent(k) * extent(k);
    return std::sqrt(s);
}

bool Box::contains(const Point& p, double tol) const {
    for (int k = 0; k < dim; ++k) {
        if (p[k] < lo[k] - tol || p[k] > hi[k] + tol) return false;
    }
    return true;
}

bool Box::on_boundary(const Point& p, double tol) const {
    if (!contains(p, tol)) return false;
    for (int k = 0; k < dim; ++k) {
        if (std::abs(p[k] - lo[k]) <= tol || std::abs(p[k] - hi[k]) <= tol) return true;
    }
    return false;
}

double distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    return std::sqrt(s);
}

Mesh::Mesh(Box domain, std::vector<Cell> cells, std::vector<Point> boundary_points,
           std::vector<Interface> interfaces)
    : domain_(domain),
      cells_(std::move(cells)),
      boundary_points_(std::move(boundary_points)),
      interfaces_(std::move(interfaces)) {
    if (domain_.dim < 1 || domain_.dim > 3) throw InvalidMesh("mesh dimension must be 1, 2 or 3");
    if (cells_.empty()) throw InvalidMesh("mesh has no cells");
    const std::size_t n_nodes = num_nodes();
    std::vector<std::size_t> count(n_nodes, 0);
    for (std::size_t e = 0; e < interfaces_.size(); ++e) {
        const Interface& s = interfaces_[e];
        if (s.left >= cells_.size() || s.right >= n_nodes || s.left == s.right) {
            throw InvalidMesh(describe("interface references invalid nodes:", e));
        }
        if (s.boundary != (s.right >= cells_.size())) {
            throw InvalidMesh(describe("interface boundary flag inconsistent:", e));
        }
        ++count[s.left];
        ++count[s.right];
        diameter_ = std::max(diameter_, s.node_distance);
    }
    incident_offsets_.assign(n_nodes + 1, 0);
    for (std::size_t k = 0; k < n_nodes; ++k) incident_offsets_[k + 1] = incident_offsets_[k] + count[k];
    incident_.resize(incident_offsets_.back());
    std::vector<std::size_t> fill(incident_offsets_.begin(), incident_offsets_.end() - 1);
    for (std::size_t e = 0; e < interfaces_.size(); ++e) {
        incident_[fill[interfaces_[e].left]++] = e;
        incident_[fill[interfaces_[e].right]++] = e;
    }
}

const Point& Mesh::node(std::size_t k) const {
    if (k < cells_.size()) return cells_[k].center;
    if (k < num_nodes()) return boundary_points_[k - cells_.size()];
    throw InvalidArgument(describe("node index out of range:", k));
}

double Mesh::node_volume(std::size_t k) const {
    if (k < cells_.size()) return cells_[k].volume;
    if (k < num_nodes()) return 0.0;
    throw InvalidArgument(describe("node index out of range:", k));
}

bool Mesh::is_dirichlet(std::size_t k) const {
    if (k < cells_.size()) return cells_[k].dirichlet;
    if (k < num_nodes()) return true;
    throw InvalidArgument(describe("node index out of range:", k));
}

std::span<const std::size_t> Mesh::incident(std::size_t k) const {
    if (k >= num_nodes()) throw InvalidArgument(describe("node index out of range:", k));
    return std::span<const std::size_t>(incident_.data() + incident_offsets_[k],
                                        incident_offsets_[k + 1] - incident_offsets_[k]);
}

Mesh build_interval_mesh(double a, double b, int n) {
    if (n < 2) throw InvalidArgument("interval mesh needs at least 2 cells");
    if (!(b > a)) throw InvalidArgument("interval must satisfy a < b");
    std::vector<double> nodes(static_cast<std::size_t>(n));
    const double w = (b - a) / n;
    for (int i = 0; i < n; ++i) nodes[i] = a + (i + 0.5) * w;
    return build_interval_mesh(a, b, nodes);
}

Mesh build_interval_mesh(double a, double b, std::span<const double> nodes) {
    if (!(b > a)) throw InvalidArgument("interval must satisfy a < b");
    const std::size_t n = nodes.size();
    if (n < 2) throw InvalidArgument("interval mesh needs at least 2 nodes");
    const double tol = kGeomTol * (b - a);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(nodes[i]) || nodes[i] < a - tol || nodes[i] > b + tol) {
            throw InvalidMesh(describe("node outside the interval:", i));
        }
        if (i > 0 && !(nodes[i] > nodes[i - 1])) throw InvalidMesh(describe("nodes not strictly increasing at", i));
    }
    const bool left_node = std::abs(nodes.front() - a) <= tol;
    const bool right_node = std::abs(nodes.back() - b) <= tol;

    std::vector<Cell> cells(n);
    for (std::size_t i = 0; i < n; ++i) {
        Cell& c = cells[i];
        c.index = i;
        c.center = {nodes[i], 0.0, 0.0};
        c.lo = {i == 0 ? a : 0.5 * (nodes[i - 1] + nodes[i]), 0.0, 0.0};
        c.hi = {i + 1 == n ? b : 0.5 * (nodes[i] + nodes[i + 1]), 0.0, 0.0};
        if (i == 0 && left_node) c.center[0] = a;
        if (i + 1 == n && right_node) c.center[0] = b;
        c.volume = c.hi[0] - c.lo[0];
        c.dirichlet = (i == 0 && left_node) || (i + 1 == n && right_node);
    }

    std::vector<Interface> interfaces;
    interfaces.reserve(n + 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Interface s;
        s.left = i;
        s.right = i + 1;
        s.area = 1.0;
        const double x = cells[i].hi[0];
        s.node_distance = cells[i + 1].center[0] - cells[i].center[0];
        s.sub_distances = {x - cells[i].center[0], cells[i + 1].center[0] - x};
        s.midpoint = {x, 0.0, 0.0};
        s.normal = unit_axis(0, 1.0);
        interfaces.push_back(s);
    }
    std::vector<Point> boundary;
    auto add_boundary = [&](std::size_t cell, double y, double sign) {
        Interface s;
        s.left = cell;
        s.right = n + boundary.size();
        s.boundary = true;
        s.area = 1.0;
        s.node_distance = std::abs(y - cells[cell].center[0]);
        s.sub_distances = {s.node_distance, 0.0};
        s.midpoint = {y, 0.0, 0.0};
        s.normal = unit_axis(0, sign);
        boundary.push_back({y, 0.0, 0.0});
        interfaces.push_back(s);
    };
    if (!left_node) add_boundary(0, a, -1.0);
    if (!right_node) add_boundary(n - 1, b, 1.0);
    return Mesh(Box::interval(a, b), std::move(cells), std::move(boundary), std::move(interfaces));
}

Mesh build_vertex_mesh(double a, double b, int n_nodes) {
    if (n_nodes < 3) throw InvalidArgument("vertex mesh needs at least 3 nodes");
    if (!(b > a)) throw InvalidArgument("interval must satisfy a < b");
    std::vector<double> nodes(static_cast<std::size_t>(n_nodes));
    const int m = n_nodes - 1;
    for (int k = 0; k <= m; ++k) nodes[k] = a + (b - a) * k / m;
    nodes.back() = b;
    return build_interval_mesh(a, b, nodes);
}

Mesh build_cubic_mesh(const Box& domain, double h) {
    const int d = domain.dim;
    if (d < 1 || d > 3) throw InvalidArgument("cubic mesh dimension must be 1, 2 or 3");
    if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("cell width must be positive");
    std::array<std::size_t, 3> n{1, 1, 1};
    for (int k = 0; k < d; ++k) {
        const double len = domain.extent(k);
        if (!(len > 0.0)) throw InvalidArgument("box has non-positive extent");
        const double q = std::round(len / h);
        if (q < 1.0 || std::abs(q * h - len) > 1e-12 * len) {
            throw InvalidArgument("box side is not an integer multiple of h");
        }
        n[k] = static_cast<std::size_t>(q);
    }
    const std::size_t total = n[0] * n[1] * n[2];
    auto id = [&](std::size_t i, std::size_t j, std::size_t k) { return i + n[0] * (j + n[1] * k); };

    std::vector<Cell> cells(total);
    double cell_volume = 1.0;
    for (int k = 0; k < d; ++k) cell_volume *= h;
    for (std::size_t k = 0; k < n[2]; ++k) {
        for (std::size_t j = 0; j < n[1]; ++j) {
            for (std::size_t i = 0; i < n[0]; ++i) {
                Cell& c = cells[id(i, j, k)];
                c.index = id(i, j, k);
                const std::array<std::size_t, 3> ijk{i, j, k};
                for (int ax = 0; ax < d; ++ax) {
                    c.lo[ax] = domain.lo[ax] + h * static_cast<double>(ijk[ax]);
                    c.hi[ax] = ijk[ax] + 1 == n[ax] ? domain.hi[ax] : c.lo[ax] + h;
                    c.center[ax] = c.lo[ax] + 0.5 * h;
                }
                c.volume = cell_volume;
            }
        }
    }

    const double face_area = cell_volume / h;
    std::vector<Interface> interfaces;
    std::vector<Point> boundary;
    for (int ax = 0; ax < d; ++ax) {
        for (std::size_t c = 0; c < total; ++c) {
            const std::size_t stride = ax == 0 ? 1 : (ax == 1 ? n[0] : n[0] * n[1]);
            const std::size_t pos = (c / stride) % n[ax];
            if (pos + 1 < n[ax]) {
                Interface s;
                s.left = c;
                s.right = c + stride;
                s.area = face_area;
                s.node_distance = h;
                s.sub_distances = {0.5 * h, 0.5 * h};
                s.midpoint = cells[c].center;
                s.midpoint[ax] += 0.5 * h;
                s.normal = unit_axis(ax, 1.0);
                interfaces.push_back(s);
            }
        }
    }
    for (int ax = 0; ax < d; ++ax) {
        for (std::size_t c = 0; c < total; ++c) {
            const std::size_t stride = ax == 0 ? 1 : (ax == 1 ? n[0] : n[0] * n[1]);
            const std::size_t pos = (c / stride) % n[ax];
            for (int side = 0; side < 2; ++side) {
                if ((side == 0 && pos != 0) || (side == 1 && pos + 1 != n[ax])) continue;
                const double sign = side == 0 ? -1.0 : 1.0;
                Interface s;
                s.left = c;
                s.right = total + boundary.size();
                s.boundary = true;
                s.area = face_area;
                s.node_distance = 0.5 * h;
                s.sub_distances = {0.5 * h, 0.0};
                s.midpoint = cells[c].center;
                s.midpoint[ax] = side == 0 ? domain.lo[ax] : domain.hi[ax];
                s.normal = unit_axis(ax, sign);
                boundary.push_back(s.midpoint);
                interfaces.push_back(s);
            }
        }
    }
    return Mesh(domain, std::move(cells), std::move(boundary), std::move(interfaces));
}

std::vector<std::string> validate_mesh(const Mesh& mesh) {
    std::vector<std::string> out;
    const Box& box = mesh.domain();
    const int d = mesh.dim();
    const double scale = std::max(box.diameter(), 1.0);
    const double tol = kGeomTol * scale;

    double vol = 0.0;
    for (const Cell& c : mesh.cells()) {
        vol += c.volume;
        double box_vol = 1.0;
        for (int k = 0; k < d; ++k) box_vol *= c.hi[k] - c.lo[k];
        if (!(c.volume > 0.0)) out.push_back(describe("cell with non-positive volume:", c.index));
        else if (std::abs(box_vol - c.volume) > tol * c.volume) out.push_back(describe("cell volume differs from its box:", c.index));
        bool inside = true;
        for (int k = 0; k < d; ++k) inside = inside && c.center[k] >= c.lo[k] - tol && c.center[k] <= c.hi[k] + tol;
        if (!inside) out.push_back(describe("cell center outside its cell:", c.index));
        if (c.dirichlet && !box.on_boundary(c.center, tol)) out.push_back(describe("Dirichlet cell node not on the boundary:", c.index));
    }
    if (std::abs(vol - box.volume()) > 1e-10 * box.volume()) {
        std::ostringstream os;
        os << "cell volumes sum to " << vol << " instead of " << box.volume();
        out.push_back(os.str());
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const auto interfaces = mesh.interfaces();
    for (std::size_t e = 0; e < interfaces.size(); ++e) {
        const Interface& s = interfaces[e];
        const Point& xi = mesh.node(s.left);
        const Point& xj = mesh.node(s.right);
        const double h = distance(xi, xj);
        if (!(s.area > 0.0) || !(s.node_distance > 0.0)) {
            out.push_back(describe("interface with non-positive area or distance:", e));
            continue;
        }
        if (std::abs(h - s.node_distance) > tol) out.push_back(describe("interface node distance mismatch:", e));
        if (std::abs(s.sub_distances[0] + s.sub_distances[1] - s.node_distance) > 1e-12 * s.node_distance) {
            out.push_back(describe("interface sub-distances do not add up:", e));
        }
        double dev = 0.0;
        for (int k = 0; k < 3; ++k) dev = std::max(dev, std::abs((xj[k] - xi[k]) / h - s.normal[k]));
        if (dev > kGeomTol) out.push_back(describe("interface violates orthogonality:", e));

        // Face measure from the cell boxes.
        const Cell& ci = mesh.cells()[s.left];
        int axis = 0;
        for (int k = 1; k < d; ++k) {
            if (std::abs(s.normal[k]) > std::abs(s.normal[axis])) axis = k;
        }
        double face = 1.0;
        for (int k = 0; k < d; ++k) {
            if (k == axis) continue;
            double lo = ci.lo[k];
            double hi = ci.hi[k];
            if (!s.boundary) {
                const Cell& cj = mesh.cells()[s.right];
                lo = std::max(lo, cj.lo[k]);
                hi = std::min(hi, cj.hi[k]);
            }
            face *= std::max(hi - lo, 0.0);
        }
        if (std::abs(face - s.area) > tol * std::max(face, 1.0)) out.push_back(describe("interface area differs from the shared face:", e));

        if (s.boundary) {
            if (!box.on_boundary(xj, tol)) out.push_back(describe("boundary point not on the domain boundary:", e));
            if (distance(xj, s.midpoint) > tol) out.push_back(describe("boundary point is not the face point:", e));
        } else {
            if (ci.dirichlet && mesh.cells()[s.right].dirichlet) out.push_back(describe("interface joins two Dirichlet nodes:", e));
            pairs.emplace_back(std::min(s.left, s.right), std::max(s.left, s.right));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t k = 1; k < pairs.size(); ++k) {
        if (pairs[k] == pairs[k - 1]) out.push_back(describe("duplicate interface between cells", pairs[k].first));
    }
    for (std::size_t k = 0; k < mesh.num_nodes(); ++k) {
        if (mesh.incident(k).empty()) out.push_back(describe("node without interfaces:", k));
    }
    return out;
}

}  // namespace stolfv
