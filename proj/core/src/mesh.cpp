#include "patchdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "patchdg/errors.hpp"

namespace patchdg {

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  build();
}

void Mesh::build() {
  const int nv = num_vertices();
  if (triangles_.empty()) throw InvalidArgument("mesh has no triangles");

  areas_.resize(triangles_.size());
  diameters_.resize(triangles_.size());
  for (std::size_t k = 0; k < triangles_.size(); ++k) {
    auto& t = triangles_[k];
    for (int v : t) {
      if (v < 0 || v >= nv) throw InvalidArgument("triangle " + std::to_string(k) + " has vertex index out of range");
    }
    double signed_area = 0.5 * cross(vertices_[t[1]] - vertices_[t[0]], vertices_[t[2]] - vertices_[t[0]]);
    if (signed_area < 0) {
      std::swap(t[1], t[2]);
      signed_area = -signed_area;
    }
    const double scale = std::max({(vertices_[t[1]] - vertices_[t[0]]).squaredNorm(),
                                   (vertices_[t[2]] - vertices_[t[1]]).squaredNorm(),
                                   (vertices_[t[0]] - vertices_[t[2]]).squaredNorm()});
    if (!(signed_area > 1e-14 * scale)) throw InvalidArgument("triangle " + std::to_string(k) + " is degenerate");
    areas_[k] = signed_area;
    diameters_[k] = std::sqrt(scale);
  }

  // Faces keyed by sorted vertex pair.
  std::map<std::pair<int, int>, int> face_of;
  faces_.clear();
  element_faces_.assign(triangles_.size(), {-1, -1, -1});
  for (int k = 0; k < num_elements(); ++k) {
    const auto& t = triangles_[k];
    for (int j = 0; j < 3; ++j) {
      const int a = t[(j + 1) % 3];
      const int b = t[(j + 2) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = face_of.try_emplace({key.first, key.second}, num_faces());
      if (inserted) {
        faces_.push_back(Face{{a, b}, k, -1});
      } else {
        Face& f = faces_[it->second];
        if (f.right >= 0) throw InvalidArgument("edge shared by more than two triangles");
        if (f.v[0] != b || f.v[1] != a) throw InvalidArgument("inconsistent triangle orientation across an edge");
        f.right = k;
      }
      element_faces_[k][j] = it->second;
    }
  }

  h_max_ = *std::max_element(diameters_.begin(), diameters_.end());
  double rho_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < num_elements(); ++k) rho_min = std::min(rho_min, inscribed_diameter(k));
  nu_ = h_max_ / rho_min;

  std::vector<std::vector<int>> vertex_elements(nv);
  for (int k = 0; k < num_elements(); ++k) {
    for (int v : triangles_[k]) vertex_elements[v].push_back(k);
  }
  moore_.assign(triangles_.size(), {});
  for (int k = 0; k < num_elements(); ++k) {
    auto& nb = moore_[k];
    for (int v : triangles_[k]) nb.insert(nb.end(), vertex_elements[v].begin(), vertex_elements[v].end());
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
}

Mesh Mesh::structured(const Rectangle& domain, int n) {
  if (n < 2) throw InvalidArgument("structured mesh needs n >= 2, got " + std::to_string(n));
  if (!(domain.hi.x() > domain.lo.x() && domain.hi.y() > domain.lo.y())) throw InvalidArgument("empty rectangle");
  std::vector<Vec2> vertices;
  vertices.reserve((n + 1) * (n + 1));
  const Vec2 step = (domain.hi - domain.lo) / n;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      // Snap the last row/column onto the rectangle exactly.
      const double x = i == n ? domain.hi.x() : domain.lo.x() + i * step.x();
      const double y = j == n ? domain.hi.y() : domain.lo.y() + j * step.y();
      vertices.emplace_back(x, y);
    }
  }
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(2 * n * n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      triangles.push_back({v00, v10, v11});
      triangles.push_back({v00, v11, v01});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh Mesh::read(std::istream& in) {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x, y;
      if (!(ls >> x >> y)) throw InvalidArgument("mesh line " + std::to_string(lineno) + ": expected `v x y`");
      vertices.emplace_back(x, y);
    } else if (tag == "t") {
      std::array<int, 3> t{};
      if (!(ls >> t[0] >> t[1] >> t[2]))
        throw InvalidArgument("mesh line " + std::to_string(lineno) + ": expected `t i j k`");
      triangles.push_back(t);
    } else {
      throw InvalidArgument("mesh line " + std::to_string(lineno) + ": unknown record '" + tag + "'");
    }
    std::string extra;
    if (ls >> extra) throw InvalidArgument("mesh line " + std::to_string(lineno) + ": trailing data");
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh Mesh::read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open mesh file " + path.string());
  return read(in);
}

void Mesh::write(std::ostream& out) const {
  out << std::setprecision(17);
  for (const auto& v : vertices_) out << "v " << v.x() << ' ' << v.y() << '\n';
  for (const auto& t : triangles_) out << "t " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

Mesh Mesh::refined() const {
  std::vector<Vec2> vertices = vertices_;
  std::vector<int> midpoint(faces_.size());
  for (int f = 0; f < num_faces(); ++f) {
    midpoint[f] = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (vertices_[faces_[f].v[0]] + vertices_[faces_[f].v[1]]));
  }
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(4 * triangles_.size());
  for (int k = 0; k < num_elements(); ++k) {
    const auto& t = triangles_[k];
    const auto& ef = element_faces_[k];
    // ef[j] is opposite vertex j.
    const int m12 = midpoint[ef[0]], m20 = midpoint[ef[1]], m01 = midpoint[ef[2]];
    triangles.push_back({t[0], m01, m20});
    triangles.push_back({m01, t[1], m12});
    triangles.push_back({m20, m12, t[2]});
    triangles.push_back({m01, m12, m20});
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

std::array<Vec2, 3> Mesh::corners(int k) const {
  const auto& t = triangles_[k];
  return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
}

double Mesh::face_length(int f) const { return (vertices_[faces_[f].v[1]] - vertices_[faces_[f].v[0]]).norm(); }

double Mesh::inscribed_diameter(int k) const {
  const auto c = corners(k);
  const double perimeter = (c[1] - c[0]).norm() + (c[2] - c[1]).norm() + (c[0] - c[2]).norm();
  return 4.0 * areas_[k] / perimeter;
}

Vec2 Mesh::barycenter(int k) const {
  const auto c = corners(k);
  return (c[0] + c[1] + c[2]) / 3.0;
}

Vec2 Mesh::face_normal(int f) const {
  return right_normal(vertices_[faces_[f].v[0]], vertices_[faces_[f].v[1]]);
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (double a : areas_) sum += a;
  return sum;
}

bool Mesh::contains(int k, const Vec2& x) const {
  const auto c = corners(k);
  const double tol = -1e-12 * diameters_[k] * diameters_[k];
  for (int j = 0; j < 3; ++j) {
    if (cross(c[(j + 1) % 3] - c[j], x - c[j]) < tol) return false;
  }
  return true;
}

}  // namespace patchdg
