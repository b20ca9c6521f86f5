#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "casimir/error.hpp"
#include "casimir/geometry.hpp"

namespace casimir {

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

int resolve_index(const std::string& token, int vertex_count, const std::string& where) {
  // "7", "7/2", "7//3", "-1"
  const std::string head = token.substr(0, token.find('/'));
  int idx = 0;
  try {
    std::size_t used = 0;
    idx = std::stoi(head, &used);
    if (used != head.size()) throw std::invalid_argument(head);
  } catch (const std::exception&) {
    throw MeshError(where + ": bad vertex index '" + token + "'");
  }
  if (idx > 0) idx -= 1;
  else if (idx < 0) idx += vertex_count;
  else throw MeshError(where + ": vertex index 0 is invalid");
  if (idx < 0 || idx >= vertex_count) throw MeshError(where + ": vertex index out of range");
  return idx;
}

}  // namespace

MeshLoadResult parse_obj(const std::string& text, const std::string& source_name) {
  MeshLoadResult result;
  Mesh& mesh = result.mesh;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source_name + ":" + std::to_string(line_no);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v[0] >> v[1] >> v[2])) throw MeshError(where + ": malformed vertex");
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ls >> tok) idx.push_back(resolve_index(tok, static_cast<int>(mesh.vertices.size()), where));
      if (idx.size() != 3)
        throw MeshError(where + ": face with " + std::to_string(idx.size()) + " vertices; only triangles are supported");
      mesh.triangles.push_back({idx[0], idx[1], idx[2]});
    }
    // other records (vn, vt, o, g, s, usemtl, ...) are ignored
  }
  if (mesh.triangles.empty()) throw MeshError(source_name + ": no faces");

  // connected components via shared vertices
  const int nv = static_cast<int>(mesh.vertices.size());
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& tri : mesh.triangles) {
    const int r0 = find_root(parent, tri[0]);
    for (int k = 1; k < 3; ++k) {
      const int rk = find_root(parent, tri[k]);
      if (rk != r0) parent[rk] = r0;
    }
  }
  std::vector<int> root_to_id(nv, -1);
  int next_id = 0;
  mesh.object_ids.resize(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const int r = find_root(parent, mesh.triangles[t][0]);
    if (root_to_id[r] < 0) root_to_id[r] = next_id++;
    mesh.object_ids[t] = root_to_id[r];
  }
  for (int id = 0; id < next_id; ++id) {
    if (mesh.signed_volume(id) < 0.0) {
      for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        if (mesh.object_ids[t] == id) std::swap(mesh.triangles[t][1], mesh.triangles[t][2]);
      result.warnings.push_back(source_name + ": object " + std::to_string(id) +
                                " was oriented inward; flipped");
    }
  }
  validate_mesh(mesh);
  return result;
}

MeshLoadResult load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_obj(ss.str(), path.string());
}

void write_obj(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write mesh file " + path.string());
  out << std::setprecision(17);
  for (const Vec3& v : mesh.vertices) out << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& t : mesh.triangles) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace casimir
