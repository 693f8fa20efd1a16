#include "dgrod/error.hpp"
#include "dgrod/mesh.hpp"

#include <istream>
#include <sstream>
#include <string>
#include <unordered_map>

namespace dgrod {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::MalformedSection, what + " at line " + std::to_string(number_));
  }

  void expect(const std::string& tag) {
    std::string line;
    if (!next(line) || trim(line) != tag) fail("expected " + tag);
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }

  int line_number() const noexcept { return number_; }

 private:
  std::istream& in_;
  int number_ = 0;
};

// Gmsh element type ids used here.
constexpr int kLine2 = 1;
constexpr int kTriangle3 = 2;
constexpr int kPoint1 = 15;

}  // namespace

Triangulation read_gmsh(std::istream& in, const CurvedDomain& domain) {
  LineReader reader(in);
  std::string line;

  reader.expect("$MeshFormat");
  if (!reader.next(line)) reader.fail("missing format line");
  {
    std::istringstream ss(line);
    std::string version;
    int file_type = -1;
    ss >> version >> file_type;
    if (version.rfind("2.", 0) != 0)
      throw Error(ErrorCode::UnsupportedVersion, "MSH version " + version + " (need 2.2)");
    if (file_type != 0) throw Error(ErrorCode::UnsupportedVersion, "binary MSH is not supported");
  }
  reader.expect("$EndMeshFormat");

  std::vector<Point> vertices;
  std::unordered_map<long, int> node_index;
  std::vector<std::array<int, 3>> triangles;
  bool have_nodes = false;
  bool have_elements = false;

  while (reader.next(line)) {
    const std::string tag = LineReader::trim(line);
    if (tag == "$Nodes") {
      if (!reader.next(line)) reader.fail("missing node count");
      long count = -1;
      if (!(std::istringstream(line) >> count) || count < 0) reader.fail("bad node count");
      vertices.reserve(static_cast<std::size_t>(count));
      for (long i = 0; i < count; ++i) {
        if (!reader.next(line)) reader.fail("truncated $Nodes");
        std::istringstream ss(line);
        long id = 0;
        double x = 0.0, y = 0.0, z = 0.0;
        if (!(ss >> id >> x >> y >> z)) reader.fail("bad node record");
        node_index[id] = static_cast<int>(vertices.size());
        vertices.emplace_back(x, y);
      }
      reader.expect("$EndNodes");
      have_nodes = true;
    } else if (tag == "$Elements") {
      if (!have_nodes) reader.fail("$Elements before $Nodes");
      if (!reader.next(line)) reader.fail("missing element count");
      long count = -1;
      if (!(std::istringstream(line) >> count) || count < 0) reader.fail("bad element count");
      for (long i = 0; i < count; ++i) {
        if (!reader.next(line)) reader.fail("truncated $Elements");
        std::istringstream ss(line);
        long id = 0;
        int type = 0, ntags = 0;
        if (!(ss >> id >> type >> ntags) || ntags < 0) reader.fail("bad element record");
        for (int t = 0; t < ntags; ++t) {
          long skip = 0;
          if (!(ss >> skip)) reader.fail("bad element tags");
        }
        int nodes = 0;
        switch (type) {
          case kPoint1: nodes = 1; break;
          case kLine2: nodes = 2; break;
          case kTriangle3: nodes = 3; break;
          default:
            throw Error(ErrorCode::NonTriangleElement,
                        "element type " + std::to_string(type) + " at line " +
                            std::to_string(reader.line_number()));
        }
        std::array<int, 3> local{};
        for (int n = 0; n < nodes; ++n) {
          long node = 0;
          if (!(ss >> node)) reader.fail("bad element node list");
          const auto it = node_index.find(node);
          if (it == node_index.end()) reader.fail("unknown node id " + std::to_string(node));
          if (n < 3) local[n] = it->second;
        }
        // Lines and points only tag boundary geometry; connectivity recovers boundary edges.
        if (type == kTriangle3) triangles.push_back(local);
      }
      reader.expect("$EndElements");
      have_elements = true;
    } else if (!tag.empty() && tag.front() == '$') {
      // Unknown section: skip to its end marker.
      const std::string end = "$End" + tag.substr(1);
      while (true) {
        if (!reader.next(line)) reader.fail("unterminated section " + tag);
        if (LineReader::trim(line) == end) break;
      }
    } else {
      reader.fail("unexpected content");
    }
  }
  if (!have_nodes || !have_elements) reader.fail("missing $Nodes or $Elements");

  for (auto& t : triangles) {
    const Point& a = vertices[t[0]];
    const Point& b = vertices[t[1]];
    const Point& c = vertices[t[2]];
    if ((b - a).x() * (c - a).y() - (c - a).x() * (b - a).y() < 0.0) std::swap(t[1], t[2]);
  }

  Triangulation tri = Triangulation::build(std::move(vertices), std::move(triangles));

  const double tol = 1e-8 * tri.h();
  std::vector<char> on_boundary(tri.num_vertices(), 0);
  for (const Edge& e : tri.edges())
    if (e.is_boundary()) on_boundary[e.vertices[0]] = on_boundary[e.vertices[1]] = 1;
  bool moved = false;
  std::vector<Point> snapped = tri.vertices();
  for (int v = 0; v < tri.num_vertices(); ++v) {
    if (!on_boundary[v]) continue;
    const Point& p = snapped[v];
    const CurveId curve = domain.nearest_curve(p);
    if (domain.boundary_residual(curve, p) <= tol) {
      snapped[v] = domain.snap(curve, p);
      moved = true;
    }
  }
  if (moved) return Triangulation::build(std::move(snapped), tri.triangles());
  return tri;
}

}  // namespace dgrod
