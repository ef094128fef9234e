#include "framecell/stl_io.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace framecell {

namespace {

constexpr size_t kBinaryHeader = 80;
constexpr size_t kBinaryRecord = 50;  // 12 floats + attribute count

float readFloat(const char* p) {
  float f;
  std::memcpy(&f, p, sizeof(f));
  return f;
}

TriangleSurface parseBinary(std::string_view bytes) {
  if (bytes.size() < kBinaryHeader + 4)
    throw StlParseError("binary STL truncated before triangle count", bytes.size());
  uint32_t count;
  std::memcpy(&count, bytes.data() + kBinaryHeader, 4);
  if (count == 0) throw StlParseError("STL contains zero triangles", kBinaryHeader);
  size_t expected = kBinaryHeader + 4 + size_t(count) * kBinaryRecord;
  if (bytes.size() < expected)
    throw StlParseError("binary STL payload truncated, expected " + std::to_string(expected) +
                            " bytes",
                        bytes.size());

  std::vector<Triangle> tris;
  tris.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    const char* rec = bytes.data() + kBinaryHeader + 4 + size_t(i) * kBinaryRecord;
    Triangle t;
    // Record layout: normal, v0, v1, v2 as float triplets. The stored normal
    // is ignored; normals are recomputed from vertex winding.
    t.v0 = Vec3(readFloat(rec + 12), readFloat(rec + 16), readFloat(rec + 20));
    t.v1 = Vec3(readFloat(rec + 24), readFloat(rec + 28), readFloat(rec + 32));
    t.v2 = Vec3(readFloat(rec + 36), readFloat(rec + 40), readFloat(rec + 44));
    tris.push_back(t);
  }
  return TriangleSurface(std::move(tris));
}

struct TextCursor {
  std::string_view bytes;
  size_t pos = 0;

  void skipSpace() {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) pos++;
  }

  std::string_view token() {
    skipSpace();
    size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) pos++;
    return bytes.substr(start, pos - start);
  }

  void expect(std::string_view word) {
    size_t at = pos;
    if (token() != word)
      throw StlParseError("text STL: expected '" + std::string(word) + "'", at);
  }

  double number() {
    skipSpace();
    size_t at = pos;
    std::string_view tok = token();
    try {
      size_t used = 0;
      double v = std::stod(std::string(tok), &used);
      if (used != tok.size()) throw std::invalid_argument("trailing");
      return v;
    } catch (const std::exception&) {
      throw StlParseError("text STL: invalid number '" + std::string(tok) + "'", at);
    }
  }

  std::string_view peek() {
    size_t save = pos;
    std::string_view tok = token();
    pos = save;
    return tok;
  }
};

TriangleSurface parseText(std::string_view bytes) {
  TextCursor c{bytes};
  c.expect("solid");
  // Optional solid name: consume tokens until 'facet' or 'endsolid'.
  while (true) {
    std::string_view tok = c.peek();
    if (tok == "facet" || tok == "endsolid" || tok.empty()) break;
    c.token();
  }

  std::vector<Triangle> tris;
  while (true) {
    std::string_view tok = c.peek();
    if (tok == "endsolid") break;
    if (tok.empty()) throw StlParseError("text STL: unexpected end of input", c.pos);
    c.expect("facet");
    c.expect("normal");
    c.number();
    c.number();
    c.number();
    c.expect("outer");
    c.expect("loop");
    Triangle t;
    for (Vec3* v : {&t.v0, &t.v1, &t.v2}) {
      c.expect("vertex");
      v->x() = c.number();
      v->y() = c.number();
      v->z() = c.number();
    }
    c.expect("endloop");
    c.expect("endfacet");
    tris.push_back(t);
  }
  if (tris.empty()) throw StlParseError("STL contains zero triangles", c.pos);
  return TriangleSurface(std::move(tris));
}

bool looksLikeText(std::string_view bytes) {
  // Sniff: "solid" prefix alone is not reliable (binary exporters use it
  // too), so additionally require the token "facet" in the first chunk.
  size_t i = 0;
  while (i < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[i]))) i++;
  if (bytes.substr(i, 5) != "solid") return false;
  std::string_view head = bytes.substr(0, std::min<size_t>(bytes.size(), 4096));
  return head.find("facet") != std::string_view::npos ||
         head.find("endsolid") != std::string_view::npos;
}

}  // namespace

TriangleSurface load_triangle_surface(std::string_view bytes) {
  if (bytes.empty()) throw StlParseError("empty STL input", 0);
  if (looksLikeText(bytes)) return parseText(bytes);
  return parseBinary(bytes);
}

TriangleSurface load_triangle_surface_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open STL file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string bytes = ss.str();
  return load_triangle_surface(bytes);
}

}  // namespace framecell
