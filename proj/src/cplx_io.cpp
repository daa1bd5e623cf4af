#include "rfis/cplx_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace rfis {
namespace {

std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_point(std::ostream& out, const Point& p) {
  for (int k = 0; k < p.size(); ++k) {
    if (k) out << ' ';
    out << format_coord(p(k));
  }
  out << '\n';
}

[[noreturn]] void parse_fail(const std::string& what) {
  throw Error(ErrorCode::kParseError, what);
}

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
  }
  parse_fail(std::string("unexpected end of file reading ") + what);
}

Point parse_point(const std::string& line, int n) {
  std::istringstream ss(line);
  Point p(n);
  for (int k = 0; k < n; ++k) {
    if (!(ss >> p(k))) parse_fail("expected " + std::to_string(n) + " coordinates: " + line);
  }
  std::string extra;
  if (ss >> extra) parse_fail("trailing data: " + line);
  return p;
}

}  // namespace

void write_cplx(std::ostream& out, const BoundaryComplex& c) {
  out << "CPLX " << c.dimension() << ' ' << c.num_vertices() << ' '
      << c.num_simplices() << '\n';
  for (const Point& v : c.vertices()) write_point(out, v);
  for (const auto& s : c.simplices()) {
    for (size_t k = 0; k < s.vertex_ids.size(); ++k) {
      if (k) out << ' ';
      out << s.vertex_ids[k];
    }
    out << '\n';
  }
  out << "CENTER\n";
  write_point(out, c.center());
}

BoundaryComplex read_cplx(std::istream& in) {
  std::istringstream header(next_line(in, "header"));
  std::string magic;
  long n = 0, nv = 0, ns = 0;
  if (!(header >> magic >> n >> nv >> ns) || magic != "CPLX") {
    parse_fail("bad header, expected 'CPLX <n> <NV> <NS>'");
  }
  if (n < 2 || nv < n || ns < 1) parse_fail("implausible counts in header");

  std::vector<Point> vertices;
  vertices.reserve(nv);
  for (long i = 0; i < nv; ++i) {
    const std::string line = next_line(in, "vertices");
    if (line.rfind("CENTER", 0) == 0) parse_fail("fewer vertex lines than NV");
    vertices.push_back(parse_point(line, static_cast<int>(n)));
  }
  std::vector<OrientedSimplex> simplices;
  simplices.reserve(ns);
  for (long i = 0; i < ns; ++i) {
    const std::string line = next_line(in, "simplices");
    if (line.rfind("CENTER", 0) == 0) parse_fail("fewer simplex lines than NS");
    std::istringstream ss(line);
    OrientedSimplex s;
    std::string token;
    while (ss >> token) {
      std::size_t used = 0;
      long id = -1;
      try {
        id = std::stol(token, &used);
      } catch (const std::exception&) {
        parse_fail("bad vertex index: " + token);
      }
      if (used != token.size()) parse_fail("bad vertex index: " + token);
      s.vertex_ids.push_back(static_cast<int>(id));
    }
    if (static_cast<long>(s.vertex_ids.size()) != n) {
      parse_fail("simplex line needs " + std::to_string(n) + " indices: " + line);
    }
    simplices.push_back(std::move(s));
  }
  if (next_line(in, "CENTER marker").rfind("CENTER", 0) != 0) {
    parse_fail("expected CENTER after NS simplex lines");
  }
  Point center = parse_point(next_line(in, "center"), static_cast<int>(n));
  std::string rest;
  while (std::getline(in, rest)) {
    if (rest.find_first_not_of(" \t\r") != std::string::npos) {
      parse_fail("trailing content after center");
    }
  }
  try {
    return BoundaryComplex(std::move(vertices), std::move(simplices),
                           std::move(center));
  } catch (const Error& e) {
    parse_fail(e.what());
  }
}

void save_cplx(const std::filesystem::path& path, const BoundaryComplex& c) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_cplx(out, c);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

BoundaryComplex load_cplx(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return read_cplx(in);
}

}  // namespace rfis
