// Python bindings for the core operations: pieces and their invariants,
// surface I/O and validation, stretch transforms, candidate lengths and the
// arc-distance estimator.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "hypstretch/stretch.hpp"

namespace py = pybind11;
using namespace hyp;

namespace {

Surface load_path(const std::string& path) {
  std::ifstream f(path);
  if (!f.good())
    throw GeomError("BAD_SURFACE_FILE", "cannot read " + path);
  return load_surface(f);
}

Surface load_string(const std::string& text) {
  std::istringstream ss(text);
  return load_surface(ss);
}

std::string dump_string(const Surface& s) {
  std::ostringstream ss;
  save_surface(ss, s);
  return ss.str();
}

py::dict validate_dict(const Surface& s) {
  ValidationReport r = validate(s);
  py::dict d;
  d["valid"] = r.valid;
  d["violations"] = r.violations;
  d["expected_pieces"] = r.expected_pieces;
  return d;
}

py::dict classify_dict(const Surface& s) {
  BlockDecomposition bd = classify(s);
  py::dict d;
  d["block_pieces"] = bd.block_pieces;
  d["triangle_pieces"] = bd.triangle_pieces;
  py::list crowns;
  for (const Crown& c : bd.crowns) {
    py::dict cd;
    cd["quads"] = c.quads;
    cd["spikes"] = (int)c.spikes.size();
    crowns.append(cd);
  }
  d["crowns"] = crowns;
  return d;
}

py::list candidate_table(const Surface& s, int depth) {
  py::list out;
  for (const Candidate& c : enumerate_candidates(s, depth)) {
    py::dict d;
    d["name"] = c.name;
    try {
      d["length"] = candidate_length(s, c);
    } catch (const GeomError&) {
      d["length"] = py::none();
    }
    out.append(d);
  }
  return out;
}

py::dict distance_dict(const Surface& x, const Surface& y, int depth,
                       bool curves_only) {
  DistanceEstimate e = arc_distance_estimate(x, y, depth, curves_only);
  py::dict d;
  d["lower_bound"] = e.lower_bound;
  d["depth"] = e.depth;
  d["witness"] = e.witness.name;
  d["length_from"] = e.length_from;
  d["length_to"] = e.length_to;
  return d;
}

py::dict verify_dict(const Surface& s, const std::vector<double>& ts) {
  VerifyReport r = verify_surface(s, ts);
  py::dict d;
  d["pass"] = r.pass;
  py::list checks;
  for (const VerifyCheck& c : r.checks) {
    py::dict cd;
    cd["name"] = c.name;
    cd["value"] = c.value;
    cd["tolerance"] = c.bound;
    cd["pass"] = c.pass;
    checks.append(cd);
  }
  d["checks"] = checks;
  return d;
}

py::dict special_points_dict(const Piece& p) {
  py::dict d;
  for (const auto& [name, sp] : special_points(p)) {
    py::dict e;
    e["point"] = py::make_tuple(sp.point.x, sp.point.y);
    e["signed_dist"] = sp.signed_dist;
    e["closed_form"] = sp.closed_form;
    e["vertex"] = sp.vertex;
    d[name.c_str()] = e;
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(hypstretch, m) {
  m.doc() =
      "Hyperbolic surfaces glued from lamination pieces, stretch rays and "
      "arc-distance estimates";

  py::register_exception<GeomError>(m, "GeomError");

  py::enum_<PieceKind>(m, "PieceKind")
      .value("Triangle", PieceKind::Triangle)
      .value("Quad", PieceKind::Quad)
      .value("Pentagon", PieceKind::Pentagon)
      .value("Hexagon", PieceKind::Hexagon);

  py::class_<Piece>(m, "Piece")
      .def_static("triangle", &Piece::triangle)
      .def_static("quad", &Piece::quad, py::arg("s"))
      .def_static("pentagon", &Piece::pentagon, py::arg("s1"), py::arg("s2"))
      .def_static("hexagon", &Piece::hexagon, py::arg("s1"), py::arg("s2"),
                  py::arg("s3"))
      .def_readonly("kind", &Piece::kind)
      .def_readonly("s1", &Piece::s1)
      .def_readonly("s2", &Piece::s2)
      .def_readonly("s3", &Piece::s3)
      .def("stretched", &Piece::stretched, py::arg("t"))
      .def("__repr__", [](const Piece& p) {
        std::ostringstream ss;
        switch (p.kind) {
          case PieceKind::Triangle: ss << "Piece.triangle()"; break;
          case PieceKind::Quad: ss << "Piece.quad(" << p.s1 << ")"; break;
          case PieceKind::Pentagon:
            ss << "Piece.pentagon(" << p.s1 << ", " << p.s2 << ")";
            break;
          case PieceKind::Hexagon:
            ss << "Piece.hexagon(" << p.s1 << ", " << p.s2 << ", " << p.s3
               << ")";
            break;
        }
        return ss.str();
      });

  py::class_<Gluing>(m, "Gluing")
      .def_readonly("from_piece", &Gluing::from_piece)
      .def_readonly("from_edge", &Gluing::from_edge)
      .def_readonly("to_piece", &Gluing::to_piece)
      .def_readonly("to_edge", &Gluing::to_edge)
      .def_readonly("shear", &Gluing::shear);

  py::class_<Surface>(m, "Surface")
      .def_readonly("pieces", &Surface::pieces)
      .def_readonly("gluings", &Surface::gluings)
      .def("dumps", &dump_string)
      .def("validate", &validate_dict)
      .def("classify", &classify_dict);

  m.def("load", &load_path, py::arg("path"), "Load a surface JSON file");
  m.def("loads", &load_string, py::arg("text"),
        "Parse a surface from a JSON string");

  m.def("special_points", &special_points_dict, py::arg("piece"));
  m.def(
      "edge_lengths",
      [](const Piece& p) {
        return static_cast<std::map<std::string, std::optional<double>>>(
            edge_lengths(p));
      },
      py::arg("piece"), "Edge lengths; None for infinite edges");

  m.def("displacement", &displacement, py::arg("s"),
        "Center gap along a quad's bi-infinite edge, 0.5*log(1 + exp(-s))");
  m.def("generalized_stretch", &generalized_stretch, py::arg("surface"),
        py::arg("t"), "Time-t point of the stretch ray");
  m.def("thurston_stretch", &thurston_stretch, py::arg("surface"),
        py::arg("t"), "Stretch restricted to triangulated surfaces");
  m.def("has_measurable_sublamination", &has_measurable_sublamination,
        py::arg("surface"));

  m.def("candidate_lengths", &candidate_table, py::arg("surface"),
        py::arg("depth"),
        "Named candidate curves/arcs with lengths (None if undefined)");
  m.def("arc_distance_estimate", &distance_dict, py::arg("x"), py::arg("y"),
        py::arg("depth"), py::arg("curves_only") = false,
        "Best log length ratio over the candidate set");
  m.def("verify", &verify_dict, py::arg("surface"), py::arg("ts"),
        "Run the invariant suite over a grid of stretch times");
}
