#pragma once

#include "tropref/laurent.hpp"
#include "tropref/lattice.hpp"
#include "tropref/tropcurve.hpp"

#include <string>

namespace tropref {

// JSON schemas (see README):
//   degree:     {"vectors": [[x, y], ...]}
//   curve:      {"vertices": [{"position": ["p/q", "p/q"]}],
//                "edges": [{"endpoints": [i, j], "weight": w, "primitive": [x, y]}],
//                "ends": [{"vertex": i, "vector": [x, y]}],
//                "marked_point": {"edge": k, "t": "p/q"}}        (optional)
//   polynomial: {"coefficients": {"<half_exponent>": c, ...}, "string": "..."}

std::vector<LatticeVector> degree_vectors_from_json(const std::string& text);
std::string degree_to_json(const DegreeSpec& d);

ParamTropicalCurve curve_from_json(const std::string& text);
std::string curve_to_json(const ParamTropicalCurve& T);

LaurentPoly poly_from_json(const std::string& text);
std::string poly_to_json(const LaurentPoly& p);

// Deterministic SVG: cycle edges drawn heavier than tree edges, ends as rays.
std::string render_curve_svg(const ParamTropicalCurve& T);
std::string render_subdivision_svg(const DualSubdivision& dual);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace tropref
