#include "tropref/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace tropref {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) fail(Err::ParseError, "malformed JSON");
    return j;
}

LatticeVector vector_from(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        fail(Err::ParseError, "lattice vector must be [int, int]");
    return {Int(j[0].get<long long>()), Int(j[1].get<long long>())};
}

json vector_to(const LatticeVector& v) {
    return json::array({static_cast<long long>(v.x), static_cast<long long>(v.y)});
}

Rat rat_from(const json& j) {
    if (j.is_number_integer()) return Rat(Int(j.get<long long>()));
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    fail(Err::ParseError, "rational must be an integer or a \"p/q\" string");
}

}  // namespace

std::vector<LatticeVector> degree_vectors_from_json(const std::string& text) {
    json j = parse_json(text);
    if (!j.is_object() || !j.contains("vectors") || !j["vectors"].is_array())
        fail(Err::ParseError, "degree JSON needs a \"vectors\" array");
    std::vector<LatticeVector> vecs;
    for (const auto& e : j["vectors"]) {
        LatticeVector v = vector_from(e);
        if (v.is_zero()) fail(Err::ParseError, "zero vector in degree");
        vecs.push_back(v);
    }
    if (vecs.empty()) fail(Err::ParseError, "empty degree");
    return vecs;
}

std::string degree_to_json(const DegreeSpec& d) {
    json j;
    j["vectors"] = json::array();
    for (const auto& v : d.vectors) j["vectors"].push_back(vector_to(v));
    json poly = json::array();
    for (const auto& v : d.polygon.vertices) poly.push_back(vector_to(v));
    j["newton_polygon"] = poly;
    j["doubled_area"] = static_cast<long long>(d.polygon.doubled_area);
    j["lattice_perimeter"] = static_cast<long long>(d.polygon.lattice_perimeter);
    j["is_even"] = d.is_even;
    if (d.is_even) j["half_interior_count"] = static_cast<long long>(d.half_interior_count);
    return j.dump(2);
}

ParamTropicalCurve curve_from_json(const std::string& text) {
    json j = parse_json(text);
    if (!j.is_object()) fail(Err::ParseError, "curve JSON must be an object");
    ParamTropicalCurve T;
    for (const auto& v : j.value("vertices", json::array())) {
        if (!v.contains("position") || !v["position"].is_array() || v["position"].size() != 2)
            fail(Err::ParseError, "vertex needs a position pair");
        T.vertices.push_back({RatPoint{rat_from(v["position"][0]), rat_from(v["position"][1])}});
    }
    for (const auto& e : j.value("edges", json::array())) {
        CurveEdge edge;
        if (!e.contains("endpoints") || e["endpoints"].size() != 2)
            fail(Err::ParseError, "edge needs two endpoints");
        edge.v1 = e["endpoints"][0].get<int>();
        edge.v2 = e["endpoints"][1].get<int>();
        edge.weight = Int(e.value("weight", 1));
        if (!e.contains("primitive")) fail(Err::ParseError, "edge needs a primitive direction");
        edge.primitive = vector_from(e["primitive"]);
        T.edges.push_back(edge);
    }
    for (const auto& e : j.value("ends", json::array())) {
        CurveEnd end;
        if (!e.contains("vertex") || !e.contains("vector"))
            fail(Err::ParseError, "end needs a vertex and a vector");
        end.vertex = e["vertex"].get<int>();
        end.vector = vector_from(e["vector"]);
        T.ends.push_back(end);
    }
    if (j.contains("marked_point")) {
        MarkedPoint m;
        m.edge = j["marked_point"].value("edge", -1);
        m.t = rat_from(j["marked_point"]["t"]);
        T.marked = m;
    }
    validate_curve_structure(T);
    return T;
}

std::string curve_to_json(const ParamTropicalCurve& T) {
    json j;
    j["vertices"] = json::array();
    for (const auto& v : T.vertices)
        j["vertices"].push_back(
            {{"position", json::array({rat_to_string(v.pos.x), rat_to_string(v.pos.y)})}});
    j["edges"] = json::array();
    for (const auto& e : T.edges)
        j["edges"].push_back({{"endpoints", json::array({e.v1, e.v2})},
                              {"weight", static_cast<long long>(e.weight)},
                              {"primitive", vector_to(e.primitive)}});
    j["ends"] = json::array();
    for (const auto& e : T.ends)
        j["ends"].push_back({{"vertex", e.vertex}, {"vector", vector_to(e.vector)}});
    if (T.marked)
        j["marked_point"] = {{"edge", T.marked->edge}, {"t", rat_to_string(T.marked->t)}};
    return j.dump(2);
}

LaurentPoly poly_from_json(const std::string& text) {
    json j = parse_json(text);
    if (!j.is_object() || !j.contains("coefficients"))
        fail(Err::ParseError, "polynomial JSON needs \"coefficients\"");
    LaurentPoly p;
    for (const auto& [key, value] : j["coefficients"].items()) {
        std::int64_t h = 0;
        try {
            h = std::stoll(key);
        } catch (const std::exception&) {
            fail(Err::ParseError, "bad half-exponent key '" + key + "'");
        }
        if (!value.is_number_integer()) fail(Err::ParseError, "coefficients must be integers");
        p += LaurentPoly::monomial(Int(value.get<long long>()), h);
    }
    return p;
}

std::string poly_to_json(const LaurentPoly& p) {
    json coeffs = json::object();
    for (const auto& [h, c] : p.terms()) coeffs[std::to_string(h)] = static_cast<long long>(c);
    json j;
    j["coefficients"] = coeffs;
    j["string"] = p.to_canonical_string();
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// SVG

namespace {

// Fixed-point decimal with 6 digits, computed exactly.
std::string dec(const Rat& r) {
    Int num = numerator(r), den = denominator(r);
    bool neg = num < 0;
    if (neg) num = -num;
    Int scaled = num * 1000000 / den;
    Int ip = scaled / 1000000, fp = scaled % 1000000;
    std::ostringstream out;
    if (neg && (ip != 0 || fp != 0)) out << "-";
    out << ip.str() << ".";
    std::string f = fp.str();
    out << std::string(6 - f.size(), '0') << f;
    return out.str();
}

struct Box {
    Rat xmin, xmax, ymin, ymax;
    bool init = false;
    void add(const RatPoint& p) {
        if (!init) {
            xmin = xmax = p.x;
            ymin = ymax = p.y;
            init = true;
            return;
        }
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
};

}  // namespace

std::string render_curve_svg(const ParamTropicalCurve& T) {
    Box box;
    for (const auto& v : T.vertices) box.add(v.pos);
    if (!box.init) fail(Err::InvalidVector, "cannot render an empty curve");
    Rat span = std::max(box.xmax - box.xmin, box.ymax - box.ymin);
    if (span == 0) span = 1;
    Rat ray_len = span / 2 + 1;

    std::vector<char> on_cycle(T.edges.size(), 0);
    auto gs = genus_and_simplicity(T);
    if (gs.genus == 1 && gs.simple) {
        try {
            auto dec_ = decompose_cycle_and_trees(T);
            for (int e : dec_.cycle_edges) on_cycle[e] = 1;
        } catch (const Error&) {
        }
    }

    // Extend the box by the ray stubs.
    std::vector<std::pair<RatPoint, RatPoint>> rays;
    for (const auto& e : T.ends) {
        RatPoint from = T.vertices[e.vertex].pos;
        auto [u, par] = primitive_and_parity(e.vector);
        Rat nrm = Rat(std::max(abs(u.x), abs(u.y)));
        RatPoint to{from.x + ray_len * Rat(u.x) / nrm, from.y + ray_len * Rat(u.y) / nrm};
        rays.push_back({from, to});
        box.add(to);
    }
    Rat margin = span / 10 + Rat(1, 2);
    Rat w = box.xmax - box.xmin + 2 * margin;
    Rat h = box.ymax - box.ymin + 2 * margin;
    auto X = [&](const Rat& x) { return dec((x - box.xmin + margin) * 100); };
    auto Y = [&](const Rat& y) { return dec((box.ymax - y + margin) * 100); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << dec(w * 100) << " "
        << dec(h * 100) << "\">\n";
    for (size_t e = 0; e < T.edges.size(); ++e) {
        const auto& a = T.vertices[T.edges[e].v1].pos;
        const auto& b = T.vertices[T.edges[e].v2].pos;
        svg << "  <line x1=\"" << X(a.x) << "\" y1=\"" << Y(a.y) << "\" x2=\"" << X(b.x)
            << "\" y2=\"" << Y(b.y) << "\" stroke=\"" << (on_cycle[e] ? "#c62828" : "#1565c0")
            << "\" stroke-width=\"" << (on_cycle[e] ? "5" : "3") << "\"/>\n";
    }
    for (const auto& [from, to] : rays)
        svg << "  <line x1=\"" << X(from.x) << "\" y1=\"" << Y(from.y) << "\" x2=\"" << X(to.x)
            << "\" y2=\"" << Y(to.y)
            << "\" stroke=\"#1565c0\" stroke-width=\"3\" stroke-dasharray=\"8 6\"/>\n";
    for (const auto& v : T.vertices)
        svg << "  <circle cx=\"" << X(v.pos.x) << "\" cy=\"" << Y(v.pos.y)
            << "\" r=\"6\" fill=\"#212121\"/>\n";
    if (T.marked) {
        RatPoint m = T.marked_pos();
        svg << "  <circle cx=\"" << X(m.x) << "\" cy=\"" << Y(m.y)
            << "\" r=\"8\" fill=\"#2e7d32\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string render_subdivision_svg(const DualSubdivision& dual) {
    Box box;
    for (const auto& v : dual.newton.vertices) box.add({Rat(v.x), Rat(v.y)});
    Rat span = std::max(box.xmax - box.xmin, box.ymax - box.ymin);
    if (span == 0) span = 1;
    Rat margin = span / 10 + Rat(1, 2);
    Rat w = box.xmax - box.xmin + 2 * margin;
    Rat h = box.ymax - box.ymin + 2 * margin;
    auto X = [&](const Int& x) { return dec((Rat(x) - box.xmin + margin) * 100); };
    auto Y = [&](const Int& y) { return dec((box.ymax - Rat(y) + margin) * 100); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << dec(w * 100) << " "
        << dec(h * 100) << "\">\n";
    for (const auto& cell : dual.cells) {
        svg << "  <polygon points=\"";
        for (size_t i = 0; i < cell.poly.vertices.size(); ++i) {
            if (i) svg << " ";
            svg << X(cell.poly.vertices[i].x) << "," << Y(cell.poly.vertices[i].y);
        }
        svg << "\" fill=\"" << (cell.kind == CellKind::Triangle ? "#bbdefb" : "#ffe0b2")
            << "\" stroke=\"#212121\" stroke-width=\"2\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Err::IoError, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Err::IoError, "cannot write " + path);
    out << content;
    if (!out) fail(Err::IoError, "write failed for " + path);
}

}  // namespace tropref
