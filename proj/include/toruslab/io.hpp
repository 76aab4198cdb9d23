#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "toruslab/endomorphism.hpp"
#include "toruslab/grid_set.hpp"
#include "toruslab/loop.hpp"
#include "toruslab/matrix.hpp"

namespace toruslab {

using nlohmann::json;

// Writes land under a temporary name first; a report is either complete or
// absent, never half-written.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), (std::streamsize)content.size());
        if (!out) throw std::runtime_error("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Accepts either "a b ; c d" or the JSON form [[a, b], [c, d]].
inline IntMatrix2 parse_matrix(const std::string& text) {
    const size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw std::invalid_argument("empty matrix literal");
    if (text[first] == '[') {
        const json j = json::parse(text);
        if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
            !j[1].is_array() || j[1].size() != 2)
            throw std::invalid_argument("matrix JSON must be [[a,b],[c,d]]");
        return {j[0][0].get<long long>(), j[0][1].get<long long>(), j[1][0].get<long long>(),
                j[1][1].get<long long>()};
    }
    std::string flat = text;
    for (char& ch : flat)
        if (ch == ';' || ch == ',') ch = ' ';
    std::istringstream ss(flat);
    long long v[4];
    for (int k = 0; k < 4; ++k)
        if (!(ss >> v[k])) throw std::invalid_argument("matrix literal needs 4 integers: " + text);
    std::string rest;
    if (ss >> rest) throw std::invalid_argument("trailing tokens in matrix literal: " + text);
    return {v[0], v[1], v[2], v[3]};
}

inline json matrix_to_json(const IntMatrix2& m) {
    return json::array({json::array({m.a, m.b}), json::array({m.c, m.d})});
}

inline json classification_to_json(const SpectralClass& cls) {
    json eigen;
    switch (cls.eigen.kind) {
        case EigenData::Kind::IntegerPair:
            eigen = {{"kind", "integer_pair"}, {"k", cls.eigen.k}, {"l", cls.eigen.l}};
            break;
        case EigenData::Kind::Surd:
            eigen = {{"kind", "surd"},
                     {"trace", cls.eigen.trace},
                     {"discriminant", cls.eigen.discriminant}};
            break;
        case EigenData::Kind::ComplexPair:
            eigen = {{"kind", "complex_pair"},
                     {"trace", cls.eigen.trace},
                     {"discriminant", cls.eigen.discriminant}};
            break;
    }
    return {{"case", to_string(cls.kind)},    {"case_index", cls.case_index()},
            {"degree", cls.degree},           {"trace", cls.trace},
            {"det", cls.det},                 {"discriminant", cls.discriminant},
            {"eigen_data", eigen}};
}

inline json trig_to_json(const TrigPoly& p) {
    return {{"sin", p.sin_coeffs()}, {"cos", p.cos_coeffs()}};
}

inline TrigPoly trig_from_json(const json& j) {
    return TrigPoly(j.value("sin", std::vector<double>{}), j.value("cos", std::vector<double>{}));
}

inline json endomorphism_to_json(const Endomorphism& f) {
    if (f.is_product_form()) {
        const ProductMap& p = f.product();
        return {{"product",
                 {{"f1", {{"degree", p.f1.degree()}, {"pert", trig_to_json(p.f1.perturbation())}}},
                  {"f2", {{"degree", p.f2.degree()}, {"pert", trig_to_json(p.f2.perturbation())}}}}}};
    }
    json chain = json::array();
    for (const auto& prim : f.chain()) {
        if (const auto* h = std::get_if<HShear>(&prim))
            chain.push_back({{"type", "hshear"}, {"profile", trig_to_json(h->profile)}});
        else if (const auto* v = std::get_if<VShear>(&prim))
            chain.push_back({{"type", "vshear"}, {"profile", trig_to_json(v->profile)}});
        else {
            const auto& t = std::get<Translate>(prim);
            chain.push_back({{"type", "translate"}, {"s", t.s}, {"t", t.t}});
        }
    }
    return {{"linear", matrix_to_json(f.linear())}, {"chain", chain}};
}

inline Endomorphism endomorphism_from_json(const json& j) {
    if (j.contains("product")) {
        const json& p = j.at("product");
        auto factor = [](const json& fj) {
            return CircleMap(fj.at("degree").get<int>(),
                             fj.contains("pert") ? trig_from_json(fj.at("pert")) : TrigPoly());
        };
        return Endomorphism::product_form({factor(p.at("f1")), factor(p.at("f2"))});
    }
    const IntMatrix2 m = parse_matrix(j.at("linear").dump());
    std::vector<Primitive> chain;
    for (const json& pj : j.value("chain", json::array())) {
        const std::string type = pj.at("type").get<std::string>();
        if (type == "hshear")
            chain.push_back(HShear{trig_from_json(pj.at("profile"))});
        else if (type == "vshear")
            chain.push_back(VShear{trig_from_json(pj.at("profile"))});
        else if (type == "translate")
            chain.push_back(Translate{pj.at("s").get<double>(), pj.at("t").get<double>()});
        else
            throw std::invalid_argument("unknown chain primitive type: " + type);
    }
    return Endomorphism::chain_form(m, std::move(chain));
}

// Row-wise run-length form: {"n": N, "rows": [[start, len, ...] per row j]}.
inline json grid_set_to_json(const GridOpenSet& s) {
    const int n = s.resolution();
    json rows = json::array();
    for (int j = 0; j < n; ++j) {
        json runs = json::array();
        int i = 0;
        while (i < n) {
            if (!s.member(i, j)) {
                ++i;
                continue;
            }
            int len = 0;
            while (i + len < n && s.member(i + len, j)) ++len;
            runs.push_back(i);
            runs.push_back(len);
            i += len;
        }
        rows.push_back(runs);
    }
    return {{"n", n}, {"rows", rows}};
}

inline GridOpenSet grid_set_from_json(const json& j) {
    const int n = j.at("n").get<int>();
    GridOpenSet s(n);
    const json& rows = j.at("rows");
    if ((int)rows.size() != n) throw std::invalid_argument("grid set row count mismatch");
    for (int r = 0; r < n; ++r) {
        const json& runs = rows[r];
        if (runs.size() % 2 != 0) throw std::invalid_argument("grid set runs must pair start,len");
        for (size_t k = 0; k + 1 < runs.size(); k += 2) {
            const int start = runs[k].get<int>(), len = runs[k + 1].get<int>();
            if (start < 0 || len < 0 || start + len > n)
                throw std::invalid_argument("grid set run out of range");
            for (int i = 0; i < len; ++i) s.insert(start + i, r);
        }
    }
    return s;
}

// Binary PGM, 255 for member cells; image row 0 is torus row n-1 so the
// picture sits the usual way up.
inline void write_pgm(const std::filesystem::path& path, const GridOpenSet& s) {
    const int n = s.resolution();
    std::string body = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
    body.reserve(body.size() + (size_t)n * n);
    for (int j = n - 1; j >= 0; --j)
        for (int i = 0; i < n; ++i) body.push_back(s.member(i, j) ? (char)255 : (char)0);
    atomic_write_text(path, body);
}

inline GridOpenSet read_pgm(const std::filesystem::path& path) {
    const std::string data = read_text(path);
    std::istringstream ss(data);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    ss >> magic >> w >> h >> maxval;
    if (magic != "P5" || w != h || w < 1 || maxval != 255)
        throw std::invalid_argument("expected square binary PGM with maxval 255");
    ss.get(); // single whitespace after header
    GridOpenSet s(w);
    for (int j = w - 1; j >= 0; --j)
        for (int i = 0; i < w; ++i) {
            const int ch = ss.get();
            if (ch == EOF) throw std::invalid_argument("truncated PGM payload");
            if (ch != 0) s.insert(i, j);
        }
    return s;
}

inline json loop_to_json(const PolyLoop& loop) {
    json verts = json::array();
    for (const PlanePoint& p : loop.lift_vertices()) verts.push_back(json::array({p.x, p.y}));
    const IntVec cls = loop.homotopy_class();
    return {{"vertices", verts}, {"class", json::array({cls.x, cls.y})}};
}

inline PolyLoop loop_from_json(const json& j) {
    std::vector<PlanePoint> verts;
    for (const json& v : j.at("vertices")) verts.push_back({v[0].get<double>(), v[1].get<double>()});
    return PolyLoop(std::move(verts));
}

} // namespace toruslab
