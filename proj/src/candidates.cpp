#include <json.hpp>

#include <fstream>
#include <sstream>

#include "cuspkit/format.hpp"
#include "cuspkit/surfaces.hpp"

namespace cuspkit {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ParseError candidate_error(const std::string& what) { return ParseError(0, 0, what); }

cplx read_point(const json& j, const char* key) {
    if (!j.contains(key)) throw candidate_error(std::string("seed is missing '") + key + "'");
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw candidate_error(std::string("'") + key + "' must be [re, im]");
    return {v[0].get<double>(), v[1].get<double>()};
}

GeodesicPlane read_seed(const json& s) {
    if (!s.is_object() || !s.contains("kind")) throw candidate_error("seed must be an object with a 'kind'");
    std::string kind = s.at("kind").get<std::string>();
    if (kind == "vertical") {
        cplx d = read_point(s, "direction");
        if (std::abs(d) == 0.0) throw candidate_error("vertical seed has zero direction");
        return GeodesicPlane::vertical(read_point(s, "base"), d / std::abs(d));
    }
    if (kind == "hemisphere") {
        if (!s.contains("radius") || !s.at("radius").is_number()) throw candidate_error("hemisphere seed needs a radius");
        double r = s.at("radius").get<double>();
        if (!(r > 0)) throw candidate_error("hemisphere radius must be positive");
        return GeodesicPlane::hemisphere(read_point(s, "center"), r);
    }
    throw candidate_error("unknown seed kind '" + kind + "'");
}

ordered_json point_json(cplx z) { return ordered_json::array({sig12(z.real()), sig12(z.imag())}); }

} // namespace

SurfaceCandidate parse_candidate(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw candidate_error(std::string("candidate: ") + e.what());
    }
    if (!j.is_object() || !j.contains("seed")) throw candidate_error("candidate must be an object with a 'seed'");
    SurfaceCandidate c;
    try {
        c.name = j.value("name", std::string{});
        c.frame_cusp = j.value("frame_cusp", 0);
        c.seed = read_seed(j.at("seed"));
        if (j.contains("orientable") && !j.at("orientable").is_null()) c.orientable = j.at("orientable").get<bool>();
        c.freeness = parse_freeness(j.value("freeness", std::string("unknown")));
        if (j.contains("claimed_slope") && !j.at("claimed_slope").is_null()) {
            const json& s = j.at("claimed_slope");
            if (!s.is_array() || s.size() != 2) throw candidate_error("claimed_slope must be [p, q]");
            c.claimed_slope = std::make_pair(s[0].get<long>(), s[1].get<long>());
        }
    } catch (const json::exception& e) {
        throw candidate_error(std::string("candidate: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw candidate_error(std::string("candidate: ") + e.what());
    }
    if (c.frame_cusp < 0) throw candidate_error("frame_cusp must be non-negative");
    return c;
}

SurfaceCandidate load_candidate(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw candidate_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_candidate(ss.str());
}

std::string candidate_json(const SurfaceCandidate& c) {
    ordered_json j;
    j["name"] = c.name;
    j["frame_cusp"] = c.frame_cusp;
    ordered_json s;
    if (c.seed.is_vertical()) {
        s["kind"] = "vertical";
        s["base"] = point_json(c.seed.base);
        s["direction"] = point_json(c.seed.direction);
    } else {
        s["kind"] = "hemisphere";
        s["center"] = point_json(c.seed.center);
        s["radius"] = sig12(c.seed.radius);
    }
    j["seed"] = s;
    j["orientable"] = c.orientable ? ordered_json(*c.orientable) : ordered_json(nullptr);
    j["freeness"] = to_string(c.freeness);
    j["claimed_slope"] = c.claimed_slope ? ordered_json::array({c.claimed_slope->first, c.claimed_slope->second})
                                         : ordered_json(nullptr);
    return j.dump(2) + "\n";
}

} // namespace cuspkit
