#pragma once

#include "nikishin/second_kind.hpp"
#include "nikishin/star_system.hpp"

#include <json.hpp>
#include <toml.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace nikishin {

struct RunConfig {
    std::string name;
    StarSystem system;
    unsigned precision_bits = 256;
    int quad_order = 96;
    int n_max = 36;
    int grid = 400;
    ProbeSpec probes;
    std::string out = "out";
    nlohmann::json canonical;  // normalized description, used for hashing
};

namespace detail {

inline std::string where(const toml::node& n, const std::string& field) {
    const auto& s = n.source();
    std::string loc = s.path ? std::string(*s.path) : std::string("config");
    return loc + ":" + std::to_string(s.begin.line) + ":" + std::to_string(s.begin.column) + ": field '" + field + "'";
}

// real-valued field: decimal string, integer or float
inline std::string number_text(const toml::node* n, const std::string& field, const std::string& ctx) {
    if (!n) throw config_error(ctx + ": missing field '" + field + "'");
    if (auto s = n->value<std::string>()) {
        parse_real(*s);
        return *s;
    }
    if (n->is_integer()) return std::to_string(*n->value<int64_t>());
    if (n->is_floating_point()) {
        std::ostringstream os;
        os << std::setprecision(17) << *n->value<double>();
        return os.str();
    }
    throw config_error(where(*n, field) + ": expected a number or decimal string");
}

inline int int_field(const toml::table& t, const std::string& key, int fallback, const std::string& ctx) {
    const toml::node* n = t.get(key);
    if (!n) return fallback;
    if (!n->is_integer()) throw config_error(where(*n, ctx + key) + ": expected an integer");
    return static_cast<int>(*n->value<int64_t>());
}

inline nlohmann::json density_json(const toml::node* node, const std::string& field, const std::string& ctx) {
    if (!node) throw config_error(ctx + ": missing field '" + field + "'");
    const toml::table* d = node->as_table();
    if (!d) throw config_error(where(*node, field) + ": expected a table");
    const toml::node* kind = d->get("kind");
    if (!kind) throw config_error(where(*node, field + ".kind") + ": missing density kind");
    auto ks = kind->value<std::string>();
    if (!ks) throw config_error(where(*kind, field + ".kind") + ": expected a string");
    nlohmann::json j;
    j["kind"] = *ks;
    if (*ks == "lebesgue") {
        j["kind"] = "power";
        j["exponent"] = "0";
        j["frame"] = "segment";
    } else if (*ks == "power") {
        std::string g = number_text(d->get("exponent"), field + ".exponent", where(*node, field));
        std::string frame = "segment";
        if (const toml::node* f = d->get("frame")) {
            auto fs = f->value<std::string>();
            if (!fs || (*fs != "segment" && *fs != "star"))
                throw config_error(where(*f, field + ".frame") + ": expected \"segment\" or \"star\"");
            frame = *fs;
        }
        j["exponent"] = g;
        j["frame"] = frame;
    } else if (*ks == "jacobi") {
        j["alpha"] = number_text(d->get("alpha"), field + ".alpha", where(*node, field));
        j["beta"] = number_text(d->get("beta"), field + ".beta", where(*node, field));
    } else if (*ks == "tabulated") {
        for (const char* key : {"x", "y"}) {
            const toml::node* a = d->get(key);
            if (!a || !a->as_array())
                throw config_error((a ? where(*a, field + "." + key) : where(*node, field + "." + key)) +
                                   ": expected an array of samples");
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& v : *a->as_array()) arr.push_back(number_text(&v, field + "." + key, where(*node, field)));
            j[key] = arr;
        }
    } else {
        throw config_error(where(*kind, field + ".kind") + ": unknown density kind '" + *ks + "'");
    }
    return j;
}

inline DensitySpec density_from_json(const nlohmann::json& j, int p) {
    std::string k = j.at("kind");
    if (k == "power") {
        real g = parse_real(j.at("exponent"));
        // |t|^g on the star is |tau|^((g - p)/(p + 1)) on the segment
        return j.value("frame", "segment") == "star" ? DensitySpec::star_power(g, p) : DensitySpec::power(g);
    }
    if (k == "jacobi") return DensitySpec::jacobi(parse_real(j.at("alpha")), parse_real(j.at("beta")));
    std::vector<real> xs, ys;
    for (const auto& v : j.at("x")) xs.push_back(parse_real(v));
    for (const auto& v : j.at("y")) ys.push_back(parse_real(v));
    return DensitySpec::tabulated(xs, ys);
}

}  // namespace detail

// Builds a RunConfig from its canonical JSON form (also used after loading the TOML file).
inline RunConfig config_from_json(const nlohmann::json& c) {
    RunConfig rc;
    rc.canonical = c;
    rc.name = c.value("name", "");
    rc.precision_bits = c.at("precision_bits");
    rc.quad_order = c.at("quad_order");
    rc.n_max = c.at("n_max");
    rc.grid = c.at("grid");
    rc.out = c.value("out", "out");
    const auto& pr = c.at("probes");
    rc.probes.outer = parse_real(pr.at("outer"));
    rc.probes.inner = parse_real(pr.at("inner"));
    rc.probes.per_circle = pr.at("per_circle");
    rc.probes.offset = parse_real(pr.at("offset"));
    const auto& s = c.at("system");
    rc.system.p = s.at("p");
    precision_scope scope(rc.precision_bits);
    for (const auto& iv : s.at("intervals")) {
        rc.system.intervals.push_back({parse_real(iv.at("a")), parse_real(iv.at("b"))});
        rc.system.densities.push_back(detail::density_from_json(iv.at("density"), rc.system.p));
    }
    if (rc.precision_bits < 64) throw validation_error("precision_bits must be at least 64");
    if (rc.n_max < rc.system.p) throw validation_error("n_max must be at least p");
    if (rc.grid < 64) throw validation_error("grid must be at least 64");
    if (rc.quad_order < 8) throw validation_error("quad_order must be at least 8");
    validate_system(rc.system);
    return rc;
}

inline RunConfig parse_config(std::string_view text, const std::string& source = "config") {
    toml::table t;
    try {
        t = toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        throw config_error(source + ":" + std::to_string(e.source().begin.line) + ":" +
                           std::to_string(e.source().begin.column) + ": " + std::string(e.description()));
    }
    nlohmann::json c;
    c["name"] = t["name"].value_or(std::string());
    c["precision_bits"] = detail::int_field(t, "precision_bits", 256, "");
    c["quad_order"] = detail::int_field(t, "quad_order", 96, "");
    c["n_max"] = detail::int_field(t, "n_max", 36, "");
    c["grid"] = detail::int_field(t, "grid", 400, "");
    c["out"] = t["out"].value_or(std::string("out"));

    nlohmann::json pr;
    pr["outer"] = "1.3";
    pr["inner"] = "0.6";
    pr["per_circle"] = 6;
    pr["offset"] = "0.1";
    if (const toml::table* pt = t["probes"].as_table()) {
        for (const char* key : {"outer", "inner", "offset"})
            if (pt->get(key)) pr[key] = detail::number_text(pt->get(key), std::string("probes.") + key, source);
        pr["per_circle"] = detail::int_field(*pt, "per_circle", 6, "probes.");
    }
    c["probes"] = pr;

    const toml::table* sys = t["system"].as_table();
    if (!sys) throw config_error(source + ": missing table 'system'");
    const toml::node* pn = sys->get("p");
    if (!pn || !pn->is_integer()) throw config_error(source + ": field 'system.p' must be an integer");
    int p = static_cast<int>(*pn->value<int64_t>());
    nlohmann::json js;
    js["p"] = p;
    js["intervals"] = nlohmann::json::array();
    const toml::node* ivn = sys->get("interval");
    const toml::array* ivs = ivn ? ivn->as_array() : nullptr;
    if (!ivs) throw config_error(source + ": missing array of tables 'system.interval'");
    int idx = 0;
    for (const auto& node : *ivs) {
        std::string field = "system.interval[" + std::to_string(idx) + "]";
        const toml::table* iv = node.as_table();
        if (!iv) throw config_error(detail::where(node, field) + ": expected a table");
        nlohmann::json ji;
        ji["a"] = detail::number_text(iv->get("a"), field + ".a", detail::where(node, field));
        ji["b"] = detail::number_text(iv->get("b"), field + ".b", detail::where(node, field));
        ji["density"] = detail::density_json(iv->get("density"), field + ".density", detail::where(node, field));
        js["intervals"].push_back(ji);
        ++idx;
    }
    c["system"] = js;
    return config_from_json(c);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

}  // namespace nikishin
