#pragma once

#include "bundled.hpp"
#include "suites.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

namespace zz {

// --- chain literals ------------------------------------------------------------
// {"terms": [{"coeff": "-3/2", "n": 1, "strands": [2], "entries": [<form>, ...]}]}

inline nlohmann::json chain_to_json(const FormChain& c)
{
    nlohmann::json terms = nlohmann::json::array();
    for (auto& [w, k] : c) {
        nlohmann::json e = nlohmann::json::array();
        for (auto& f : w.e)
            e.push_back(to_json(f));
        terms.push_back({{"coeff", to_string(k)}, {"n", w.n}, {"strands", w.strands}, {"entries", e}});
    }
    return {{"terms", terms}};
}

inline FormChain chain_from_json(const nlohmann::json& j)
{
    FormChain c;
    if (!j.is_object() || !j.contains("terms") || !j.at("terms").is_array())
        throw std::invalid_argument("chain literal needs a 'terms' array");
    for (auto& t : j.at("terms")) {
        FormWord w{t.at("n").get<int>(), t.at("strands").get<std::vector<int>>(), {}};
        for (auto& e : t.at("entries"))
            w.e.push_back(form_from_json(e));
        check_word(w);
        c.add(std::move(w), parse_rational(t.value("coeff", std::string("1"))));
    }
    return c;
}

struct NamedChainLiteral {
    std::string name;
    FormChain chain;
    friend bool operator==(const NamedChainLiteral&, const NamedChainLiteral&) = default;
};

// --- run configuration -------------------------------------------------------------

struct SampleSet {
    std::vector<std::vector<double>> points;
    std::vector<std::vector<double>> directions; // the first p+1 are used for degree p

    std::vector<Sample> for_degree(int p) const
    {
        if (p + 1 > int(directions.size()))
            throw std::invalid_argument("not enough sample directions for degree " + std::to_string(p));
        std::vector<Sample> out;
        for (auto& u : points)
            out.push_back({u, Dirs(directions.begin(), directions.begin() + p + 1)});
        return out;
    }
    friend bool operator==(const SampleSet&, const SampleSet&) = default;
};

inline const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names = {"verify-algebra", "verify-chainmap", "transport", "holonomy2"};
    return names;
}

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names = {"zigzag", "derivation", "associativity", "collapse",
                                                   "interval", "curved",    "rect",          "search"};
    return names;
}

struct RunConfig {
    std::string command = "verify-algebra";
    std::optional<PolyMatrixForm> A; // connection
    std::optional<PolyMatrixForm> B; // curving
    std::vector<Family> geometry;
    std::vector<double> point;       // parameter point for transport / holonomy2
    SampleSet samples;
    std::vector<NamedChainLiteral> chains;
    QuadratureSpec quadrature;
    uint64_t seed = 1;
    double tolerance = 1e-6;
    std::string output;
    std::string shapes = "n<=2,k<=2";
    std::vector<std::string> suites;
    bool square_mode = false;
    std::string debug_flip_sign;

    friend bool operator==(const RunConfig& a, const RunConfig& b)
    {
        auto q = [](const QuadratureSpec& s) { return std::tie(s.points, s.trunc, s.h, s.ode_steps, s.panels); };
        return a.command == b.command && a.A == b.A && a.B == b.B && a.geometry == b.geometry && a.point == b.point &&
               a.samples == b.samples && a.chains == b.chains && q(a.quadrature) == q(b.quadrature) &&
               a.seed == b.seed && a.tolerance == b.tolerance && a.output == b.output && a.shapes == b.shapes &&
               a.suites == b.suites && a.square_mode == b.square_mode && a.debug_flip_sign == b.debug_flip_sign;
    }

    // cross-field consistency; throws with a diagnostic
    void validate() const
    {
        if (std::find(command_names().begin(), command_names().end(), command) == command_names().end())
            throw std::invalid_argument("unknown command '" + command + "'");
        quadrature.check();
        if (!(tolerance > 0))
            throw std::invalid_argument("tolerance must be positive");
        ShapeSpec::parse(shapes);
        for (auto& s : suites)
            if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
                throw std::invalid_argument("unknown suite '" + s + "'");
        if (!debug_flip_sign.empty()) {
            bool known = debug_flip_sign == "b";
            for (auto& [name, member] : sign_flags())
                known = known || name == debug_flip_sign;
            if (!known)
                throw std::invalid_argument("unknown sign flag '" + debug_flip_sign + "'");
        }
        if (A && B && (A->dim() != B->dim() || A->size() != B->size()))
            throw std::invalid_argument("connection A and curving B disagree on dimension or matrix size");
        if (A && !A->is_zero() && A->degree() != 1)
            throw std::invalid_argument("connection A must be a 1-form");
        if (B && !B->is_zero() && B->degree() != 2)
            throw std::invalid_argument("curving B must be a 2-form");
        for (auto& f : geometry) {
            if (A && A->dim() != f.dim())
                throw std::invalid_argument("geometry dimension does not match the connection");
            if (B && B->dim() != f.dim())
                throw std::invalid_argument("geometry dimension does not match the curving");
        }
        if (command == "verify-chainmap") {
            if (geometry.empty())
                throw std::invalid_argument("verify-chainmap needs at least one path family");
            for (auto& f : geometry) {
                if (f.surface())
                    throw std::invalid_argument("verify-chainmap takes path families");
                if (f.params() < 1)
                    throw std::invalid_argument("verify-chainmap needs families with parameters");
            }
            for (auto& u : samples.points)
                if (int(u.size()) != geometry[0].params())
                    throw std::invalid_argument("sample point has wrong length");
            for (auto& v : samples.directions)
                if (int(v.size()) != geometry[0].params())
                    throw std::invalid_argument("sample direction has wrong length");
            if (samples.points.empty())
                throw std::invalid_argument("verify-chainmap needs sample points");
        }
        if (command == "transport" || command == "holonomy2") {
            if (geometry.size() != 1)
                throw std::invalid_argument(command + " needs exactly one family");
            if (int(point.size()) != geometry[0].params())
                throw std::invalid_argument("parameter point has wrong length");
            if (!A)
                throw std::invalid_argument(command + " needs a connection A (use a form with no terms for A = 0)");
        }
        if (command == "transport" && geometry[0].surface())
            throw std::invalid_argument("transport takes a path family");
        if (command == "holonomy2") {
            if (!B)
                throw std::invalid_argument("holonomy2 needs a curving B");
            if (!geometry[0].surface())
                throw std::invalid_argument("holonomy2 takes a bigon family");
        }
    }
};

inline nlohmann::json quadrature_to_json(const QuadratureSpec& q)
{
    return {{"points_per_axis", q.points}, {"truncation", q.trunc}, {"fd_step", q.h},
            {"ode_steps", q.ode_steps},    {"panels", q.panels}};
}

inline QuadratureSpec quadrature_from_json(const nlohmann::json& j)
{
    QuadratureSpec q;
    q.points = j.value("points_per_axis", q.points);
    q.trunc = j.value("truncation", q.trunc);
    q.h = j.value("fd_step", q.h);
    q.ode_steps = j.value("ode_steps", q.ode_steps);
    q.panels = j.value("panels", q.panels);
    return q;
}

inline nlohmann::json to_json(const RunConfig& c)
{
    nlohmann::json j;
    j["command"] = c.command;
    nlohmann::json conn = nlohmann::json::object();
    if (c.A)
        conn["A"] = to_json(*c.A);
    if (c.B)
        conn["B"] = to_json(*c.B);
    j["connection"] = conn;
    j["geometry"] = nlohmann::json::array();
    for (auto& f : c.geometry)
        j["geometry"].push_back(f.to_json());
    j["point"] = c.point;
    j["samples"] = {{"points", c.samples.points}, {"directions", c.samples.directions}};
    j["chains"] = nlohmann::json::array();
    for (auto& nc : c.chains) {
        auto cj = chain_to_json(nc.chain);
        cj["name"] = nc.name;
        j["chains"].push_back(cj);
    }
    j["quadrature"] = quadrature_to_json(c.quadrature);
    j["seed"] = c.seed;
    j["tolerance"] = c.tolerance;
    j["output"] = c.output;
    j["shapes"] = c.shapes;
    j["suites"] = c.suites;
    j["square_mode"] = c.square_mode;
    j["debug_flip_sign"] = c.debug_flip_sign;
    return j;
}

inline RunConfig config_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("config must be a JSON object");
    static const std::vector<std::string> known = {
        "command", "connection", "geometry", "point",  "samples",     "chains",      "quadrature",
        "seed",    "tolerance",  "output",   "shapes", "square_mode", "debug_flip_sign", "suites"};
    for (auto& [k, v] : j.items())
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw std::invalid_argument("unknown config field '" + k + "'");
    RunConfig c;
    c.command = j.value("command", c.command);
    if (j.contains("connection")) {
        auto& conn = j.at("connection");
        if (conn.contains("A"))
            c.A = form_from_json(conn.at("A"));
        if (conn.contains("B"))
            c.B = form_from_json(conn.at("B"));
    }
    if (j.contains("geometry")) {
        auto& g = j.at("geometry");
        if (g.is_object())
            c.geometry.push_back(Family::from_json(g));
        else
            for (auto& f : g)
                c.geometry.push_back(Family::from_json(f));
    }
    c.point = j.value("point", c.point);
    if (j.contains("samples")) {
        auto& s = j.at("samples");
        c.samples.points = s.value("points", c.samples.points);
        c.samples.directions = s.value("directions", c.samples.directions);
    }
    if (j.contains("chains"))
        for (auto& cj : j.at("chains"))
            c.chains.push_back({cj.value("name", std::string("chain")), chain_from_json(cj)});
    if (j.contains("quadrature"))
        c.quadrature = quadrature_from_json(j.at("quadrature"));
    c.seed = j.value("seed", c.seed);
    c.tolerance = j.value("tolerance", c.tolerance);
    c.output = j.value("output", c.output);
    c.shapes = j.value("shapes", c.shapes);
    c.suites = j.value("suites", c.suites);
    c.square_mode = j.value("square_mode", c.square_mode);
    c.debug_flip_sign = j.value("debug_flip_sign", c.debug_flip_sign);
    return c;
}

inline std::string print_config(const RunConfig& c) { return to_json(c).dump(2); }

inline RunConfig parse_config(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed config: ") + e.what());
    }
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// the bundled defaults for each command
inline RunConfig default_config(const std::string& command)
{
    RunConfig c;
    c.command = command;
    if (command == "verify-algebra") {
        c.suites = suite_names();
    } else if (command == "verify-chainmap") {
        c.geometry = bundled::path_families();
        c.samples = {{{0.35, 0.6}, {0.7, 0.25}}, {{0.8, -0.35}, {0.25, 0.9}}};
        for (auto& nc : bundled::chains())
            c.chains.push_back({nc.name, nc.chain});
    } else if (command == "transport") {
        c.A = bundled::connection();
        c.geometry = {bundled::transport_path()};
        c.point = bundled::base_point();
        c.quadrature.trunc = 12;
        c.tolerance = 1e-8;
    } else if (command == "holonomy2") {
        c.A = bundled::connection();
        c.B = bundled::curving();
        c.geometry = {bundled::bigons()[0]};
        c.point = bundled::base_point();
        c.quadrature.trunc = 6;
    } else {
        throw std::invalid_argument("unknown command '" + command + "'");
    }
    return c;
}

// --- reports ---------------------------------------------------------------------

// 64-bit FNV-1a
inline uint64_t fnv1a(const std::string& s)
{
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

// digest of everything that determines the result (the output path does not)
inline std::string inputs_digest(const RunConfig& c)
{
    auto j = to_json(c);
    j.erase("output");
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(j.dump());
    return os.str();
}

inline nlohmann::json matrix_json(const Mat& m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::json r = nlohmann::json::array();
        for (int k = 0; k < m.cols(); ++k)
            r.push_back(m(i, k));
        rows.push_back(r);
    }
    return rows;
}

} // namespace zz
