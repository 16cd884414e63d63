#include "spps/problem.hpp"

#include <cstdlib>
#include <fstream>

namespace spps {

namespace {

void require(bool cond, const std::string& path, const std::string& what) {
    if (!cond) throw ParseError(path, what);
}

}  // namespace

ProblemFile parse_problem(const json& doc) {
    require(doc.is_object(), "$", "problem document must be a JSON object");
    ProblemFile pf;
    pf.schema_version = doc.value("schema_version", kSchemaVersion);
    require(pf.schema_version == kSchemaVersion, "schema_version",
            "unsupported version " + std::to_string(pf.schema_version));
    pf.mode = doc.value("mode", std::string("float"));
    require(pf.mode == "float" || pf.mode == "rational", "mode", "must be 'float' or 'rational'");

    require(doc.contains("window") && doc.at("window").is_object(), "window", "missing object");
    const json& w = doc.at("window");
    require(w.contains("a") && w.at("a").is_number_integer(), "window.a", "missing integer");
    require(w.contains("n_max") && w.at("n_max").is_number_integer(), "window.n_max",
            "missing integer");
    pf.a = w.at("a").get<int>();
    pf.n_max = w.at("n_max").get<int>();
    require(pf.lo() <= pf.hi() - 2, "window", "need at least three points (n_max >= a+1)");

    require(doc.contains("n0"), "n0", "missing");
    pf.n0 = doc.at("n0").get<int>();
    pf.lambda0 = doc.value("lambda0", json(0));

    require(doc.contains("coefficients") && doc.at("coefficients").is_object(), "coefficients",
            "missing object");
    const json& c = doc.at("coefficients");
    for (const char* k : {"p", "q", "r"})
        require(c.contains(k), std::string("coefficients.") + k, "missing");
    pf.p_spec = c.at("p");
    pf.q_spec = c.at("q");
    pf.r_spec = c.at("r");

    if (doc.contains("boundary") && !doc.at("boundary").is_null()) pf.boundary = doc.at("boundary");
    if (doc.contains("lambdas")) {
        require(doc.at("lambdas").is_array(), "lambdas", "must be an array");
        for (const json& l : doc.at("lambdas")) pf.lambdas.push_back(l);
    }
    if (doc.contains("seed") && !doc.at("seed").is_null()) pf.seed = doc.at("seed");
    if (doc.contains("reference") && !doc.at("reference").is_null())
        pf.reference = doc.at("reference").get<std::string>();
    return pf;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("$", "cannot open file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ParseError("$", std::string("JSON parse error: ") + e.what());
    }
    return parse_problem(doc);
}

json emit_problem(const ProblemFile& pf) {
    json doc;
    doc["schema_version"] = pf.schema_version;
    doc["mode"] = pf.mode;
    doc["window"] = {{"a", pf.a}, {"n_max", pf.n_max}};
    doc["n0"] = pf.n0;
    doc["lambda0"] = pf.lambda0;
    doc["coefficients"] = {{"p", pf.p_spec}, {"q", pf.q_spec}, {"r", pf.r_spec}};
    if (pf.boundary) doc["boundary"] = *pf.boundary;
    if (!pf.lambdas.empty()) doc["lambdas"] = pf.lambdas;
    if (pf.seed) doc["seed"] = *pf.seed;
    if (pf.reference) doc["reference"] = *pf.reference;
    return doc;
}

std::uint64_t seed_search_state_from_env() {
    if (const char* env = std::getenv("SPPS_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0') return static_cast<std::uint64_t>(v);
    }
    return kDefaultSeedSearchState;
}

}  // namespace spps
