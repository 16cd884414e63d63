#pragma once

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spps/seed.hpp"
#include "spps/seqgrid.hpp"
#include "spps/spectral.hpp"

namespace spps {

using nlohmann::json;

/// Structured parse error carrying the offending field path.
struct ParseError : std::runtime_error {
    ParseError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), field_path(path) {}
    std::string field_path;
};

inline constexpr int kSchemaVersion = 1;
inline constexpr std::uint64_t kDefaultSeedSearchState = 0x5eed5eedULL;

/// Parsed problem document. Scalar-valued fields stay as raw JSON until the
/// arithmetic mode is chosen; emit() reproduces the parsed document, so
/// parse/emit round-trips are identity.
struct ProblemFile {
    int schema_version = kSchemaVersion;
    std::string mode = "float";  // "float" | "rational"
    int a = 1;                   // window lo = a - 1
    int n_max = 0;               // window hi
    int n0 = 0;
    json lambda0 = json(0);
    json p_spec, q_spec, r_spec;
    std::optional<json> boundary;
    std::vector<json> lambdas;
    std::optional<json> seed;
    std::optional<std::string> reference;  // closed-form family for verify

    int lo() const { return a - 1; }
    int hi() const { return n_max; }

    bool operator==(const ProblemFile&) const = default;
};

ProblemFile parse_problem(const json& doc);
ProblemFile load_problem_file(const std::string& path);
json emit_problem(const ProblemFile& pf);

// ---------------------------------------------------------------------------
// Scalar JSON forms: number | "p/q" string | [re, im] with entries of either.
// Rational mode refuses non-integral JSON numbers (no silent float rounding).
// ---------------------------------------------------------------------------

namespace detail {

inline mpq_class rational_from_json_part(const json& j, const std::string& path) {
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number())
        throw ParseError(path, "rational mode needs integers or \"p/q\" strings, got a float");
    throw ParseError(path, "expected a number or fraction string");
}

inline double double_from_json_part(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return parse_rational(j.get<std::string>()).get_d();
    throw ParseError(path, "expected a number or fraction string");
}

}  // namespace detail

template <class S>
S scalar_from_json(const json& j, const std::string& path) {
    json re = j, im = json(0);
    if (j.is_array()) {
        if (j.size() != 2) throw ParseError(path, "complex values are [re, im] pairs");
        re = j[0];
        im = j[1];
    }
    if constexpr (ScalarTraits<S>::exact) {
        return S(detail::rational_from_json_part(re, path + "[0]"),
                 detail::rational_from_json_part(im, path + "[1]"));
    } else {
        return S(detail::double_from_json_part(re, path + "[0]"),
                 detail::double_from_json_part(im, path + "[1]"));
    }
}

template <class S>
json scalar_to_json(const S& v);

template <>
inline json scalar_to_json<Complex>(const Complex& v) {
    return json::array({v.real(), v.imag()});
}
template <>
inline json scalar_to_json<GaussianRational>(const GaussianRational& v) {
    return json::array({rational_to_string(v.real()), rational_to_string(v.imag())});
}

/// Integer power with negative-exponent support (S must be a field).
template <class S>
S int_pow(S base, long e) {
    bool inv = e < 0;
    if (inv) e = -e;
    S acc = ScalarTraits<S>::from_int(1);
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return inv ? ScalarTraits<S>::from_int(1) / acc : acc;
}

/// Expand a coefficient spec (explicit array or builtin family) to a sequence
/// on [lo, hi]. Builtins: constant, power (scale*(n+offset)^exponent),
/// exponential (scale*base^n), laguerre_p (n+1).
template <class S>
Sequence<S> expand_coefficient(const json& spec, int lo, int hi, const std::string& path) {
    if (spec.is_array()) {
        if (static_cast<int>(spec.size()) != hi - lo + 1)
            throw ParseError(path, "expected " + std::to_string(hi - lo + 1) + " values, got " +
                                       std::to_string(spec.size()));
        std::vector<S> vals;
        for (size_t i = 0; i < spec.size(); ++i)
            vals.push_back(scalar_from_json<S>(spec[i], path + "[" + std::to_string(i) + "]"));
        return Sequence<S>(lo, std::move(vals));
    }
    if (!spec.is_object() || !spec.contains("name"))
        throw ParseError(path, "expected a value array or a builtin {name, params} object");
    std::string name = spec.at("name").get<std::string>();
    json params = spec.value("params", json::object());
    auto param_scalar = [&](const char* key, long fallback) {
        return params.contains(key) ? scalar_from_json<S>(params.at(key), path + ".params." + key)
                                    : ScalarTraits<S>::from_int(fallback);
    };
    if (name == "constant") {
        S v = param_scalar("value", 1);
        return Sequence<S>::constant(lo, hi, v);
    }
    if (name == "power") {
        long expn = params.value("exponent", 1L);
        S offset = param_scalar("offset", 0);
        S scale = param_scalar("scale", 1);
        return Sequence<S>::generate(lo, hi, [&](int n) {
            return scale * int_pow(ScalarTraits<S>::from_int(n) + offset, expn);
        });
    }
    if (name == "exponential") {
        S base = param_scalar("base", 2);
        S scale = param_scalar("scale", 1);
        return Sequence<S>::generate(lo, hi, [&](int n) { return scale * int_pow(base, n); });
    }
    if (name == "laguerre_p") {
        return Sequence<S>::generate(lo, hi,
                                     [&](int n) { return ScalarTraits<S>::from_int(n + 1); });
    }
    throw ParseError(path + ".name", "unknown builtin coefficient family '" + name + "'");
}

template <class S>
typename BoundaryCondition<S>::Side side_from_json(const json& j, const std::string& path) {
    typename BoundaryCondition<S>::Side side;
    if (!j.is_object()) throw ParseError(path, "expected an object");
    side.alpha = scalar_from_json<S>(j.value("alpha", json(0)), path + ".alpha");
    side.beta = scalar_from_json<S>(j.value("beta", json(0)), path + ".beta");
    side.alpha_slope = scalar_from_json<S>(j.value("alpha_slope", json(0)), path + ".alpha_slope");
    side.beta_slope = scalar_from_json<S>(j.value("beta_slope", json(0)), path + ".beta_slope");
    if (!j.contains("site")) throw ParseError(path + ".site", "missing");
    side.site = j.at("site").get<int>();
    return side;
}

/// A problem expanded into one arithmetic mode.
template <class S>
struct Problem {
    CoefficientSet<S> coeffs;
    int n0;
    S lambda0;
    std::optional<BoundaryCondition<S>> bc;
    std::vector<S> lambdas;
    std::optional<Sequence<S>> explicit_seed;
    std::string reference;
};

template <class S>
Problem<S> expand_problem(const ProblemFile& pf) {
    int lo = pf.lo(), hi = pf.hi();
    IndexWindow w(lo, hi);
    Sequence<S> p_full = expand_coefficient<S>(pf.p_spec, lo, hi - 1, "coefficients.p");
    Sequence<S> q_full = expand_coefficient<S>(pf.q_spec, lo + 1, hi, "coefficients.q");
    Sequence<S> r_full = expand_coefficient<S>(pf.r_spec, lo + 1, hi, "coefficients.r");
    CoefficientSet<S> coeffs = [&] {
        try {
            return CoefficientSet<S>(w, std::move(p_full), std::move(q_full), std::move(r_full));
        } catch (const std::invalid_argument& e) {
            throw ParseError("coefficients.p", e.what());
        }
    }();
    if (pf.n0 < lo || pf.n0 > hi - 1) throw ParseError("n0", "outside [lo, hi-1]");

    Problem<S> prob{std::move(coeffs), pf.n0, scalar_from_json<S>(pf.lambda0, "lambda0"), {}, {}, {},
                    pf.reference.value_or("")};
    if (pf.boundary) {
        BoundaryCondition<S> bc;
        bc.left = side_from_json<S>(pf.boundary->value("left", json::object()), "boundary.left");
        bc.right = side_from_json<S>(pf.boundary->value("right", json::object()), "boundary.right");
        try {
            bc.validate(w);
        } catch (const std::exception& e) {
            throw ParseError("boundary", e.what());
        }
        prob.bc = bc;
    }
    for (size_t i = 0; i < pf.lambdas.size(); ++i)
        prob.lambdas.push_back(
            scalar_from_json<S>(pf.lambdas[i], "lambdas[" + std::to_string(i) + "]"));
    if (pf.seed) prob.explicit_seed = expand_coefficient<S>(*pf.seed, lo, hi, "seed");
    return prob;
}

/// Seed resolution policy: explicit array if given, else the real-coefficient
/// complex combination, else randomized search (state from SPPS_SEED).
template <class S>
SeedSolution<S> resolve_seed(const Problem<S>& prob, std::uint64_t rng_state) {
    if (prob.explicit_seed) return certify_seed(prob.coeffs, prob.lambda0, *prob.explicit_seed);
    try {
        return build_seed_complex(prob.coeffs, prob.lambda0);
    } catch (const NonRealCoefficients&) {
        std::mt19937_64 rng(rng_state);
        return build_seed_search(prob.coeffs, prob.lambda0, 64, rng);
    }
}

std::uint64_t seed_search_state_from_env();

}  // namespace spps
