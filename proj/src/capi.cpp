#include "arithdyn/arithdyn.h"

#include "arithdyn/degrees.hpp"
#include "arithdyn/experiments.hpp"
#include "arithdyn/maps.hpp"
#include "arithdyn/padic.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

using nlohmann::json;
using namespace arithdyn;

struct ad_map {
    maps::TriangularMap map;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_diagnostic = "{}";
thread_local std::string last_summary = "{}";

const char *status_name(ad_status s)
{
    switch (s) {
    case AD_OK:
        return "ok";
    case AD_ASSERTION_FAILED:
        return "assertion_failed";
    case AD_RESOURCE_EXCEEDED:
        return "resource_exceeded";
    case AD_CONFIG_ERROR:
        return "config_error";
    case AD_INVALID_ARGUMENT:
        return "invalid_argument";
    case AD_IO_ERROR:
        return "io_error";
    case AD_INTERNAL_ERROR:
        return "internal_error";
    }
    return "unknown";
}

ad_status fail(ad_status s, const std::string &error, const std::string &message, json extra = json::object())
{
    last_error = message;
    json d{{"status", status_name(s)}, {"code", static_cast<int>(s)}, {"error", error}, {"message", message}};
    for (auto &[k, v] : extra.items())
        d[k] = v;
    last_diagnostic = d.dump();
    return s;
}

ad_status ok()
{
    last_error.clear();
    last_diagnostic = json{{"status", "ok"}, {"code", 0}}.dump();
    return AD_OK;
}

// Maps the exception in flight to a status and structured diagnostic.
ad_status translate()
{
    try {
        throw;
    } catch (const maps::OrbitResourceExceeded &e) {
        return fail(AD_RESOURCE_EXCEEDED, "OrbitResourceExceeded", e.what(),
                    {{"last_safe", e.last_safe()}, {"orbit_prefix_length", e.partial().points.size()}});
    } catch (const maps::ResourceExceeded &e) {
        return fail(AD_RESOURCE_EXCEEDED, "ResourceExceeded", e.what(), {{"last_safe", e.last_safe()}});
    } catch (const maps::NotTriangular &e) {
        return fail(AD_CONFIG_ERROR, "NotTriangular", e.what(),
                    {{"component", e.component()}, {"variable", e.variable()}});
    } catch (const maps::NotDominant &e) {
        return fail(AD_CONFIG_ERROR, "NotDominant", e.what(), {{"component", e.component()}});
    } catch (const qpoly::ParseError &e) {
        return fail(AD_CONFIG_ERROR, "ParseError", e.what());
    } catch (const qpoly::DimensionMismatch &e) {
        return fail(AD_CONFIG_ERROR, "DimensionMismatch", e.what());
    } catch (const experiments::DuplicatePoints &e) {
        return fail(AD_CONFIG_ERROR, "DuplicatePoints", e.what());
    } catch (const experiments::ConfigError &e) {
        return fail(AD_CONFIG_ERROR, "ConfigError", e.what());
    } catch (const padic::SectorConfigError &e) {
        return fail(AD_CONFIG_ERROR, "SectorConfigError", e.what());
    } catch (const padic::NotInSector &e) {
        return fail(AD_ASSERTION_FAILED, "NotInSector", e.what(), {{"assertion", "f(U) is contained in U"}});
    } catch (const padic::NotFirstCase &e) {
        return fail(AD_CONFIG_ERROR, "NotFirstCase", e.what());
    } catch (const padic::GrowthPrecondition &e) {
        return fail(AD_CONFIG_ERROR, "GrowthPrecondition", e.what());
    } catch (const padic::LexMaxDegreeMismatch &e) {
        return fail(AD_ASSERTION_FAILED, "LexMaxDegreeMismatch", e.what(),
                    {{"assertion", "the lex-max monomial of f_i carries x_i^(d_ii)"}});
    } catch (const std::overflow_error &e) {
        return fail(AD_RESOURCE_EXCEEDED, "Overflow", e.what());
    } catch (const std::invalid_argument &e) {
        return fail(AD_CONFIG_ERROR, "InvalidArgument", e.what());
    } catch (const std::out_of_range &e) {
        return fail(AD_INVALID_ARGUMENT, "OutOfRange", e.what());
    } catch (const std::filesystem::filesystem_error &e) {
        return fail(AD_IO_ERROR, "FilesystemError", e.what());
    } catch (const std::bad_alloc &) {
        return fail(AD_RESOURCE_EXCEEDED, "OutOfMemory", "allocation failed");
    } catch (const std::exception &e) {
        return fail(AD_INTERNAL_ERROR, "Error", e.what());
    } catch (...) {
        return fail(AD_INTERNAL_ERROR, "Unknown", "unknown exception");
    }
}

ad_status copy_out(const std::string &text, char *buf, size_t buf_len, size_t *needed)
{
    if (needed)
        *needed = text.size() + 1;
    if (!buf || buf_len < text.size() + 1)
        return buf ? fail(AD_INVALID_ARGUMENT, "BufferTooSmall", "buffer too small") : ok();
    std::memcpy(buf, text.c_str(), text.size() + 1);
    return ok();
}

std::string read_file(const char *path)
{
    std::ifstream is(path);
    if (!is)
        throw experiments::ConfigError(std::string("cannot read ") + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

ad_status finish_run(const experiments::ExperimentResult &result)
{
    last_summary = result.summary.dump(2);
    if (result.all_passed())
        return ok();
    json failed = json::array();
    for (const auto &c : result.summary["checks"])
        if (!c["passed"].get<bool>())
            failed.push_back({{"name", c["name"]}, {"assertion", c["statement"]}});
    std::string names;
    for (const auto &f : failed)
        names += (names.empty() ? "" : ", ") + f["name"].get<std::string>();
    return fail(AD_ASSERTION_FAILED, "AssertionFailed", "failed checks: " + names, {{"failed_checks", failed}});
}

}  // namespace

extern "C" {

const char *ad_last_error(void) { return last_error.c_str(); }
const char *ad_last_diagnostic(void) { return last_diagnostic.c_str(); }
const char *ad_last_summary(void) { return last_summary.c_str(); }
const char *ad_version(void) { return "0.1.0"; }

ad_status ad_map_from_json(const char *json_text, ad_map **out)
{
    if (!json_text || !out)
        return fail(AD_INVALID_ARGUMENT, "NullArgument", "null argument");
    try {
        *out = new ad_map{maps::map_from_json(json_text)};
        return ok();
    } catch (...) {
        *out = nullptr;
        return translate();
    }
}

ad_status ad_map_from_components(size_t dimension, const char *const *components, ad_map **out)
{
    if (!components || !out || dimension == 0)
        return fail(AD_INVALID_ARGUMENT, "NullArgument", "null argument or zero dimension");
    try {
        std::vector<qpoly::Polynomial> comps;
        for (size_t i = 0; i < dimension; ++i) {
            if (!components[i])
                return fail(AD_INVALID_ARGUMENT, "NullArgument", "null component");
            comps.push_back(qpoly::parse_polynomial(components[i], dimension));
        }
        *out = new ad_map{maps::TriangularMap::validate(std::move(comps))};
        return ok();
    } catch (...) {
        *out = nullptr;
        return translate();
    }
}

void ad_map_free(ad_map *map) { delete map; }

size_t ad_map_dimension(const ad_map *map) { return map ? map->map.dimension() : 0; }

ad_status ad_map_degree_matrix(const ad_map *map, uint64_t *out, size_t out_len)
{
    if (!map || !out)
        return fail(AD_INVALID_ARGUMENT, "NullArgument", "null argument");
    const auto n = map->map.dimension();
    if (out_len < n * n)
        return fail(AD_INVALID_ARGUMENT, "BufferTooSmall", "output needs N*N entries");
    try {
        const auto m = degrees::degree_matrix(map->map);
        for (size_t i = 1; i <= n; ++i)
            for (size_t j = 1; j <= n; ++j)
                out[(i - 1) * n + (j - 1)] = m(i, j);
        return ok();
    } catch (...) {
        return translate();
    }
}

ad_status ad_map_dynamical_degree(const ad_map *map, uint64_t *out)
{
    if (!map || !out)
        return fail(AD_INVALID_ARGUMENT, "NullArgument", "null argument");
    try {
        *out = degrees::dynamical_degree_exact(map->map);
        return ok();
    } catch (...) {
        return translate();
    }
}

ad_status ad_map_component_text(const ad_map *map, size_t i, char *buf, size_t buf_len, size_t *needed)
{
    if (!map)
        return fail(AD_INVALID_ARGUMENT, "NullArgument", "null map");
    if (i < 1 || i > map->map.dimension())
        return fail(AD_INVALID_ARGUMENT, "OutOfRange", "component index out of range");
    try {
        return copy_out(qpoly::to_string(map->map.component(i)), buf, buf_len, needed);
    } catch (...) {
        return translate();
    }
}

ad_status ad_map_to_json(const ad_map *map, char *buf, size_t buf_len, size_t *needed)
{
    if (!map)
        return fail(AD_INVALID_ARGUMENT, "NullArgument", "null map");
    try {
        return copy_out(maps::map_to_json(map->map), buf, buf_len, needed);
    } catch (...) {
        return translate();
    }
}

ad_status ad_run_experiment(const char *config_path, const char *out_dir, int has_seed, uint64_t seed)
{
    if (!config_path)
        return fail(AD_INVALID_ARGUMENT, "NullArgument", "null config path");
    try {
        auto cfg = experiments::load_config(config_path);
        if (out_dir)
            cfg.output = out_dir;
        if (has_seed)
            cfg.seed = seed;
        return finish_run(experiments::run_experiment(cfg));
    } catch (...) {
        return translate();
    }
}

ad_status ad_density(const char *points_csv_path, unsigned degree, const char *out_dir)
{
    if (!points_csv_path || !out_dir)
        return fail(AD_INVALID_ARGUMENT, "NullArgument", "null argument");
    try {
        std::istringstream is(read_file(points_csv_path));
        const auto points = experiments::read_points_csv(is);
        return finish_run(experiments::run_density(points, degree, out_dir));
    } catch (...) {
        return translate();
    }
}

ad_status ad_degrees(const char *map_json_path, size_t n_max, const char *out_dir)
{
    if (!map_json_path || !out_dir)
        return fail(AD_INVALID_ARGUMENT, "NullArgument", "null argument");
    try {
        const auto f = maps::map_from_json(read_file(map_json_path));
        return finish_run(experiments::run_degrees(f, n_max, out_dir));
    } catch (...) {
        return translate();
    }
}

}  // extern "C"
