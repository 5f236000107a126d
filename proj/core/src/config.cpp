#include "foliation/config.hpp"

#include "foliation/expr.hpp"
#include "foliation/scenario.hpp"
#include "foliation/types.hpp"
#include "foliation/variety.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace foliation {

namespace {

std::string trim(std::string_view s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return std::string(s.substr(a, b - a + 1));
}

template <class T>
T parse_number(const std::string& v, const std::string& key)
{
    T out{};
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || ptr != end) throw std::invalid_argument(fmt::format("bad value '{}' for key '{}'", v, key));
    return out;
}

bool parse_bool(const std::string& v, const std::string& key)
{
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument(fmt::format("bad boolean '{}' for key '{}'", v, key));
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

Setter str(std::string RunConfig::*m) { return [m](RunConfig& c, const std::string& v, const std::string&) { c.*m = v; }; }
Setter num(double RunConfig::*m) { return [m](RunConfig& c, const std::string& v, const std::string& k) { c.*m = parse_number<double>(v, k); }; }
Setter integer(int RunConfig::*m) { return [m](RunConfig& c, const std::string& v, const std::string& k) { c.*m = parse_number<int>(v, k); }; }
Setter flag(bool RunConfig::*m) { return [m](RunConfig& c, const std::string& v, const std::string& k) { c.*m = parse_bool(v, k); }; }

const std::map<std::string, std::map<std::string, Setter>>& schema()
{
    static const std::map<std::string, std::map<std::string, Setter>> s{
        {"run",
         {{"subcommand", str(&RunConfig::subcommand)},
          {"scenario", str(&RunConfig::scenario)},
          {"seed", [](RunConfig& c, const std::string& v, const std::string& k) { c.seed = parse_number<std::uint64_t>(v, k); }},
          {"output", str(&RunConfig::output)},
          {"format", str(&RunConfig::format)},
          {"point", str(&RunConfig::point)}}},
        {"cone",
         {{"scales", integer(&RunConfig::scales)},
          {"samples_per_scale", integer(&RunConfig::samples_per_scale)},
          {"relation_tol", num(&RunConfig::relation_tol)},
          {"coverage_eps", num(&RunConfig::coverage_eps)}}},
        {"transversal",
         {{"theta_min", num(&RunConfig::theta_min)}, {"nbhd_radius", num(&RunConfig::nbhd_radius)}, {"levels", integer(&RunConfig::levels)}}},
        {"eta", {{"safety", num(&RunConfig::safety)}, {"rays", integer(&RunConfig::rays)}}},
        {"scan",
         {{"grid", integer(&RunConfig::grid)},
          {"members", integer(&RunConfig::members)},
          {"gap_fraction", num(&RunConfig::gap_fraction)},
          {"near_radius", num(&RunConfig::near_radius)}}},
        {"complete", {{"rungs", integer(&RunConfig::rungs)}, {"cauchy_tol", num(&RunConfig::cauchy_tol)}, {"growth", num(&RunConfig::growth)}}},
        {"converge",
         {{"family", str(&RunConfig::family)},
          {"steps", integer(&RunConfig::steps)},
          {"base_scale", num(&RunConfig::base_scale)},
          {"with_singular", flag(&RunConfig::with_singular)}}},
        {"ex32",
         {{"k", integer(&RunConfig::k)}, {"rho", num(&RunConfig::rho)}, {"log_scale", num(&RunConfig::log_scale)}, {"grid", integer(&RunConfig::ex32_grid)}}},
        {"custom", {{"field", str(&RunConfig::field)}, {"radii", str(&RunConfig::radii)}, {"singular_set", str(&RunConfig::singular_set)}}},
    };
    return s;
}

const char* const kSampling[] = {"cone", "transversal", "report"};

}  // namespace

bool is_sampling_subcommand(std::string_view sub)
{
    return std::find(std::begin(kSampling), std::end(kSampling), sub) != std::end(kSampling);
}

void RunConfig::require_seed(std::string_view sub) const
{
    if (is_sampling_subcommand(sub) && !seed) throw std::invalid_argument(fmt::format("missing seed: '{}' samples and needs seed = <u64>", sub));
}

RunConfig parse_config(std::string_view text)
{
    RunConfig cfg;
    std::string section = "run";
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw std::invalid_argument(fmt::format("line {}: malformed section header", lineno));
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!schema().count(section)) throw std::invalid_argument(fmt::format("line {}: unknown section [{}]", lineno, section));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument(fmt::format("line {}: expected key = value", lineno));
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto& keys = schema().at(section);
        auto it = keys.find(key);
        if (it == keys.end()) throw std::invalid_argument(fmt::format("line {}: unknown key '{}' in [{}]", lineno, key, section));
        it->second(cfg, value, key);
    }

    if (cfg.format != "csv" && cfg.format != "text") throw std::invalid_argument("format must be csv or text");
    if (cfg.family != "shrink" && cfg.family != "translate") throw std::invalid_argument("family must be shrink or translate");
    if (!cfg.field.empty()) {
        // validate literals now so errors point at the config, not at a later run
        const auto comps = parse_components(cfg.field);
        if (!cfg.singular_set.empty()) (void)AnalyticSetModel::parse(cfg.singular_set, static_cast<int>(comps.size()), true);
    }
    if (!cfg.scenario.empty() && cfg.scenario != "custom") (void)scenario(cfg.scenario);
    if (cfg.scenario == "custom" && cfg.field.empty()) throw std::invalid_argument("scenario = custom needs [custom] field");
    if (!cfg.subcommand.empty()) cfg.require_seed(cfg.subcommand);
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string RunConfig::echo() const
{
    std::string o;
    auto put = [&o](std::string_view k, const std::string& v) { o += fmt::format("# {} = {}\n", k, v); };
    auto g = [](double v) { return fmt::format("{:.17g}", v); };
    put("subcommand", subcommand);
    put("scenario", scenario);
    put("seed", seed ? std::to_string(*seed) : std::string("none"));
    put("output", output.empty() ? "stdout" : output);
    put("format", format);
    put("point", point);
    put("scales", std::to_string(scales));
    put("samples_per_scale", std::to_string(samples_per_scale));
    put("relation_tol", g(relation_tol));
    put("coverage_eps", g(coverage_eps));
    put("theta_min", g(theta_min));
    put("nbhd_radius", g(nbhd_radius));
    put("levels", std::to_string(levels));
    put("safety", g(safety));
    put("rays", std::to_string(rays));
    put("grid", std::to_string(grid));
    put("members", std::to_string(members));
    put("gap_fraction", g(gap_fraction));
    put("near_radius", g(near_radius));
    put("rungs", std::to_string(rungs));
    put("cauchy_tol", g(cauchy_tol));
    put("growth", g(growth));
    put("family", family);
    put("steps", std::to_string(steps));
    put("base_scale", g(base_scale));
    put("with_singular", with_singular ? "true" : "false");
    put("k", std::to_string(k));
    put("rho", g(rho));
    put("log_scale", g(log_scale));
    put("ex32_grid", std::to_string(ex32_grid));
    if (!field.empty()) {
        put("field", field);
        put("radii", radii);
        put("singular_set", singular_set);
    }
    return o;
}

}  // namespace foliation
