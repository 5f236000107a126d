#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace foliation {

// Settings of one run. Every field has a documented default that `echo` writes back out.
struct RunConfig {
    // [run]
    std::string subcommand;
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::string output;
    std::string format = "csv";
    // [cone]
    int scales = 21;
    int samples_per_scale = 8000;
    double relation_tol = 1e-8;
    double coverage_eps = 0.05;
    // [transversal]
    double theta_min = 0.1;
    double nbhd_radius = 0.0;
    int levels = 5;
    // [eta]
    double safety = 0.9;
    int rays = 48;
    // [scan]
    int grid = 12;
    int members = 12;
    double gap_fraction = 0.1;
    double near_radius = 0.0;
    // [complete]
    int rungs = 20;
    double cauchy_tol = 1e-3;
    double growth = 0.5;
    // [converge]
    std::string family = "shrink";
    int steps = 64;
    double base_scale = 0.4;
    bool with_singular = true;
    // [ex32]
    int k = 1;
    double rho = 0.5;
    double log_scale = 2.0;
    int ex32_grid = 9;
    // [point] shared by cone, transversal and eta
    std::string point;
    // [custom] user field on a polydisc
    std::string field;
    std::string radii;
    std::string singular_set;

    std::string echo() const;
    // Throws when a sampling subcommand runs without a seed.
    void require_seed(std::string_view subcommand) const;
};

bool is_sampling_subcommand(std::string_view subcommand);

// Line-based `key = value` text with `[section]` headers and `#` comments.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

}  // namespace foliation
