// Copyright 2026 The qhop Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qhop/hamiltonian.hpp"
#include "qhop/quadrature.hpp"

namespace qhop::experiments {

using Json = nlohmann::json;

/// Parses a scalar potential V(x) from an arithmetic expression in x.
/// Supports + - * / ^, parentheses, unary minus, sin, cos, exp, sqrt, abs,
/// the constant pi, and the keyword "cos4x".
std::function<double(double)> parse_potential(std::string_view expression);

struct WavepacketParams {
    double center = -1.0;
    double width = 4.0;
    std::vector<double> frequencies{1.0};
};

struct RunConfig {
    std::string subcommand;
    std::string scenario;
    std::string type = "schrodinger";  // "schrodinger" or "custom-matrix-file"
    std::vector<long long> grid_sizes{128};
    std::string potential = "cos4x";
    std::string matrix_file;
    double total_time = 0.5;
    std::vector<double> steps;
    std::vector<std::string> methods;
    QuadratureRule rule{QuadratureKind::kTrapezoid, 512};
    WavepacketParams wavepacket;
    std::vector<double> lags;  // commutator-scan s grid
    std::uint64_t seed = 20260101;
    std::optional<double> reference_tol;
    bool include_1024 = false;
    int random_instances = 100;
    Json estimate = Json::object();
    Json source = Json::object();

    /// Reference-propagator tolerance: explicit value, else 1e-10 for N <= 128 and 1e-8 above.
    double tolerance_for(long long n) const;
};

/// Builds a run configuration with subcommand defaults, overridden by `source`.
RunConfig make_config(std::string_view subcommand, const Json& source = Json::object());
RunConfig load_config(std::string_view subcommand, const std::string& path);

/// 64-bit FNV-1a of the canonical JSON dump.
std::uint64_t config_hash(const RunConfig& config);

/// Custom-matrix-file scenario: {"A": matrix?, "B": [term...], "horizon"?}, where
/// a matrix is {"real": [[...]], "imag": [[...]]?} and a term is a matrix plus
/// "kind" in {"constant", "cos", "sin"} and "omega".
SplitSystem load_matrix_system(const std::string& path, double horizon);
SplitSystem parse_matrix_system(const Json& doc, double horizon);

struct ResultRow {
    std::string scenario;
    std::string method;
    std::optional<long long> n;
    std::optional<double> h;
    std::optional<long long> m;
    std::optional<double> k;
    std::string metric;  // operator_error, vector_error, commutator_norm, bound_ratio
    double value = 0.0;
    double walltime_s = 0.0;
};

struct RunResult {
    std::vector<ResultRow> rows;
    Json summary = Json::object();
    double walltime_s = 0.0;
};

inline constexpr std::string_view kCsvHeader = "scenario,method,N,h,M,k,metric,value,walltime_s";

/// CSV text: one "# {meta}" line, the fixed header, and rows in canonical order.
/// Wall times are written only when `timing` is set, so default output is byte-stable.
std::string to_csv(const RunConfig& config, const RunResult& result, bool timing);
Json meta_header(const RunConfig& config, const RunResult& result, bool timing);
void sort_rows(std::vector<ResultRow>& rows);

RunResult run_commutator_scan(const RunConfig& config);
RunResult run_convergence_h(const RunConfig& config);
RunResult run_scale_n(const RunConfig& config);
RunResult run_wavepacket_k(const RunConfig& config);
RunResult run_bound_checks(const RunConfig& config);

/// One JSON record per method.
std::vector<Json> estimate(const RunConfig& config);

/// Dispatches by subcommand name.
RunResult run(const RunConfig& config);

/// Least-squares slope of log(value) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qhop::experiments
