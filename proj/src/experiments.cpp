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

#include "qhop/experiments.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include "qhop/propagators.hpp"
#include "qhop/resources.hpp"

namespace qhop::experiments {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// ---------------------------------------------------------------------------
// Potential expressions.

using Scalar = std::function<double(double)>;

class ExpressionParser {
  public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    Scalar parse() {
        Scalar out = sum();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return out;
    }

  private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ValidationError("potential expression: " + what + " at offset " + std::to_string(pos_) + " in '" +
                              std::string(text_) + "'");
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Scalar sum() {
        Scalar lhs = product();
        while (true) {
            if (accept('+')) {
                Scalar rhs = product();
                lhs = [lhs, rhs](double x) { return lhs(x) + rhs(x); };
            } else if (accept('-')) {
                Scalar rhs = product();
                lhs = [lhs, rhs](double x) { return lhs(x) - rhs(x); };
            } else {
                return lhs;
            }
        }
    }

    Scalar product() {
        Scalar lhs = unary();
        while (true) {
            if (accept('*')) {
                Scalar rhs = unary();
                lhs = [lhs, rhs](double x) { return lhs(x) * rhs(x); };
            } else if (accept('/')) {
                Scalar rhs = unary();
                lhs = [lhs, rhs](double x) { return lhs(x) / rhs(x); };
            } else {
                return lhs;
            }
        }
    }

    Scalar unary() {
        if (accept('-')) {
            Scalar inner = unary();
            return [inner](double x) { return -inner(x); };
        }
        if (accept('+')) return unary();
        return power();
    }

    Scalar power() {
        Scalar base = primary();
        if (accept('^')) {
            Scalar exponent = unary();
            return [base, exponent](double x) { return std::pow(base(x), exponent(x)); };
        }
        return base;
    }

    Scalar primary() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Scalar inner = sum();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    Scalar number() {
        const std::string rest(text_.substr(pos_));
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(rest, &used);
        } catch (const std::exception&) {
            fail("malformed number");
        }
        pos_ += used;
        return [value](double) { return value; };
    }

    Scalar identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name(text_.substr(start, pos_ - start));
        if (name == "x") return [](double x) { return x; };
        if (name == "pi") return [](double) { return std::numbers::pi; };
        if (name == "cos4x") return cos4x;
        double (*fn)(double) = nullptr;
        if (name == "sin") fn = [](double v) { return std::sin(v); };
        if (name == "cos") fn = [](double v) { return std::cos(v); };
        if (name == "exp") fn = [](double v) { return std::exp(v); };
        if (name == "sqrt") fn = [](double v) { return std::sqrt(v); };
        if (name == "abs") fn = [](double v) { return std::abs(v); };
        if (fn == nullptr) {
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        if (!accept('(')) fail("expected '(' after " + name);
        Scalar arg = sum();
        if (!accept(')')) fail("expected ')'");
        return [fn, arg](double x) { return fn(arg(x)); };
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Configuration helpers.

template <typename T>
std::vector<T> scalar_or_list(const Json& value, const char* key) {
    try {
        if (value.is_array()) return value.get<std::vector<T>>();
        return {value.get<T>()};
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

template <typename T>
T get_value(const Json& source, const char* key, T fallback) {
    if (!source.contains(key)) return fallback;
    try {
        return source.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i) {
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
    }
    return out;
}

std::vector<double> dyadic_steps(int first, int last) {
    std::vector<double> out;
    for (int p = first; p <= last; ++p) out.push_back(std::ldexp(1.0, -p));
    return out;
}

void validate(const RunConfig& c) {
    if (c.type != "schrodinger" && c.type != "custom-matrix-file") {
        throw ValidationError("config: type must be 'schrodinger' or 'custom-matrix-file'");
    }
    if (c.type == "custom-matrix-file" && c.matrix_file.empty()) {
        throw ValidationError("config: custom-matrix-file scenario needs 'matrix_file'");
    }
    if (!(c.total_time > 0.0) || !std::isfinite(c.total_time)) {
        throw ValidationError("config: T must be positive");
    }
    for (long long n : c.grid_sizes) {
        if (n < 2) throw ValidationError("config: N must be >= 2");
    }
    for (double h : c.steps) {
        if (!(h > 0.0) || h > c.total_time) throw ValidationError("config: h must lie in (0, T]");
    }
    for (double s : c.lags) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw ValidationError("config: commutator lags must be >= 0");
    }
    if (!(c.wavepacket.width > 0.0)) throw ValidationError("config: wavepacket width must be positive");
    if (c.random_instances < 0) throw ValidationError("config: random_instances must be >= 0");
    if (c.reference_tol && !(*c.reference_tol > 0.0)) throw ValidationError("config: reference_tol must be positive");
    for (const std::string& m : c.methods) {
        if (m != "qhop" && m != "trotter1" && m != "trotter2" && m != "dyson1") {
            throw ValidationError("config: unknown method '" + m + "'");
        }
    }
}

// ---------------------------------------------------------------------------
// Systems and evolutions.

Matrix read_matrix(const Json& node, const char* what) {
    if (!node.is_object() || !node.contains("real")) {
        throw ValidationError(std::string("matrix file: ") + what + " needs a 'real' array");
    }
    std::vector<std::vector<double>> re;
    std::vector<std::vector<double>> im;
    try {
        re = node.at("real").get<std::vector<std::vector<double>>>();
        if (node.contains("imag")) im = node.at("imag").get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("matrix file: ") + what + ": " + e.what());
    }
    const Index n = static_cast<Index>(re.size());
    if (n == 0) throw ValidationError(std::string("matrix file: ") + what + " is empty");
    if (!im.empty() && static_cast<Index>(im.size()) != n) {
        throw ValidationError(std::string("matrix file: ") + what + " real/imag shapes differ");
    }
    Matrix out(n, n);
    for (Index r = 0; r < n; ++r) {
        if (static_cast<Index>(re[r].size()) != n || (!im.empty() && static_cast<Index>(im[r].size()) != n)) {
            throw ValidationError(std::string("matrix file: ") + what + " is not square");
        }
        for (Index c = 0; c < n; ++c) out(r, c) = Complex(re[r][c], im.empty() ? 0.0 : im[r][c]);
    }
    return out;
}

struct Term {
    enum class Kind { kConstant, kCos, kSin } kind;
    double omega;
    Matrix m;
};

SplitSystem make_system(const RunConfig& c, long long n) {
    if (c.type == "custom-matrix-file") return load_matrix_system(c.matrix_file, c.total_time);
    return schrodinger_system(Grid{static_cast<Index>(n)}, parse_potential(c.potential), c.total_time);
}

UnitaryMatrix exact_propagator(const SplitSystem& s, double t, double tol) {
    if (s.b().time_independent()) {
        const Matrix h = s.a().matrix() + s.b()(0.0).matrix();
        return herm_exp(HermitianOperator(Matrix(0.5 * (h + h.adjoint()))), t);
    }
    return reference_propagator(s.full_hamiltonian(), 0.0, t, tol).propagator;
}

Matrix evolve(const SplitSystem& s, const std::string& method, const StepPlan& plan) {
    if (method == "qhop") return InteractionPicturePropagator(s, plan).evolve_qhop().matrix();
    if (method == "dyson1") return InteractionPicturePropagator(s, plan).evolve_dyson1().matrix();
    if (method == "trotter1") return matrix_power(trotter1_step(s, plan.step).matrix(), plan.segments);
    if (method == "trotter2") return matrix_power(trotter2_step(s, plan.step).matrix(), plan.segments);
    throw ValidationError("unknown method '" + method + "'");
}

ResultRow make_row(const RunConfig& c, const std::string& method, std::optional<long long> n, std::optional<double> h,
                   std::optional<long long> m, std::optional<double> k, const std::string& metric, double value,
                   double walltime) {
    return ResultRow{c.scenario, method, n, h, m, k, metric, value, walltime};
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

template <typename T>
std::string format_optional(const std::optional<T>& v) {
    if (!v) return "";
    if constexpr (std::is_floating_point_v<T>) {
        return format_double(*v);
    } else {
        return std::to_string(*v);
    }
}

double max_pair_commutator(const std::vector<Matrix>& samples) {
    double worst = 0.0;
    for (std::size_t a = 0; a < samples.size(); ++a) {
        for (std::size_t b = a + 1; b < samples.size(); ++b) {
            worst = std::max(worst, spectral_norm(commutator(samples[a], samples[b])));
        }
    }
    return worst;
}

TimeDependentHamiltonian random_oscillating(std::mt19937_64& rng, Index dim, double omega, double horizon) {
    std::normal_distribution<double> g(0.0, 1.0);
    auto herm = [&]() {
        Matrix m(dim, dim);
        for (Index r = 0; r < dim; ++r) {
            for (Index c = 0; c < dim; ++c) m(r, c) = Complex(g(rng), g(rng));
        }
        const Matrix h = 0.5 * (m + m.adjoint());
        return Matrix(h / spectral_norm(h));
    };
    const Matrix h0 = herm();
    const Matrix h1 = herm();
    const Matrix h2 = herm();
    TimeDependentHamiltonian::Options options;
    options.horizon = horizon;
    options.alpha = 3.0;
    options.beta = 2.0 * omega;
    options.derivative = [h1, h2, omega](double t) {
        return Matrix(-omega * std::sin(omega * t) * h1 + omega * std::cos(omega * t) * h2);
    };
    return TimeDependentHamiltonian(
        dim, [h0, h1, h2, omega](double t) { return Matrix(h0 + std::cos(omega * t) * h1 + std::sin(omega * t) * h2); },
        options);
}

}  // namespace

// ---------------------------------------------------------------------------

std::function<double(double)> parse_potential(std::string_view expression) {
    return ExpressionParser(expression).parse();
}

double RunConfig::tolerance_for(long long n) const {
    if (reference_tol) return *reference_tol;
    return n <= 128 ? 1e-10 : 1e-8;
}

RunConfig make_config(std::string_view subcommand, const Json& source) {
    if (!source.is_object()) throw ValidationError("config: top level must be a JSON object");
    RunConfig c;
    c.subcommand = std::string(subcommand);
    c.scenario = get_value<std::string>(source, "scenario", c.subcommand);
    c.methods = {"qhop", "trotter2", "dyson1"};
    if (subcommand == "commutator-scan") {
        c.grid_sizes = {128, 256, 512};
        c.lags = log_spaced(1e-3, 1.0, 25);
        c.lags.insert(c.lags.begin(), 0.0);
    } else if (subcommand == "converge-h") {
        c.steps = dyadic_steps(3, 8);
    } else if (subcommand == "scale-n") {
        c.grid_sizes = {8, 16, 32, 64, 128, 256, 512};
        c.steps = {1.0 / 64.0};
    } else if (subcommand == "wavepacket-k") {
        c.grid_sizes = {512};
        c.steps = {1.0 / 64.0};
        c.methods = {"qhop", "trotter2"};
        c.wavepacket = {-1.0, 20.0, {0.0, 1.0, 4.0, 16.0, 64.0}};
    } else if (subcommand == "bound-check") {
        c.grid_sizes = {64};
        c.steps = dyadic_steps(3, 6);
        c.methods = {"qhop"};
        c.rule = {QuadratureKind::kRiemannLeft, 64};
    } else if (subcommand == "estimate") {
        c.steps.clear();
    } else {
        throw ValidationError("unknown subcommand '" + std::string(subcommand) + "'");
    }

    c.type = get_value<std::string>(source, "type", c.type);
    if (source.contains("N")) c.grid_sizes = scalar_or_list<long long>(source.at("N"), "N");
    c.potential = get_value<std::string>(source, "potential", c.potential);
    c.matrix_file = get_value<std::string>(source, "matrix_file", c.matrix_file);
    c.total_time = get_value<double>(source, "T", c.total_time);
    if (source.contains("h")) c.steps = scalar_or_list<double>(source.at("h"), "h");
    if (source.contains("methods")) c.methods = scalar_or_list<std::string>(source.at("methods"), "methods");
    if (source.contains("quadrature")) {
        c.rule = QuadratureRule{parse_quadrature_kind(get_value<std::string>(source, "quadrature", "")), c.rule.nodes};
    }
    if (source.contains("M")) c.rule = QuadratureRule{c.rule.kind, get_value<int>(source, "M", c.rule.nodes)};
    if (source.contains("wavepacket")) {
        const Json& w = source.at("wavepacket");
        c.wavepacket.center = get_value<double>(w, "center", c.wavepacket.center);
        c.wavepacket.width = get_value<double>(w, "a", c.wavepacket.width);
        if (w.contains("k")) c.wavepacket.frequencies = scalar_or_list<double>(w.at("k"), "k");
    }
    if (source.contains("s")) c.lags = scalar_or_list<double>(source.at("s"), "s");
    c.seed = get_value<std::uint64_t>(source, "seed", c.seed);
    if (source.contains("reference_tol")) c.reference_tol = get_value<double>(source, "reference_tol", 0.0);
    c.include_1024 = get_value<bool>(source, "include_1024", c.include_1024);
    c.random_instances = get_value<int>(source, "random_instances", c.random_instances);
    if (source.contains("estimate")) c.estimate = source.at("estimate");
    c.source = source;
    validate(c);
    return c;
}

RunConfig load_config(std::string_view subcommand, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("config: '" + path + "' is not valid JSON: " + e.what());
    }
    return make_config(subcommand, doc);
}

std::uint64_t config_hash(const RunConfig& c) {
    Json canonical = c.source;
    canonical["subcommand"] = c.subcommand;
    canonical["seed"] = c.seed;
    canonical["include_1024"] = c.include_1024;
    const std::string text = canonical.dump();
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

SplitSystem parse_matrix_system(const Json& doc, double horizon) {
    if (!doc.is_object() || !doc.contains("B")) throw ValidationError("matrix file: needs a 'B' term list");
    std::vector<Term> terms;
    const Json& b = doc.at("B");
    const Json list = b.is_array() ? b : Json::array({b});
    for (const Json& node : list) {
        const std::string kind = get_value<std::string>(node, "kind", "constant");
        Term t{Term::Kind::kConstant, get_value<double>(node, "omega", 0.0), read_matrix(node, "B term")};
        if (kind == "cos") {
            t.kind = Term::Kind::kCos;
        } else if (kind == "sin") {
            t.kind = Term::Kind::kSin;
        } else if (kind != "constant") {
            throw ValidationError("matrix file: term kind must be constant, cos or sin");
        }
        if (!terms.empty()) require_same_dim(terms.front().m.rows(), t.m.rows(), "matrix file terms");
        if (max_abs(t.m - t.m.adjoint()) > 1e-10 * std::max(1.0, max_abs(t.m))) {
            throw ValidationError("matrix file: B term is not Hermitian");
        }
        terms.push_back(std::move(t));
    }
    if (terms.empty()) throw ValidationError("matrix file: 'B' is empty");
    const Index dim = terms.front().m.rows();
    Matrix a = Matrix::Zero(dim, dim);
    if (doc.contains("A")) {
        a = read_matrix(doc.at("A"), "A");
        require_same_dim(a.rows(), dim, "matrix file A");
    }
    horizon = get_value<double>(doc, "horizon", horizon);
    const bool constant =
        std::all_of(terms.begin(), terms.end(), [](const Term& t) { return t.kind == Term::Kind::kConstant; });
    if (constant) {
        Matrix sum = Matrix::Zero(dim, dim);
        for (const Term& t : terms) sum += t.m;
        return SplitSystem(HermitianOperator(a), TimeDependentHamiltonian::constant(HermitianOperator(sum), horizon));
    }
    auto eval = [terms, dim](double t, bool derivative) {
        Matrix out = Matrix::Zero(dim, dim);
        for (const Term& term : terms) {
            const double w = term.omega;
            switch (term.kind) {
                case Term::Kind::kConstant:
                    if (!derivative) out += term.m;
                    break;
                case Term::Kind::kCos:
                    out += (derivative ? -w * std::sin(w * t) : std::cos(w * t)) * term.m;
                    break;
                case Term::Kind::kSin:
                    out += (derivative ? w * std::cos(w * t) : std::sin(w * t)) * term.m;
                    break;
            }
        }
        return out;
    };
    TimeDependentHamiltonian::Options options;
    options.horizon = horizon;
    options.derivative = [eval](double t) { return eval(t, true); };
    return SplitSystem(HermitianOperator(a),
                       TimeDependentHamiltonian(dim, [eval](double t) { return eval(t, false); }, options));
}

SplitSystem load_matrix_system(const std::string& path, double horizon) {
    std::ifstream in(path);
    if (!in) throw ValidationError("matrix file: cannot open '" + path + "'");
    try {
        return parse_matrix_system(Json::parse(in), horizon);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("matrix file: '" + path + "': " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Output.

void sort_rows(std::vector<ResultRow>& rows) {
    auto key = [](const ResultRow& r) {
        return std::make_tuple(r.scenario, r.method, r.metric, r.n.value_or(-1), r.h.value_or(-1.0), r.m.value_or(-1),
                               r.k.value_or(-1.0));
    };
    std::stable_sort(rows.begin(), rows.end(), [&](const ResultRow& a, const ResultRow& b) { return key(a) < key(b); });
}

Json meta_header(const RunConfig& c, const RunResult& result, bool timing) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(config_hash(c)));
    Json meta;
    meta["config_hash"] = hash;
    meta["subcommand"] = c.subcommand;
    meta["seed"] = c.seed;
    Json tol = Json::object();
    for (long long n : c.grid_sizes) tol[std::to_string(n)] = c.tolerance_for(n);
    meta["reference_tol"] = tol;
    meta["summary"] = result.summary;
    if (timing) meta["walltime_s"] = result.walltime_s;
    return meta;
}

std::string to_csv(const RunConfig& c, const RunResult& result, bool timing) {
    std::vector<ResultRow> rows = result.rows;
    sort_rows(rows);
    std::ostringstream out;
    out << "# " << meta_header(c, result, timing).dump() << '\n';
    out << kCsvHeader << '\n';
    for (const ResultRow& r : rows) {
        out << r.scenario << ',' << r.method << ',' << format_optional(r.n) << ',' << format_optional(r.h) << ','
            << format_optional(r.m) << ',' << format_optional(r.k) << ',' << r.metric << ',' << format_double(r.value)
            << ',' << (timing ? format_double(r.walltime_s) : std::string("0")) << '\n';
    }
    return out.str();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("loglog_slope: need >= 2 paired points");
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ValidationError("loglog_slope: values must be positive");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= x.size();
    my /= x.size();
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
        sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    }
    return sxy / sxx;
}

// ---------------------------------------------------------------------------
// Runs.

RunResult run_commutator_scan(const RunConfig& c) {
    if (c.type != "schrodinger") throw ValidationError("commutator-scan: requires the schrodinger scenario");
    const auto start = Clock::now();
    RunResult result;
    std::vector<long long> sizes = c.grid_sizes;
    if (c.include_1024 && std::find(sizes.begin(), sizes.end(), 1024) == sizes.end()) sizes.push_back(1024);
    for (long long n : sizes) {
        const SplitSystem s = make_system(c, n);
        std::vector<double> xs;
        std::vector<double> ys;
        for (double lag : c.lags) {
            const auto cell = Clock::now();
            const double value = lag == 0.0 ? 0.0 : interaction_commutator(s, 0.0, lag);
            result.rows.push_back(
                make_row(c, "commutator", n, lag, std::nullopt, std::nullopt, "commutator_norm", value, seconds_since(cell)));
            if (lag > 0.0 && value > 0.0) {
                xs.push_back(lag);
                ys.push_back(value);
            }
        }
        if (xs.size() >= 2) {
            const double slope = loglog_slope(xs, ys);
            double mean_log = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) mean_log += std::log(ys[i]) - slope * std::log(xs[i]);
            result.summary["fits"][std::to_string(n)] = {{"slope", slope},
                                                         {"prefactor", std::exp(mean_log / xs.size())}};
        }
    }
    result.walltime_s = seconds_since(start);
    return result;
}

RunResult run_convergence_h(const RunConfig& c) {
    const auto start = Clock::now();
    RunResult result;
    for (long long n : c.grid_sizes) {
        const SplitSystem s = make_system(c, n);
        const long long dim = s.dim();
        const Matrix exact = exact_propagator(s, c.total_time, c.tolerance_for(dim)).matrix();
        for (const std::string& method : c.methods) {
            std::vector<double> hs;
            std::vector<double> errs;
            for (double h : c.steps) {
                const auto cell = Clock::now();
                const StepPlan plan = StepPlan::from_step(c.total_time, h, c.rule);
                const double err = operator_error(evolve(s, method, plan), exact);
                result.rows.push_back(
                    make_row(c, method, dim, h, c.rule.nodes, std::nullopt, "operator_error", err, seconds_since(cell)));
                hs.push_back(h);
                errs.push_back(err);
            }
            if (hs.size() >= 2) result.summary["slopes"][method][std::to_string(dim)] = loglog_slope(hs, errs);
        }
    }
    result.walltime_s = seconds_since(start);
    return result;
}

RunResult run_scale_n(const RunConfig& c) {
    if (c.type != "schrodinger") throw ValidationError("scale-n: requires the schrodinger scenario");
    const auto start = Clock::now();
    RunResult result;
    for (long long n : c.grid_sizes) {
        const SplitSystem s = make_system(c, n);
        const Matrix exact = exact_propagator(s, c.total_time, c.tolerance_for(n)).matrix();
        const Grid grid{static_cast<Index>(n)};
        const double k = c.wavepacket.frequencies.front();
        const StateVector psi = build_wavepacket(grid, c.wavepacket.center, c.wavepacket.width, k);
        for (const std::string& method : c.methods) {
            for (double h : c.steps) {
                const auto cell = Clock::now();
                const StepPlan plan = StepPlan::from_step(c.total_time, h, c.rule);
                const Matrix approx = evolve(s, method, plan);
                const double wall = seconds_since(cell);
                result.rows.push_back(make_row(c, method, n, h, c.rule.nodes, std::nullopt, "operator_error",
                                               operator_error(approx, exact), wall));
                result.rows.push_back(
                    make_row(c, method, n, h, c.rule.nodes, k, "vector_error", vector_error(approx, exact, psi), wall));
            }
        }
    }
    result.walltime_s = seconds_since(start);
    return result;
}

RunResult run_wavepacket_k(const RunConfig& c) {
    if (c.type != "schrodinger") throw ValidationError("wavepacket-k: requires the schrodinger scenario");
    const auto start = Clock::now();
    RunResult result;
    for (long long n : c.grid_sizes) {
        const SplitSystem s = make_system(c, n);
        const Matrix exact = exact_propagator(s, c.total_time, c.tolerance_for(n)).matrix();
        const Grid grid{static_cast<Index>(n)};
        for (const std::string& method : c.methods) {
            for (double h : c.steps) {
                const auto cell = Clock::now();
                const StepPlan plan = StepPlan::from_step(c.total_time, h, c.rule);
                const Matrix approx = evolve(s, method, plan);
                const double wall = seconds_since(cell);
                for (double k : c.wavepacket.frequencies) {
                    const StateVector psi = build_wavepacket(grid, c.wavepacket.center, c.wavepacket.width, k);
                    result.rows.push_back(
                        make_row(c, method, n, h, c.rule.nodes, k, "vector_error", vector_error(approx, exact, psi), wall));
                }
            }
        }
    }
    result.walltime_s = seconds_since(start);
    return result;
}

RunResult run_bound_checks(const RunConfig& c) {
    const auto start = Clock::now();
    RunResult result;
    constexpr int kSamples = 33;
    double worst_step = 0.0;
    double worst_zeroth = 0.0;
    double worst_first = 0.0;
    double worst_interaction = 0.0;

    // Random time-dependent instances: one qHOP step against the local error bound, and
    // both commutator branches at every sampled pair.
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> freq(0.5, 8.0);
    const std::vector<Index> dims{2, 4, 8, 16};
    const std::vector<int> node_counts{1, 2, 4, 8};
    for (int trial = 0; trial < c.random_instances; ++trial) {
        const auto cell = Clock::now();
        const Index dim = dims[trial % dims.size()];
        const double omega = freq(rng);
        const TimeDependentHamiltonian h = random_oscillating(rng, dim, omega, 1.0);
        const int segments = 4 << (trial % 4);
        const int m = node_counts[(trial / 4) % node_counts.size()];
        const StepPlan plan = StepPlan::make(1.0, segments, {QuadratureKind::kRiemannLeft, m});
        const int j = static_cast<int>(rng() % static_cast<std::uint64_t>(segments));
        const double t0 = j * plan.step;
        const double err =
            operator_error(qhop_step(h, plan, j).matrix(), reference_propagator(h, t0, t0 + plan.step, 1e-12).propagator.matrix());
        std::vector<Matrix> samples;
        std::vector<double> times;
        double deriv = 0.0;
        for (int a = 0; a < kSamples; ++a) {
            times.push_back(t0 + plan.step * a / (kSamples - 1));
            samples.push_back(h(times.back()).matrix());
            deriv = std::max(deriv, spectral_norm(h.derivative(times.back()).matrix()));
        }
        double zeroth = 0.0;
        double first = 0.0;
        double comm = 0.0;
        for (int a = 0; a < kSamples; ++a) {
            for (int b = a + 1; b < kSamples; ++b) {
                const double v = spectral_norm(commutator(samples[a], samples[b]));
                comm = std::max(comm, v);
                zeroth = std::max(zeroth, v / (2.0 * h.alpha() * h.alpha()));
                first = std::max(first, v / (2.0 * h.alpha() * h.beta() * (times[b] - times[a])));
            }
        }
        const double ratio = err / local_error_bound(plan.step, m, comm, deriv);
        const double wall = seconds_since(cell);
        const auto n = static_cast<long long>(dim);
        result.rows.push_back(make_row(c, "random-qhop-step-" + std::to_string(trial), n, plan.step, m, std::nullopt,
                                       "bound_ratio", ratio, wall));
        result.rows.push_back(make_row(c, "random-commutator-zeroth-" + std::to_string(trial), n, plan.step, m,
                                       std::nullopt, "bound_ratio", zeroth, wall));
        result.rows.push_back(make_row(c, "random-commutator-first-" + std::to_string(trial), n, plan.step, m,
                                       std::nullopt, "bound_ratio", first, wall));
        worst_step = std::max(worst_step, ratio);
        worst_zeroth = std::max(worst_zeroth, zeroth);
        worst_first = std::max(worst_first, first);
    }

    // Schrödinger system: one interaction-picture step per h, and the
    // interaction-picture commutator branches on a lag grid.
    if (c.type == "schrodinger") {
        for (long long n : c.grid_sizes) {
            const SplitSystem s = make_system(c, n);
            const double alpha_b = s.alpha_b();
            const double rate = s.alpha_ab() + s.beta_b();
            for (double step : c.steps) {
                const auto cell = Clock::now();
                const StepPlan plan = StepPlan::from_step(c.total_time, step, c.rule);
                const int j = plan.segments / 2;
                const double t0 = j * step;
                const double err = operator_error(qhop_interaction_step(s, plan, j).matrix(),
                                                  interaction_reference_step(s, plan, j).matrix());
                std::vector<Matrix> samples;
                for (int a = 0; a < kSamples; ++a) {
                    samples.push_back(interaction_hamiltonian(s, t0 + step * a / (kSamples - 1)).matrix());
                }
                const double comm = max_pair_commutator(samples);
                double zeroth = 0.0;
                double first = 0.0;
                for (int a = 1; a < kSamples; ++a) {
                    const double lag = step * a / (kSamples - 1);
                    const double v = interaction_commutator(s, t0, lag);
                    zeroth = std::max(zeroth, v / (2.0 * alpha_b * alpha_b));
                    first = std::max(first, v / (2.0 * alpha_b * rate * lag));
                }
                const double ratio = err / local_error_bound(step, plan.rule.nodes, comm, rate);
                const double wall = seconds_since(cell);
                result.rows.push_back(make_row(c, "schrodinger-qhop-step", n, step, plan.rule.nodes, std::nullopt,
                                               "bound_ratio", ratio, wall));
                result.rows.push_back(make_row(c, "schrodinger-commutator-zeroth", n, step, plan.rule.nodes,
                                               std::nullopt, "bound_ratio", zeroth, wall));
                result.rows.push_back(make_row(c, "schrodinger-commutator-first", n, step, plan.rule.nodes,
                                               std::nullopt, "bound_ratio", first, wall));
                worst_step = std::max(worst_step, ratio);
                worst_interaction = std::max({worst_interaction, zeroth, first});
            }
        }
    }
    result.summary["max_step_ratio"] = worst_step;
    result.summary["max_commutator_zeroth_ratio"] = worst_zeroth;
    result.summary["max_commutator_first_ratio"] = worst_first;
    result.summary["max_interaction_commutator_ratio"] = worst_interaction;
    result.walltime_s = seconds_since(start);
    return result;
}

namespace {

Json to_json(const ResourceEstimate& e) {
    return Json{{"method", e.method},
                {"segments", e.segments},
                {"nodes", e.nodes},
                {"step", e.step},
                {"delta", e.delta},
                {"step_error", e.step_error},
                {"ham_t_queries", e.ham_t_queries},
                {"oa_queries", e.oa_queries},
                {"ob_queries", e.ob_queries},
                {"gate_count", e.gate_count},
                {"ancillas", e.ancillas},
                {"label", "formula-level estimate"}};
}

Json branches(const BranchPlan& plan, const std::string& method) {
    Json zeroth = to_json(plan.zeroth);
    Json first = to_json(plan.first);
    zeroth["method"] = method + "-theta0";
    first["method"] = method + "-theta1";
    return Json::array({zeroth, first});
}

double nested_norm(const Matrix& x, const Matrix& y) { return spectral_norm(commutator(x, commutator(x, y))); }

}  // namespace

std::vector<Json> estimate(const RunConfig& c) {
    const Json& p = c.estimate;
    const double t = get_value<double>(p, "T", c.total_time);
    const double eps = get_value<double>(p, "epsilon", 1e-3);
    const int ancillas = get_value<int>(p, "ancillas", 1);
    std::optional<SplitSystem> system;
    if (!c.grid_sizes.empty() && (c.type == "custom-matrix-file" || c.source.contains("N") || !p.contains("alpha_b"))) {
        RunConfig sized = c;
        sized.total_time = t;
        system.emplace(make_system(sized, c.grid_sizes.front()));
    }
    auto value = [&](const char* key, const std::function<double()>& derive) {
        if (p.contains(key)) return get_value<double>(p, key, 0.0);
        if (!system) throw ValidationError(std::string("estimate: missing parameter '") + key + "'");
        return derive();
    };

    std::vector<Json> out;
    // General qHOP applies only to a time-dependent Hamiltonian.
    if (p.contains("alpha") || (system && !system->b().time_independent())) {
        const auto full = system ? std::optional<TimeDependentHamiltonian>(system->full_hamiltonian()) : std::nullopt;
        const double alpha = value("alpha", [&] { return full->alpha(); });
        const double deriv = value("max_derivative", [&] { return full->beta(); });
        const double window = value("window_commutator", [&] { return 2.0 * alpha * alpha; });
        const double dcomm = value("derivative_commutator", [&] { return 2.0 * alpha * deriv; });
        const BranchPlan plan = qhop_branch_plan({alpha, window, dcomm, deriv, t, eps, ancillas});
        Json rec = to_json(plan.chosen);
        rec["method"] = "qhop";
        rec["branches"] = branches(plan, rec["method"]);
        out.push_back(rec);
        BaselineParams b;
        b.total_time = t;
        b.epsilon = eps;
        b.alpha = alpha;
        b.norm_integral = value("norm_integral", [&] { return alpha * t; });
        out.push_back(to_json(baseline_queries(BaselineMethod::kDyson1, b)));
        out.push_back(to_json(baseline_queries(BaselineMethod::kQdrift, b)));
    }
    if (p.contains("alpha_b") || system) {
        const double alpha_b = value("alpha_b", [&] { return system->alpha_b(); });
        const double beta_b = value("beta_b", [&] { return system->beta_b(); });
        const double alpha_ab = value("alpha_ab", [&] { return system->alpha_ab(); });
        const BranchPlan plan = qhop_interaction_branch_plan(alpha_b, beta_b, alpha_ab, t, eps, ancillas);
        Json rec = to_json(plan.chosen);
        rec["method"] = "qhop-interaction";
        rec["branches"] = branches(plan, rec["method"]);
        out.push_back(rec);
        BaselineParams b;
        b.total_time = t;
        b.epsilon = eps;
        b.alpha = alpha_b;
        b.norm_integral = alpha_b * t;
        Json dyson = to_json(baseline_queries(BaselineMethod::kDyson1, b));
        dyson["method"] = "dyson1-interaction";
        out.push_back(dyson);
        Json qdrift = to_json(baseline_queries(BaselineMethod::kQdrift, b));
        qdrift["method"] = "qdrift-interaction";
        out.push_back(qdrift);
        const bool splittable = p.contains("commutator_ab") || (system && system->b().time_independent());
        if (splittable) {
            const auto a = [&] { return system->a().matrix(); };
            const auto bm = [&] { return system->b()(0.0).matrix(); };
            b.commutator_ab = value("commutator_ab", [&] { return spectral_norm(commutator(a(), bm())); });
            b.nested_bba = value("nested_bba", [&] { return nested_norm(bm(), a()); });
            b.nested_aab = value("nested_aab", [&] { return nested_norm(a(), bm()); });
            out.push_back(to_json(baseline_queries(BaselineMethod::kTrotter1, b)));
            out.push_back(to_json(baseline_queries(BaselineMethod::kTrotter2, b)));
        }
    }
    if (out.empty()) throw ValidationError("estimate: no method has enough parameters");
    return out;
}

RunResult run(const RunConfig& c) {
    if (c.subcommand == "commutator-scan") return run_commutator_scan(c);
    if (c.subcommand == "converge-h") return run_convergence_h(c);
    if (c.subcommand == "scale-n") return run_scale_n(c);
    if (c.subcommand == "wavepacket-k") return run_wavepacket_k(c);
    if (c.subcommand == "bound-check") return run_bound_checks(c);
    throw ValidationError("run: subcommand '" + c.subcommand + "' does not produce CSV");
}

}  // namespace qhop::experiments
