#include "chs/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace chs {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line) + ": key '" + key +
                        "' expects a number, got '" + v + "'");
    }
}

int parse_int(const std::string& v, const std::string& key, int line) {
    const double x = parse_double(v, key, line);
    if (x != std::floor(x))
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line) + ": key '" + key + "' expects an integer");
    return static_cast<int>(x);
}

bool parse_bool(const std::string& v, const std::string& key, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ": key '" + key + "' expects true/false");
}

std::vector<double> parse_list(const std::string& v, const std::string& key, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(item, key, line));
    }
    return out;
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

PotentialModel build_potential(const RunConfig& rc) {
    if (rc.potential_kind == "regular") return PotentialModel::regular();
    if (rc.potential_kind == "logarithmic") return PotentialModel::logarithmic(rc.potential_c);
    if (rc.potential_kind == "double_obstacle")
        return PotentialModel::double_obstacle(rc.potential_c);
    if (rc.potential_kind == "linear") return PotentialModel::linear();
    if (rc.potential_kind == "custom") {
        std::vector<std::pair<double, double>> bp;
        std::stringstream ss(rc.graph_points);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw Error(ErrorCode::ParseError,
                            "potential.graph entries must look like x:y, got '" + item + "'");
            bp.emplace_back(parse_double(trim(item.substr(0, colon)), "potential.graph", 0),
                            parse_double(trim(item.substr(colon + 1)), "potential.graph", 0));
        }
        const double cp = rc.c_pi;
        auto pi = cp > 0.0 ? std::function<double(double)>([cp](double r) { return -cp * r; })
                           : std::function<double(double)>();
        return PotentialModel::custom_graph(std::move(bp), std::move(pi), cp);
    }
    throw Error(ErrorCode::ValidationError, "unknown potential kind '" + rc.potential_kind + "'");
}

NoiseModel build_noise(const RunConfig& rc, const Domain& d) {
    if (rc.noise_kind == "silent") return NoiseModel::silent(d);
    NoiseModel nm = NoiseModel::power_law(d, rc.amplitude, rc.decay, rc.mean_mode_sigma,
                                          rc.truncation);
    if (rc.epsilon > 0.0) nm = nm.smooth_covariance(rc.epsilon);
    if (rc.noise_kind == "additive") return nm;
    if (rc.noise_kind == "multiplicative") {
        MultiplicativeLaw law;
        const double s = rc.h_scale;
        if (rc.h_kind == "one") {
            law = {[](double) { return 1.0; }, 0.0, 1.0};
        } else if (rc.h_kind == "tanh") {
            law = {[s](double v) { return std::tanh(s * v); }, s, 1.0};
        } else if (rc.h_kind == "clamp") {
            law = {[s](double v) { return std::clamp(s * v, -1.0, 1.0); }, s, 1.0};
        } else {
            throw Error(ErrorCode::ValidationError, "unknown noise.h '" + rc.h_kind + "'");
        }
        return nm.with_multiplicative(std::move(law));
    }
    throw Error(ErrorCode::ValidationError, "unknown noise kind '" + rc.noise_kind + "'");
}

ScalarField build_initial(const RunConfig& rc, const Domain& d) {
    if (rc.initial_kind == "zero") return ScalarField(d);
    if (rc.initial_kind == "constant") return ScalarField::constant(d, rc.initial_value);
    if (rc.initial_kind == "cosine") {
        const double pi = std::numbers::pi;
        const int k = rc.initial_mode;
        const double a = rc.initial_amplitude;
        const double v0 = rc.initial_value;
        return ScalarField::from_function(d, [&](double x, double) {
                   return a * std::cos(k * pi * x / d.length[0]);
               }) +
               ScalarField::constant(d, v0);
    }
    throw Error(ErrorCode::ValidationError, "unknown initial kind '" + rc.initial_kind + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig rc;
    Domain dom;
    int ndim = 1, nx = 64, ny = 64;
    double lx = 1.0, ly = 1.0;
    bool dealias = false;
    double dt = 1e-3, t_final = 0.1, lambda = 1e-2, stabilization = -1.0, blowup_guard = 1e8;
    std::string scheme = "linearly_implicit";
    int stride = 1;
    std::uint64_t seed = 0;

    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line) + ": malformed section header");
            section = s.substr(1, s.size() - 2);
            if (section != "domain" && section != "potential" && section != "noise" &&
                section != "time" && section != "initial" && section != "study" &&
                section != "output")
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line) + ": unknown section '" + section + "'");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ParseError,
                        "line " + std::to_string(line) + ": expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        const std::string full = section.empty() ? key : section + "." + key;

        if (section.empty()) {
            if (key == "seed")
                seed = static_cast<std::uint64_t>(std::strtoull(val.c_str(), nullptr, 10));
            else if (key == "schema")
                rc.schema = val;
            else
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line) + ": unknown key '" + full + "'");
        } else if (section == "domain") {
            if (key == "ndim") ndim = parse_int(val, full, line);
            else if (key == "nx") nx = parse_int(val, full, line);
            else if (key == "ny") ny = parse_int(val, full, line);
            else if (key == "lx") lx = parse_double(val, full, line);
            else if (key == "ly") ly = parse_double(val, full, line);
            else if (key == "dealias") dealias = parse_bool(val, full, line);
            else
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line) + ": unknown key '" + full + "'");
        } else if (section == "potential") {
            if (key == "kind") rc.potential_kind = val;
            else if (key == "c") rc.potential_c = parse_double(val, full, line);
            else if (key == "lambda") lambda = parse_double(val, full, line);
            else if (key == "graph") rc.graph_points = val;
            else if (key == "c_pi") rc.c_pi = parse_double(val, full, line);
            else
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line) + ": unknown key '" + full + "'");
        } else if (section == "noise") {
            if (key == "kind") rc.noise_kind = val;
            else if (key == "amplitude") rc.amplitude = parse_double(val, full, line);
            else if (key == "decay") rc.decay = parse_double(val, full, line);
            else if (key == "truncation") rc.truncation = parse_int(val, full, line);
            else if (key == "mean_mode_sigma") rc.mean_mode_sigma = parse_double(val, full, line);
            else if (key == "epsilon") rc.epsilon = parse_double(val, full, line);
            else if (key == "h") rc.h_kind = val;
            else if (key == "h_scale") rc.h_scale = parse_double(val, full, line);
            else
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line) + ": unknown key '" + full + "'");
        } else if (section == "time") {
            if (key == "dt") dt = parse_double(val, full, line);
            else if (key == "t_final") t_final = parse_double(val, full, line);
            else if (key == "scheme") scheme = val;
            else if (key == "stabilization") stabilization = parse_double(val, full, line);
            else if (key == "snapshot_stride") stride = parse_int(val, full, line);
            else if (key == "blowup_guard") blowup_guard = parse_double(val, full, line);
            else
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line) + ": unknown key '" + full + "'");
        } else if (section == "initial") {
            if (key == "kind") rc.initial_kind = val;
            else if (key == "value") rc.initial_value = parse_double(val, full, line);
            else if (key == "amplitude") rc.initial_amplitude = parse_double(val, full, line);
            else if (key == "mode") rc.initial_mode = parse_int(val, full, line);
            else
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line) + ": unknown key '" + full + "'");
        } else if (section == "study") {
            if (key == "name") rc.study_name = val;
            else if (key == "schedule") rc.schedule = parse_list(val, full, line);
            else if (key == "paths") rc.n_paths = parse_int(val, full, line);
            else if (key == "picard_iterations")
                rc.picard_iterations = parse_int(val, full, line);
            else
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line) + ": unknown key '" + full + "'");
        } else if (section == "output") {
            if (key == "dir") rc.out_dir = val;
            else if (key == "run_id") rc.run_id = val;
            else
                throw Error(ErrorCode::ParseError,
                            "line " + std::to_string(line) + ": unknown key '" + full + "'");
        }
    }

    Domain d = ndim == 1 ? Domain::line(nx, lx, dealias) : Domain::rect(nx, ny, lx, ly, dealias);
    SimulationConfig& sc = rc.simulation;
    sc.domain = d;
    sc.potential = build_potential(rc);
    sc.lambda = lambda;
    sc.noise = build_noise(rc, d);
    sc.initial = build_initial(rc, d);
    sc.dt = dt;
    sc.t_final = t_final;
    if (scheme == "linearly_implicit") {
        sc.scheme = SchemeKind::LinearlyImplicit;
    } else if (scheme == "stabilized") {
        sc.scheme = SchemeKind::Stabilized;
    } else {
        throw Error(ErrorCode::ValidationError, "unknown scheme '" + scheme + "'");
    }
    sc.stabilization = stabilization;
    sc.snapshot_stride = stride;
    sc.blowup_guard = blowup_guard;
    sc.seed = seed;
    sc.validate();
    return rc;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string RunConfig::echo() const {
    const SimulationConfig& sc = simulation;
    std::string out;
    out += "schema = " + schema + "\n";
    out += "seed = " + std::to_string(sc.seed) + "\n\n";
    out += "[domain]\n";
    out += "ndim = " + std::to_string(sc.domain.ndim) + "\n";
    out += "nx = " + std::to_string(sc.domain.n[0]) + "\n";
    if (sc.domain.ndim == 2) out += "ny = " + std::to_string(sc.domain.n[1]) + "\n";
    out += "lx = " + format17(sc.domain.length[0]) + "\n";
    if (sc.domain.ndim == 2) out += "ly = " + format17(sc.domain.length[1]) + "\n";
    out += std::string("dealias = ") + (sc.domain.dealias ? "true" : "false") + "\n\n";
    out += "[potential]\n";
    out += "kind = " + potential_kind + "\n";
    out += "c = " + format17(potential_c) + "\n";
    out += "lambda = " + format17(sc.lambda) + "\n";
    if (!graph_points.empty()) out += "graph = " + graph_points + "\n";
    if (c_pi != 0.0) out += "c_pi = " + format17(c_pi) + "\n";
    out += "\n[noise]\n";
    out += "kind = " + noise_kind + "\n";
    out += "amplitude = " + format17(amplitude) + "\n";
    out += "decay = " + format17(decay) + "\n";
    out += "truncation = " + std::to_string(truncation) + "\n";
    out += "mean_mode_sigma = " + format17(mean_mode_sigma) + "\n";
    out += "epsilon = " + format17(epsilon) + "\n";
    out += "h = " + h_kind + "\n";
    out += "h_scale = " + format17(h_scale) + "\n\n";
    out += "[time]\n";
    out += "dt = " + format17(sc.dt) + "\n";
    out += "t_final = " + format17(sc.t_final) + "\n";
    out += std::string("scheme = ") +
           (sc.scheme == SchemeKind::Stabilized ? "stabilized" : "linearly_implicit") + "\n";
    out += "stabilization = " + format17(sc.stabilization) + "\n";
    out += "snapshot_stride = " + std::to_string(sc.snapshot_stride) + "\n";
    out += "blowup_guard = " + format17(sc.blowup_guard) + "\n\n";
    out += "[initial]\n";
    out += "kind = " + initial_kind + "\n";
    out += "value = " + format17(initial_value) + "\n";
    out += "amplitude = " + format17(initial_amplitude) + "\n";
    out += "mode = " + std::to_string(initial_mode) + "\n\n";
    out += "[study]\n";
    if (!study_name.empty()) out += "name = " + study_name + "\n";
    if (!schedule.empty()) {
        out += "schedule = ";
        for (std::size_t i = 0; i < schedule.size(); ++i) {
            if (i) out += ", ";
            out += format17(schedule[i]);
        }
        out += "\n";
    }
    out += "paths = " + std::to_string(n_paths) + "\n";
    out += "picard_iterations = " + std::to_string(picard_iterations) + "\n\n";
    out += "[output]\n";
    out += "dir = " + out_dir + "\n";
    if (!run_id.empty()) out += "run_id = " + run_id + "\n";
    return out;
}

StudySpec RunConfig::study_spec() const {
    StudySpec spec;
    spec.base = simulation;
    spec.schedule = schedule;
    spec.n_paths = n_paths;
    spec.picard_iterations = picard_iterations;
    return spec;
}

}  // namespace chs
