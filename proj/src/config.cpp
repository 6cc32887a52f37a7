#include "qclock/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qclock/errors.hpp"
#include "qclock/format.hpp"

namespace qclock {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw ConfigError(field, message);
}

const json* find(const json& node, const std::string& key) {
    auto it = node.find(key);
    return it == node.end() ? nullptr : &*it;
}

double get_number(const json& node, const std::string& path, const std::string& key,
                  std::optional<double> fallback = std::nullopt) {
    const json* v = find(node, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required number");
    }
    if (!v->is_number()) fail(path + "." + key, "expected a number");
    return v->get<double>();
}

long long get_integer(const json& node, const std::string& path, const std::string& key,
                      std::optional<long long> fallback = std::nullopt) {
    const json* v = find(node, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required integer");
    }
    if (!v->is_number_integer()) fail(path + "." + key, "expected an integer");
    return v->get<long long>();
}

std::string get_string(const json& node, const std::string& path, const std::string& key,
                       std::optional<std::string> fallback = std::nullopt) {
    const json* v = find(node, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required string");
    }
    if (!v->is_string()) fail(path + "." + key, "expected a string");
    return v->get<std::string>();
}

bool get_bool(const json& node, const std::string& path, const std::string& key, bool fallback) {
    const json* v = find(node, key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(path + "." + key, "expected a boolean");
    return v->get<bool>();
}

const json& get_object(const json& node, const std::string& path, const std::string& key) {
    const json* v = find(node, key);
    if (!v) fail(path.empty() ? key : path + "." + key, "missing required section");
    if (!v->is_object()) fail(path.empty() ? key : path + "." + key, "expected an object");
    return *v;
}

Eigen::MatrixXcd parse_matrix(const json& v, const std::string& path, int dim) {
    if (v.is_string()) {
        return engine_preset(v.get<std::string>(), dim).matrix();
    }
    if (!v.is_array() || v.empty()) fail(path, "expected a matrix (rows of [re, im] pairs) or a preset name");
    const auto rows = static_cast<Eigen::Index>(v.size());
    Eigen::MatrixXcd m(rows, rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = v[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
            fail(path, "matrix must be square, row " + std::to_string(i) + " has wrong length");
        }
        for (Eigen::Index j = 0; j < rows; ++j) {
            const json& entry = row[static_cast<size_t>(j)];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                !entry[1].is_number()) {
                fail(path, "matrix entries must be [re, im] pairs");
            }
            m(i, j) = std::complex<double>(entry[0].get<double>(), entry[1].get<double>());
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) {
                fail(path, "matrix entries must be finite");
            }
        }
    }
    if (rows != dim) fail(path, "matrix dimension " + std::to_string(rows) +
                                    " does not match engine dim " + std::to_string(dim));
    return m;
}

Eigen::VectorXcd parse_engine_vector(const json& v, const std::string& path, int dim) {
    if (v.is_string()) {
        const std::string name = v.get<std::string>();
        if (name == "uniform") return Eigen::VectorXcd::Constant(dim, 1.0);
        if (name.rfind("basis", 0) == 0) {
            const int idx = std::stoi(name.substr(5));
            if (idx < 0 || idx >= dim) fail(path, "basis index out of range");
            Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
            e(idx) = 1.0;
            return e;
        }
        fail(path, "unknown engine state preset '" + name + "'");
    }
    if (!v.is_array() || static_cast<int>(v.size()) != dim) {
        fail(path, "expected " + std::to_string(dim) + " [re, im] pairs");
    }
    Eigen::VectorXcd out(dim);
    for (int i = 0; i < dim; ++i) {
        const json& entry = v[static_cast<size_t>(i)];
        if (!entry.is_array() || entry.size() != 2) fail(path, "entries must be [re, im] pairs");
        out(i) = std::complex<double>(entry[0].get<double>(), entry[1].get<double>());
    }
    if (out.norm() == 0.0) fail(path, "engine state must be nonzero");
    return out;
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

SimConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& err) {
        size_t line = 1;
        for (size_t i = 0; i + 1 < err.byte && i < json_text.size(); ++i) {
            if (json_text[i] == '\n') ++line;
        }
        throw ConfigError("line " + std::to_string(line), err.what());
    }
    if (!root.is_object()) throw ConfigError("(root)", "configuration must be a JSON object");

    SimConfig cfg;

    const json& grid = get_object(root, "", "grid");
    cfg.n_points = static_cast<int>(get_integer(grid, "grid", "n_points"));
    cfg.length = get_number(grid, "grid", "length");
    cfg.origin = get_number(grid, "grid", "origin");
    if (cfg.n_points <= 0 || (cfg.n_points & (cfg.n_points - 1)) != 0) {
        fail("grid.n_points", "must be a positive power of two");
    }
    if (!(cfg.length > 0.0)) fail("grid.length", "must be positive");

    const json& pulse = get_object(root, "", "pulse");
    cfg.pulse.center = get_number(pulse, "pulse", "x0");
    cfg.pulse.bandwidth = get_number(pulse, "pulse", "omega");
    cfg.pulse.carrier = get_number(pulse, "pulse", "k0", 0.0);
    cfg.pulse.chirp = get_number(pulse, "pulse", "chirp", 0.0);
    if (!(cfg.pulse.bandwidth > 0.0)) fail("pulse.omega", "must be positive");

    const json& dispersion = get_object(root, "", "dispersion");
    cfg.dispersion_kind = get_string(dispersion, "dispersion", "kind");
    cfg.v_g = get_number(dispersion, "dispersion", "v_g", 1.0);
    if (cfg.dispersion_kind == "linear") {
        // nothing further
    } else if (cfg.dispersion_kind == "massive") {
        cfg.mass = get_number(dispersion, "dispersion", "mass");
        if (!(cfg.mass > 0.0)) fail("dispersion.mass", "must be positive");
    } else if (cfg.dispersion_kind == "tabulated") {
        const json* table = find(dispersion, "table");
        const json* path = find(dispersion, "table_path");
        if (table) {
            if (!table->is_array() || table->size() < 3) {
                fail("dispersion.table", "expected >= 3 [k, omega] rows");
            }
            for (const auto& row : *table) {
                if (!row.is_array() || row.size() != 2) {
                    fail("dispersion.table", "rows must be [k, omega] pairs");
                }
                cfg.dispersion_table.emplace_back(row[0].get<double>(), row[1].get<double>());
            }
        } else if (path) {
            cfg.dispersion_table_path = path->get<std::string>();
        } else {
            fail("dispersion.table", "tabulated dispersion needs a table or table_path");
        }
    } else {
        fail("dispersion.kind", "unknown kind '" + cfg.dispersion_kind +
                                    "' (expected linear, massive or tabulated)");
    }
    cfg.c = get_number(root, "(root)", "c", cfg.v_g);
    if (!(cfg.c != 0.0) || !std::isfinite(cfg.c)) fail("c", "must be finite and nonzero");

    const json& engine = get_object(root, "", "engine");
    cfg.engine_dim = static_cast<int>(get_integer(engine, "engine", "dim"));
    if (cfg.engine_dim < 1 || cfg.engine_dim > 8) fail("engine.dim", "must be in 1..8");
    const json* h_e = find(engine, "h_e");
    if (!h_e) fail("engine.h_e", "missing engine Hamiltonian");
    cfg.h_engine = parse_matrix(*h_e, "engine.h_e", cfg.engine_dim);
    try {
        HermitianOp probe(cfg.h_engine);
    } catch (const NotHermitian& err) {
        fail("engine.h_e", err.what());
    }
    const json* initial = find(engine, "initial");
    cfg.engine_initial = initial ? parse_engine_vector(*initial, "engine.initial", cfg.engine_dim)
                                 : Eigen::VectorXcd::Constant(cfg.engine_dim, 1.0);
    if (const json* schedule = find(engine, "schedule")) {
        if (!schedule->is_object()) fail("engine.schedule", "expected an object");
        const json* generators = find(*schedule, "generators");
        if (!generators || !generators->is_array()) {
            fail("engine.schedule.generators", "expected an array");
        }
        for (size_t i = 0; i < generators->size(); ++i) {
            const json& g = (*generators)[i];
            const std::string path = "engine.schedule.generators[" + std::to_string(i) + "]";
            if (g.is_string() && g.get<std::string>() == "identity") {
                cfg.schedule_generators.emplace_back(std::nullopt);
            } else {
                Eigen::MatrixXcd m = parse_matrix(g, path, cfg.engine_dim);
                try {
                    HermitianOp probe(m);
                } catch (const NotHermitian& err) {
                    fail(path, err.what());
                }
                cfg.schedule_generators.emplace_back(std::move(m));
            }
        }
    }

    if (const json* windows = find(root, "windows")) {
        cfg.has_windows = true;
        cfg.window_width = get_number(*windows, "windows", "width");
        if (!(cfg.window_width > 0.0)) fail("windows.width", "must be positive");
        cfg.window_pattern = get_string(*windows, "windows", "pattern", "explicit");
        if (cfg.window_pattern != "explicit" && cfg.window_pattern != "alternating") {
            fail("windows.pattern", "expected 'explicit' or 'alternating'");
        }
        cfg.window_origin = get_number(*windows, "windows", "origin");
    } else if (!cfg.schedule_generators.empty()) {
        fail("windows", "engine.schedule.generators requires a windows section");
    }

    const json& stepping = get_object(root, "", "stepping");
    cfg.dt = get_number(stepping, "stepping", "dt");
    if (!(cfg.dt > 0.0)) fail("stepping.dt", "must be positive");
    cfg.splitting = get_string(stepping, "stepping", "splitting", "strang");
    if (cfg.splitting != "strang" && cfg.splitting != "lie") {
        fail("stepping.splitting", "expected 'strang' or 'lie'");
    }
    cfg.steps_per_record =
        static_cast<int>(get_integer(stepping, "stepping", "steps_per_record", 1));
    if (cfg.steps_per_record < 1) fail("stepping.steps_per_record", "must be >= 1");
    cfg.window_dt_ratio = get_number(stepping, "stepping", "window_dt_ratio", 100.0);
    if (!(cfg.window_dt_ratio > 0.0)) fail("stepping.window_dt_ratio", "must be positive");
    if (cfg.has_windows && cfg.dt > cfg.window_width / cfg.window_dt_ratio * (1 + 1e-12)) {
        fail("stepping.dt", "must satisfy dt <= windows.width / window_dt_ratio = " +
                                fmt17(cfg.window_width / cfg.window_dt_ratio));
    }

    const json& run = get_object(root, "", "run");
    cfg.duration = get_number(run, "run", "duration");
    if (cfg.duration < 0.0) fail("run.duration", "must be nonnegative");
    cfg.out_dir = get_string(run, "run", "out_dir", "out");
    cfg.seed = get_integer(run, "run", "seed", 0);
    cfg.dump_state = get_bool(run, "run", "dump_state", false);

    if (const json* protocol = find(root, "protocol")) {
        cfg.has_protocol = true;
        cfg.mode = get_string(*protocol, "protocol", "mode", "intensity");
        if (cfg.mode != "intensity" && cfg.mode != "paper_sqrt") {
            fail("protocol.mode", "expected 'intensity' or 'paper_sqrt'");
        }
        if (const json* target = find(*protocol, "target")) {
            if (!target->is_object()) fail("protocol.target", "expected an object");
            const json* generators = find(*target, "generators");
            if (!generators || !generators->is_array() || generators->empty()) {
                fail("protocol.target.generators", "expected a nonempty array");
            }
            for (size_t i = 0; i < generators->size(); ++i) {
                cfg.protocol_target.push_back(
                    parse_matrix((*generators)[i],
                                 "protocol.target.generators[" + std::to_string(i) + "]",
                                 cfg.engine_dim));
            }
            cfg.protocol_target_width =
                get_number(*target, "protocol.target", "width", cfg.window_width);
            if (!(cfg.protocol_target_width > 0.0)) fail("protocol.target.width", "must be positive");
        }
        cfg.protocol_origin = get_number(*protocol, "protocol", "origin", cfg.window_origin);
        if (!cfg.protocol_target.empty() && !cfg.has_windows) {
            fail("windows", "protocol.target requires a windows section");
        }
    } else {
        cfg.mode = "intensity";
    }

    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("(file)", "cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const SimConfig& cfg) {
    json root;
    root["grid"] = {{"n_points", cfg.n_points}, {"length", cfg.length}, {"origin", cfg.origin}};
    root["pulse"] = {{"x0", cfg.pulse.center},
                     {"omega", cfg.pulse.bandwidth},
                     {"k0", cfg.pulse.carrier},
                     {"chirp", cfg.pulse.chirp}};
    json dispersion = {{"kind", cfg.dispersion_kind}, {"v_g", cfg.v_g}};
    if (cfg.dispersion_kind == "massive") dispersion["mass"] = cfg.mass;
    if (cfg.dispersion_kind == "tabulated") {
        if (!cfg.dispersion_table_path.empty()) {
            dispersion["table_path"] = cfg.dispersion_table_path;
        } else {
            json table = json::array();
            for (const auto& [k, w] : cfg.dispersion_table) table.push_back({k, w});
            dispersion["table"] = std::move(table);
        }
    }
    root["dispersion"] = std::move(dispersion);
    root["c"] = cfg.c;
    json engine = {{"dim", cfg.engine_dim}, {"h_e", matrix_to_json(cfg.h_engine)}};
    {
        json initial = json::array();
        for (Eigen::Index i = 0; i < cfg.engine_initial.size(); ++i) {
            initial.push_back(
                json::array({cfg.engine_initial(i).real(), cfg.engine_initial(i).imag()}));
        }
        engine["initial"] = std::move(initial);
    }
    if (!cfg.schedule_generators.empty()) {
        json generators = json::array();
        for (const auto& g : cfg.schedule_generators) {
            if (g) {
                generators.push_back(matrix_to_json(*g));
            } else {
                generators.push_back("identity");
            }
        }
        engine["schedule"] = {{"generators", std::move(generators)}};
    }
    root["engine"] = std::move(engine);
    if (cfg.has_windows) {
        root["windows"] = {{"width", cfg.window_width},
                           {"pattern", cfg.window_pattern},
                           {"origin", cfg.window_origin}};
    }
    root["stepping"] = {{"dt", cfg.dt},
                        {"splitting", cfg.splitting},
                        {"steps_per_record", cfg.steps_per_record},
                        {"window_dt_ratio", cfg.window_dt_ratio}};
    root["run"] = {{"duration", cfg.duration},
                   {"out_dir", cfg.out_dir},
                   {"seed", cfg.seed},
                   {"dump_state", cfg.dump_state}};
    if (cfg.has_protocol) {
        json protocol = {{"mode", cfg.mode}, {"origin", cfg.protocol_origin}};
        if (!cfg.protocol_target.empty()) {
            json generators = json::array();
            for (const auto& g : cfg.protocol_target) generators.push_back(matrix_to_json(g));
            protocol["target"] = {{"generators", std::move(generators)},
                                  {"width", cfg.protocol_target_width}};
        }
        root["protocol"] = std::move(protocol);
    }
    return root.dump(2) + "\n";
}

SpatialGrid make_grid(const SimConfig& cfg) {
    return SpatialGrid(cfg.n_points, cfg.length, cfg.origin);
}

DispersionRelation make_dispersion(const SimConfig& cfg) {
    if (cfg.dispersion_kind == "linear") return DispersionRelation::linear(cfg.v_g);
    if (cfg.dispersion_kind == "massive") return DispersionRelation::massive(cfg.v_g, cfg.mass);
    std::vector<std::pair<double, double>> table = cfg.dispersion_table;
    if (table.empty()) {
        std::ifstream in(cfg.dispersion_table_path);
        if (!in) {
            throw ConfigError("dispersion.table_path",
                              "cannot open '" + cfg.dispersion_table_path + "'");
        }
        double k, w;
        while (in >> k >> w) table.emplace_back(k, w);
        if (table.size() < 3) {
            throw ConfigError("dispersion.table_path", "table needs >= 3 rows of 'k omega'");
        }
    }
    Eigen::VectorXd ks(static_cast<Eigen::Index>(table.size()));
    Eigen::VectorXd ws(static_cast<Eigen::Index>(table.size()));
    for (size_t i = 0; i < table.size(); ++i) {
        ks(static_cast<Eigen::Index>(i)) = table[i].first;
        ws(static_cast<Eigen::Index>(i)) = table[i].second;
    }
    return DispersionRelation::tabulated(std::move(ks), std::move(ws));
}

HermitianOp make_engine_hamiltonian(const SimConfig& cfg) { return HermitianOp(cfg.h_engine); }

GeneratorSchedule make_schedule(const SimConfig& cfg) {
    if (!cfg.has_windows || cfg.schedule_generators.empty()) return GeneratorSchedule{};
    std::vector<std::optional<HermitianOp>> generators;
    generators.reserve(cfg.schedule_generators.size());
    for (const auto& g : cfg.schedule_generators) {
        if (g) {
            generators.emplace_back(HermitianOp(*g));
        } else {
            generators.emplace_back(std::nullopt);
        }
    }
    const SchedulePattern pattern = cfg.window_pattern == "alternating"
                                        ? SchedulePattern::Alternating
                                        : SchedulePattern::Explicit;
    return schedule_from_generators(std::move(generators), cfg.window_width, pattern,
                                    cfg.window_origin);
}

StepConfig make_step_config(const SimConfig& cfg) {
    StepConfig step;
    step.dt = cfg.dt;
    step.steps_per_record = cfg.steps_per_record;
    step.splitting = cfg.splitting == "lie" ? Splitting::Lie : Splitting::Strang;
    step.window_dt_ratio = cfg.window_dt_ratio;
    step.c = cfg.c;
    step.mode = cfg.mode == "paper_sqrt" ? ModulationMode::PaperSqrt : ModulationMode::Intensity;
    return step;
}

std::vector<std::string> config_annotations(const SimConfig& cfg) {
    std::vector<std::string> notes;
    if (cfg.pulse.bandwidth >= std::abs(cfg.pulse.carrier) / 5.0) {
        notes.push_back("quasimono: bandwidth " + fmt17(cfg.pulse.bandwidth) +
                        " is not small against carrier " + fmt17(cfg.pulse.carrier));
    }
    if (cfg.has_windows) {
        const double omega_w = cfg.pulse.bandwidth * cfg.window_width;
        if (omega_w < 5.0) {
            notes.push_back("narrow_window: omega * W = " + fmt17(omega_w) +
                            " leaves the pulse comparable to the window");
        }
        if (!cfg.schedule_generators.empty()) {
            const int stride = cfg.window_pattern == "alternating" ? 2 : 1;
            const double coverage_end =
                cfg.window_origin +
                cfg.window_width * static_cast<double>(stride * cfg.schedule_generators.size());
            const double travel_end = cfg.pulse.center + cfg.duration * cfg.v_g;
            if (travel_end > coverage_end || cfg.pulse.center < cfg.window_origin) {
                notes.push_back("partial_coverage: schedule windows span [" +
                                fmt17(cfg.window_origin) + ", " + fmt17(coverage_end) +
                                ") but the pulse center travels [" + fmt17(cfg.pulse.center) +
                                ", " + fmt17(travel_end) + "]");
            }
        }
    }
    return notes;
}

}  // namespace qclock
