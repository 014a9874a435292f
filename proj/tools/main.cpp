// Command-line front end: run experiments on built-in systems and emit
// JSON envelopes (or flat CSV tables) suitable for scripting and plots.
//
// Exit codes: 0 success, 2 usage error, 3 validation failure,
// 4 evaluation error.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "torusflow/flow.hpp"
#include "torusflow/iteration.hpp"
#include "torusflow/jacobian.hpp"
#include "torusflow/system.hpp"
#include "torusflow/vecspace.hpp"

using namespace torusflow;
using nlohmann::json;

namespace {

constexpr const char* kSchemaVersion = "1";

// ---------------------------------------------------------------------------
// JSON output. Floating values are serialized with 17 significant
// digits so identical runs produce byte-identical payloads.

class JsonWriter {
public:
    void begin_object() { open('{'); }
    void end_object() { close('}'); }
    void begin_array() { open('['); }
    void end_array() { close(']'); }

    void key(const std::string& k) {
        separate();
        quote(k);
        out_ += ':';
        pending_value_ = true;
    }

    void value(double v) {
        separate();
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out_ += buf;
    }
    void value(std::int64_t v) { separate(); out_ += std::to_string(v); }
    void value(std::size_t v) { separate(); out_ += std::to_string(v); }
    void value(bool v) { separate(); out_ += v ? "true" : "false"; }
    void value(const std::string& v) { separate(); quote(v); }
    void value(const char* v) { value(std::string(v)); }

    void vector_value(const Vector& v) {
        begin_array();
        for (double e : v) value(e);
        end_array();
    }
    void ivector_value(const IntegerVector& v) {
        begin_array();
        for (auto e : v) value(static_cast<std::int64_t>(e));
        end_array();
    }

    void raw(const std::string& text) { separate(); out_ += text; }

    const std::string& str() const { return out_; }

private:
    void open(char c) {
        separate();
        out_ += c;
        first_.push_back(true);
    }
    void close(char c) {
        out_ += c;
        first_.pop_back();
    }
    void separate() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!first_.empty()) {
            if (!first_.back()) out_ += ',';
            first_.back() = false;
        }
    }
    void quote(const std::string& s) {
        out_ += '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ += "\\\""; break;
                case '\\': out_ += "\\\\"; break;
                case '\n': out_ += "\\n"; break;
                case '\t': out_ += "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out_ += buf;
                    } else out_ += c;
            }
        }
        out_ += '"';
    }

    std::string out_;
    std::vector<bool> first_;
    bool pending_value_ = false;
};

// ---------------------------------------------------------------------------

struct CliError : std::runtime_error {
    CliError(int code, std::string what) : std::runtime_error(std::move(what)), exit_code(code) {}
    int exit_code;
};

Vector parse_vector(const std::string& text, const std::string& flag) {
    Vector v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            v.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CliError(2, "malformed number '" + item + "' in " + flag);
        }
    }
    if (v.empty()) throw CliError(2, flag + ": empty vector");
    return v;
}

std::vector<Vector> parse_vector_list(const std::string& text, const std::string& flag) {
    std::vector<Vector> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';'))
        if (!item.empty()) out.push_back(parse_vector(item, flag));
    if (out.empty()) throw CliError(2, flag + ": empty list");
    return out;
}

// System selection shared by every subcommand.
struct SystemConfig {
    std::string builtin = "constant";
    std::string g_text = "0,0";
    double r = 0.1;

    SystemDefinition build() const {
        if (builtin == "constant") return make_constant_system(parse_vector(g_text, "--G"));
        if (builtin == "sine") return make_sine_system(r);
        throw CliError(2, "unknown builtin '" + builtin + "' (expected constant or sine)");
    }

    void echo(JsonWriter& w) const {
        w.key("builtin");
        w.value(builtin);
        w.key("params");
        w.begin_object();
        if (builtin == "constant") {
            w.key("G");
            w.vector_value(parse_vector(g_text, "--G"));
        } else {
            w.key("r");
            w.value(r);
        }
        w.end_object();
    }
};

struct OutputConfig {
    std::string out_path;  // empty = stdout
    bool csv = false;
};

void emit(const OutputConfig& out, const std::string& text) {
    if (out.out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream f(out.out_path, std::ios::binary);
        if (!f) throw CliError(2, "cannot open output file " + out.out_path);
        f << text << "\n";
    }
}

// Envelope: schema, command, effective config, timing, payload. The
// payload (and config echo) are deterministic for a fixed config+seed;
// timing_ms sits on its own line so consumers can strip it.
template <typename ConfigFn, typename PayloadFn>
void emit_envelope(const OutputConfig& out, const std::string& command, ConfigFn&& config_fn,
                   PayloadFn&& payload_fn) {
    auto t0 = std::chrono::steady_clock::now();
    JsonWriter payload;
    payload_fn(payload);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();

    JsonWriter w;
    w.begin_object();
    w.key("schema_version");
    w.value(kSchemaVersion);
    w.key("command");
    w.value(command);
    w.key("config");
    w.begin_object();
    config_fn(w);
    w.end_object();
    w.key("payload");
    w.raw(payload.str());
    w.end_object();
    std::string text = w.str();
    // timing outside the deterministic body, on its own line
    text.pop_back();  // trailing '}'
    char buf[64];
    std::snprintf(buf, sizeof(buf), ",\n\"timing_ms\": %.3f\n}", ms);
    text += buf;
    emit(out, text);
}

void write_clusters(JsonWriter& w, const RotationSetEstimate& est) {
    w.begin_object();
    w.key("tail_start");
    w.value(est.tail_start);
    w.key("epsilon");
    w.value(est.epsilon);
    w.key("clusters");
    w.begin_array();
    for (const auto& c : est.clusters) {
        w.begin_object();
        w.key("center");
        w.vector_value(c.center);
        w.key("count");
        w.value(c.count);
        w.key("radius");
        w.value(c.radius);
        w.end_object();
    }
    w.end_array();
    w.end_object();
}

std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------

json load_config_file(int argc, char** argv) {
    for (int i = 1; i < argc - 1; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream f(argv[i + 1]);
            if (!f) throw CliError(2, std::string("cannot read config file ") + argv[i + 1]);
            try {
                return json::parse(f);
            } catch (const json::parse_error& e) {
                throw CliError(2, std::string("malformed JSON config: ") + e.what());
            }
        }
    }
    return json::object();
}

template <typename T>
void from_config(const json& cfg, const char* key, T& target) {
    if (cfg.contains(key)) {
        try {
            target = cfg.at(key).get<T>();
        } catch (const json::exception&) {
            throw CliError(2, std::string("config field '") + key + "' has the wrong type");
        }
    }
}

std::size_t default_threads() {
    if (const char* env = std::getenv("TORUSFLOW_THREADS")) {
        long v = std::atol(env);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    return 1;
}

int run(int argc, char** argv) {
    json cfg = load_config_file(argc, argv);

    CLI::App app{
        "Generalized vector systems on the k-torus: iterate time-one maps, "
        "estimate rotation sets, reconstruct flows, scan for singular points.\n"
        "Randomness: std::mt19937_64 seeded by --seed (stable across runs "
        "and platforms). Config precedence: flags > --config JSON > defaults."};
    app.require_subcommand(1);

    SystemConfig sys_cfg;
    from_config(cfg, "builtin", sys_cfg.builtin);
    if (cfg.contains("params")) {
        const json& p = cfg["params"];
        if (p.contains("G") && p["G"].is_array()) {
            std::string text;
            for (const auto& e : p["G"]) text += (text.empty() ? "" : ",") + e.dump();
            sys_cfg.g_text = text;
        }
        from_config(p, "r", sys_cfg.r);
    }

    OutputConfig out;
    std::string config_path;  // consumed in load_config_file; declared for --help
    std::uint64_t seed = 42;
    std::size_t threads = default_threads();
    from_config(cfg, "seed", seed);
    from_config(cfg, "threads", threads);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--builtin", sys_cfg.builtin, "Built-in system: constant or sine")
            ->capture_default_str();
        cmd->add_option("--G", sys_cfg.g_text, "Drift vector for the constant system (comma list)")
            ->capture_default_str();
        cmd->add_option("--r", sys_cfg.r, "Coupling for the sine system")->capture_default_str();
        cmd->add_option("--config", config_path, "JSON config file (flags override it)");
        cmd->add_option("--out", out.out_path, "Output file (default stdout)");
        cmd->add_flag("--csv", out.csv, "Emit a flat CSV table instead of JSON");
        cmd->add_option("--seed", seed, "RNG seed (std::mt19937_64)")->capture_default_str();
        cmd->add_option("--threads", threads,
                        "Worker threads for grid scans (default from TORUSFLOW_THREADS)")
            ->capture_default_str();
    };

    // ---- validate -----------------------------------------------------
    auto* c_validate = app.add_subcommand("validate", "Check equivariance and Phi boundary conditions");
    std::size_t v_samples = 1000, v_qtrials = 3, v_grid = 64;
    double v_tol = 1e-9;
    from_config(cfg, "samples", v_samples);
    from_config(cfg, "q_trials", v_qtrials);
    from_config(cfg, "grid", v_grid);
    from_config(cfg, "tol", v_tol);
    c_validate->add_option("--samples", v_samples, "Random samples per check")->capture_default_str();
    c_validate->add_option("--q-trials", v_qtrials, "Integer shifts per sample")->capture_default_str();
    c_validate->add_option("--tol", v_tol, "Pass tolerance")->capture_default_str();
    c_validate->add_option("--grid", v_grid, "Grid per axis for the displacement bound")
        ->capture_default_str();
    add_common(c_validate);

    // ---- orbit --------------------------------------------------------
    auto* c_orbit = app.add_subcommand("orbit", "Iterate the time-one map");
    std::string o_eta = "0,0";
    std::size_t o_n = 100;
    from_config(cfg, "eta", o_eta);
    from_config(cfg, "N", o_n);
    c_orbit->add_option("--eta", o_eta, "Initial point (comma list)")->capture_default_str();
    c_orbit->add_option("--N", o_n, "Number of iterations")->capture_default_str();
    add_common(c_orbit);

    // ---- rotate -------------------------------------------------------
    auto* c_rotate = app.add_subcommand("rotate", "Estimate the rotation set");
    std::string r_eta = "0,0";
    std::size_t r_n = 1000;
    double r_tail = 0.5, r_eps = 0.0;  // 0 = default 10/N
    from_config(cfg, "eta", r_eta);
    from_config(cfg, "N", r_n);
    from_config(cfg, "tail", r_tail);
    from_config(cfg, "epsilon", r_eps);
    c_rotate->add_option("--eta", r_eta, "Initial point")->capture_default_str();
    c_rotate->add_option("--N", r_n, "Orbit length")->capture_default_str();
    c_rotate->add_option("--tail", r_tail, "Tail fraction used for clustering")
        ->capture_default_str();
    c_rotate->add_option("--epsilon", r_eps, "Cluster radius (default 10/N)");
    add_common(c_rotate);

    // ---- periodic -----------------------------------------------------
    auto* c_periodic = app.add_subcommand("periodic", "Detect periodic points / rational rotation");
    std::string p_seeds = "0,0";
    std::size_t p_mmax = 10;
    double p_tol = 1e-9;
    from_config(cfg, "seeds", p_seeds);
    from_config(cfg, "m_max", p_mmax);
    from_config(cfg, "tol", p_tol);
    c_periodic->add_option("--seeds", p_seeds, "Seed points, semicolon-separated comma lists")
        ->capture_default_str();
    c_periodic->add_option("--m-max", p_mmax, "Largest period to try")->capture_default_str();
    c_periodic->add_option("--tol", p_tol, "Detection tolerance")->capture_default_str();
    add_common(c_periodic);

    // ---- reconstruct --------------------------------------------------
    auto* c_reconstruct = app.add_subcommand("reconstruct", "Evaluate the reconstructed flow");
    std::string f_eta = "0,0", f_times = "0,0.5,1";
    from_config(cfg, "eta", f_eta);
    from_config(cfg, "t", f_times);
    c_reconstruct->add_option("--eta", f_eta, "Initial point")->capture_default_str();
    c_reconstruct->add_option("--t", f_times, "Times (comma list, all >= 0)")->capture_default_str();
    add_common(c_reconstruct);

    // ---- remainder ----------------------------------------------------
    auto* c_remainder = app.add_subcommand("remainder", "Bounded remainder b(t,eta) over a time grid");
    std::string b_eta = "0,0";
    double b_tmax = 100.0, b_dt = 0.25;
    from_config(cfg, "eta", b_eta);
    from_config(cfg, "t_max", b_tmax);
    from_config(cfg, "dt", b_dt);
    c_remainder->add_option("--eta", b_eta, "Initial point")->capture_default_str();
    c_remainder->add_option("--t-max", b_tmax, "End of the time grid")->capture_default_str();
    c_remainder->add_option("--dt", b_dt, "Grid step")->capture_default_str();
    add_common(c_remainder);

    // ---- singular-scan ------------------------------------------------
    auto* c_scan = app.add_subcommand("singular-scan", "Scan det J(psi) for singular points");
    std::size_t s_grid = 256;
    double s_threshold = 1e-3;
    from_config(cfg, "grid", s_grid);
    from_config(cfg, "threshold", s_threshold);
    c_scan->add_option("--grid", s_grid, "Grid per axis (>= 8, k <= 3)")->capture_default_str();
    c_scan->add_option("--threshold", s_threshold, "|det| flag threshold")->capture_default_str();
    add_common(c_scan);

    // ---- inject-check -------------------------------------------------
    auto* c_inject = app.add_subcommand("inject-check", "Contraction criterion for injectivity");
    std::size_t i_pairs = 10000;
    from_config(cfg, "pairs", i_pairs);
    c_inject->add_option("--pairs", i_pairs, "Random pairs sampled in [0,2)^k")
        ->capture_default_str();
    add_common(c_inject);

    // ---- bounds -------------------------------------------------------
    auto* c_bounds = app.add_subcommand("bounds", "Extremal bounds of psi over a closed box");
    std::string x_lo = "0,0", x_hi = "1,1";
    std::size_t x_grid = 33;
    double x_det_threshold = 1e-6;
    from_config(cfg, "lo", x_lo);
    from_config(cfg, "hi", x_hi);
    from_config(cfg, "grid", x_grid);
    from_config(cfg, "det_threshold", x_det_threshold);
    c_bounds->add_option("--lo", x_lo, "Box lower corner")->capture_default_str();
    c_bounds->add_option("--hi", x_hi, "Box upper corner")->capture_default_str();
    c_bounds->add_option("--grid", x_grid, "Grid nodes per axis")->capture_default_str();
    c_bounds->add_option("--det-threshold", x_det_threshold,
                         "Box is inapplicable when |det| dips below this")
        ->capture_default_str();
    add_common(c_bounds);

    // ---- embed --------------------------------------------------------
    auto* c_embed = app.add_subcommand("embed", "Torus surface plot data for (t,x) samples");
    std::string e_t = "0", e_x = "0";
    double e_a = 2.0, e_b = 1.0;
    from_config(cfg, "t", e_t);
    from_config(cfg, "x", e_x);
    from_config(cfg, "a", e_a);
    from_config(cfg, "b", e_b);
    c_embed->add_option("--t", e_t, "Times (comma list)")->capture_default_str();
    c_embed->add_option("--x", e_x, "Fiber coordinates (comma list, paired with --t)")
        ->capture_default_str();
    c_embed->add_option("--a", e_a, "Major radius")->capture_default_str();
    c_embed->add_option("--b", e_b, "Minor radius (0 < b < a)")->capture_default_str();
    add_common(c_embed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (c_validate->parsed()) {
        SystemDefinition sys = sys_cfg.build();
        auto periodicity = validate_periodicity(sys, v_samples, v_qtrials, v_tol, seed);
        auto boundary = validate_phi_boundary(sys, v_samples, v_tol, seed);
        auto bound = estimate_sup_a(sys, v_grid);
        emit_envelope(out, "validate",
                      [&](JsonWriter& w) {
                          sys_cfg.echo(w);
                          w.key("samples"); w.value(v_samples);
                          w.key("q_trials"); w.value(v_qtrials);
                          w.key("tol"); w.value(v_tol);
                          w.key("grid"); w.value(v_grid);
                          w.key("seed"); w.value(static_cast<std::size_t>(seed));
                      },
                      [&](JsonWriter& w) {
                          w.begin_object();
                          w.key("interpolant"); w.value(sys.auto_interpolant ? "auto" : "supplied");
                          w.key("periodicity_max_violation"); w.value(periodicity.max_violation);
                          w.key("periodicity_pass"); w.value(periodicity.pass);
                          w.key("boundary_max_violation"); w.value(boundary.max_violation);
                          w.key("boundary_pass"); w.value(boundary.pass);
                          w.key("sup_a"); w.value(bound.M);
                          w.key("sup_a_argmax"); w.vector_value(bound.argmax);
                          w.end_object();
                      });
        return (periodicity.pass && boundary.pass) ? 0 : 3;
    }

    if (c_orbit->parsed()) {
        SystemDefinition sys = sys_cfg.build();
        Vector eta = parse_vector(o_eta, "--eta");
        Orbit orbit = iterate_orbit(sys, eta, o_n);
        if (out.csv) {
            std::string table = "n";
            for (std::size_t p = 0; p < sys.k; ++p) table += ",x" + std::to_string(p);
            for (std::size_t p = 0; p < sys.k; ++p) table += ",a" + std::to_string(p);
            table += "\n";
            for (std::size_t n = 0; n < orbit.points.size(); ++n) {
                table += std::to_string(n);
                for (double v : orbit.points[n]) table += "," + csv_double(v);
                for (std::size_t p = 0; p < sys.k; ++p)
                    table += "," + (n == 0 ? std::string("0") : csv_double(orbit.displacements[n - 1][p]));
                table += "\n";
            }
            table.pop_back();
            emit(out, table);
            return 0;
        }
        emit_envelope(out, "orbit",
                      [&](JsonWriter& w) {
                          sys_cfg.echo(w);
                          w.key("eta"); w.vector_value(eta);
                          w.key("N"); w.value(o_n);
                      },
                      [&](JsonWriter& w) {
                          w.begin_object();
                          w.key("points");
                          w.begin_array();
                          for (const auto& p : orbit.points) w.vector_value(p);
                          w.end_array();
                          w.key("displacements");
                          w.begin_array();
                          for (const auto& d : orbit.displacements) w.vector_value(d);
                          w.end_array();
                          w.end_object();
                      });
        return 0;
    }

    if (c_rotate->parsed()) {
        SystemDefinition sys = sys_cfg.build();
        Vector eta = parse_vector(r_eta, "--eta");
        double eps = r_eps > 0.0 ? r_eps : default_epsilon(r_n);
        auto seq = rotation_sequence(iterate_orbit(sys, eta, r_n));
        auto est_a = limit_set_estimate(seq.a_over_n, r_tail, eps);
        auto est_psi = limit_set_estimate(seq.psi_over_n, r_tail, eps);
        emit_envelope(out, "rotate",
                      [&](JsonWriter& w) {
                          sys_cfg.echo(w);
                          w.key("eta"); w.vector_value(eta);
                          w.key("N"); w.value(r_n);
                          w.key("tail"); w.value(r_tail);
                          w.key("epsilon"); w.value(eps);
                      },
                      [&](JsonWriter& w) {
                          w.begin_object();
                          w.key("from_displacement_averages");
                          write_clusters(w, est_a);
                          w.key("from_orbit_averages");
                          write_clusters(w, est_psi);
                          w.end_object();
                      });
        return 0;
    }

    if (c_periodic->parsed()) {
        SystemDefinition sys = sys_cfg.build();
        auto seeds = parse_vector_list(p_seeds, "--seeds");
        auto hits = detect_periodic(sys, seeds, p_mmax, p_tol);
        emit_envelope(out, "periodic",
                      [&](JsonWriter& w) {
                          sys_cfg.echo(w);
                          w.key("seeds");
                          w.begin_array();
                          for (const auto& s : seeds) w.vector_value(s);
                          w.end_array();
                          w.key("m_max"); w.value(p_mmax);
                          w.key("tol"); w.value(p_tol);
                      },
                      [&](JsonWriter& w) {
                          w.begin_object();
                          w.key("hits");
                          w.begin_array();
                          for (const auto& h : hits) {
                              w.begin_object();
                              w.key("eta"); w.vector_value(h.eta);
                              w.key("m"); w.value(h.m);
                              w.key("q"); w.ivector_value(h.q);
                              w.key("rho"); w.vector_value(h.rho);
                              w.key("residual"); w.value(h.residual);
                              w.key("doubling_confirmed"); w.value(h.doubling_confirmed);
                              w.end_object();
                          }
                          w.end_array();
                          w.end_object();
                      });
        return 0;
    }

    if (c_reconstruct->parsed()) {
        SystemDefinition sys = sys_cfg.build();
        Vector eta = parse_vector(f_eta, "--eta");
        Vector times = parse_vector(f_times, "--t");
        std::vector<FlowSample> samples;
        for (double t : times) samples.push_back(reconstruct_phi(sys, eta, t));
        if (out.csv) {
            std::string table = "t,n,s";
            for (std::size_t p = 0; p < sys.k; ++p) table += ",phi" + std::to_string(p);
            table += "\n";
            for (const auto& fs : samples) {
                table += csv_double(fs.t) + "," + std::to_string(fs.n) + "," + csv_double(fs.s);
                for (double v : fs.value) table += "," + csv_double(v);
                table += "\n";
            }
            table.pop_back();
            emit(out, table);
            return 0;
        }
        emit_envelope(out, "reconstruct",
                      [&](JsonWriter& w) {
                          sys_cfg.echo(w);
                          w.key("eta"); w.vector_value(eta);
                          w.key("t"); w.vector_value(times);
                      },
                      [&](JsonWriter& w) {
                          w.begin_object();
                          w.key("samples");
                          w.begin_array();
                          for (const auto& fs : samples) {
                              w.begin_object();
                              w.key("t"); w.value(fs.t);
                              w.key("n"); w.value(fs.n);
                              w.key("s"); w.value(fs.s);
                              w.key("value"); w.vector_value(fs.value);
                              w.end_object();
                          }
                          w.end_array();
                          w.end_object();
                      });
        return 0;
    }

    if (c_remainder->parsed()) {
        SystemDefinition sys = sys_cfg.build();
        Vector eta = parse_vector(b_eta, "--eta");
        if (b_dt <= 0.0 || b_tmax < 0.0) throw CliError(2, "--dt must be > 0 and --t-max >= 0");
        std::vector<double> grid;
        for (double t = 0.0; t <= b_tmax + 1e-12; t += b_dt) grid.push_back(t);
        auto rep = remainder_b(sys, eta, grid);
        emit_envelope(out, "remainder",
                      [&](JsonWriter& w) {
                          sys_cfg.echo(w);
                          w.key("eta"); w.vector_value(eta);
                          w.key("t_max"); w.value(b_tmax);
                          w.key("dt"); w.value(b_dt);
                      },
                      [&](JsonWriter& w) {
                          w.begin_object();
                          w.key("max_norm"); w.value(rep.max_norm);
                          w.key("window_max");
                          w.begin_array();
                          for (double v : rep.window_max) w.value(v);
                          w.end_array();
                          w.key("samples");
                          w.begin_array();
                          for (const auto& [t, b] : rep.samples) {
                              w.begin_object();
                              w.key("t"); w.value(t);
                              w.key("b"); w.vector_value(b);
                              w.end_object();
                          }
                          w.end_array();
                          w.end_object();
                      });
        return 0;
    }

    if (c_scan->parsed()) {
        SystemDefinition sys = sys_cfg.build();
        auto rep = det_scan(sys, s_grid, s_threshold, threads);
        emit_envelope(out, "singular-scan",
                      [&](JsonWriter& w) {
                          sys_cfg.echo(w);
                          w.key("grid"); w.value(s_grid);
                          w.key("threshold"); w.value(s_threshold);
                      },
                      [&](JsonWriter& w) {
                          w.begin_object();
                          w.key("min_det"); w.value(rep.min_det);
                          w.key("min_abs_det"); w.value(rep.min_abs_det);
                          w.key("candidates");
                          w.begin_array();
                          for (const auto& c : rep.candidates) {
                              w.begin_object();
                              w.key("grid_point"); w.vector_value(c.grid_point);
                              w.key("det"); w.value(c.det_value);
                              w.key("refined_root");
                              if (c.refined_root) w.vector_value(*c.refined_root);
                              else w.raw("null");
                              w.end_object();
                          }
                          w.end_array();
                          w.end_object();
                      });
        return 0;
    }

    if (c_inject->parsed()) {
        SystemDefinition sys = sys_cfg.build();
        auto rep = contraction_injectivity_check(sys, i_pairs, seed);
        emit_envelope(out, "inject-check",
                      [&](JsonWriter& w) {
                          sys_cfg.echo(w);
                          w.key("pairs"); w.value(i_pairs);
                          w.key("seed"); w.value(static_cast<std::size_t>(seed));
                      },
                      [&](JsonWriter& w) {
                          w.begin_object();
                          w.key("max_ratio"); w.value(rep.max_ratio);
                          w.key("worst_eta"); w.vector_value(rep.worst_eta);
                          w.key("worst_p"); w.vector_value(rep.worst_p);
                          w.key("criterion_satisfied"); w.value(rep.criterion_satisfied);
                          w.key("psi_collisions"); w.value(rep.psi_collisions);
                          w.end_object();
                      });
        return 0;
    }

    if (c_bounds->parsed()) {
        SystemDefinition sys = sys_cfg.build();
        Vector lo = parse_vector(x_lo, "--lo");
        Vector hi = parse_vector(x_hi, "--hi");
        auto rep = boundary_extremal_check(sys, lo, hi, x_grid, x_det_threshold);
        // extremal bounds of the image grid
        std::vector<Vector> images;
        if (rep.applicable) {
            std::vector<std::size_t> idx(sys.k, 0);
            bool done = false;
            while (!done) {
                Vector eta(sys.k);
                for (std::size_t p = 0; p < sys.k; ++p)
                    eta[p] = lo[p] + (hi[p] - lo[p]) * static_cast<double>(idx[p]) /
                                         static_cast<double>(x_grid - 1);
                images.push_back(sys.eval_psi(eta));
                std::size_t p = 0;
                for (; p < sys.k; ++p) {
                    if (++idx[p] < x_grid) break;
                    idx[p] = 0;
                }
                done = p == sys.k;
            }
        }
        emit_envelope(out, "bounds",
                      [&](JsonWriter& w) {
                          sys_cfg.echo(w);
                          w.key("lo"); w.vector_value(lo);
                          w.key("hi"); w.vector_value(hi);
                          w.key("grid"); w.value(x_grid);
                          w.key("det_threshold"); w.value(x_det_threshold);
                      },
                      [&](JsonWriter& w) {
                          w.begin_object();
                          w.key("applicable"); w.value(rep.applicable);
                          w.key("boundary_fraction"); w.value(rep.boundary_fraction);
                          w.key("extremal_count"); w.value(rep.extremal_count);
                          if (rep.applicable) {
                              auto [bx, by] = extremal_bounds(images);
                              w.key("upper_bound"); w.vector_value(bx);
                              w.key("lower_bound"); w.vector_value(by);
                          }
                          w.end_object();
                      });
        return 0;
    }

    if (c_embed->parsed()) {
        Vector times = parse_vector(e_t, "--t");
        Vector xs = parse_vector(e_x, "--x");
        if (times.size() != xs.size()) throw CliError(2, "--t and --x must have equal length");
        if (out.csv) {
            std::string table = "t,x,u,v,w\n";
            for (std::size_t i = 0; i < times.size(); ++i) {
                auto [u, v, w3] = embed_torus(times[i], xs[i], e_a, e_b);
                table += csv_double(times[i]) + "," + csv_double(xs[i]) + "," + csv_double(u) +
                         "," + csv_double(v) + "," + csv_double(w3) + "\n";
            }
            table.pop_back();
            emit(out, table);
            return 0;
        }
        emit_envelope(out, "embed",
                      [&](JsonWriter& w) {
                          w.key("t"); w.vector_value(times);
                          w.key("x"); w.vector_value(xs);
                          w.key("a"); w.value(e_a);
                          w.key("b"); w.value(e_b);
                      },
                      [&](JsonWriter& w) {
                          w.begin_object();
                          w.key("points");
                          w.begin_array();
                          for (std::size_t i = 0; i < times.size(); ++i) {
                              auto [u, v, w3] = embed_torus(times[i], xs[i], e_a, e_b);
                              w.begin_array();
                              w.value(u); w.value(v); w.value(w3);
                              w.end_array();
                          }
                          w.end_array();
                          w.end_object();
                      });
        return 0;
    }

    return 2;
}

void emit_error(int code, const std::string& what) {
    JsonWriter w;
    w.begin_object();
    w.key("error");
    w.begin_object();
    w.key("code");
    w.value(static_cast<std::int64_t>(code));
    w.key("message");
    w.value(what);
    w.end_object();
    w.end_object();
    std::cerr << w.str() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CliError& e) {
        emit_error(e.exit_code, e.what());
        return e.exit_code;
    } catch (const EvaluationError& e) {
        emit_error(4, e.what());
        return 4;
    } catch (const std::domain_error& e) {
        emit_error(2, e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        emit_error(2, e.what());
        return 2;
    } catch (const std::exception& e) {
        emit_error(4, e.what());
        return 4;
    }
}
