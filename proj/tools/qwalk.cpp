// Command-line surface for the asymptotic-entanglement library: single
// evaluations, parameter sweeps, lattice simulations and the validation suite.
//
// Config files are JSON; angles are given in units of pi (0.25 means pi/4).
// Exit codes: 0 success, 1 validation failure, 2 config error, 3 numerical
// non-convergence, 4 I/O error.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qwalk/asymptotics.hpp"
#include "qwalk/simulator.hpp"
#include "qwalk/validate.hpp"

using json = nlohmann::json;
using namespace qwalk;

namespace {

constexpr double kPi = 3.14159265358979323846;

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;
constexpr int kExitIo = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Locale-independent, 12 significant digits.
std::string fmt(double x) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
    return std::string(buf, r.ptr);
}

double angle(const json& j, const std::string& key, std::optional<double> fallback = {}) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError("missing angle key '" + key + "'");
    }
    if (!j.at(key).is_number()) throw ConfigError("angle key '" + key + "' must be a number");
    return j.at(key).get<double>() * kPi;  // config angles are in units of pi
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

CoinOperator coin_from(const json& cfg) {
    const json c = cfg.value("coin", json("hadamard"));
    if (c.is_string()) {
        const std::string name = c.get<std::string>();
        if (name == "hadamard") return tensor(hadamard2(), hadamard2());
        if (name == "grover") return grover4();
        if (name == "dft") return dft4();
        throw ConfigError("unknown coin '" + name + "' (hadamard, grover, dft)");
    }
    if (c.is_object() && c.contains("matrix")) {
        const json& rows = c.at("matrix");
        if (!rows.is_array() || rows.size() != 4) throw ConfigError("coin.matrix must have 4 rows");
        CMatrix m(4);
        for (int i = 0; i < 4; ++i) {
            const json& row = rows.at(static_cast<size_t>(i));
            if (!row.is_array() || row.size() != 4)
                throw ConfigError("coin.matrix rows must have 4 entries");
            for (int j = 0; j < 4; ++j) {
                const json& e = row.at(static_cast<size_t>(j));
                if (e.is_number())
                    m(i, j) = e.get<double>();
                else if (e.is_array() && e.size() == 2)
                    m(i, j) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
                else
                    throw ConfigError("coin.matrix entries must be numbers or [re, im] pairs");
            }
        }
        try {
            return custom(m, c.value("label", std::string("custom")));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    throw ConfigError("coin must be a name or an object with a 'matrix' key");
}

using Params = std::map<std::string, double>;

// Angle parameters read from the config (radians); sweep axes override them.
Params base_params(const json& cfg) {
    Params p;
    const json s = cfg.value("state", json::object());
    if (s.is_object())
        for (const char* k : {"theta", "phi", "theta1", "phi1", "theta2", "phi2"})
            if (s.contains(k)) p[k] = angle(s, k);
    const json pos = cfg.value("position", json::object());
    if (pos.is_object())
        for (const char* k : {"alpha", "beta"})
            if (pos.contains(k)) p[k] = angle(pos, k);
    return p;
}

double param(const Params& p, const std::string& key, std::optional<double> fallback = {}) {
    const auto it = p.find(key);
    if (it != p.end()) return it->second;
    if (fallback) return *fallback;
    throw ConfigError("missing state/position parameter '" + key + "'");
}

CoinState state_from(const json& cfg, const Params& p) {
    const json s = cfg.value("state", json("LL"));
    if (s.is_string()) {
        const std::string name = s.get<std::string>();
        if (name == "LL") return coin_family_III(0.0, 0.0);
        if (name == "LR") return coin_family_II(0.0, 0.0);
        if (name == "bell-psi-plus") return bell_psi_plus();
        if (name == "bell-psi-minus") return bell_psi_minus();
        if (name == "bell-phi-plus") return bell_phi_plus();
        if (name == "bell-phi-minus") return bell_phi_minus();
        throw ConfigError("unknown state '" + name +
                          "' (LL, LR, bell-psi-plus, bell-psi-minus, bell-phi-plus, "
                          "bell-phi-minus, or an object)");
    }
    if (!s.is_object()) throw ConfigError("state must be a name or an object");
    if (s.contains("amplitudes")) {
        const json& a = s.at("amplitudes");
        if (!a.is_array() || a.size() != 4) throw ConfigError("state.amplitudes must have 4 entries");
        CVector v(4);
        for (int i = 0; i < 4; ++i) {
            const json& e = a.at(static_cast<size_t>(i));
            if (e.is_number())
                v[i] = e.get<double>();
            else if (e.is_array() && e.size() == 2)
                v[i] = cplx(e.at(0).get<double>(), e.at(1).get<double>());
            else
                throw ConfigError("state.amplitudes entries must be numbers or [re, im] pairs");
        }
        try {
            return coin_custom(v);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    const std::string family = s.value("family", std::string());
    if (family == "I") return coin_family_I(param(p, "theta"), param(p, "phi", 0.0));
    if (family == "II") return coin_family_II(param(p, "theta"), param(p, "phi", 0.0));
    if (family == "III") return coin_family_III(param(p, "theta"), param(p, "phi", 0.0));
    if (family == "separable")
        return coin_separable(param(p, "theta1"), param(p, "phi1", 0.0), param(p, "theta2"),
                              param(p, "phi2", 0.0));
    throw ConfigError("state.family must be I, II, III or separable");
}

PositionDistribution position_from(const json& cfg, const Params& p) {
    const json pos = cfg.value("position", json::object());
    if (!pos.is_object()) throw ConfigError("position must be an object");
    const std::string type = pos.value("type", std::string("point"));
    if (type == "point") return PointMass{pos.value("x", 0), pos.value("y", 0)};
    if (type == "two-site-separable")
        return TwoSiteSeparable{param(p, "alpha"), param(p, "beta", 0.0)};
    if (type == "two-site-entangled")
        return TwoSiteEntangled{param(p, "alpha"), param(p, "beta", 0.0)};
    if (type == "gaussian") {
        const double sigma = pos.value("sigma", 1.0);
        if (!(sigma > 0.0)) throw ConfigError("position.sigma must be > 0");
        return GaussianIsotropic{sigma};
    }
    if (type == "uniform") return UniformLimit{};
    throw ConfigError("unknown position type '" + type +
                      "' (point, two-site-separable, two-site-entangled, gaussian, uniform)");
}

QuadratureSpec quad_from(const json& cfg, int grid_override) {
    QuadratureSpec q;
    const json j = cfg.value("quadrature", json::object());
    if (!j.is_object()) throw ConfigError("quadrature must be an object");
    q.grid_points_per_axis = j.value("grid", q.grid_points_per_axis);
    q.offset_fraction = j.value("offset", q.offset_fraction);
    q.refine_tol = j.value("refine_tol", q.refine_tol);
    q.max_refinements = j.value("max_refinements", q.max_refinements);
    if (grid_override > 0) q.grid_points_per_axis = grid_override;
    return q;
}

int workers_from(const json& cfg, int cli_workers) {
    if (cli_workers > 0) return cli_workers;
    if (cfg.contains("workers")) {
        const int w = cfg.at("workers").get<int>();
        if (w < 1) throw ConfigError("workers must be >= 1");
        return w;
    }
    if (const char* env = std::getenv("QWALK_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    return 1;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: identical bytes on every platform
    if (!out) throw IoError("cannot open output file: " + path);
    return out;
}

void print_report(const EntanglementReport& rep) {
    std::cout << "coin: " << rep.density.coin_label << "\n";
    std::cout << "position: " << rep.density.state_label << "\n";
    std::cout << "E = " << fmt(rep.entropy) << " bits\n";
    std::cout << "eigenvalues:";
    for (double e : rep.eigenvalues) std::cout << " " << fmt(e);
    std::cout << "\nrho_c:\n";
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const cplx z = rep.density.matrix(i, j);
            std::cout << "  (" << fmt(z.real()) << ", " << fmt(z.imag()) << ")";
        }
        std::cout << "\n";
    }
    std::cout << "final grid: " << rep.density.quadrature.final_grid
              << (rep.converged ? " (converged)" : " (not converged)") << "\n";
    for (const auto& [m, de] : rep.refinement_history)
        std::cout << "  M=" << m << "  E=" << fmt(de) << "\n";
}

int cmd_asymptotic(const std::string& config_path, int grid, int workers) {
    const json cfg = load_config(config_path);
    const Params p = base_params(cfg);
    const CoinOperator coin = coin_from(cfg);
    const CoinState chi = state_from(cfg, p);
    const PositionDistribution pos = position_from(cfg, p);
    const QuadratureSpec quad = quad_from(cfg, grid);
    set_quadrature_workers(workers_from(cfg, workers));
    print_report(asymptotic_entanglement(coin, chi, pos, quad));
    return 0;
}

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    int count = 0;
    double at(int i) const { return min + (max - min) * i / (count - 1); }
};

int cmd_sweep(const std::string& config_path, const std::string& out_flag, int grid, int workers) {
    const json cfg = load_config(config_path);
    const json sw = cfg.value("sweep", json::object());
    if (!sw.contains("axes")) throw ConfigError("sweep.axes is required");
    const json& jaxes = sw.at("axes");
    if (!jaxes.is_array() || jaxes.empty() || jaxes.size() > 2)
        throw ConfigError("sweep.axes must list 1 or 2 axes");

    std::vector<Axis> axes;
    for (const json& ja : jaxes) {
        Axis a;
        a.name = ja.value("name", std::string());
        static const char* known[] = {"theta", "phi", "theta1", "phi1", "theta2", "phi2",
                                      "alpha", "beta"};
        if (std::find(std::begin(known), std::end(known), a.name) == std::end(known))
            throw ConfigError("unknown sweep axis '" + a.name + "'");
        a.min = angle(ja, "min");
        a.max = angle(ja, "max");
        a.count = ja.value("count", 0);
        if (a.count < 2) throw ConfigError("sweep axis count must be >= 2");
        axes.push_back(a);
    }

    const std::string out_path = !out_flag.empty() ? out_flag : sw.value("out", std::string());
    if (out_path.empty()) throw ConfigError("sweep needs an output path (--out or sweep.out)");

    const Params base = base_params(cfg);
    const CoinOperator coin = coin_from(cfg);
    const QuadratureSpec quad = quad_from(cfg, grid);

    const int n0 = axes[0].count;
    const int n1 = axes.size() == 2 ? axes[1].count : 1;
    struct Row {
        double a0 = 0.0, a1 = 0.0, entropy = 0.0;
        bool converged = false;
    };
    std::vector<Row> rows(static_cast<size_t>(n0) * n1);

    // Independent grid points distributed over a worker pool; the results
    // vector is indexed by grid position, so output order never depends on
    // completion order.
    const int nworkers = workers_from(cfg, workers);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mu;
    auto work = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= n0 * n1 || failed.load()) return;
            const int i = t / n1, j = t % n1;
            Params p = base;
            p[axes[0].name] = axes[0].at(i);
            if (axes.size() == 2) p[axes[1].name] = axes[1].at(j);
            try {
                const auto rep =
                    asymptotic_entanglement(coin, state_from(cfg, p), position_from(cfg, p), quad);
                rows[static_cast<size_t>(t)] = {axes[0].at(i),
                                                axes.size() == 2 ? axes[1].at(j) : 0.0,
                                                rep.entropy, rep.converged};
            } catch (const std::exception& e) {
                std::scoped_lock lk(error_mu);
                failed.store(true);
                if (error.empty()) error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < nworkers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (failed.load()) throw QuadratureNonConvergence(error, {});

    auto out = open_out(out_path);
    out << axes[0].name;
    if (axes.size() == 2) out << "," << axes[1].name;
    out << ",entropy_bits,converged\n";
    for (const Row& r : rows) {
        out << fmt(r.a0);
        if (axes.size() == 2) out << "," << fmt(r.a1);
        out << "," << fmt(r.entropy) << "," << (r.converged ? 1 : 0) << "\n";
    }
    std::cout << "wrote " << rows.size() << " rows to " << out_path << "\n";
    return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_flag) {
    const json cfg = load_config(config_path);
    const json sim = cfg.value("simulate", json::object());
    const int n_max = sim.value("steps", 200);
    if (n_max < 0) throw ConfigError("simulate.steps must be >= 0");
    const int window = sim.value("window", 10);
    if (window < 0) throw ConfigError("simulate.window must be >= 0");

    const Params p = base_params(cfg);
    const CoinOperator coin = coin_from(cfg);
    const CoinState chi = state_from(cfg, p);
    const PositionDistribution pos = position_from(cfg, p);

    std::vector<std::pair<int, double>> traj;
    try {
        if (n_max == 0) {
            const LatticeState st = initialize(chi, pos, 1);
            traj.emplace_back(0, von_neumann_entropy(reduced_density(st).matrix));
        } else {
            traj = entanglement_trajectory(chi, pos, coin, n_max);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    const std::string out_path = !out_flag.empty() ? out_flag : sim.value("out", std::string());
    if (!out_path.empty()) {
        auto out = open_out(out_path);
        out << "n,entropy_bits\n";
        for (const auto& [n, e] : traj) out << n << "," << fmt(e) << "\n";
    }
    std::cout << "final-window mean E = " << fmt(window_mean(traj, window)) << " bits over last "
              << std::min<size_t>(traj.size(), static_cast<size_t>(window) + 1) << " steps\n";
    return 0;
}

int cmd_validate(double tamper_c1) {
    ValidateOptions opts;
    opts.tamper_c1 = tamper_c1;
    const auto results = run_validation(opts);
    for (const auto& c : results)
        std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name
                  << (c.passed ? "" : "  [" + c.detail + "]") << "\n";
    if (all_passed(results)) {
        std::cout << "all checks passed\n";
        return 0;
    }
    std::cout << "validation FAILED\n";
    return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D quantum-walk coin-position entanglement toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    int grid = 0, workers = 0;
    double tamper_c1 = 0.0;
    app.add_option("--config", config_path, "JSON config file (angles in units of pi)");
    app.add_option("--out", out_path, "output CSV path");
    app.add_option("--grid", grid, "quadrature grid points per axis (overrides config)");
    app.add_option("--workers", workers, "worker threads (overrides config and QWALK_WORKERS)");

    auto* asym = app.add_subcommand("asymptotic", "asymptotic entanglement of one configuration");
    auto* sweep = app.add_subcommand("sweep", "entanglement over a 1- or 2-axis parameter grid");
    auto* simulate = app.add_subcommand("simulate", "finite-lattice walk, E(n) trajectory");
    auto* validate = app.add_subcommand("validate", "run the full validation suite");
    validate->add_option("--tamper-c1", tamper_c1,
                         "perturb a reference constant (harness sanity check)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (asym->parsed()) return cmd_asymptotic(config_path, grid, workers);
        if (sweep->parsed()) return cmd_sweep(config_path, out_path, grid, workers);
        if (simulate->parsed()) return cmd_simulate(config_path, out_path);
        return cmd_validate(tamper_c1);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitIo;
    } catch (const NonConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}
