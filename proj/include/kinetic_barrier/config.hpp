#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kinetic_barrier/barrier.hpp"
#include "kinetic_barrier/errors.hpp"
#include "kinetic_barrier/grid.hpp"
#include "kinetic_barrier/params.hpp"
#include "kinetic_barrier/solver.hpp"
#include "kinetic_barrier/verifier.hpp"

namespace kb {

// Plain-text key = value configuration. '#' starts a comment; keys are
// dotted lowercase; all scalars are 64-bit floating point on the wire.
class Config {
   public:
    Config() = default;

    static Config from_file(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw ConfigError("cannot open config file: " + path);
        std::stringstream ss;
        ss << is.rdbuf();
        return from_string(ss.str());
    }

    static Config from_string(const std::string& text) {
        Config c;
        std::istringstream is(text);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                if (line.find_first_not_of(" \t\r") != std::string::npos)
                    throw ConfigError("config line " + std::to_string(lineno) +
                                      ": expected key = value");
                continue;
            }
            c.kv_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
        return c;
    }

    bool has(const std::string& key) const { return kv_.count(key) > 0; }

    std::string get_string(const std::string& key, const std::string& dflt) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? dflt : it->second;
    }

    double get_double(const std::string& key, double dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        try {
            std::size_t used = 0;
            const double v = std::stod(it->second, &used);
            if (used != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config key '" + key + "': not a number: " + it->second);
        }
    }

    int get_int(const std::string& key, int dflt) const {
        const double v = get_double(key, dflt);
        return static_cast<int>(v);
    }

    bool get_bool(const std::string& key, bool dflt) const {
        const std::string s = get_string(key, dflt ? "true" : "false");
        if (s == "true" || s == "1" || s == "yes") return true;
        if (s == "false" || s == "0" || s == "no") return false;
        throw ConfigError("config key '" + key + "': not a boolean: " + s);
    }

    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& dflt) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return dflt;
        std::vector<double> out;
        std::istringstream is(it->second);
        std::string tok;
        while (std::getline(is, tok, ',')) {
            if (trim(tok).empty()) continue;
            out.push_back(std::stod(trim(tok)));
        }
        return out;
    }

    // resolved view for the run manifest
    std::string dump() const {
        std::string out;
        for (const auto& [k, v] : kv_) out += k + " = " + v + "\n";
        return out;
    }

    // --- typed builders -----------------------------------------------------

    KernelParams kernel_params() const {
        KernelParams p;
        p.d = get_int("d", 2);
        p.gamma = get_double("gamma", 0.5);
        p.s = get_double("s", 0.3);
        p.btilde_lo = get_double("btilde_lo", 1.0);
        p.btilde_hi = get_double("btilde_hi", 1.0);
        validate_params(p);
        return p;
    }

    template <int D>
    VelocityGrid<D> grid() const {
        return VelocityGrid<D>(get_double("r_max", 8.0), get_int("n_per_axis", 64));
    }

    Interp interpolation() const {
        const std::string s = get_string("interpolation", "multilinear");
        if (s == "multilinear") return Interp::multilinear;
        if (s == "tricubic") return Interp::tricubic;
        throw ConfigError("unknown interpolation: " + s);
    }

    TailModel tail_model() const {
        const std::string s = get_string("tail.model", "zero");
        if (s == "zero") return TailModel::zero();
        if (s == "power_law")
            return TailModel::power_law(get_double("tail.q", get_double("barrier.q", 5.0)),
                                        get_double("tail.amplitude", 1.0));
        throw ConfigError("unknown tail.model: " + s);
    }

    HydroBounds hydro_bounds() const {
        HydroBounds b;
        b.m0 = get_double("hydro.m0", 0.1);
        b.M0 = get_double("hydro.m_cap", get_double("hydro.M0", 10.0));
        b.E0 = get_double("hydro.e0", get_double("hydro.E0", 40.0));
        b.H0 = get_double("hydro.h0", get_double("hydro.H0", 20.0));
        return b;
    }

    Barrier barrier() const {
        Barrier b;
        const std::string form = get_string("barrier.form", "plain");
        if (form == "plain") b.form = BarrierForm::plain;
        else if (form == "const_corrector") b.form = BarrierForm::const_corrector;
        else if (form == "power_corrector") b.form = BarrierForm::power_corrector;
        else if (form == "q0_corrector") b.form = BarrierForm::q0_corrector;
        else throw ConfigError("unknown barrier.form: " + form);

        b.q = get_double("barrier.q", 0.0);
        b.d = get_int("d", 2);
        b.eta = get_double("barrier.eta", 0.5);
        b.q0 = get_double("barrier.q0", b.d + 1.0);

        const double N0 = get_double("barrier.n0", 1.0);
        const std::string sched = get_string("barrier.schedule", "constant");
        const double beta =
            get_double("barrier.beta", b.d / (2.0 * get_double("s", 0.3)));
        if (sched == "constant") b.N = NSchedule::constant(N0);
        else if (sched == "inverse_power") b.N = NSchedule::inverse_power(N0, beta);
        else if (sched == "one_plus_inverse_power")
            b.N = NSchedule::one_plus_inverse_power(N0, beta);
        else throw ConfigError("unknown barrier.schedule: " + sched);

        const double eps0 = get_double("barrier.eps0", 0.0);
        const std::string esched = get_string("barrier.eps_schedule", "constant");
        const double erate = get_double("barrier.eps_rate", 0.0);
        if (esched == "constant") b.eps = EpsSchedule::constant(eps0);
        else if (esched == "exponential") b.eps = EpsSchedule::exponential(eps0, erate);
        else if (esched == "inverse_power")
            b.eps = EpsSchedule::inverse_power(eps0, erate);
        else throw ConfigError("unknown barrier.eps_schedule: " + esched);
        return b;
    }

    CarlemanOpts carleman_opts() const {
        CarlemanOpts o;
        o.n_dirs = get_int("quad.n_dirs", 32);
        o.shell_per_decade = get_int("quad.shell_per_decade", 5);
        o.per_decade = get_int("quad.per_decade", 5);
        o.plane_angles = get_int("quad.plane_angles", 12);
        o.r_plane = get_double("quad.r_plane", 0.0);
        o.r_outer = get_double("quad.r_outer", 0.0);
        o.theta_min = get_double("theta_min", 0.0);
        return o;
    }

    template <int D>
    SolverConfig<D> solver_config() const {
        SolverConfig<D> cfg;
        cfg.params = kernel_params();
        cfg.grid = grid<D>();
        cfg.dt = get_double("solver.dt", 0.0);
        cfg.t_end = get_double("solver.t_end", 1.0);
        cfg.stability_factor = get_double("solver.stability_factor", 0.2);
        const std::string st = get_string("solver.stepper", "explicit_euler");
        if (st == "explicit_euler") cfg.stepper = Stepper::explicit_euler;
        else if (st == "rk2") cfg.stepper = Stepper::rk2;
        else throw ConfigError("unknown solver.stepper: " + st);
        cfg.clip_negative = get_bool("solver.clip_negative", true);
        cfg.conserve_projection = get_bool("solver.conserve_projection", true);
        cfg.sigma.theta_min = get_double("solver.theta_min", 0.3);
        cfg.sigma.theta_per_decade = get_int("solver.theta_per_decade", 4);
        cfg.sigma.coarse_theta = get_bool("solver.coarse_theta", true);
        cfg.sigma.with_error = false;
        cfg.moment_qs = get_list("solver.moment_qs", {0.0, D + 1.0});
        cfg.snapshot_times = get_list("solver.snapshots", {});
        cfg.threads = get_int("threads", 0);
        return cfg;
    }

    template <int D>
    GridDistribution<D> fixture() const {
        auto g = grid<D>();
        auto f = make_fixture<D>(get_string("fixture", "maxwellian"), g);
        f.interp = interpolation();
        if (has("tail.model")) f.tail = tail_model();
        return f;
    }

    VerifierConfig verifier_config() const {
        VerifierConfig vc;
        vc.params = kernel_params();
        vc.bounds = hydro_bounds();
        vc.seed = static_cast<std::uint64_t>(get_double("seed", 0.0));
        vc.c_r = get_double("verify.c_r", 2.0);
        vc.grid_n = get_int("verify.grid_n", 48);
        vc.grid_r = get_double("verify.grid_r", 4.0);
        vc.opts = carleman_opts();
        // the propositions are statements about the untruncated operator
        vc.opts.theta_min = 0.0;
        vc.slope_vnorms = get_list("verify.slope_vnorms", {8.0, 16.0, 32.0, 64.0});
        return vc;
    }

   private:
    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }

    std::map<std::string, std::string> kv_;
};

}  // namespace kb
