// Command-line front end: compute-cs, eval-operator, verify, simulate, scan.
// Exit codes: 0 success, 1 verification FAIL, 2 usage/config error,
// 3 numerical failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "kinetic_barrier/config.hpp"
#include "kinetic_barrier/report.hpp"
#include "kinetic_barrier/sigma.hpp"

namespace fs = std::filesystem;
using namespace kb;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string output_dir = ".";
    long long seed = -1;  // -1: take from config
    int threads = 0;
    int verbosity = 0;
};

Config load_config(const CommonArgs& a) {
    Config cfg = Config::from_file(a.config_path);
    return cfg;
}

std::string out_path(const CommonArgs& a, const std::string& stem,
                     const std::string& ts, const std::string& ext = ".csv") {
    fs::create_directories(a.output_dir);
    return (fs::path(a.output_dir) / (stem + "-" + ts + ext)).string();
}

void emit_manifest(const CommonArgs& a, const std::string& command,
                   const std::string& ts, const Config& cfg) {
    std::string dump = cfg.dump();
    if (a.seed >= 0) dump += "seed = " + std::to_string(a.seed) + " # cli override\n";
    if (a.threads > 0)
        dump += "threads = " + std::to_string(a.threads) + " # cli override\n";
    write_manifest(out_path(a, command, ts, "-manifest.txt"), command, dump);
}

int cmd_compute_cs(const CommonArgs& a) {
    const Config cfg = load_config(a);
    const auto p = cfg.kernel_params();
    const double tmin = cfg.get_double("theta_min", 0.0);
    const auto cs = cancellation_constant(p, tmin);
    const std::string ts = timestamp_now();
    CsvWriter w(out_path(a, "compute-cs", ts));
    w.row({"d", "gamma", "s", "theta_min", "c_s", "error"});
    w.row({std::to_string(p.d), fmt_double(p.gamma), fmt_double(p.s),
           fmt_double(tmin), fmt_double(cs.value), fmt_double(cs.quadrature_error)});
    emit_manifest(a, "compute-cs", ts, cfg);
    if (a.verbosity > 0)
        std::fprintf(stderr, "C_S = %.12g (+/- %.3g)\n", cs.value,
                     cs.quadrature_error);
    return 0;
}

int cmd_eval_operator(const CommonArgs& a, const std::string& v_spec) {
    Config cfg = load_config(a);
    const auto p = cfg.kernel_params();
    if (p.d != 2) throw ConfigError("eval-operator: CLI path supports d = 2");
    auto f = cfg.fixture<2>();

    Vec<2> v{};
    if (std::sscanf(v_spec.c_str(), "%lf,%lf", &v[0], &v[1]) != 2)
        throw ConfigError("eval-operator: --v expects 'vx,vy'");

    const double q = cfg.get_double("barrier.q", 5.0);
    const double tmin = cfg.get_double("theta_min", 0.1);
    const auto cs = cancellation_constant(p);
    auto opts = cfg.carleman_opts();
    opts.theta_min = 0.0;
    opts.g_support_radius = f.grid.support_radius();

    const auto split =
        split_operator(f, [&](const Vec<2>& x) { return f.eval(x); }, v, q, p, cs,
                       PVPolicy{}, opts);
    SigmaOpts so;
    so.theta_min = tmin;
    const auto sig = q_sigma_oracle(f, v, p, so);

    const std::string ts = timestamp_now();
    CsvWriter w(out_path(a, "eval-operator", ts));
    w.row({"vx", "vy", "q", "good", "bad1", "bad2", "bad3", "q_ns", "total",
           "recombination_defect", "combined_error", "sigma_oracle_tmin",
           "sigma_value", "sigma_error"});
    w.row({fmt_double(v[0]), fmt_double(v[1]), fmt_double(q),
           fmt_double(split.good.value), fmt_double(split.bad1.value),
           fmt_double(split.bad2.value), fmt_double(split.bad3.value),
           fmt_double(split.q_ns_term.value), fmt_double(split.total.value),
           fmt_double(split.recombination_defect()),
           fmt_double(split.combined_error()), fmt_double(tmin),
           fmt_double(sig.value), fmt_double(sig.error)});
    emit_manifest(a, "eval-operator", ts, cfg);
    return 0;
}

int cmd_verify(const CommonArgs& a, const std::string& prop) {
    Config cfg = load_config(a);
    auto vc = cfg.verifier_config();
    if (a.seed >= 0) vc.seed = static_cast<std::uint64_t>(a.seed);

    std::vector<PropId> ids;
    if (prop == "all") {
        ids = all_prop_ids();
    } else {
        const auto id = prop_from_string(prop);
        if (!id) throw ConfigError("verify: unknown proposition id: " + prop);
        ids = {*id};
    }

    const auto run = run_verification(vc, ids);
    const std::string ts = timestamp_now();
    std::string summary = "{\n  \"propositions\": [\n";
    for (std::size_t i = 0; i < run.reports.size(); ++i) {
        const auto& rep = run.reports[i];
        write_proposition_csv(
            out_path(a, "verify", ts, "-prop" + to_string(rep.id) + ".csv"), rep);
        append_summary_json(summary, rep, i == 0);
        std::printf("prop %-5s %s\n", to_string(rep.id).c_str(),
                    rep.verdict ? "PASS" : "FAIL");
    }
    summary += "\n  ],\n  \"all_pass\": ";
    summary += run.all_pass ? "true" : "false";
    summary += "\n}\n";
    std::ofstream(out_path(a, "verify", ts, "-summary.json")) << summary;
    emit_manifest(a, "verify", ts, cfg);
    return run.all_pass ? 0 : 1;
}

int cmd_simulate(const CommonArgs& a) {
    Config cfg = load_config(a);
    auto sc = cfg.solver_config<2>();
    if (a.threads > 0) sc.threads = a.threads;
    auto f0 = cfg.fixture<2>();
    const auto res = simulate(sc, f0);
    const std::string ts = timestamp_now();
    write_moment_trace_csv(out_path(a, "simulate", ts), res.trace);
    for (std::size_t k = 0; k < res.trajectory.snapshots.size(); ++k) {
        char tag[64];
        std::snprintf(tag, sizeof tag, "-t%.6g", res.trajectory.times[k]);
        write_snapshot(out_path(a, "snapshot", ts + tag),
                       res.trajectory.snapshots[k], res.trajectory.times[k]);
    }
    emit_manifest(a, "simulate", ts, cfg);
    if (a.verbosity > 0)
        std::fprintf(stderr, "steps: %zu, dt = %.4g, clipped mass = %.4g\n",
                     res.trace.times.size() - 1, res.dt_used,
                     res.trajectory.cumulative_clipped);
    return 0;
}

int cmd_scan(const CommonArgs& a, const std::string& barrier_form) {
    Config cfg = load_config(a);
    auto sc = cfg.solver_config<2>();
    if (a.threads > 0) sc.threads = a.threads;
    auto f0 = cfg.fixture<2>();
    if (sc.snapshot_times.empty()) {
        for (double t = 0.0; t <= sc.t_end + 1e-12; t += sc.t_end / 10.0)
            sc.snapshot_times.push_back(t);
    }
    const auto res = simulate(sc, f0);

    Barrier b = cfg.barrier();
    if (barrier_form == "plain") b.form = BarrierForm::plain;
    else if (barrier_form == "const_corrector") b.form = BarrierForm::const_corrector;
    else if (barrier_form == "power_corrector") b.form = BarrierForm::power_corrector;
    else if (barrier_form == "q0_corrector") b.form = BarrierForm::q0_corrector;
    else if (!barrier_form.empty())
        throw ConfigError("scan: unknown barrier form: " + barrier_form);

    const auto p = cfg.kernel_params();
    const auto cs = cancellation_constant(p);
    auto opts = cfg.carleman_opts();
    opts.theta_min = 0.0;
    opts.g_support_radius = f0.grid.support_radius();
    const auto scan = contact_scan(res.trajectory, b, p, cs, opts);

    const std::string ts = timestamp_now();
    write_contact_scan_csv(out_path(a, "scan", ts), scan, b);
    emit_manifest(a, "scan", ts, cfg);
    if (a.verbosity > 0)
        std::fprintf(stderr, "contact: %s, margin = %.6g at t = %.4g\n",
                     scan.contact_found ? "yes" : "no", scan.margin, scan.t0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-cutoff Boltzmann collision operator toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string v_spec, prop = "all", barrier_form;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "key = value configuration file")
            ->required();
        sub->add_option("--output-dir", args.output_dir, "report directory");
        sub->add_option("--seed", args.seed, "override the sampling seed");
        sub->add_option("--threads", args.threads,
                        "parallelism degree (KINETIC_BARRIER_THREADS overrides)");
        sub->add_flag("--verbose", args.verbosity, "verbose progress");
    };

    auto* c1 = app.add_subcommand("compute-cs", "cancellation-lemma constant C_S");
    add_common(c1);
    auto* c2 =
        app.add_subcommand("eval-operator", "split evaluation of Q at a velocity");
    add_common(c2);
    c2->add_option("--v", v_spec, "evaluation point 'vx,vy'")->required();
    auto* c3 = app.add_subcommand("verify", "run proposition checks");
    add_common(c3);
    c3->add_option("--prop", prop, "proposition id (e.g. 3.1) or 'all'");
    auto* c4 = app.add_subcommand("simulate", "homogeneous solver run");
    add_common(c4);
    auto* c5 = app.add_subcommand("scan", "trajectory contact scan");
    add_common(c5);
    c5->add_option("--barrier", barrier_form, "barrier form override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c1->parsed()) return cmd_compute_cs(args);
        if (c2->parsed()) return cmd_eval_operator(args, v_spec);
        if (c3->parsed()) return cmd_verify(args, prop);
        if (c4->parsed()) return cmd_simulate(args);
        if (c5->parsed()) return cmd_scan(args, barrier_form);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const OutOfRange& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 2;
}
