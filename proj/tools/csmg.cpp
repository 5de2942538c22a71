// Copyright 2026 The CSMG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// csmg: simulate, scan and analyze cluster-state photon streams.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "csmg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerification = 3;

std::size_t thread_budget() {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("CSMG_THREADS")) {
        try {
            long cap = std::stol(env);
            if (cap >= 1) {
                n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
            }
        } catch (const std::exception &) {
            throw std::invalid_argument(std::string("CSMG_THREADS must be a positive integer, got '") + env + "'");
        }
    }
    return n;
}

std::vector<csmg::Family> parse_families(const std::string &list) {
    std::vector<csmg::Family> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(csmg::parse_family(item));
        }
    }
    if (out.empty()) {
        throw std::invalid_argument("--families needs at least one of gamma1,gamma2");
    }
    return out;
}

void write_text(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write to " + path + " failed");
    }
}

std::uint64_t photon_count(double v) {
    if (!(v >= 0.0) || v > 1e18 || v != std::floor(v)) {
        throw std::invalid_argument("--photons must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(v);
}

// Flag values, applied over a --config file when given.
struct Flags {
    std::string config;
    double pd = 0, psigma = 0, pzz = 0, qx = 0, qy = 0, qz = 0, photons = 0;
    std::uint64_t seed = 0, burn_in = 0;
    std::int64_t lmax = 0;
    std::vector<std::int64_t> ls;
    std::string families, mode, out;
};

struct Options {
    CLI::Option *pd = nullptr, *psigma = nullptr, *pzz = nullptr, *qx = nullptr, *qy = nullptr, *qz = nullptr,
                *photons = nullptr, *seed = nullptr, *burn_in = nullptr, *lmax = nullptr, *ls = nullptr,
                *families = nullptr, *mode = nullptr;
};

void add_experiment_flags(CLI::App *app, Flags &f, Options &o) {
    o.pd = app->add_option("--pd", f.pd, "Joint collection and detection probability");
    o.psigma = app->add_option("--psigma", f.psigma, "Single-photon Pauli error probability");
    o.pzz = app->add_option("--pzz", f.pzz, "Adjacent ZZ error probability");
    o.qx = app->add_option("--qx", f.qx, "Probability of routing to the X detector");
    o.qy = app->add_option("--qy", f.qy, "Probability of routing to the Y detector");
    o.qz = app->add_option("--qz", f.qz, "Probability of routing to the Z detector");
    o.photons = app->add_option("--photons", f.photons, "Number of photons (1e6 style accepted)");
    o.seed = app->add_option("--seed", f.seed, "Random seed");
    o.burn_in = app->add_option("--burn-in", f.burn_in, "Photons skipped before the first instance");
}

void add_template_flags(CLI::App *app, Flags &f, Options &o) {
    o.lmax = app->add_option("--lmax", f.lmax, "Largest separation l");
    o.ls = app->add_option("--l", f.ls, "Explicit separations (overrides --lmax)")->delimiter(',');
    o.families = app->add_option("--families", f.families, "Comma-separated: gamma1,gamma2");
    o.mode = app->add_option("--mode", f.mode, "overlapping or non-overlapping");
}

csmg::RunConfig resolve(const Flags &f, const Options &o) {
    csmg::RunConfig c;
    if (!f.config.empty()) {
        c = csmg::load_run_config(f.config);
    }
    auto &e = c.experiment;
    auto set = [](CLI::Option *opt, auto &dst, const auto &value) {
        if (opt && opt->count() > 0) {
            dst = value;
        }
    };
    set(o.pd, e.p_d, f.pd);
    set(o.psigma, e.p_sigma, f.psigma);
    set(o.pzz, e.p_zz, f.pzz);
    set(o.qx, e.q_x, f.qx);
    set(o.qy, e.q_y, f.qy);
    set(o.qz, e.q_z, f.qz);
    if (o.photons && o.photons->count() > 0) {
        e.n_photons = photon_count(f.photons);
    }
    set(o.seed, e.seed, f.seed);
    set(o.burn_in, e.burn_in, f.burn_in);
    set(o.lmax, c.l_max, f.lmax);
    set(o.ls, c.ls, f.ls);
    if (o.families && o.families->count() > 0) {
        c.families = parse_families(f.families);
    }
    if (o.mode && o.mode->count() > 0) {
        c.mode = csmg::parse_scan_mode(f.mode);
    }
    c.validate();
    return c;
}

int cmd_simulate(const csmg::RunConfig &c, const std::string &out_path) {
    const auto &cfg = c.experiment;
    std::string path = out_path.empty() ? c.record_path : out_path;
    csmg::PhotonStream source(cfg);
    csmg::RecordWriter writer(path, {cfg.n_photons, cfg.burn_in});
    std::vector<csmg::Event> buf(1 << 20);
    while (std::size_t n = source.generate(buf)) {
        writer.write(std::span<const csmg::Event>(buf.data(), n));
    }
    writer.close();
    std::cerr << "wrote " << cfg.n_photons << " photons to " << path << "\n";
    return kExitOk;
}

int cmd_scan(const csmg::RunConfig &c, const std::string &record_path, const std::string &out_path,
             std::size_t chunk) {
    auto record = csmg::read_record(record_path);
    auto templates = c.templates();
    std::size_t threads = thread_budget();
    csmg::ScanOptions opts{c.mode, true};
    auto estimates = threads > 1 || chunk > 0
                         ? csmg::scan_chunked(record.events, record.burn_in, templates, opts,
                                              chunk > 0 ? chunk : std::max<std::size_t>(1, record.events.size() / threads + 1),
                                              threads)
                         : csmg::scan(record, templates, opts);
    write_text(out_path, csmg::estimates_csv(estimates));
    return kExitOk;
}

int cmd_analyze(const std::string &estimates_path, const std::string &out_dir, const std::string &model_name,
                std::int64_t indirect_l_max) {
    std::ifstream in(estimates_path);
    if (!in) {
        throw std::runtime_error("cannot open " + estimates_path);
    }
    auto estimates = csmg::read_estimates_csv(in);
    auto analysis = csmg::analyze(estimates, csmg::parse_decay_model(model_name), indirect_l_max);
    if (out_dir.empty() || out_dir == "-") {
        std::cout << csmg::bound_table_csv(analysis.direct);
        std::cerr << csmg::to_json(analysis).dump(2) << "\n";
        return kExitOk;
    }
    std::filesystem::create_directories(out_dir);
    write_text(out_dir + "/direct_bounds.csv", csmg::bound_table_csv(analysis.direct));
    if (analysis.has_fit) {
        write_text(out_dir + "/indirect_bounds.csv", csmg::bound_table_csv(analysis.indirect));
    }
    write_text(out_dir + "/analysis.json", csmg::to_json(analysis).dump(2) + "\n");
    std::cerr << "direct xi_E = " << analysis.direct.xi_e();
    if (analysis.has_fit) {
        std::cerr << ", fitted p_sigma = " << analysis.fit.p_sigma << " +- " << analysis.fit.p_sigma_stderr()
                  << ", p_zz = " << analysis.fit.p_zz << " +- " << analysis.fit.p_zz_stderr();
    }
    std::cerr << "\n";
    return kExitOk;
}

int cmd_plan(double p_d, double n_photons, double min_instances, const std::string &out) {
    std::string text = csmg::plan_csv(p_d, n_photons, min_instances);
    text += "\n" + csmg::naive_tomography_csv({p_d}, n_photons);
    write_text(out, text);
    return kExitOk;
}

int cmd_verify(std::int64_t l_max, int trials, const std::string &out) {
    std::vector<csmg::VerificationReport> reports;
    bool all_ok = true;
    for (const auto &t : csmg::template_grid({csmg::Family::Gamma1, csmg::Family::Gamma2}, l_max)) {
        reports.push_back(csmg::verify_template(t, trials));
        all_ok = all_ok && reports.back().ok();
    }
    write_text(out, csmg::verification_csv(reports));
    if (!all_ok) {
        std::cerr << "template verification failed\n";
        return kExitVerification;
    }
    return kExitOk;
}

int cmd_report(const std::string &out_dir, double n_photons, double min_instances, const std::string &estimates,
               std::int64_t indirect_l_max) {
    std::string dir = out_dir.empty() ? "report" : out_dir;
    std::filesystem::create_directories(dir);
    write_text(dir + "/naive_tomography.csv", csmg::naive_tomography_csv({0.1, 0.5, 0.9}, n_photons));
    write_text(dir + "/max_length.csv", csmg::max_length_csv(n_photons, min_instances));
    write_text(dir + "/xi_curve.csv", csmg::xi_curve_csv({0.0, 0.002}));
    if (!estimates.empty()) {
        return cmd_analyze(estimates, dir, "exact", indirect_l_max);
    }
    std::cerr << "wrote report tables to " << dir << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Cluster-state photon stream simulator and entanglement-length analyzer"};
    app.require_subcommand(1);
    Flags flags;

    Options sim_opts;
    auto *sim = app.add_subcommand("simulate", "Simulate a photon stream and write a record file");
    sim->add_option("--config", flags.config, "JSON run config; flags override it");
    add_experiment_flags(sim, flags, sim_opts);
    std::string sim_out;
    sim->add_option("--out", sim_out, "Record file to write");

    Options scan_opts;
    auto *scn = app.add_subcommand("scan", "Scan a record for template instances");
    std::string record_path, scan_out;
    std::size_t chunk = 0;
    scn->add_option("record", record_path, "Record file")->required();
    scn->add_option("--config", flags.config, "JSON run config; flags override it");
    add_template_flags(scn, flags, scan_opts);
    scn->add_option("--chunk", chunk, "Chunk size for the parallel scan");
    scn->add_option("--out", scan_out, "Estimates CSV (default stdout)");

    auto *ana = app.add_subcommand("analyze", "Entanglement bounds and error-model fit from estimates");
    std::string estimates_path, ana_out, model = "exact";
    std::int64_t indirect_l_max = 200;
    ana->add_option("estimates", estimates_path, "Estimates CSV")->required();
    ana->add_option("--out", ana_out, "Output directory (default: stdout/stderr)");
    ana->add_option("--model", model, "Decay model for the fit: exact or asymptotic");
    ana->add_option("--lmax", indirect_l_max, "Largest l of the indirect bound table");

    auto *pln = app.add_subcommand("plan", "Direct-measurement reach for an experiment");
    double plan_pd = 0.5, plan_photons = 1e10, min_instances = 1.0;
    std::string plan_out;
    pln->add_option("--pd", plan_pd, "Joint collection and detection probability");
    pln->add_option("--photons", plan_photons, "Photons per experiment");
    pln->add_option("--min-instances", min_instances, "Expected instances required per template");
    pln->add_option("--out", plan_out, "Output CSV (default stdout)");

    auto *ver = app.add_subcommand("verify", "Check every template against the stabilizer oracle");
    std::int64_t verify_l_max = 50;
    int trials = 64;
    std::string verify_out;
    ver->add_option("--lmax", verify_l_max, "Largest separation l");
    ver->add_option("--trials", trials, "Dynamic trials per template");
    ver->add_option("--out", verify_out, "Output CSV (default stdout)");

    auto *rep = app.add_subcommand("report", "Emit plot-ready planning and extrapolation tables");
    std::string rep_out, rep_estimates;
    double rep_photons = 1e10, rep_min_instances = 1.0;
    rep->add_option("--out", rep_out, "Output directory");
    rep->add_option("--photons", rep_photons, "Photons per experiment for the planning tables");
    rep->add_option("--min-instances", rep_min_instances, "Expected instances required per template");
    rep->add_option("--estimates", rep_estimates, "Also analyze this estimates CSV");
    rep->add_option("--lmax", indirect_l_max, "Largest l of the indirect bound table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed()) {
            return cmd_simulate(resolve(flags, sim_opts), sim_out);
        }
        if (scn->parsed()) {
            return cmd_scan(resolve(flags, scan_opts), record_path, scan_out, chunk);
        }
        if (ana->parsed()) {
            return cmd_analyze(estimates_path, ana_out, model, indirect_l_max);
        }
        if (pln->parsed()) {
            return cmd_plan(plan_pd, plan_photons, min_instances, plan_out);
        }
        if (ver->parsed()) {
            return cmd_verify(verify_l_max, trials, verify_out);
        }
        if (rep->parsed()) {
            return cmd_report(rep_out, rep_photons, rep_min_instances, rep_estimates, indirect_l_max);
        }
    } catch (const csmg::DataError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const csmg::VerificationError &e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitVerification;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
