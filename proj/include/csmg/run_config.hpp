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


#ifndef CSMG_RUN_CONFIG_HPP
#define CSMG_RUN_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "csmg/errors.hpp"
#include "csmg/scan.hpp"
#include "csmg/stream_sim.hpp"

namespace csmg {

/// Everything one CLI run needs. Stored as a flat JSON object.
struct RunConfig {
    ExperimentConfig experiment;
    std::vector<Family> families{Family::Gamma1, Family::Gamma2};
    // Explicit separations; empty means every valid l up to l_max.
    std::vector<std::int64_t> ls;
    std::int64_t l_max = 11;
    ScanMode mode = ScanMode::Overlapping;
    std::string record_path = "record.csmg";
    std::string estimates_path = "estimates.csv";
    std::string report_dir = "report";

    std::vector<Template> templates() const {
        if (ls.empty()) {
            return template_grid(families, l_max);
        }
        std::vector<Template> out;
        for (Family f : families) {
            for (std::int64_t l : ls) {
                out.push_back(make_template(f, l));
            }
        }
        return out;
    }

    void validate() const {
        experiment.validate();
        if (families.empty()) {
            throw std::invalid_argument("at least one template family is required");
        }
        for (std::int64_t l : ls) {
            if (!is_valid_separation(l)) {
                throw std::invalid_argument("l=" + std::to_string(l) + " is not of the form 3k+2");
            }
        }
        if (ls.empty() && l_max < 2) {
            throw std::invalid_argument("l_max must be at least 2");
        }
    }
};

inline nlohmann::json to_json(const RunConfig &c) {
    nlohmann::json families = nlohmann::json::array();
    for (Family f : c.families) {
        families.push_back(family_name(f));
    }
    const auto &e = c.experiment;
    return {
        {"p_d", e.p_d},
        {"q_x", e.q_x},
        {"q_y", e.q_y},
        {"q_z", e.q_z},
        {"p_sigma", e.p_sigma},
        {"p_zz", e.p_zz},
        {"n_photons", e.n_photons},
        {"seed", e.seed},
        {"burn_in", e.burn_in},
        {"tau_em", e.tau_em},
        {"families", families},
        {"l", c.ls},
        {"l_max", c.l_max},
        {"mode", scan_mode_name(c.mode)},
        {"record", c.record_path},
        {"estimates", c.estimates_path},
        {"report_dir", c.report_dir},
    };
}

/// Overlays the keys present in `j` onto `base`. Unknown keys and wrongly
/// typed values are DataErrors.
inline RunConfig run_config_from_json(const nlohmann::json &j, RunConfig base = {}) {
    if (!j.is_object()) {
        throw DataError("run config must be a JSON object");
    }
    static const std::set<std::string> known{"p_d",  "q_x",     "q_y",   "q_z",    "p_sigma", "p_zz",
                                             "n_photons", "seed", "burn_in", "tau_em", "families", "l",
                                             "l_max", "mode", "record", "estimates", "report_dir"};
    for (const auto &[key, value] : j.items()) {
        if (!known.count(key)) {
            throw DataError("unknown run config key '" + key + "'");
        }
    }
    RunConfig c = std::move(base);
    auto &e = c.experiment;
    try {
        auto get = [&](const char *key, auto &dst) {
            if (j.contains(key)) {
                j.at(key).get_to(dst);
            }
        };
        get("p_d", e.p_d);
        get("q_x", e.q_x);
        get("q_y", e.q_y);
        get("q_z", e.q_z);
        get("p_sigma", e.p_sigma);
        get("p_zz", e.p_zz);
        get("n_photons", e.n_photons);
        get("seed", e.seed);
        get("burn_in", e.burn_in);
        get("tau_em", e.tau_em);
        get("l", c.ls);
        get("l_max", c.l_max);
        get("record", c.record_path);
        get("estimates", c.estimates_path);
        get("report_dir", c.report_dir);
        if (j.contains("families")) {
            c.families.clear();
            for (const auto &f : j.at("families")) {
                c.families.push_back(parse_family(f.get<std::string>()));
            }
        }
        if (j.contains("mode")) {
            c.mode = parse_scan_mode(j.at("mode").get<std::string>());
        }
    } catch (const nlohmann::json::exception &ex) {
        throw DataError(std::string("run config: ") + ex.what());
    } catch (const std::invalid_argument &ex) {
        throw DataError(std::string("run config: ") + ex.what());
    }
    return c;
}

inline RunConfig load_run_config(const std::string &path, RunConfig base = {}) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &ex) {
        throw DataError(std::string("run config: ") + ex.what(), static_cast<std::int64_t>(ex.byte));
    }
    return run_config_from_json(j, std::move(base));
}

}  // namespace csmg

#endif  // CSMG_RUN_CONFIG_HPP
