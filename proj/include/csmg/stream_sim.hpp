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

#ifndef CSMG_STREAM_SIM_HPP
#define CSMG_STREAM_SIM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "csmg/click_record.hpp"
#include "csmg/frame.hpp"
#include "csmg/rng.hpp"

namespace csmg {

/// Source, noise and detection parameters of one experiment.
struct ExperimentConfig {
    double p_d = 1.0;      // joint collection + detection probability
    double q_x = 0.0;      // splitter routing probabilities
    double q_y = 0.5;
    double q_z = 0.5;
    double p_sigma = 0.0;  // single-photon Pauli error probability
    double p_zz = 0.0;     // adjacent-pair ZZ error probability
    std::uint64_t n_photons = 0;
    std::uint64_t seed = 1;
    std::uint64_t burn_in = 100;
    double tau_em = 1e-9;  // emission period, seconds

    void validate() const {
        auto check_prob = [](double p, const char *name) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
            }
        };
        check_prob(p_d, "p_d");
        check_prob(q_x, "q_x");
        check_prob(q_y, "q_y");
        check_prob(q_z, "q_z");
        check_prob(p_sigma, "p_sigma");
        check_prob(p_zz, "p_zz");
        if (std::abs(q_x + q_y + q_z - 1.0) > 1e-12) {
            throw std::invalid_argument("q_x + q_y + q_z must equal 1");
        }
        if (!(tau_em > 0.0)) {
            throw std::invalid_argument("tau_em must be positive");
        }
    }
};

/// Which noise fired in one noise step.
struct NoiseEvents {
    PauliLetter sigma = PauliLetter::I;
    bool zz = false;
};

struct NoiseTally {
    std::uint64_t photons = 0;
    std::array<std::uint64_t, 4> sigma{};  // indexed by PauliLetter
    std::uint64_t zz = 0;

    void add(const NoiseEvents &e) {
        ++photons;
        sigma[static_cast<std::size_t>(e.sigma)] += 1;
        zz += e.zz ? 1 : 0;
    }
};

/// Noise acting on `photon` right before it is finalized: with probability
/// p_zz a Z_photon Z_{photon+1} error (only if the successor is active),
/// then with probability p_sigma a uniformly random X/Y/Z on `photon`.
///
/// Both act after every controlled-phase touching `photon` has been applied,
/// so they are Pauli errors on the finished cluster state.
inline NoiseEvents apply_noise_step(StabilizerFrame &frame, std::int64_t photon, double p_sigma, double p_zz,
                                    Rng &rng) {
    NoiseEvents ev;
    if (frame.is_active(photon + 1) && rng.bernoulli(p_zz)) {
        frame.apply_zz(photon, photon + 1);
        ev.zz = true;
    }
    if (rng.bernoulli(p_sigma)) {
        static constexpr PauliLetter kLetters[3] = {PauliLetter::X, PauliLetter::Y, PauliLetter::Z};
        ev.sigma = kLetters[rng.below3()];
        frame.apply_letter(photon, ev.sigma);
    }
    return ev;
}

/// The cluster-state machine gun: emits a linear cluster one photon at a
/// time, applies noise and finalizes each photon as soon as its successor
/// exists. At most two photons are ever active.
class ClusterPipeline {
   public:
    ClusterPipeline(std::uint64_t n_photons, double p_sigma, double p_zz, Rng rng)
        : n_photons_(n_photons), p_sigma_(p_sigma), p_zz_(p_zz), rng_(std::move(rng)) {
    }

    std::uint64_t produced() const {
        return next_;
    }
    bool done() const {
        return next_ >= n_photons_;
    }
    const NoiseTally &tally() const {
        return tally_;
    }
    std::size_t max_frontier() const {
        return max_frontier_;
    }
    Rng &rng() {
        return rng_;
    }

    /// Finalizes the next photon. `readout(rng)` returns the basis it is
    /// detected in, or nullopt when the photon is lost.
    template <class Readout>
    Event next(Readout &&readout) {
        if (done()) {
            throw std::out_of_range("photon stream exhausted");
        }
        std::int64_t k = static_cast<std::int64_t>(next_) + 1;
        if (k == 1) {
            frame_.emit_cluster_qubit(1);
        }
        if (next_ + 1 < n_photons_) {
            frame_.emit_cluster_qubit(k + 1);
        }
        max_frontier_ = std::max(max_frontier_, frame_.num_qubits());
        tally_.add(apply_noise_step(frame_, k, p_sigma_, p_zz_, rng_));
        std::optional<MeasBasis> basis = readout(rng_);
        Event ev = Event::Lost;
        if (basis) {
            ev = make_event(*basis, frame_.measure(k, *basis, rng_));
            frame_.trace_out(k);
        } else {
            frame_.discard(k, rng_);
        }
        ++next_;
        return ev;
    }

   private:
    std::uint64_t n_photons_;
    double p_sigma_;
    double p_zz_;
    Rng rng_;
    StabilizerFrame frame_;
    std::uint64_t next_ = 0;
    std::size_t max_frontier_ = 0;
    NoiseTally tally_;
};

/// Random passive readout: detect with probability p_d, then route to a
/// basis by the splitter probabilities.
class PassiveReadout {
   public:
    explicit PassiveReadout(const ExperimentConfig &cfg) : p_d_(cfg.p_d) {
        const std::array<std::pair<MeasBasis, double>, 3> qs{{
            {MeasBasis::X, cfg.q_x},
            {MeasBasis::Y, cfg.q_y},
            {MeasBasis::Z, cfg.q_z},
        }};
        double cumulative = 0;
        for (const auto &[b, q] : qs) {
            if (q > 0) {
                cumulative += q;
                bases_[count_] = b;
                cumulative_[count_] = cumulative;
                ++count_;
            }
        }
    }

    std::optional<MeasBasis> operator()(Rng &rng) const {
        if (!rng.bernoulli(p_d_)) {
            return std::nullopt;
        }
        double u = rng.uniform();
        for (std::size_t i = 0; i + 1 < count_; ++i) {
            if (u < cumulative_[i]) {
                return bases_[i];
            }
        }
        return bases_[count_ - 1];
    }

   private:
    double p_d_;
    std::array<MeasBasis, 3> bases_{};
    std::array<double, 3> cumulative_{};
    std::size_t count_ = 0;
};

/// Incremental simulator for one stream; lets callers process records far
/// larger than memory chunk by chunk.
class PhotonStream {
   public:
    explicit PhotonStream(const ExperimentConfig &cfg, std::uint64_t stream = 0)
        : config_((cfg.validate(), cfg)),
          pipeline_(cfg.n_photons, cfg.p_sigma, cfg.p_zz, Rng(cfg.seed, stream)),
          readout_(cfg) {
    }

    const ExperimentConfig &config() const {
        return config_;
    }
    std::uint64_t produced() const {
        return pipeline_.produced();
    }
    std::uint64_t remaining() const {
        return config_.n_photons - pipeline_.produced();
    }
    const NoiseTally &tally() const {
        return pipeline_.tally();
    }
    std::size_t max_frontier() const {
        return pipeline_.max_frontier();
    }

    /// Fills `out` with the next events; returns how many were written.
    std::size_t generate(std::span<Event> out) {
        std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(out.size(), remaining()));
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = pipeline_.next(readout_);
        }
        return n;
    }

   private:
    ExperimentConfig config_;
    ClusterPipeline pipeline_;
    PassiveReadout readout_;
};

/// Simulates a full record. Deterministic in (config, stream).
inline ClickRecord simulate(const ExperimentConfig &cfg, std::uint64_t stream = 0) {
    PhotonStream source(cfg, stream);
    ClickRecord record;
    record.burn_in = cfg.burn_in;
    record.events.resize(cfg.n_photons);
    source.generate(record.events);
    return record;
}

/// Independent streams (substreams 0..n_streams-1 of cfg.seed), simulated on
/// up to `threads` threads. The output does not depend on `threads`.
inline std::vector<ClickRecord> simulate_streams(const ExperimentConfig &cfg, std::size_t n_streams,
                                                 std::size_t threads = 1) {
    cfg.validate();
    std::vector<ClickRecord> out(n_streams);
    threads = std::max<std::size_t>(1, std::min(threads, n_streams));
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t s = t; s < n_streams; s += threads) {
                out[s] = simulate(cfg, s);
            }
        });
    }
    for (auto &th : pool) {
        th.join();
    }
    return out;
}

/// Per-photon readout instruction for forced-basis runs.
enum class Readout : std::uint8_t { Lost, X, Y, Z };

/// Runs the pipeline with a fixed readout per photon (no random routing).
inline std::vector<Event> simulate_forced(std::span<const Readout> schedule, double p_sigma, double p_zz,
                                          std::uint64_t seed, std::uint64_t stream = 0) {
    ClusterPipeline pipeline(schedule.size(), p_sigma, p_zz, Rng(seed, stream));
    std::vector<Event> out;
    out.reserve(schedule.size());
    for (Readout r : schedule) {
        out.push_back(pipeline.next([r](Rng &) -> std::optional<MeasBasis> {
            switch (r) {
                case Readout::X:
                    return MeasBasis::X;
                case Readout::Y:
                    return MeasBasis::Y;
                case Readout::Z:
                    return MeasBasis::Z;
                default:
                    return std::nullopt;
            }
        }));
    }
    return out;
}

}  // namespace csmg

#endif  // CSMG_STREAM_SIM_HPP
