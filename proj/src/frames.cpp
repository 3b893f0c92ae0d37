#include "spoqc/frames.hpp"

#include <chrono>
#include <cmath>

#include "spoqc/rng.hpp"
#include "spoqc/tableau.hpp"

namespace spoqc {

BitTable::BitTable(std::size_t r, std::size_t s)
    : rows(r), shots(s), words_per_row((s + 63) / 64), bits(r * ((s + 63) / 64), 0) {}

uint64_t bernoulli_word(Rng& rng, double p) {
    if (p <= 0) {
        return 0;
    }
    if (p >= 1) {
        return ~uint64_t{0};
    }
    if (p == 0.5) {
        return rng();
    }
    if (p > 0.1) {
        uint64_t w = 0;
        for (int k = 0; k < 64; k++) {
            w |= uint64_t{rng.coin(p)} << k;
        }
        return w;
    }
    // Geometric gaps between set bits.
    uint64_t w = 0;
    const double log_q = std::log1p(-p);
    double pos = -1;
    for (;;) {
        double u = rng.uniform();
        pos += 1 + std::floor(std::log1p(-u) / log_q);
        if (pos >= 64) {
            return w;
        }
        w |= uint64_t{1} << static_cast<int>(pos);
    }
}

FrameSampler::FrameSampler(const Circuit& c)
    : num_qubits_(c.qubit_count()), num_measurements_(c.measurement_count()) {
    if (c.level() != CircuitLevel::Instance) {
        throw std::invalid_argument("frame sampling requires an Instance circuit");
    }
    for (const Instruction& inst : c.instructions()) {
        if (is_annotation(inst.op) || inst.op == Op::QUBIT_COORDS) {
            continue;
        }
        Step s{inst.op, inst.args.empty() ? 0.0 : inst.args[0], {}};
        s.targets.reserve(inst.targets.size());
        for (const Target& t : inst.targets) {
            s.targets.push_back(t.value);
        }
        if (is_noise(inst.op) && s.p <= 0) {
            continue;
        }
        steps_.push_back(std::move(s));
    }
    Annotations ann = collect_annotations(c);
    detectors_ = ann.detectors;
    observables_ = ann.observables;
    DeterminismTrace tr = trace_determinism(c, false);
    for (std::size_t d = 0; d < detectors_.size(); d++) {
        AffineForm f = tr.parity(detectors_[d]);
        if (!tr.is_deterministic(f)) {
            throw std::invalid_argument("detector " + std::to_string(d) + " is not deterministic");
        }
        if (f.get(0)) {
            throw std::invalid_argument("detector " + std::to_string(d) + " has a nonzero noiseless value");
        }
    }
    for (std::size_t o = 0; o < observables_.size(); o++) {
        AffineForm f = tr.parity(observables_[o]);
        if (!tr.is_deterministic(f)) {
            throw std::invalid_argument("observable " + std::to_string(o) + " is not deterministic");
        }
        obs_reference_.push_back(f.get(0));
    }
}

void FrameSampler::run_word(uint64_t seed_word, uint64_t lane_mask, std::vector<uint64_t>& x,
                            std::vector<uint64_t>& z, std::vector<uint64_t>& rec) const {
    Rng rng(seed_word);
    std::fill(x.begin(), x.end(), 0);
    std::fill(z.begin(), z.end(), 0);
    std::size_t m = 0;
    for (const Step& s : steps_) {
        const auto& t = s.targets;
        switch (s.op) {
            case Op::R:
            case Op::RX:
                for (uint32_t q : t) {
                    x[q] = 0;
                    z[q] = 0;
                }
                break;
            case Op::H:
                for (uint32_t q : t) {
                    std::swap(x[q], z[q]);
                }
                break;
            case Op::H_YZ:
                for (uint32_t q : t) {
                    x[q] ^= z[q];
                }
                break;
            case Op::S:
            case Op::S_DAG:
                for (uint32_t q : t) {
                    z[q] ^= x[q];
                }
                break;
            case Op::CZ:
                for (std::size_t k = 0; k + 1 < t.size(); k += 2) {
                    z[t[k]] ^= x[t[k + 1]];
                    z[t[k + 1]] ^= x[t[k]];
                }
                break;
            case Op::M:
                for (uint32_t q : t) {
                    rec[m++] = x[q];
                }
                break;
            case Op::MX:
                for (uint32_t q : t) {
                    rec[m++] = z[q];
                }
                break;
            case Op::MZZ:
                for (std::size_t k = 0; k + 1 < t.size(); k += 2) {
                    rec[m++] = x[t[k]] ^ x[t[k + 1]];
                }
                break;
            case Op::MXX:
                for (std::size_t k = 0; k + 1 < t.size(); k += 2) {
                    rec[m++] = z[t[k]] ^ z[t[k + 1]];
                }
                break;
            case Op::MYY:
                for (std::size_t k = 0; k + 1 < t.size(); k += 2) {
                    rec[m++] = x[t[k]] ^ z[t[k]] ^ x[t[k + 1]] ^ z[t[k + 1]];
                }
                break;
            case Op::X_ERROR:
                for (uint32_t q : t) {
                    x[q] ^= bernoulli_word(rng, s.p) & lane_mask;
                }
                break;
            case Op::Z_ERROR:
                for (uint32_t q : t) {
                    z[q] ^= bernoulli_word(rng, s.p) & lane_mask;
                }
                break;
            case Op::Y_ERROR:
                for (uint32_t q : t) {
                    uint64_t w = bernoulli_word(rng, s.p) & lane_mask;
                    x[q] ^= w;
                    z[q] ^= w;
                }
                break;
            case Op::DPH2:
                for (std::size_t k = 0; k + 1 < t.size(); k += 2) {
                    uint64_t on = bernoulli_word(rng, s.p) & lane_mask;
                    z[t[k]] ^= on & rng();
                    z[t[k + 1]] ^= on & rng();
                }
                break;
            default:
                break;
        }
    }
}

SampleResult FrameSampler::sample(std::size_t shots, uint64_t seed) const { return sample_packed(shots, seed, 64); }

SampleResult FrameSampler::sample_packed(std::size_t shots, uint64_t seed, unsigned shots_per_word) const {
    if (shots_per_word == 0 || shots_per_word > 64) {
        throw std::invalid_argument("shots_per_word must lie in [1, 64]");
    }
    SampleResult out{BitTable(detectors_.size(), shots), BitTable(observables_.size(), shots)};
    std::vector<uint64_t> x(num_qubits_), z(num_qubits_), rec(num_measurements_);
    const uint64_t lane_mask = shots_per_word == 64 ? ~uint64_t{0} : (uint64_t{1} << shots_per_word) - 1;
    std::size_t done = 0;
    for (std::size_t batch = 0; done < shots; batch++) {
        run_word(derive_seed(seed, stream_tag::kShots, batch), lane_mask, x, z, rec);
        std::size_t take = std::min<std::size_t>(shots_per_word, shots - done);
        auto scatter = [&](BitTable& table, std::size_t row, uint64_t bits) {
            if (shots_per_word == 64) {
                uint64_t keep = take == 64 ? ~uint64_t{0} : (uint64_t{1} << take) - 1;
                table.word(row, done >> 6) = bits & keep;
                return;
            }
            for (std::size_t k = 0; k < take; k++) {
                std::size_t s = done + k;
                if ((bits >> k) & 1) {
                    table.word(row, s >> 6) |= uint64_t{1} << (s & 63);
                }
            }
        };
        for (std::size_t d = 0; d < detectors_.size(); d++) {
            uint64_t v = 0;
            for (std::size_t r : detectors_[d]) {
                v ^= rec[r];
            }
            scatter(out.detectors, d, v);
        }
        for (std::size_t o = 0; o < observables_.size(); o++) {
            uint64_t v = 0;
            for (std::size_t r : observables_[o]) {
                v ^= rec[r];
            }
            scatter(out.observables, o, v);
        }
        done += take;
    }
    return out;
}

SampleResult sample(const Circuit& c, std::size_t shots, uint64_t seed) { return FrameSampler(c).sample(shots, seed); }

double throughput_report(const Circuit& c, std::size_t shots, unsigned shots_per_word) {
    FrameSampler fs(c);
    double best = 0;
    for (int rep = 0; rep < 3; rep++) {
        auto t0 = std::chrono::steady_clock::now();
        SampleResult r = fs.sample_packed(shots, 1234 + rep, shots_per_word);
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        (void)r;
        best = std::max(best, static_cast<double>(shots) / std::max(dt, 1e-9));
    }
    return best;
}

}  // namespace spoqc
