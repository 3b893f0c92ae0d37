#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "spoqc/bench.hpp"
#include "spoqc/codes.hpp"
#include "spoqc/decode.hpp"
#include "spoqc/experiments.hpp"
#include "spoqc/frames.hpp"
#include "spoqc/noise.hpp"
#include "spoqc/optics.hpp"

using namespace spoqc;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot read " + path);
    }
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write " + path);
    }
    out << text;
}

// b8: one row per shot, bits little-endian within each byte, rows padded to whole bytes.
std::string to_b8(const BitTable& t) {
    const std::size_t row_bytes = (t.rows + 7) / 8;
    std::string out(row_bytes * t.shots, '\0');
    for (std::size_t k = 0; k < t.shots; k++) {
        for (std::size_t r = 0; r < t.rows; r++) {
            if (t.get(r, k)) {
                out[k * row_bytes + r / 8] |= static_cast<char>(1 << (r % 8));
            }
        }
    }
    return out;
}

std::vector<std::vector<uint32_t>> from_b8(const std::string& data, std::size_t bits_per_row) {
    const std::size_t row_bytes = (bits_per_row + 7) / 8;
    if (row_bytes == 0 || data.size() % row_bytes != 0) {
        throw ConfigError("detector file size does not match the detector count");
    }
    std::vector<std::vector<uint32_t>> rows(data.size() / row_bytes);
    for (std::size_t k = 0; k < rows.size(); k++) {
        for (std::size_t r = 0; r < bits_per_row; r++) {
            if ((static_cast<uint8_t>(data[k * row_bytes + r / 8]) >> (r % 8)) & 1) {
                rows[k].push_back(static_cast<uint32_t>(r));
            }
        }
    }
    return rows;
}

Flavor circuit_flavor(const Circuit& c) {
    for (const Instruction& inst : c.instructions()) {
        if (inst.op == Op::RUS_CZ || inst.op == Op::CZ) {
            return Flavor::SPOQC;
        }
    }
    return Flavor::SPOQC2;
}

NoiseModel parse_model(const std::string& text, Flavor flavor) {
    NoiseModel nm;
    nm.flavor = flavor;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad noise model: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("noise model must be an object");
    }
    for (auto& [k, v] : j.items()) {
        if (!v.is_number()) {
            throw ConfigError("noise model field " + k + " must be a number");
        }
        if (k == "prus") {
            nm.erasure_input = NoiseModel::ErasureInput::PRus;
            nm.erasure = v.get<double>();
        } else if (k == "eps") {
            nm.erasure_input = NoiseModel::ErasureInput::Epsilon;
            nm.erasure = v.get<double>();
        } else if (k == "D") {
            nm.distinguishability = v.get<double>();
        } else if (k == "ratio") {
            nm.decoherence_ratio = v.get<double>();
        } else {
            throw ConfigError("unknown noise model field: " + k);
        }
    }
    if (j.contains("prus") && j.contains("eps")) {
        throw ConfigError("give prus or eps, not both");
    }
    try {
        nm.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return nm;
}

SweepConfig config_with_overrides(const std::string& path, const std::string& out_dir) {
    SweepConfig cfg = load_config(path);
    if (!out_dir.empty()) {
        cfg.out_dir = out_dir;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-optical quantum error correction simulator"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Build a code circuit");
    std::string family = "honeycomb", flavor = "spoqc2", gen_out;
    int size = 0, rounds = 0;
    gen->add_option("--family", family, "honeycomb or surface")->check(CLI::IsMember({"honeycomb", "surface"}));
    gen->add_option("--L,-d,--size", size, "Lattice size L or distance d")->required();
    gen->add_option("--flavor", flavor, "spoqc or spoqc2")->check(CLI::IsMember({"spoqc", "spoqc2"}));
    gen->add_option("--rounds", rounds, "Sub-rounds (honeycomb) or rounds (surface); 0 for the default");
    gen->add_option("-o,--output", gen_out, "Output .qcir (stdout if omitted)");

    // lower
    auto* low = app.add_subcommand("lower", "Sample an erasure instance and add Pauli noise");
    std::string model = "{}", low_in, low_out;
    uint64_t low_seed = 1;
    low->add_option("--model", model, "JSON {prus|eps, D, ratio}");
    low->add_option("--seed", low_seed);
    low->add_option("input", low_in, "Input .qcir")->required();
    low->add_option("-o,--output", low_out);

    // sample
    auto* smp = app.add_subcommand("sample", "Sample detector bits with the frame simulator");
    std::string smp_in, smp_out, smp_obs, smp_dem;
    std::size_t shots = 1024;
    uint64_t smp_seed = 1;
    smp->add_option("input", smp_in, "Instance .qcir")->required();
    smp->add_option("--shots", shots);
    smp->add_option("--seed", smp_seed);
    smp->add_option("-o,--output", smp_out, "Detector bits (.b8)")->required();
    smp->add_option("--obs-out", smp_obs, "Observable flips (.b8)");
    smp->add_option("--dem-out", smp_dem, "Detector error model of the circuit");

    // decode
    auto* dec = app.add_subcommand("decode", "Decode detector bits with MWPM");
    std::string dec_dem, dec_dets, dec_out;
    dec->add_option("--dem", dec_dem)->required();
    dec->add_option("--dets", dec_dets)->required();
    dec->add_option("-o,--output", dec_out, "Predicted observable flips (.b8)")->required();

    // sweep
    auto* swp = app.add_subcommand("sweep", "Run a threshold sweep from a run config");
    std::string swp_cfg, swp_dir;
    unsigned swp_workers = 0;
    bool swp_fit = false;
    swp->add_option("config", swp_cfg)->required();
    swp->add_option("--out-dir", swp_dir, "Overrides out_dir");
    swp->add_option("--workers", swp_workers, "Overrides SPOQC_WORKERS");
    swp->add_flag("--fit", swp_fit, "Also fit and write the full report");

    // fit
    auto* fit = app.add_subcommand("fit", "Fit the threshold crossing of a points file");
    std::string fit_in, fit_out;
    std::size_t fit_k = 10000;
    uint64_t fit_seed = 1;
    fit->add_option("points", fit_in)->required();
    fit->add_option("-K,--draws", fit_k);
    fit->add_option("--seed", fit_seed);
    fit->add_option("-o,--output", fit_out);

    // report
    auto* rep = app.add_subcommand("report", "Write points.csv, fit.json and plot.svg");
    std::string rep_points, rep_fit, rep_dir = "out";
    rep->add_option("points", rep_points)->required();
    rep->add_option("--fit", rep_fit, "fit.json to draw the threshold band from");
    rep->add_option("--out-dir", rep_dir);

    // optics
    auto* opt = app.add_subcommand("optics", "Linear-optics tables");
    auto* table = opt->add_subcommand("table", "Amplitude table as CSV");
    opt->require_subcommand(1);
    double phi = 0;
    table->add_option("--phi", phi);
    auto* rus = opt->add_subcommand("rus", "RUS probabilities for a photon loss rate");
    double loss = 0;
    rus->add_option("--eps", loss)->required();

    // bench
    auto* bch = app.add_subcommand("bench", "Performance suite");
    std::string bch_filter, bch_base, bch_out;
    bool bch_update = false;
    bch->add_option("--filter", bch_filter, "Run cases whose name contains this");
    bch->add_option("--baselines", bch_base, "Baselines JSON");
    bch->add_flag("--update-baselines", bch_update, "Store this host's rates in the baselines file");
    bch->add_option("-o,--output", bch_out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            Circuit c = build_code({family_from_name(family), size, rounds, flavor_from_name(flavor)});
            write_file(gen_out, print_circuit(c));
        } else if (*low) {
            Circuit c = load_circuit_file(low_in);
            NoiseModel nm = parse_model(model, circuit_flavor(c));
            auto base = std::make_shared<const Circuit>(std::move(c));
            Circuit out = sample_instance(base, nm, low_seed).lowered;
            if (nm.has_pauli_noise()) {
                out = apply_pauli_noise(out, nm);
            }
            write_file(low_out, print_circuit(out));
        } else if (*smp) {
            Circuit c = load_circuit_file(smp_in);
            SampleResult r = sample(c, shots, smp_seed);
            write_file(smp_out, to_b8(r.detectors));
            if (!smp_obs.empty()) {
                write_file(smp_obs, to_b8(r.observables));
            }
            if (!smp_dem.empty()) {
                write_file(smp_dem, build_dem(c).str());
            }
        } else if (*dec) {
            DetectorErrorModel dem = parse_dem(read_file(dec_dem));
            MatchingGraph g = MatchingGraph::from_dem(dem);
            std::vector<std::vector<uint32_t>> rows = from_b8(read_file(dec_dets), dem.num_detectors);
            BitTable preds(dem.num_observables, rows.size());
            for (std::size_t k = 0; k < rows.size(); k++) {
                uint64_t obs = mwpm_decode(g, rows[k]).observables;
                for (std::size_t o = 0; o < dem.num_observables; o++) {
                    if ((obs >> o) & 1) {
                        preds.word(o, k / 64) |= uint64_t{1} << (k % 64);
                    }
                }
            }
            write_file(dec_out, to_b8(preds));
        } else if (*swp) {
            SweepConfig cfg = config_with_overrides(swp_cfg, swp_dir);
            unsigned workers = swp_workers ? swp_workers : worker_count();
            std::vector<PointEstimate> pts = run_sweep(cfg, workers, [](const PointEstimate& pe) {
                std::cerr << "size " << pe.size << " p " << pe.p << " eps " << pe.eps << "\n";
            });
            if (swp_fit) {
                ThresholdFit f = fit_threshold(pts, cfg.K, cfg.seed);
                write_report(cfg.out_dir, pts, &f);
                std::cerr << "threshold " << f.estimate << " +- " << f.stddev() << "\n";
            } else {
                std::filesystem::create_directories(cfg.out_dir);
                write_file((std::filesystem::path(cfg.out_dir) / "points.csv").string(), points_csv(pts));
            }
        } else if (*fit) {
            ThresholdFit f = fit_threshold(parse_points_csv(read_file(fit_in)), fit_k, fit_seed);
            write_file(fit_out, fit_json(f));
        } else if (*rep) {
            std::vector<PointEstimate> pts = parse_points_csv(read_file(rep_points));
            if (rep_fit.empty()) {
                write_report(rep_dir, pts, nullptr);
            } else {
                ThresholdFit f = parse_fit_json(read_file(rep_fit));
                write_report(rep_dir, pts, &f);
            }
        } else if (*opt) {
            if (*table) {
                write_file("", optics::amplitude_table_csv(phi));
            } else {
                optics::RusProbabilities r = optics::rus_probabilities(loss);
                nlohmann::json j{{"eps", r.epsilon},           {"p_s", r.p_s},
                                 {"p_r", r.p_r},               {"p_e", r.p_e},
                                 {"p_rus", r.p_rus},           {"expected_trials_cz", r.expected_trials_cz},
                                 {"expected_trials_mzz", r.expected_trials_mzz}};
                std::cout << j.dump(2) << "\n";
            }
        } else if (*bch) {
            Baselines base;
            if (!bch_base.empty() && std::filesystem::exists(bch_base)) {
                base = parse_baselines(read_file(bch_base));
            }
            BenchReport r = run_bench_suite(bch_filter, bch_update ? Baselines{} : base);
            write_file(bch_out, bench_json(r));
            if (bch_update) {
                if (bch_base.empty()) {
                    throw ConfigError("--update-baselines needs --baselines");
                }
                for (const BenchResult& res : r.results) {
                    base[res.host][res.name] = res.items_per_second;
                }
                write_file(bch_base, baselines_to_json(base));
            }
            return r.ok() ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const FitError& e) {
        std::cerr << "fit failed: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
