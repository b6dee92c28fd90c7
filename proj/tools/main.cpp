#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "manifest.hpp"
#include "ridgekit/decompose.hpp"
#include "ridgekit/errors.hpp"
#include "ridgekit/io.hpp"
#include "ridgekit/parallel.hpp"
#include "ridgekit/simgen.hpp"
#include "ridgekit/tfa.hpp"
#include "ridgekit/tuning.hpp"
#include "ridgekit/walk.hpp"

namespace fs = std::filesystem;
using namespace ridgekit;
using ridgekit::cli::Manifest;

namespace {

enum Exit { kOk = 0, kUsage = 2, kData = 3, kInfeasible = 4 };

struct Globals {
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string out_dir = ".";
    bool show_defaults = false;
    std::vector<std::string> argv;
};

struct TfrArgs {
    TfrConfig cfg;
    std::size_t half_length = 0;

    void add(CLI::App* app) {
        app->add_option("--window-cycles", cfg.window_cycles, "window length in cycles of --nominal-hz")
            ->capture_default_str();
        app->add_option("--nominal-hz", cfg.nominal_hz, "nominal fundamental used to size the window")
            ->capture_default_str();
        app->add_option("--window-half-length", half_length, "window half length K in samples (overrides cycles)");
        app->add_option("--sigma", cfg.sigma, "Gaussian width on the normalised support")->capture_default_str();
        app->add_option("--dxi", cfg.dxi_hz, "frequency step (Hz)")->capture_default_str();
        app->add_option("--max-hz", cfg.max_hz, "highest frequency kept (0 = Nyquist)")->capture_default_str();
    }
    TfrConfig resolved() const {
        TfrConfig c = cfg;
        c.window_half_length = half_length;
        return c;
    }
    void record(nlohmann::json& j) const {
        j["window_cycles"] = cfg.window_cycles;
        j["nominal_hz"] = cfg.nominal_hz;
        j["window_half_length"] = half_length;
        j["sigma"] = cfg.sigma;
        j["dxi_hz"] = cfg.dxi_hz;
        j["max_hz"] = cfg.max_hz;
    }
};

std::optional<double> parse_snr(const std::string& s) {
    if (s == "none" || s == "inf") return std::nullopt;
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--snr", "expected a number or 'none', got '" + s + "'");
    }
}

std::string out_path(const Globals& g, const std::string& name) {
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / name).string();
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

void print_defaults() {
    const TfrConfig tfr;
    const SamdMhrdConfig dec;
    const ParamGrid grid = ParamGrid::defaults();
    const WalkConfig walk;
    const BenchConfig y1 = default_y1_config();
    const SamdMhrdConfig y2 = default_y2_config();
    std::printf("%-28s %-14s %s\n", "parameter", "default", "used by");
    auto row = [](const char* name, const std::string& v, const char* where) {
        std::printf("%-28s %-14s %s\n", name, v.c_str(), where);
    };
    auto num = [](double x) {
        std::ostringstream o;
        o << x;
        return o.str();
    };
    row("window_cycles", num(tfr.window_cycles), "tfr, pipeline");
    row("nominal_hz", num(tfr.nominal_hz), "tfr, pipeline");
    row("window_sigma", num(tfr.sigma), "tfr, pipeline");
    row("dxi_hz", num(tfr.dxi_hz), "tfr, pipeline");
    row("sst_threshold", "10 eps max|V|", "tfr");
    row("K (harmonics)", num(static_cast<double>(dec.K)), "pipeline, walk");
    row("beta", num(dec.beta), "pipeline");
    row("lambda1", "1", "pipeline");
    row("delta_lambda", "0.1", "pipeline, tuning");
    row("segment_s", "1", "pipeline (mhrd plan)");
    row("segment_band_hz", "1", "pipeline (mhrd plan)");
    row("mhrd_exponent", num(dec.mhrd_exponent), "pipeline");
    row("conditioned_exponent", num(dec.conditioned_exponent), "pipeline");
    row("delta (reconstruction)", "max(0.2 mean IF, 3 bins)", "pipeline");
    row("spline_knots", "max(4, 1 per 2 s)", "pipeline");
    row("tuning_lambda1", "7 log on [0.1,10]", "pipeline --auto-tune");
    row("tuning_beta", "6 log on [2^-6,2^-1)", "pipeline --auto-tune");
    row("renyi_alpha", num(grid.alpha), "tuning, walk");
    row("walk_b_hz", num(walk.b_hz), "walk sst-wsi");
    row("walk_Q", num(static_cast<double>(walk.Q)), "walk sst-wsi");
    row("walk_mask_hz", num(walk.mask_band_hz), "walk entropy-ratio");
    row("walk_median_s", num(walk.median_s), "walk entropy-ratio");
    row("walk_window_s", num(walk.window_s), "walk hilbert, fog");
    row("walk_fundamental_hz", num(walk.fundamental_min_hz) + "-" + num(walk.fundamental_max_hz), "walk");
    row("bench_y1_dxi_hz", num(y1.mhrd.tfr.dxi_hz), "bench");
    row("bench_y1_window_cycles", num(y1.mhrd.tfr.window_cycles), "bench");
    row("bench_y1_beta", num(y1.mhrd.beta), "bench");
    row("bench_y1_band_hz", num(y1.mhrd.band_hz), "bench");
    row("bench_y2_dxi_hz", num(y2.tfr.dxi_hz), "pipeline on y2 data (suggested)");
    row("bench_y2_window_cycles", num(y2.tfr.window_cycles), "pipeline on y2 data (suggested)");
    row("bench_y2_K", num(static_cast<double>(y2.K)), "pipeline on y2 data (suggested)");
    row("bench_y2_band_hz", num(y2.band_hz), "pipeline on y2 data (suggested)");
    row("bench_y2_delta_hz", y2.delta_hz ? num(*y2.delta_hz) : "auto", "pipeline on y2 data (suggested)");
}

// ---- tfr -------------------------------------------------------------------

struct TfrCmd {
    std::string in;
    std::optional<double> fs;
    std::string kind = "sst2";
    TfrArgs tfr;

    int run(const Globals& g) const {
        Manifest m("tfr", g.argv);
        const Signal s = read_signal_csv(in, fs);
        m.input(in);
        const TfrConfig c = tfr.resolved();
        const WindowPair w = c.window(s.fs);
        const TfrOptions opts = c.options(s.fs);
        Tfr R;
        if (kind == "stft")
            R = stft(s, w, opts.bins, opts.max_bins);
        else if (kind == "sst1")
            R = sst1(s, w, opts);
        else
            R = sst2(s, w, opts);
        tfr.record(m.params());
        m.params()["kind"] = kind;
        m.params()["fs"] = s.fs;
        m.params()["window_half_length_resolved"] = w.K;
        m.params()["bins"] = opts.bins;
        const std::string base = stem_of(in) + "." + kind;
        const std::string bin = out_path(g, base + ".bin");
        const std::string csv = out_path(g, base + ".csv");
        write_tfr_raw(bin, R);
        write_tfr_magnitude_csv(csv, R);
        m.outputs({bin, csv});
        m.write(out_path(g, base + ".manifest.json"));
        return kOk;
    }
};

// ---- pipeline --------------------------------------------------------------

struct PipelineCmd {
    std::string in;
    std::optional<double> fs;
    std::size_t L = 1, I = 1, K = 3;
    double beta = 0.0625;
    double lambda1 = 1.0;
    double delta_lambda = 0.1;
    std::vector<std::size_t> D;
    std::optional<double> delta_hz;
    std::size_t knots = 0;
    double segment_s = 1.0;
    double band_hz = 1.0;
    bool auto_tune = false;
    bool literal = false;
    std::optional<double> fmin, fmax;
    TfrArgs tfr;

    int run(const Globals& g) const {
        Manifest m("pipeline", g.argv);
        const Signal s = read_signal_csv(in, fs);
        m.input(in);

        SamdMhrdConfig cfg;
        cfg.L = L;
        cfg.I = I;
        cfg.K = K;
        cfg.D = D;
        cfg.beta = beta;
        cfg.delta_hz = delta_hz;
        cfg.n_knots = knots;
        cfg.segment_s = segment_s;
        cfg.band_hz = band_hz;
        cfg.literal_passes = literal;
        cfg.fundamental_min_hz = fmin;
        cfg.fundamental_max_hz = fmax;
        cfg.tfr = tfr.resolved();
        double l1 = lambda1;

        const std::string stem = stem_of(in);
        std::vector<std::string> outputs;
        if (auto_tune) {
            const TfrOptions opts = cfg.tfr.options(s.fs);
            const Tfr S = sst2(s, cfg.tfr.window(s.fs), opts);
            ParamGrid grid = ParamGrid::defaults(K);
            grid.delta_lambda = delta_lambda;
            const SegmentPlan plan = default_plan(S.rows(), S.dt, S.dxi, segment_s, band_hz);
            const TuningResult t = select_params(S, grid, plan);
            l1 = t.lambda1;
            cfg.beta = t.beta;
            const std::string grid_csv = out_path(g, stem + ".tuning.csv");
            write_grid_csv(grid_csv, t);
            outputs.push_back(grid_csv);
            m.params()["tuning_score"] = t.score;
        }
        cfg.penalties.lambda = lambda_schedule(l1, delta_lambda, K);

        const DecompositionResult r = samd_mhrd(s, cfg);
        auto written = export_decomposition(r, g.out_dir, stem);
        outputs.insert(outputs.end(), written.begin(), written.end());

        auto& p = m.params();
        tfr.record(p);
        p["fs"] = s.fs;
        p["L"] = L;
        p["I"] = I;
        p["K"] = K;
        p["D"] = D;
        p["beta"] = cfg.beta;
        p["lambda1"] = l1;
        p["delta_lambda"] = delta_lambda;
        p["segment_s"] = segment_s;
        p["band_hz"] = band_hz;
        p["auto_tune"] = auto_tune;
        p["literal_passes"] = literal;
        p["delta_hz_used"] = r.delta_hz;
        if (fmin) p["fundamental_min_hz"] = *fmin;
        if (fmax) p["fundamental_max_hz"] = *fmax;
        m.outputs(outputs);
        m.write(out_path(g, stem + ".pipeline.manifest.json"));
        return kOk;
    }
};

// ---- simulate --------------------------------------------------------------

void write_truth_csv(const std::string& path, const std::vector<const SimTruth*>& truths, double fs) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << std::setprecision(17) << "time_s";
    for (std::size_t i = 0; i < truths.size(); ++i) {
        out << ",clean" << i + 1;
        for (std::size_t k = 0; k < truths[i]->harmonic_ifs.size(); ++k) out << ",if" << i + 1 << "_" << k + 1 << "_hz";
    }
    out << '\n';
    const std::size_t N = truths.front()->clean.size();
    for (std::size_t n = 0; n < N; ++n) {
        out << static_cast<double>(n + 1) / fs;
        for (const SimTruth* t : truths) {
            out << ',' << t->clean.samples[n];
            for (const auto& f : t->harmonic_ifs) out << ',' << f[n];
        }
        out << '\n';
    }
}

struct SimulateCmd {
    std::string model = "y1";
    double D1 = 0.5, D2 = 0.5;
    std::string snr = "none";

    int run(const Globals& g) const {
        Manifest m("simulate", g.argv);
        m.seed(g.seed);
        const SimOptions opts;
        const std::optional<double> snr_db = parse_snr(snr);
        std::ostringstream name;
        name << model << "_seed" << g.seed;
        const std::string sig = out_path(g, name.str() + ".csv");
        const std::string truth = out_path(g, name.str() + ".truth.csv");
        double sigma = 0.0;
        std::size_t rejected = 0;
        if (model == "y1") {
            const Y1Sample y = gen_y1(D1, snr_db, g.seed, opts);
            write_signal_csv(sig, y.signal);
            write_truth_csv(truth, {&y.truth}, opts.fs);
            sigma = y.truth.sigma;
            rejected = y.truth.rejected;
        } else {
            const Y2Sample y = gen_y2(D1, D2, snr_db, g.seed, opts);
            write_signal_csv(sig, y.signal);
            write_truth_csv(truth, {&y.imt1, &y.imt2}, opts.fs);
            sigma = y.sigma;
            rejected = y.imt1.rejected + y.imt2.rejected;
        }
        auto& p = m.params();
        p["model"] = model;
        p["D1"] = D1;
        if (model == "y2") p["D2"] = D2;
        p["snr_db"] = snr;
        p["sigma"] = sigma;
        p["rejected_draws"] = rejected;
        p["fs"] = opts.fs;
        p["N"] = opts.N;
        p["brownian_scale_s"] = opts.brownian_scale_s;
        p["jitter_scale_s"] = opts.jitter_scale_s;
        p["jitter_variance"] = opts.jitter_variance;
        p["noise"] = {{"ar", opts.noise.ar},
                      {"ma", opts.noise.ma},
                      {"split", opts.noise.split},
                      {"arma_dof", opts.noise.arma_dof},
                      {"iid_dof", opts.noise.iid_dof}};
        m.outputs({sig, truth});
        m.write(out_path(g, name.str() + ".manifest.json"));
        return kOk;
    }
};

// ---- bench -----------------------------------------------------------------

struct BenchCmd {
    std::string detector = "mhrd";
    std::vector<double> D1s{0.5};
    std::vector<std::string> snrs{"none"};
    std::size_t n = 10;
    std::string out = "bench.csv";

    int run(const Globals& g) const {
        Manifest m("bench", g.argv);
        m.seed(g.seed);
        std::vector<std::optional<double>> levels;
        for (const auto& s : snrs) levels.push_back(parse_snr(s));
        const Detector d = detector_from_string(detector);
        const BenchConfig cfg = default_y1_config();
        const auto rows = run_benchmark(d, D1s, levels, n, g.seed, cfg);
        const std::string path = out_path(g, out);
        write_benchmark_csv(path, rows);
        auto& p = m.params();
        p["detector"] = to_string(d);
        p["D1"] = D1s;
        p["snr_db"] = snrs;
        p["n_realizations"] = n;
        p["beta"] = cfg.mhrd.beta;
        p["dxi_hz"] = cfg.mhrd.tfr.dxi_hz;
        p["max_hz"] = cfg.mhrd.tfr.max_hz;
        p["window_cycles"] = cfg.mhrd.tfr.window_cycles;
        p["single_lambda"] = cfg.single_lambda;
        p["single_peels"] = cfg.single_peels;
        m.output(path);
        m.write(path + ".manifest.json");
        return kOk;
    }
};

// ---- walk ------------------------------------------------------------------

struct WalkIndexCmd {
    std::string in;
    std::string index = "sst-wsi";
    std::string out;

    int run(const Globals& g) const {
        Manifest m("walk index", g.argv);
        const TriaxialRecording rec = read_recording_csv(in);
        m.input(in);
        const IndexKind kind = index_from_string(index);
        const IndexSeries idx = compute_index(kind, rec, WalkConfig{});
        const std::string path = out.empty() ? out_path(g, stem_of(in) + "." + index + ".csv") : out;
        write_index_csv(path, idx, rec.fs);
        m.params()["index"] = index;
        m.params()["larger_is_walking"] = idx.larger_is_walking;
        m.output(path);
        m.write(path + ".manifest.json");
        return kOk;
    }
};

struct WalkLosocvCmd {
    std::string dir;
    std::string index = "sst-wsi";
    std::string out;

    int run(const Globals& g) const {
        Manifest m("walk losocv", g.argv);
        const auto recs = read_corpus(dir);
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.path().extension() == ".csv") m.input(entry.path().string());
        const EvalReport r = losocv_threshold(recs, index_from_string(index), WalkConfig{});
        const std::string path = out.empty() ? out_path(g, "report." + index + ".json") : out;
        std::ofstream f(path);
        if (!f) throw IoError("cannot write " + path);
        f << report_to_json(r) << '\n';
        f.close();
        std::printf("%s: mean accuracy %.4f, mean F1 %.4f over %zu subjects\n", r.index.c_str(), r.mean_accuracy,
                    r.mean_f1, r.subjects.size());
        m.params()["index"] = index;
        m.output(path);
        m.write(path + ".manifest.json");
        return kOk;
    }
};

struct WalkSynthCmd {
    SyntheticCorpusSpec spec;
    std::string dir = "corpus";

    int run(const Globals& g) {
        Manifest m("walk synth", g.argv);
        m.seed(g.seed);
        spec.seed = g.seed;
        const auto recs = synthetic_corpus(spec);
        const fs::path root = fs::path(g.out_dir) / dir;
        fs::create_directories(root);
        for (const auto& r : recs) {
            const std::string path = (root / (r.subject_id + ".csv")).string();
            write_recording_csv(path, r);
            m.output(path);
        }
        auto& p = m.params();
        p["subjects"] = spec.subjects;
        p["fs"] = spec.fs;
        p["duration_s"] = spec.duration_s;
        p["step_hz"] = spec.step_hz;
        p["walk_amp_g"] = spec.walk_amp_g;
        p["noise_g"] = spec.noise_g;
        m.write((root / "manifest.json").string());
        return kOk;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ridgekit: synchrosqueezing, harmonic ridge detection and shape-adaptive decomposition"};
    app.fallthrough();
    app.require_subcommand(0, 1);

    Globals g;
    g.argv.assign(argv, argv + argc);
    app.add_option("--seed", g.seed, "seed for every stochastic step")->capture_default_str();
    app.add_option("--threads", g.threads, "worker cap (0 = hardware concurrency)");
    app.add_option("--out-dir", g.out_dir, "directory for outputs")->capture_default_str();
    app.add_flag("--show-defaults", g.show_defaults, "print the defaults table and exit");

    TfrCmd tfr;
    auto* c_tfr = app.add_subcommand("tfr", "STFT / SST1 / SST2 of a signal");
    c_tfr->add_option("--in", tfr.in, "signal CSV")->required()->check(CLI::ExistingFile);
    c_tfr->add_option("--fs", tfr.fs, "sampling rate (required for headerless input)");
    c_tfr->add_option("--kind", tfr.kind)->check(CLI::IsMember({"stft", "sst1", "sst2"}))->capture_default_str();
    tfr.tfr.add(c_tfr);

    PipelineCmd pipe;
    auto* c_pipe = app.add_subcommand("pipeline", "SAMD-MHRD decomposition");
    c_pipe->add_option("--in", pipe.in, "signal CSV")->required()->check(CLI::ExistingFile);
    c_pipe->add_option("--fs", pipe.fs, "sampling rate (required for headerless input)");
    c_pipe->add_option("--L", pipe.L, "number of IMTs")->check(CLI::PositiveNumber)->capture_default_str();
    c_pipe->add_option("--I", pipe.I, "iterations")->check(CLI::PositiveNumber)->capture_default_str();
    c_pipe->add_option("--K", pipe.K, "harmonics detected jointly")->check(CLI::PositiveNumber)->capture_default_str();
    c_pipe->add_option("--D", pipe.D, "harmonic order per IMT (default K)")->delimiter(',');
    c_pipe->add_option("--beta", pipe.beta, "harmonic band width")->capture_default_str();
    c_pipe->add_option("--lambda1", pipe.lambda1, "smoothness penalty of the fundamental")->capture_default_str();
    c_pipe->add_option("--delta-lambda", pipe.delta_lambda, "penalty decrement per harmonic")->capture_default_str();
    c_pipe->add_option("--delta-hz", pipe.delta_hz, "reconstruction half band (Hz)");
    c_pipe->add_option("--knots", pipe.knots, "spline knots for amplitude fits (0 = auto)");
    c_pipe->add_option("--segment-s", pipe.segment_s, "ridge plan segment length (s)")->capture_default_str();
    c_pipe->add_option("--band-hz", pipe.band_hz, "fundamental band between segments (Hz)")->capture_default_str();
    c_pipe->add_option("--fmin", pipe.fmin, "lower bound on the fundamental (Hz)");
    c_pipe->add_option("--fmax", pipe.fmax, "upper bound on the fundamental (Hz)");
    c_pipe->add_flag("--auto-tune", pipe.auto_tune, "pick lambda1 and beta by masked Renyi entropy");
    c_pipe->add_flag("--literal-passes", pipe.literal, "detect all IMTs of an iteration before subtracting");
    pipe.tfr.add(c_pipe);

    SimulateCmd sim;
    auto* c_sim = app.add_subcommand("simulate", "synthetic benchmark signals");
    c_sim->add_option("model", sim.model, "y1 or y2")->required()->check(CLI::IsMember({"y1", "y2"}));
    c_sim->add_option("--D1", sim.D1, "fundamental intensity (IMT 1)")->check(CLI::Range(1e-9, 1.0))->capture_default_str();
    c_sim->add_option("--D2", sim.D2, "fundamental intensity (IMT 2)")->check(CLI::Range(1e-9, 1.0))->capture_default_str();
    c_sim->add_option("--snr", sim.snr, "dB, or none")->capture_default_str();

    BenchCmd bench;
    auto* c_bench = app.add_subcommand("bench", "Monte Carlo IF-error table");
    c_bench->add_option("--detector", bench.detector, "single or mhrd")->capture_default_str();
    c_bench->add_option("--D1", bench.D1s)->delimiter(',')->check(CLI::Range(1e-9, 1.0));
    c_bench->add_option("--snr", bench.snrs, "dB values or none")->delimiter(',');
    c_bench->add_option("--n", bench.n, "realizations per cell")->check(CLI::PositiveNumber)->capture_default_str();
    c_bench->add_option("--out", bench.out, "CSV name inside --out-dir")->capture_default_str();

    auto* c_walk = app.add_subcommand("walk", "walking indices");
    c_walk->require_subcommand(1);
    WalkIndexCmd widx;
    auto* c_widx = c_walk->add_subcommand("index", "index series of one recording");
    c_widx->add_option("--in", widx.in, "recording CSV (time_s,x,y,z,label)")->required()->check(CLI::ExistingFile);
    c_widx->add_option("--index", widx.index)
        ->check(CLI::IsMember({"sst-wsi", "entropy-ratio", "hilbert", "fog"}))
        ->capture_default_str();
    c_widx->add_option("--out", widx.out, "output CSV");
    WalkLosocvCmd wcv;
    auto* c_wcv = c_walk->add_subcommand("losocv", "leave-one-subject-out threshold evaluation");
    c_wcv->add_option("--dir", wcv.dir, "corpus directory")->required()->check(CLI::ExistingDirectory);
    c_wcv->add_option("--index", wcv.index)
        ->check(CLI::IsMember({"sst-wsi", "entropy-ratio", "hilbert", "fog"}))
        ->capture_default_str();
    c_wcv->add_option("--out", wcv.out, "report JSON");
    WalkSynthCmd wsyn;
    auto* c_wsyn = c_walk->add_subcommand("synth", "write a synthetic labelled corpus");
    c_wsyn->add_option("--subjects", wsyn.spec.subjects)->check(CLI::PositiveNumber)->capture_default_str();
    c_wsyn->add_option("--duration", wsyn.spec.duration_s, "seconds per subject")->capture_default_str();
    c_wsyn->add_option("--dir", wsyn.dir, "subdirectory of --out-dir")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    if (g.show_defaults) {
        print_defaults();
        return kOk;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return kUsage;
    }
    set_thread_count(g.threads ? g.threads : std::max(1u, std::thread::hardware_concurrency()));

    try {
        if (c_tfr->parsed()) return tfr.run(g);
        if (c_pipe->parsed()) return pipe.run(g);
        if (c_sim->parsed()) return sim.run(g);
        if (c_bench->parsed()) return bench.run(g);
        if (c_widx->parsed()) return widx.run(g);
        if (c_wcv->parsed()) return wcv.run(g);
        if (c_wsyn->parsed()) return wsyn.run(g);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvalidParameter& e) {
        std::cerr << "invalid parameter: " << e.what() << '\n';
        return kUsage;
    } catch (const Infeasible& e) {
        std::cerr << "infeasible: " << e.what() << " (time index " << e.time_index() << ", harmonic " << e.harmonic()
                  << ")\n";
        return kInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    }
    return kUsage;
}
