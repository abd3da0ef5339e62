#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ocboost/batch.hpp"
#include "ocboost/errors.hpp"
#include "ocboost/experiments.hpp"
#include "ocboost/mnist.hpp"
#include "ocboost/ocb.hpp"
#include "ocboost/plot.hpp"
#include "ocboost/synthetic.hpp"

namespace fs = std::filesystem;
using namespace ocboost;

namespace {

enum Exit { ok = 0, usage = 1, data = 2, numeric = 3 };

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InvalidConfig("cannot write " + p.string());
    return out;
}

std::ifstream open_in(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InvalidConfig("cannot read " + p.string());
    return in;
}

struct SynthArgs {
    SyntheticConfig cfg;
    std::vector<std::string> conventions;
    std::vector<std::string> oza_modes;
    bool plot = false;

    void resolve() {
        cfg.conventions.clear();
        for (const auto& c : conventions) cfg.conventions.push_back(parse_convention(c));
        cfg.oza_modes.clear();
        for (const auto& m : oza_modes) cfg.oza_modes.push_back(parse_oza_mode(m));
    }
};

void add_synth_options(CLI::App* cmd, SynthArgs& a) {
    cmd->add_option("--segments", a.cfg.drift.segments, "Drift segments")->capture_default_str();
    cmd->add_option("--rows", a.cfg.drift.rows_per_segment, "Examples per segment")->capture_default_str();
    cmd->add_option("--dims", a.cfg.drift.dims, "Hypotheses J")->capture_default_str();
    cmd->add_option("--perturb", a.cfg.drift.perturb_scale, "Gaussian drift scale")->capture_default_str();
    cmd->add_option("--seeds", a.cfg.seeds, "Seeds, one stream each")->capture_default_str();
    cmd->add_option("--warm-start", a.cfg.warm_start, "Warm-start rows (0 = cold)")->capture_default_str();
    cmd->add_option("--eps", a.cfg.eps, "Smoothing")->capture_default_str();
    cmd->add_option("--orders", a.cfg.orders, "OCB orders K")->capture_default_str();
    cmd->add_option("--conventions", a.conventions, "as_written and/or theorem_consistent")->capture_default_str();
    cmd->add_option("--oza-modes", a.oza_modes, "averaged and/or exponential")->capture_default_str();
}

void write_streams(const fs::path& dir, const SyntheticConfig& cfg, const SyntheticResult& r) {
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
        const auto stem = dir / ("stream_seed" + std::to_string(cfg.seeds[s]));
        auto csv = open_out(stem.string() + ".csv");
        write_margin_csv(csv, r.streams[s].margins);
        DriftSpec spec = cfg.drift;
        spec.seed = cfg.seeds[s];
        auto meta = open_out(stem.string() + ".json");
        write_stream_metadata(meta, spec, r.streams[s]);
    }
}

int run_synth(const SynthArgs& a, const fs::path& dir) {
    const auto r = run_synthetic(a.cfg);
    {
        auto csv = open_out(dir / "synthetic.csv");
        write_synthetic_csv(csv, r);
        auto json = open_out(dir / "summary.json");
        write_summary_json(json, r.summary);
    }
    write_streams(dir, a.cfg, r);
    if (a.plot) emit_plot(dir / "synthetic.csv", dir / "synthetic.svg", {"approximation error vs examples seen"});
    for (const auto& s : r.summary) std::cout << s.key.label() << "\t" << s.mean << "\n";
    return ok;
}

int run_compare(SynthArgs a, const fs::path& dir) {
    a.cfg.conventions = {NegativeSumConvention::as_written, NegativeSumConvention::theorem_consistent};
    a.cfg.oza_modes.clear();
    const auto r = run_synthetic(a.cfg);
    auto csv = open_out(dir / "oracle_compare.csv");
    write_oracle_compare_csv(csv, a.cfg, r);
    auto json = open_out(dir / "oracle_compare.json");
    write_summary_json(json, r.summary);
    for (const auto& s : r.summary) std::cout << s.key.label() << "\t" << s.mean << "\n";
    return ok;
}

struct MnistArgs {
    MnistConfig cfg;
    fs::path data_dir;
    std::string convention = "theorem_consistent";
    std::vector<std::string> oza_modes{"averaged"};
    bool plot = false;
};

int run_mnist_cmd(MnistArgs a, const fs::path& dir) {
    a.cfg.convention = parse_convention(a.convention);
    a.cfg.oza_modes.clear();
    for (const auto& m : a.oza_modes) a.cfg.oza_modes.push_back(parse_oza_mode(m));
    const char* names[] = {"train-images-idx3-ubyte", "train-labels-idx1-ubyte", "t10k-images-idx3-ubyte",
                           "t10k-labels-idx1-ubyte"};
    for (const char* n : names)
        if (!fs::exists(a.data_dir / n)) throw InvalidConfig("missing " + (a.data_dir / n).string());
    const auto train = load_mnist_idx(a.data_dir / names[0], a.data_dir / names[1], a.cfg.train_size);
    const auto test = load_mnist_idx(a.data_dir / names[2], a.data_dir / names[3], a.cfg.test_size);
    const auto r = run_mnist(a.cfg, train, test);
    {
        auto csv = open_out(dir / "mnist.csv");
        write_mnist_csv(csv, r);
        auto json = open_out(dir / "mnist_summary.json");
        write_mnist_summary_json(json, a.cfg, r);
    }
    if (a.plot) emit_plot(dir / "mnist.csv", dir / "mnist.svg", {"one-vs-all test error vs examples seen"});
    for (const auto& s : r.summary)
        std::cout << s.key.label() << "\tapprox " << s.mean_approx_error << "\tova " << s.ova_error << "\n";
    return ok;
}

struct StreamArgs {
    fs::path margins;
    fs::path trajectory;
    fs::path checkpoint;
    fs::path resume;
    std::size_t stop_at = 0;
    std::size_t warm_start = 0;
    OcbConfig ocb;
    std::string convention = "theorem_consistent";
};

int run_stream_cmd(StreamArgs a) {
    auto in = open_in(a.margins);
    const auto m = read_margin_csv(in);
    OcbState state;
    if (!a.resume.empty()) {
        auto ck = open_in(a.resume);
        state = load_state(ck);
        if (state.dims != m.cols()) throw InvalidInput("checkpoint has J = " + std::to_string(state.dims) +
                                                       ", margins have " + std::to_string(m.cols()));
    } else {
        a.ocb.convention = parse_convention(a.convention);
        if (a.warm_start > m.rows()) throw InvalidConfig("warm start longer than the stream");
        state = a.warm_start > 0 ? init_warm(m.prefix(a.warm_start), a.ocb) : init_cold(m.cols(), a.ocb);
    }
    const std::size_t end = a.stop_at > 0 ? std::min(a.stop_at, m.rows()) : m.rows();
    if (end < state.examples_seen) throw InvalidConfig("--stop-at is before the checkpoint position");

    // trajectory rows are numbered by absolute stream position
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!a.trajectory.empty()) {
        file = open_out(a.trajectory);
        out = &file;
    }
    out->precision(17);
    *out << "n";
    for (std::size_t j = 1; j <= m.cols(); ++j) *out << ",alpha_" << j;
    *out << "\n";
    for (std::size_t i = state.examples_seen; i < end; ++i) {
        const auto& alphas = process_example(state, m.row(i));
        *out << i + 1;
        for (double v : alphas) *out << "," << v;
        *out << "\n";
    }
    if (!a.checkpoint.empty()) {
        auto ck = open_out(a.checkpoint);
        save_state(ck, state);
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"K-order online coordinate boosting experiments"};
    app.set_config("--config", "", "TOML/INI file overriding defaults");
    app.require_subcommand(1);
    app.fallthrough();
    fs::path out_dir = "results";
    app.add_option("-o,--out-dir", out_dir, "Output directory")->envname("OCB_OUTPUT_DIR")->capture_default_str();

    SynthArgs synth;
    synth.conventions = {"theorem_consistent"};
    synth.oza_modes = {"averaged"};
    auto* synth_cmd = app.add_subcommand("synth", "Synthetic drift suite against the incremental oracle");
    add_synth_options(synth_cmd, synth);
    synth_cmd->add_flag("--plot", synth.plot, "Also write synthetic.svg");

    SynthArgs compare;
    compare.cfg.oza_modes.clear();
    auto* compare_cmd = app.add_subcommand("oracle-compare", "Both negative-sum conventions side by side");
    add_synth_options(compare_cmd, compare);
    compare_cmd->remove_option(compare_cmd->get_option("--conventions"));
    compare_cmd->remove_option(compare_cmd->get_option("--oza-modes"));

    MnistArgs mnist;
    if (const char* env = std::getenv("OCB_MNIST_DIR")) mnist.data_dir = env;
    auto* mnist_cmd = app.add_subcommand("mnist", "One-vs-all MNIST run with periodic batch refits");
    mnist_cmd->add_option("--data-dir", mnist.data_dir, "Directory with the four IDX files (env OCB_MNIST_DIR)");
    mnist_cmd->add_option("--train-size", mnist.cfg.train_size)->capture_default_str();
    mnist_cmd->add_option("--test-size", mnist.cfg.test_size)->capture_default_str();
    mnist_cmd->add_option("--dims", mnist.cfg.dims, "Hypotheses per digit")->capture_default_str();
    mnist_cmd->add_option("--preselect-size", mnist.cfg.preselect_size)->capture_default_str();
    mnist_cmd->add_option("--preselect-sample", mnist.cfg.preselect_sample)->capture_default_str();
    mnist_cmd->add_option("--warm-start", mnist.cfg.warm_start)->capture_default_str();
    mnist_cmd->add_option("--period", mnist.cfg.period, "Examples between batch refits")->capture_default_str();
    mnist_cmd->add_option("--seed", mnist.cfg.seed)->capture_default_str();
    mnist_cmd->add_option("--eps", mnist.cfg.eps)->capture_default_str();
    mnist_cmd->add_option("--orders", mnist.cfg.orders)->capture_default_str();
    mnist_cmd->add_option("--convention", mnist.convention)->capture_default_str();
    mnist_cmd->add_option("--oza-modes", mnist.oza_modes)->capture_default_str();
    mnist_cmd->add_flag("--plot", mnist.plot, "Also write mnist.svg");

    fs::path plot_in, plot_out;
    PlotOptions plot_opts;
    auto* plot_cmd = app.add_subcommand("plot", "Render a synthetic or mnist CSV as SVG");
    plot_cmd->add_option("input", plot_in, "CSV file")->required();
    plot_cmd->add_option("output", plot_out, "SVG file")->required();
    plot_cmd->add_option("--title", plot_opts.title);

    StreamArgs stream;
    stream.ocb.order = 20;
    auto* stream_cmd = app.add_subcommand("stream", "Run OCB over a margin CSV with checkpoint and resume");
    stream_cmd->add_option("margins", stream.margins, "Margin CSV (m_1..m_J)")->required();
    stream_cmd->add_option("--trajectory", stream.trajectory, "Alpha trajectory CSV (default stdout)");
    stream_cmd->add_option("--order", stream.ocb.order, "K")->capture_default_str();
    stream_cmd->add_option("--eps", stream.ocb.eps)->capture_default_str();
    stream_cmd->add_option("--convention", stream.convention)->capture_default_str();
    stream_cmd->add_option("--warm-start", stream.warm_start, "Rows for the batch warm start")->capture_default_str();
    stream_cmd->add_option("--stop-at", stream.stop_at, "Stop after this many examples (0 = all)");
    stream_cmd->add_option("--checkpoint", stream.checkpoint, "Write the final state here");
    stream_cmd->add_option("--resume", stream.resume, "Start from a saved state");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*synth_cmd) {
            synth.resolve();
            return run_synth(synth, out_dir);
        }
        if (*compare_cmd) return run_compare(compare, out_dir);
        if (*mnist_cmd) {
            if (mnist.data_dir.empty()) throw InvalidConfig("mnist needs --data-dir or OCB_MNIST_DIR");
            return run_mnist_cmd(mnist, out_dir);
        }
        if (*plot_cmd) {
            emit_plot(plot_in, plot_out, plot_opts);
            return ok;
        }
        if (*stream_cmd) return run_stream_cmd(stream);
    } catch (const InvalidConfig& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return numeric;
    } catch (const UndefinedMetric& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return numeric;
    } catch (const Error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return data;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    return usage;
}
