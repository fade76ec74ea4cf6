#include "latentpack/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "latentpack/bench.hpp"
#include "latentpack/container.hpp"
#include "latentpack/ingest.hpp"

namespace latentpack {

namespace {

CodecId parse_codec(const std::string& name) {
    if (name == "lz") return CodecId::LZ;
    if (name == "ans") return CodecId::ANS;
    throw CLI::ValidationError("--codec", "expected 'lz' or 'ans'");
}

ClusterMethod parse_method(const std::string& name) {
    if (name == "kmeans") return ClusterMethod::KMeans;
    if (name == "threshold") return ClusterMethod::Threshold;
    throw CLI::ValidationError("--method", "expected 'kmeans' or 'threshold'");
}

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* cap = std::getenv("LATENTPACK_THREADS")) {
        const int threads = std::atoi(cap);
        if (threads > 0) omp_set_num_threads(threads);
    }
#endif
}

bool looks_like_table_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    char magic[4] = {};
    in.read(magic, 4);
    return in && magic[0] == 'L' && magic[1] == 'T' && magic[2] == 'B' && magic[3] == 'L';
}

// Parses "a:b:steps" or a single number into a grid.
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::istringstream in(text);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(in, part, ':')) parts.push_back(part);
    if (parts.size() == 1) {
        grid.push_back(std::stod(parts[0]));
    } else if (parts.size() == 3) {
        const double lo = std::stod(parts[0]);
        const double hi = std::stod(parts[1]);
        const int steps = std::stoi(parts[2]);
        if (steps < 1) throw CLI::ValidationError("grid", "steps must be >= 1");
        for (int i = 0; i < steps; ++i)
            grid.push_back(steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1));
    } else {
        throw CLI::ValidationError("grid", "expected 'value' or 'lo:hi:steps'");
    }
    return grid;
}

struct CompressArgs {
    std::string input;
    std::string output;
    std::string codec = "ans";
    std::string latent_codec;
    std::string method = "kmeans";
    std::uint32_t k_r = 2;
    std::uint32_t k_c = 2;
    std::uint32_t restarts = 5;
    double theta = 0.05;
    double subsample = 1.0;
    std::uint64_t seed = 0;
    bool shuffle = false;
    std::string report_path;
};

int cmd_compress(const CompressArgs& args, std::ostream& out) {
    Table table;
    std::vector<ColumnReport> columns;
    if (looks_like_table_dump(args.input)) {
        table = read_table_file(args.input);
    } else {
        IngestOptions opts;
        opts.shuffle = args.shuffle;
        opts.seed = args.seed;
        IngestResult ingest = preprocess(read_csv_file(args.input), opts);
        table = std::move(ingest.table);
        columns = std::move(ingest.columns);
    }

    CompressConfig config;
    config.block_codec = parse_codec(args.codec);
    config.latent_codec = args.latent_codec.empty() ? config.block_codec
                                                    : parse_codec(args.latent_codec);
    config.spectral.k_r = std::min(args.k_r, table.m);
    config.spectral.k_c = std::min(args.k_c, table.n);
    config.spectral.method = parse_method(args.method);
    config.spectral.theta = args.theta;
    config.spectral.restarts = args.restarts;
    config.spectral.row_subsample = args.subsample;
    config.spectral.seed = args.seed;

    const auto start = std::chrono::steady_clock::now();
    CompressStats stats;
    const auto bytes = compress(table, config, &stats);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    std::ofstream file(args.output, std::ios::binary);
    if (!file) throw IoError("cannot open for writing: " + args.output);
    file.write(reinterpret_cast<const char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()));
    if (!file) throw IoError("write failed: " + args.output);

    if (!args.report_path.empty() && !columns.empty()) {
        std::ofstream report(args.report_path);
        if (!report) throw IoError("cannot open for writing: " + args.report_path);
        report << column_report_json(columns) << '\n';
    }

    out << "m=" << table.m << " n=" << table.n << " alphabet=" << table.alphabet.size
        << " k_r=" << stats.latents.latent_size_r << " k_c=" << stats.latents.latent_size_c
        << " bytes=" << bytes.size() << " drr=" << drr(bytes.size(), table.m, table.n, table.alphabet)
        << " seconds=" << elapsed.count() << '\n';
    return 0;
}

int cmd_decompress(const std::string& input, const std::string& output) {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + input);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    const Table table = decompress(bytes);
    write_table_file(output, table);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    apply_thread_cap();

    CLI::App app{"latentpack: latent-based lossless compressor for categorical tables"};
    app.require_subcommand(1);

    // --- compress ---
    CompressArgs comp;
    auto* compress_cmd =
        app.add_subcommand("compress", "compress a table dump or CSV into a container");
    compress_cmd->add_option("input", comp.input, "input file (LTBL dump or CSV)")->required();
    compress_cmd->add_option("output", comp.output, "output container path")->required();
    compress_cmd->add_option("--codec", comp.codec, "block codec: ans|lz");
    compress_cmd->add_option("--latent-codec", comp.latent_codec,
                             "latent codec (defaults to --codec)");
    compress_cmd->add_option("--k-r", comp.k_r, "row latent count");
    compress_cmd->add_option("--k-c", comp.k_c, "column latent count");
    compress_cmd->add_option("--method", comp.method, "clustering: kmeans|threshold");
    compress_cmd->add_option("--theta", comp.theta, "threshold method relative distance");
    compress_cmd->add_option("--restarts", comp.restarts, "KMeans restarts");
    compress_cmd->add_option("--subsample", comp.subsample, "row fraction for the SVD, (0,1]");
    compress_cmd->add_option("--seed", comp.seed, "random seed");
    compress_cmd->add_flag("--shuffle", comp.shuffle, "shuffle CSV rows before compressing");
    compress_cmd->add_option("--report", comp.report_path, "column report sidecar path (CSV input)");

    // --- decompress ---
    std::string dec_input, dec_output;
    auto* decompress_cmd = app.add_subcommand("decompress", "restore the table dump");
    decompress_cmd->add_option("input", dec_input, "container path")->required();
    decompress_cmd->add_option("output", dec_output, "output LTBL path")->required();

    // --- search ---
    struct {
        std::string input;
        std::uint32_t k_r_min = 1, k_r_max = 6, k_c_min = 1, k_c_max = 6;
        std::string codec = "ans";
        std::uint64_t seed = 0;
        std::uint32_t trials = 5;
        std::string grid_out;
    } search;
    auto* search_cmd = app.add_subcommand("search", "grid-search latent alphabet sizes");
    search_cmd->add_option("input", search.input, "input file (LTBL dump or CSV)")->required();
    search_cmd->add_option("--k-r-min", search.k_r_min);
    search_cmd->add_option("--k-r-max", search.k_r_max);
    search_cmd->add_option("--k-c-min", search.k_c_min);
    search_cmd->add_option("--k-c-max", search.k_c_max);
    search_cmd->add_option("--codec", search.codec, "ans|lz");
    search_cmd->add_option("--seed", search.seed);
    search_cmd->add_option("--kmeans-trials", search.trials, "estimation runs averaged per point");
    search_cmd->add_option("--grid-out", search.grid_out, "write the full DRR grid as CSV");

    // --- sweep ---
    struct {
        std::uint32_t k = 3, m = 1000, n = 1000, reps = 4, restarts = 5;
        std::string p0 = "0.05:0.95:5";
        std::string p1 = "0.05:0.95:5";
        std::uint64_t seed = 0;
        std::string codecs = "naive-lz,naive-ans,latent-lz,latent-ans";
        std::string out_path;
    } sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "synthetic SBM sweep with theory overlays");
    sweep_cmd->add_option("--k", sweep.k, "latent count");
    sweep_cmd->add_option("--m", sweep.m);
    sweep_cmd->add_option("--n", sweep.n);
    sweep_cmd->add_option("--p0", sweep.p0, "grid: value or lo:hi:steps");
    sweep_cmd->add_option("--p1", sweep.p1, "grid: value or lo:hi:steps");
    sweep_cmd->add_option("--reps", sweep.reps, "realizations per grid point");
    sweep_cmd->add_option("--seed", sweep.seed);
    sweep_cmd->add_option("--codecs", sweep.codecs, "comma list of pipelines to measure");
    sweep_cmd->add_option("--kmeans-restarts", sweep.restarts);
    sweep_cmd->add_option("--out", sweep.out_path, "CSV output path (default stdout)");

    std::vector<std::string> argv_like(args.rbegin(), args.rend());
    try {
        app.parse(argv_like);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);  // --help
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (compress_cmd->parsed()) {
            if (!std::filesystem::exists(comp.input)) {
                err << "error: no such input file: " << comp.input << '\n';
                return 2;
            }
            return cmd_compress(comp, out);
        }
        if (decompress_cmd->parsed()) {
            if (!std::filesystem::exists(dec_input)) {
                err << "error: no such input file: " << dec_input << '\n';
                return 2;
            }
            return cmd_decompress(dec_input, dec_output);
        }
        if (search_cmd->parsed()) {
            if (!std::filesystem::exists(search.input)) {
                err << "error: no such input file: " << search.input << '\n';
                return 2;
            }
            Table table = looks_like_table_dump(search.input)
                              ? read_table_file(search.input)
                              : preprocess(read_csv_file(search.input)).table;
            const SearchResult result = search_latent_sizes(
                table, search.k_r_min, search.k_r_max, search.k_c_min, search.k_c_max,
                parse_codec(search.codec), search.seed, search.trials);
            if (!search.grid_out.empty()) {
                std::ofstream grid(search.grid_out);
                if (!grid) throw IoError("cannot open for writing: " + search.grid_out);
                grid << result.grid_csv();
            }
            out << "best_k_r=" << result.best_k_r << " best_k_c=" << result.best_k_c
                << " mean_bytes=" << result.best_mean_bytes << '\n';
            return 0;
        }
        if (sweep_cmd->parsed()) {
            SweepConfig config;
            config.k = sweep.k;
            config.m = sweep.m;
            config.n = sweep.n;
            config.reps = sweep.reps;
            config.seed = sweep.seed;
            config.kmeans_restarts = sweep.restarts;
            config.p0_grid = parse_grid(sweep.p0);
            config.p1_grid = parse_grid(sweep.p1);
            config.codecs = {sweep.codecs.find("naive-lz") != std::string::npos,
                             sweep.codecs.find("naive-ans") != std::string::npos,
                             sweep.codecs.find("latent-lz") != std::string::npos,
                             sweep.codecs.find("latent-ans") != std::string::npos};
            const SweepResult result = synthetic_sweep(config);
            if (sweep.out_path.empty()) {
                out << result.csv();
            } else {
                std::ofstream file(sweep.out_path);
                if (!file) throw IoError("cannot open for writing: " + sweep.out_path);
                file << result.csv();
            }
            return 0;
        }
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const IngestError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace latentpack
