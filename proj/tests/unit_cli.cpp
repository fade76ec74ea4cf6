#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "latentpack/cli.hpp"
#include "latentpack/container.hpp"
#include "latentpack/table.hpp"

using namespace latentpack;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("latentpack_test_" + std::to_string(rng::at(std::random_device{}(), 0)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::uint8_t> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("cli: compress/decompress round-trip with a stats line") {
    TempDir dir;
    const ModelParams params = sbm_params(0.1, 0.7, 2);
    auto [table, latents] = sample_table(params, 48, 32, 5);
    write_table_file(dir.file("in.ltbl"), table);

    const CliRun comp = run({"compress", dir.file("in.ltbl"), dir.file("out.ltnt"), "--k-r", "2",
                             "--k-c", "2", "--seed", "3"});
    CHECK(comp.code == 0);
    CHECK(comp.out.find("m=48") != std::string::npos);
    CHECK(comp.out.find("n=32") != std::string::npos);
    CHECK(comp.out.find("alphabet=2") != std::string::npos);
    CHECK(comp.out.find("bytes=") != std::string::npos);
    CHECK(comp.out.find("drr=") != std::string::npos);

    const CliRun dec = run({"decompress", dir.file("out.ltnt"), dir.file("back.ltbl")});
    CHECK(dec.code == 0);
    CHECK(slurp(dir.file("back.ltbl")) == slurp(dir.file("in.ltbl")));
}

TEST_CASE("cli: deterministic outputs for a fixed seed") {
    TempDir dir;
    const ModelParams params = sbm_params(0.2, 0.6, 3);
    auto [table, latents] = sample_table(params, 60, 40, 9);
    write_table_file(dir.file("in.ltbl"), table);

    REQUIRE(run({"compress", dir.file("in.ltbl"), dir.file("a.ltnt"), "--seed", "11"}).code == 0);
    REQUIRE(run({"compress", dir.file("in.ltbl"), dir.file("b.ltnt"), "--seed", "11"}).code == 0);
    CHECK(slurp(dir.file("a.ltnt")) == slurp(dir.file("b.ltnt")));
}

TEST_CASE("cli: missing input exits 2") {
    TempDir dir;
    const CliRun r = run({"compress", dir.file("nope.ltbl"), dir.file("out.ltnt")});
    CHECK(r.code == 2);
    CHECK(r.err.find("no such input") != std::string::npos);
}

TEST_CASE("cli: corrupt container exits 1; future version is called out") {
    TempDir dir;
    const ModelParams params = sbm_params(0.3, 0.6, 2);
    auto [table, latents] = sample_table(params, 16, 16, 1);
    write_table_file(dir.file("in.ltbl"), table);
    REQUIRE(run({"compress", dir.file("in.ltbl"), dir.file("c.ltnt")}).code == 0);

    auto bytes = slurp(dir.file("c.ltnt"));
    bytes.resize(bytes.size() / 2);
    {
        std::ofstream out(dir.file("cut.ltnt"), std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    }
    const CliRun cut = run({"decompress", dir.file("cut.ltnt"), dir.file("x.ltbl")});
    CHECK(cut.code == 1);

    auto future = slurp(dir.file("c.ltnt"));
    future[4] = kContainerVersion + 3;
    {
        std::ofstream out(dir.file("future.ltnt"), std::ios::binary);
        out.write(reinterpret_cast<const char*>(future.data()),
                  static_cast<std::streamsize>(future.size()));
    }
    const CliRun fut = run({"decompress", dir.file("future.ltnt"), dir.file("y.ltbl")});
    CHECK(fut.code == 1);
    CHECK(fut.err.find("version") != std::string::npos);
}

TEST_CASE("cli: csv input is preprocessed and the sidecar written") {
    TempDir dir;
    {
        std::ofstream csv(dir.file("in.csv"));
        csv << "color,size\n";
        for (int i = 0; i < 200; ++i)
            csv << (i % 3 == 0 ? "red" : i % 3 == 1 ? "green" : "blue") << ',' << (i % 5) << '\n';
    }
    const CliRun r = run({"compress", dir.file("in.csv"), dir.file("out.ltnt"), "--report",
                          dir.file("cols.json"), "--seed", "2"});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir.file("cols.json")));
    const CliRun dec = run({"decompress", dir.file("out.ltnt"), dir.file("back.ltbl")});
    CHECK(dec.code == 0);
    const Table back = read_table_file(dir.file("back.ltbl"));
    CHECK(back.m == 200);
    CHECK(back.n == 2);
}

TEST_CASE("cli: search reports a best point and writes the grid") {
    TempDir dir;
    const ModelParams params = sbm_params(0.05, 0.6, 2);
    auto [table, latents] = sample_table(params, 80, 80, 31);
    write_table_file(dir.file("in.ltbl"), table);
    const CliRun r = run({"search", dir.file("in.ltbl"), "--k-r-min", "1", "--k-r-max", "3",
                          "--k-c-min", "1", "--k-c-max", "3", "--kmeans-trials", "2", "--seed",
                          "7", "--grid-out", dir.file("grid.csv")});
    CHECK(r.code == 0);
    CHECK(r.out.find("best_k_r=") != std::string::npos);
    std::ifstream grid(dir.file("grid.csv"));
    std::string header;
    std::getline(grid, header);
    CHECK(header == "k_r,k_c,mean_bytes,mean_drr");
    std::size_t lines = 0;
    for (std::string line; std::getline(grid, line);) lines += !line.empty();
    CHECK(lines == 9);
}

TEST_CASE("cli: sweep emits the grid-ordered csv with theory columns") {
    TempDir dir;
    const CliRun r = run({"sweep", "--k", "2", "--m", "64", "--n", "64", "--p0", "0.1", "--p1",
                          "0.1:0.9:2", "--reps", "1", "--seed", "3", "--out", dir.file("sweep.csv")});
    CHECK(r.code == 0);
    std::ifstream csv(dir.file("sweep.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header.find("theory_drr_opt") != std::string::npos);
    std::vector<std::string> lines;
    for (std::string line; std::getline(csv, line);)
        if (!line.empty()) lines.push_back(line);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].substr(0, 8) == "0.1,0.1,");
    CHECK(lines[1].substr(0, 8) == "0.1,0.9,");
}

TEST_CASE("cli: usage errors exit 2") {
    CHECK(run({"compress"}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({}).code == 2);
}
