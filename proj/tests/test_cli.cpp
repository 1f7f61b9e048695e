// Drives the installed CLI end to end through a shell; covers exit-code
// discipline, determinism of emitted files, and the gen -> reduce -> report
// round trip on every generator kind.

#include "lpreduce/io.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const std::string cli = LPREDUCE_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("lpreduce_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("gen is deterministic and reduce stays inside its certificate") {
    TempDir dir;
    const std::string pts = dir.file("pts.csv");
    const std::string pts2 = dir.file("pts2.csv");
    CHECK(run("gen --kind simplex --k 12 --m 300 --scale 5 --seed 7 --output " + pts) == 0);
    CHECK(run("gen --kind simplex --k 12 --m 300 --scale 5 --seed 7 --output " + pts2) == 0);
    CHECK(slurp(pts) == slurp(pts2));

    const std::string red = dir.file("red.json");
    const std::string rep = dir.file("rep.json");
    CHECK(run("reduce --input " + pts + " --p 1.0 --eps-snow 0.1 --d-bss 9 --output " + red +
              " --report " + rep) == 0);

    const lpreduce::RunReport report = lpreduce::run_report_from_json(slurp(rep));
    CHECK(report.k == 12);
    CHECK(report.m == 300);
    CHECK(report.n <= 117);  // ceil(d * rank) with the simplex's rank-13 structure
    const double spread_bound = std::pow(report.certified_factor, 2.0 / report.p);
    CHECK(report.distortion.max_ratio / report.distortion.min_ratio <= spread_bound + 1e-9);
    CHECK(report.distortion.violation_count == 0);

    const lpreduce::ReducedPointSet reduced = lpreduce::reduced_points_from_json(slurp(red));
    CHECK(reduced.n == report.n);
    CHECK(reduced.points.rows() == 12);
}

TEST_CASE("reduce reports are byte-identical modulo timings") {
    TempDir dir;
    const std::string pts = dir.file("pts.csv");
    CHECK(run("gen --kind clustered --k 9 --m 40 --clusters 3 --seed 11 --output " + pts) == 0);
    const std::string rep1 = dir.file("rep1.json");
    const std::string rep2 = dir.file("rep2.json");
    const std::string w1 = dir.file("red1.json");
    const std::string w2 = dir.file("red2.json");
    CHECK(run("reduce --input " + pts + " --p 1.0 --output " + w1 + " --report " + rep1) == 0);
    CHECK(run("reduce --input " + pts + " --p 1.0 --output " + w2 + " --report " + rep2) == 0);
    CHECK(slurp(w1) == slurp(w2));  // point/weight payloads carry no timings at all
    CHECK(lpreduce::strip_timings(slurp(rep1)) == lpreduce::strip_timings(slurp(rep2)));
}

TEST_CASE("gen -> reduce round trip on every kind") {
    TempDir dir;
    int tag = 0;
    for (const std::string kind : {"gaussian", "simplex", "clustered"}) {
        const std::string pts = dir.file("pts_" + kind + ".csv");
        const std::string rep = dir.file("rep_" + kind + ".json");
        CHECK(run("gen --kind " + kind + " --k 8 --m 50 --seed " + std::to_string(40 + tag++) +
                  " --output " + pts) == 0);
        CHECK(run("reduce --input " + pts + " --p 1.0 --report " + rep) == 0);
        const lpreduce::RunReport report = lpreduce::run_report_from_json(slurp(rep));
        CHECK(report.distortion.violation_count == 0);
        CHECK(report.distortion.max_ratio <= report.distortion.certified_side *
                                                 report.normalization_scale + 1e-9);
        for (double value : {report.kappa, report.certified_factor, report.normalization_scale,
                             report.distortion.min_ratio, report.distortion.max_ratio,
                             report.snowflake.calibration}) {
            CHECK(std::isfinite(value));
        }
    }
}

TEST_CASE("sparsify writes verified weights JSON") {
    TempDir dir;
    const std::string vecs = dir.file("vecs.csv");
    std::ofstream(vecs) << "1,0,0,0\n0,1,0,0\n0,0,1,0\n0,0,0,1\n";
    const std::string out = dir.file("weights.json");
    CHECK(run("sparsify --input " + vecs + " --d 4 --verify --output " + out) == 0);
    const lpreduce::SparseWeights weights = lpreduce::sparse_weights_from_json(slurp(out));
    CHECK(weights.support.size() == 4);
    CHECK(weights.kappa <= 9.0 + 1e-12);
    CHECK(weights.rank_used == 4);
}

TEST_CASE("snowflake-audit meets the requested band") {
    TempDir dir;
    const std::string out = dir.file("audit.json");
    CHECK(run("snowflake-audit --rho 0.5 --eps 0.1 --umin 0.01 --umax 100 --output " + out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("\"max_ratio\"") != std::string::npos);
}

TEST_CASE("bench emits a CSV whose bound column is linear in k") {
    TempDir dir;
    const std::string out = dir.file("bench.csv");
    CHECK(run("bench --k-list 8,16,32 --m 40 --p 1.0 --seed 5 --output " + out) == 0);
    const std::string text = slurp(out);
    std::istringstream lines(text);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "k,s,n_bound,n_actual,measured_distortion,runtime_ms");
    double bound_per_k = 0.0;
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        ++rows;
        std::istringstream fields(line);
        std::string token;
        std::getline(fields, token, ',');
        const double k = std::stod(token);
        std::getline(fields, token, ',');  // s
        std::getline(fields, token, ',');
        const double bound = std::stod(token);
        std::getline(fields, token, ',');  // n_actual
        std::getline(fields, token, ',');
        const double spread = std::stod(token);
        CHECK(spread >= 1.0);
        // d = 9 caps kappa at 4, so F <= 1.1^4 * 2 and the measured distance
        // ratio spread stays below F^(2/p) with p = 1.
        CHECK(spread <= std::pow(std::pow(1.1, 4.0) * 2.0, 2.0) + 1e-9);
        if (rows == 1) {
            bound_per_k = bound / k;
        } else {
            CHECK(bound / k == doctest::Approx(bound_per_k).epsilon(1e-12));
        }
    }
    CHECK(rows == 3);
}

TEST_CASE("exit-code discipline") {
    TempDir dir;
    const std::string pts = dir.file("pts.csv");
    CHECK(run("gen --kind gaussian --k 4 --m 6 --seed 1 --output " + pts) == 0);

    CHECK(run("reduce --input " + pts + " --p 2.5") == 2);
    CHECK(run("reduce --input " + dir.file("missing.csv") + " --p 1.0") == 2);
    std::ofstream(dir.file("empty.csv")) << "";
    CHECK(run("reduce --input " + dir.file("empty.csv") + " --p 1.0") == 2);
    CHECK(run("reduce --input " + pts + " --p 1.0 --umin 10 --umax 1") == 2);
    CHECK(run("reduce --input " + pts + " --p 1.0 --umin 1") == 2);  // umax missing
    CHECK(run("sparsify --input " + pts + " --d 1") == 2);
    CHECK(run("snowflake-audit --rho 1.5 --eps 0.1 --umin 0.01 --umax 100") == 2);
    CHECK(run("snowflake-audit --rho 0.5 --eps 0.1 --umin 10 --umax 1") == 2);
    CHECK(run("gen --kind unknown --k 3 --m 4 --output " + dir.file("x.csv")) == 2);
    CHECK(run("bench --k-list --m 40") == 2);  // empty list rejected at parse
    CHECK(run("nonsense") == 2);
    CHECK(run("--help") == 0);
}
