#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(ZOMAT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string capture_cli(const std::string& args) {
    fs::path tmp = fs::temp_directory_path() / "zomat_cli_capture.txt";
    std::string cmd =
        std::string(ZOMAT_CLI_PATH) + " " + args + " >" + tmp.string() + " 2>/dev/null";
    std::system(cmd.c_str());
    std::ifstream in(tmp);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("zomat_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

}  // namespace

TEST_CASE("ex-table produces the expected values") {
    TempDir dir("extable");
    write(dir.path / "p.zom", "11");
    int code = run_cli("ex-table --pattern " + (dir.path / "p.zom").string() + " --n 1..5 --out " +
                       (dir.path / "out").string());
    CHECK(code == 0);
    std::string csv = slurp(dir.path / "out" / "ex_table.csv");
    CHECK(csv.find("n,value,mode,nodes\n") == 0);
    CHECK(csv.find("\n1,1,exhaustive,") != std::string::npos);
    CHECK(csv.find("\n2,2,exhaustive,") != std::string::npos);
    CHECK(csv.find("\n3,3,exhaustive,") != std::string::npos);
    CHECK(csv.find("\n4,4,exhaustive,") != std::string::npos);
    CHECK(csv.find("\n5,5,branch-and-bound,") != std::string::npos);
    // one certificate per n, re-validated by the library elsewhere
    int certs = 0;
    for (auto& entry : fs::recursive_directory_iterator(dir.path / "out" / "certs"))
        if (entry.is_regular_file()) ++certs;
    CHECK(certs == 5);
}

TEST_CASE("ex-table rejects a malformed pattern file") {
    TempDir dir("badpat");
    write(dir.path / "bad.zom", "10\n0x");
    int code = run_cli("ex-table --pattern " + (dir.path / "bad.zom").string() + " --n 2 --out " +
                       (dir.path / "out").string());
    CHECK(code == 2);
}

TEST_CASE("ex-table reruns are byte-identical") {
    TempDir dir("rerun");
    write(dir.path / "p.zom", "10\n01");
    std::string base = " --pattern " + (dir.path / "p.zom").string() + " --n 2..4";
    CHECK(run_cli("ex-table" + base + " --out " + (dir.path / "a").string()) == 0);
    CHECK(run_cli("ex-table" + base + " --out " + (dir.path / "b").string()) == 0);
    CHECK(slurp(dir.path / "a" / "ex_table.csv") == slurp(dir.path / "b" / "ex_table.csv"));
}

TEST_CASE("fit-exponent recovers exact power laws") {
    TempDir dir("fit");
    auto slope_of = [](const std::string& report) {
        size_t at = report.find("slope: ");
        REQUIRE(at != std::string::npos);
        return std::stod(report.substr(at + 7));
    };

    write(dir.path / "square.csv", "n,value,mode,nodes\n2,4,x,0\n4,16,x,0\n8,64,x,0\n");
    std::string out = capture_cli("fit-exponent --table " + (dir.path / "square.csv").string());
    CHECK(std::abs(slope_of(out) - 2.0) < 1e-9);

    write(dir.path / "flat.csv", "n,value,mode,nodes\n2,7,x,0\n3,7,x,0\n4,7,x,0\n");
    out = capture_cli("fit-exponent --table " + (dir.path / "flat.csv").string());
    // least-squares slope of a constant series is 0 up to rounding
    CHECK(std::abs(slope_of(out)) < 1e-12);

    // frozen regression value for the 2n-1 family over n = 2..8
    std::ostringstream rows;
    rows << "n,value,mode,nodes\n";
    for (int n = 2; n <= 8; ++n) rows << n << ',' << 2 * n - 1 << ",x,0\n";
    write(dir.path / "diag.csv", rows.str());
    out = capture_cli("fit-exponent --table " + (dir.path / "diag.csv").string());
    CHECK(std::abs(slope_of(out) - 1.1560555828094732) < 1e-9);

    write(dir.path / "short.csv", "n,value,mode,nodes\n2,3,x,0\n3,5,x,0\n");
    CHECK(run_cli("fit-exponent --table " + (dir.path / "short.csv").string()) == 2);
}

TEST_CASE("pipeline exit codes") {
    TempDir dir("pipe");
    write(dir.path / "fig2.zom", "101\n011\n110");
    std::string base = "pipeline --pattern " + (dir.path / "fig2.zom").string();
    CHECK(run_cli(base + " --n 16 --all-ones --seed 1 --out " + (dir.path / "hit").string()) == 0);
    CHECK(run_cli(base + " --n 16 --density 0.0 --seed 1") == 1);

    // fixed seed rerun gives a byte-identical trace
    std::string args = base + " --n 32 --density 0.85 --seed 9 --out ";
    CHECK(run_cli(args + (dir.path / "t1").string()) == 0);
    CHECK(run_cli(args + (dir.path / "t2").string()) == 0);
    std::string t1 = slurp(dir.path / "t1" / "trace.txt");
    CHECK(t1 == slurp(dir.path / "t2" / "trace.txt"));
    CHECK(!t1.empty());
}

TEST_CASE("stats emits tables and honors the variant flag") {
    TempDir dir("stats");
    write(dir.path / "p.zom", "11");
    std::string base = "stats --pattern " + (dir.path / "p.zom").string();
    CHECK(run_cli(base + " --n 16 --all-ones --trials 50 --seed 2 --variant partite --out " +
                  (dir.path / "s").string()) == 0);
    std::string csv = slurp(dir.path / "s" / "stats.csv");
    CHECK(csv.find("bound") != std::string::npos);
    CHECK(csv.find("\n16,50,") != std::string::npos);

    CHECK(run_cli(base + " --n 8..10 --density 0.5 --trials 40 --seed 2 --out " +
                  (dir.path / "s2").string() + " --format json") == 0);
    CHECK(fs::exists(dir.path / "s2" / "stats.json"));
}
