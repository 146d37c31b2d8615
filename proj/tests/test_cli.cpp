#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_raw(const std::string& cmd_line) {
    const std::string cmd = cmd_line + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

RunResult run_cli(const std::string& args) {
    return run_raw(std::string(ZHL_CLI_PATH) + " " + args);
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("eval prints the value and exits 0") {
    const auto r = run_cli("eval --kernel riemann --z 2+0i --format json --no-timestamp");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["value"][0].get<double>() == doctest::Approx(1.6449340668).epsilon(1e-9));
    CHECK(j["method"] == "mellin");

    const auto neg = run_cli("eval --kernel riemann --z \" -1+0i\" --format json --no-timestamp");
    CHECK(neg.exit_code == 0);
    CHECK(nlohmann::json::parse(neg.out)["value"][0].get<double>() ==
          doctest::Approx(-1.0 / 12.0).epsilon(1e-7));
}

TEST_CASE("eval at the pole exits 2 with a pole message") {
    const auto r = run_cli("eval --kernel riemann --z 1+0i");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("pole") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
    CHECK(run_cli("eval --kernel riemann --z not_a_number").exit_code == 1);
    CHECK(run_cli("eval --kernel nosuch --z 2+0i").exit_code == 1);
    CHECK(run_cli("frobnicate").exit_code == 1);
    CHECK(run_cli("eval").exit_code == 1); // --z is required
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("json output is byte-stable with --no-timestamp") {
    const std::string args =
        "eval --kernel lambda --z 2+0i --format json --no-timestamp";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    // with the timestamp the schema gains exactly that one key
    const auto c = run_cli("eval --kernel lambda --z 2+0i --format json");
    CHECK(nlohmann::json::parse(c.out).contains("timestamp"));
}

TEST_CASE("zeros window and empty window") {
    const auto r = run_cli("zeros --kernel riemann --t-min 10 --t-max 30 --format json "
                           "--no-timestamp");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["records"].size() == 3);
    for (const auto& rec : j["records"]) {
        CHECK(rec["verified_count"].get<int>() == 1);
        CHECK(rec["residual"].get<double>() < 1e-9);
    }

    const auto empty = run_cli("zeros --kernel riemann --t-min 2 --t-max 10 --format json "
                               "--no-timestamp");
    CHECK(empty.exit_code == 0);
    CHECK(nlohmann::json::parse(empty.out)["records"].empty());
}

TEST_CASE("zeros cache feeds spectrum") {
    const std::string cache =
        (std::filesystem::temp_directory_path() / "zhl_cli_cache.csv").string();
    std::filesystem::remove(cache);
    const auto z = run_cli("zeros --kernel riemann --t-min 13 --t-max 15 --cache " + cache);
    CHECK(z.exit_code == 0);
    const auto s = run_cli("spectrum --from-cache " + cache + " --format json --no-timestamp");
    CHECK(s.exit_code == 0);
    const auto j = nlohmann::json::parse(s.out);
    REQUIRE(j["spectrum"].size() == 1);
    const double e_re = j["spectrum"][0]["E"][0].get<double>();
    const double z_im = j["spectrum"][0]["z"][1].get<double>();
    CHECK(e_re == doctest::Approx(-2.0 * z_im));
    std::filesystem::remove(cache);

    CHECK(run_cli("spectrum --from-cache /nonexistent.csv").exit_code == 1);
}

TEST_CASE("forced paths agree") {
    const auto m = run_cli("eval --kernel riemann --z 1.5+0i --force-path mellin --format json "
                           "--no-timestamp");
    const auto h = run_cli("eval --kernel riemann --z 1.5+0i --force-path hankel --format json "
                           "--no-timestamp");
    CHECK(m.exit_code == 0);
    CHECK(h.exit_code == 0);
    const double vm = nlohmann::json::parse(m.out)["value"][0].get<double>();
    const double vh = nlohmann::json::parse(h.out)["value"][0].get<double>();
    CHECK(vm == doctest::Approx(vh).epsilon(2e-8));
    CHECK(nlohmann::json::parse(m.out)["method"] == "mellin");
    CHECK(nlohmann::json::parse(h.out)["method"] == "hankel");
    CHECK(run_cli("eval --kernel riemann --z 2+0i --force-path nosuch").exit_code == 1);
}

TEST_CASE("zero output is independent of the worker count") {
    const std::string args = " zeros --kernel riemann --t-min 10 --t-max 30 --format json "
                             "--no-timestamp";
    const auto serial = run_raw("env ZHL_THREADS=1 " + std::string(ZHL_CLI_PATH) + args);
    const auto parallel = run_raw("env ZHL_THREADS=8 " + std::string(ZHL_CLI_PATH) + args);
    CHECK(serial.exit_code == 0);
    CHECK(serial.out == parallel.out);
}

TEST_CASE("verify suites pass") {
    CHECK(run_cli("verify --suite functional").exit_code == 0);
    CHECK(run_cli("verify --suite prop21 --kernel lambda").exit_code == 0);
    CHECK(run_cli("verify --suite eigen --kernel riemann --z 2.3+1.1i").exit_code == 0);
    CHECK(run_cli("verify --suite asymptotic --kernel riemann").exit_code == 0);
    CHECK(run_cli("verify --suite nosuch").exit_code == 1);
}

TEST_CASE("verify failure exits 3") {
    // The Hecke kernel has no validated closed operator form; the series
    // fallback cannot meet the eigen bound, which must surface as exit 3.
    const auto r = run_cli("verify --suite eigen --kernel hecke --z 8.5+0i --grid 2:4:3");
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("FAIL") != std::string::npos);
}

} // TEST_SUITE
