#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result cloakc(const std::string& args, const std::string& env = "") {
    std::string cmd = env + " " CLOAKC_PATH " " + args + " 2>&1";
    Result r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::array<char, 4096> buf{};
    while (auto n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cloakc-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string replaceAll(std::string s, const std::string& from, const std::string& to) {
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) s.replace(pos, from.size(), to);
    return s;
}

}  // namespace

TEST_CASE("check") {
    auto ok = cloakc("check contracts/supply_chain.cloak");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("biddingProcure: MPT") != std::string::npos);
    CHECK(cloakc("check contracts/supply_chain.cloak").out == ok.out);

    TempDir t;
    auto stripped = replaceAll(replaceAll(slurp("contracts/supply_chain.cloak"), "reveal(bids[0], all)", "bids[0]"), "reveal(bids[0], winner)", "bids[0]");
    std::ofstream(t.path / "stripped.cloak") << stripped;
    auto bad = cloakc("check " + (t.path / "stripped.cloak").string());
    CHECK(bad.code == 1);
    CHECK(bad.out.find("PrivacyViolation") != std::string::npos);

    std::ofstream(t.path / "syntax.cloak") << "contract C { uint x }";
    CHECK(cloakc("check " + (t.path / "syntax.cloak").string()).code == 1);
    CHECK(cloakc("check " + (t.path / "missing.cloak").string()).code == 2);
    CHECK(cloakc("frobnicate").code == 1);
}

TEST_CASE("compile") {
    TempDir t;
    auto a = cloakc("compile contracts/supply_chain.cloak --out " + (t.path / "a").string());
    REQUIRE(a.code == 0);
    CHECK(a.out.find("H_F ") != std::string::npos);
    for (auto f : {"policy.json", "private.cloak", "verifier.json"}) CHECK(fs::exists(t.path / "a" / f));
    auto policy = json::parse(slurp(t.path / "a" / "policy.json"));
    bool mpt = false;
    for (const auto& f : policy.at("functions"))
        if (f.at("id") == "biddingProcure") mpt = f.at("type") == "MPT";
    CHECK(mpt);

    REQUIRE(cloakc("compile contracts/supply_chain.cloak --out " + (t.path / "b").string()).code == 0);
    for (auto f : {"policy.json", "private.cloak", "verifier.json"}) CHECK(slurp(t.path / "a" / f) == slurp(t.path / "b" / f));

    auto enc = "0x00000000000000000000000000000000000000e1";
    REQUIRE(cloakc(std::string("compile contracts/supply_chain.cloak --enclave ") + enc + " --out " + (t.path / "c").string()).code == 0);
    CHECK(json::parse(slurp(t.path / "c" / "verifier.json")).dump().find(enc) != std::string::npos);
    CHECK(cloakc("compile contracts/supply_chain.cloak --enclave 0x12 --out " + (t.path / "d").string()).code == 1);

    std::ofstream(t.path / "bad.cloak") << "contract C { uint @all x; function f(uint @me y) public { x = y; } }";
    CHECK(cloakc("compile " + (t.path / "bad.cloak").string() + " --out " + (t.path / "e").string()).code == 1);
    CHECK_FALSE(fs::exists(t.path / "e"));
}

TEST_CASE("run exit codes and outputs") {
    TempDir t;
    auto out = (t.path / "r").string();
    auto honest = cloakc("run --scenario scenarios/honest.json --out " + out);
    CHECK(honest.code == 0);
    auto report = json::parse(slurp(t.path / "r" / "report.json"));
    CHECK(report.at("outcome") == "COMPLETE");
    CHECK(report.at("tx_count").at("mpt") == 2);
    auto trace = slurp(t.path / "r" / "trace.jsonl");
    CHECK_FALSE(trace.empty());
    for (std::istringstream lines(trace); std::getline(lines, trace);) CHECK(json::parse(trace).contains("payload_digest"));
    CHECK(cloakc("run --scenario scenarios/honest.json --out " + out).out == honest.out);

    CHECK(cloakc("run --scenario scenarios/never_respond.json --out " + out).code == 3);
    CHECK(cloakc("run --scenario scenarios/drop_txcom.json --out " + out).code == 4);
    CHECK(cloakc("run --scenario scenarios/late_ack.json --out " + out).code == 5);

    std::ofstream(t.path / "bad.json") << R"({"contract": "contracts/supply_chain.cloak", "parties": "T"})";
    CHECK(cloakc("run --scenario " + (t.path / "bad.json").string() + " --out " + out).code == 1);
    std::ofstream(t.path / "broken.json") << "{";
    CHECK(cloakc("run --scenario " + (t.path / "broken.json").string() + " --out " + out).code == 1);
    CHECK(cloakc("run --scenario scenarios/honest.json --format yaml --out " + out).code == 1);
}

TEST_CASE("seed precedence: file < env < flag") {
    TempDir t;
    auto out = (t.path / "r").string();
    auto seedOf = [&](const std::string& flags, const std::string& env) {
        auto r = cloakc("run --scenario scenarios/honest.json --format json --out " + out + " " + flags, env);
        REQUIRE(r.code == 0);
        return json::parse(r.out).at("seed").get<int>();
    };
    CHECK(seedOf("", "") == 7);
    CHECK(seedOf("", "CLOAK_SEED=21") == 21);
    CHECK(seedOf("--seed 5", "CLOAK_SEED=21") == 5);
    CHECK(cloakc("run --scenario scenarios/honest.json --out " + out, "CLOAK_SEED=abc").code == 1);
}
