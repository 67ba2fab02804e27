#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cloak/codegen/verifier.hpp"
#include "cloak/frontend/parser.hpp"
#include "cloak/protocol/runner.hpp"

namespace fs = std::filesystem;
using namespace cloak;

namespace {

constexpr int kOk = 0, kError = 1, kMissing = 2;

std::optional<std::string> readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Parses and checks; prints diagnostics. nullopt on a parse error.
std::optional<codegen::Artifacts> build(const std::string& path, const std::string& src) {
    try {
        auto a = codegen::compile(frontend::parseSource(src));
        for (const auto& d : a.checked.diagnostics) std::cout << d.str(path) << "\n";
        return a;
    } catch (const frontend::ParseError& e) {
        std::cout << path << ":" << e.loc.str() << ": error ParseError: " << e.what() << "\n";
    } catch (const frontend::LexError& e) {
        std::cout << path << ":" << e.loc.str() << ": error ParseError: " << e.what() << "\n";
    }
    return std::nullopt;
}

int cmdCheck(const std::string& file) {
    auto src = readFile(file);
    if (!src) {
        std::cerr << "cloakc: cannot read " << file << "\n";
        return kMissing;
    }
    auto a = build(file, *src);
    if (!a) return kError;
    for (const auto& f : a->checked.functions) std::cout << f.name << ": " << typecheck::kindName(f.kind) << "\n";
    std::cout << a->checked.errorCount() << " error(s)\n";
    return a->ok() ? kOk : kError;
}

int cmdCompile(const std::string& file, const std::string& out, const std::string& enclave) {
    auto src = readFile(file);
    if (!src) {
        std::cerr << "cloakc: cannot read " << file << "\n";
        return kMissing;
    }
    Address adrE;
    try {
        if (!enclave.empty()) adrE = Address::parse(enclave);
    } catch (const std::exception&) {
        std::cerr << "cloakc: bad enclave address " << enclave << "\n";
        return kError;
    }
    auto a = build(file, *src);
    if (!a || !a->ok()) return kError;
    auto v = codegen::generateVerifier(a->checked, a->policy, a->privateContract, adrE);
    codegen::writeArtifacts(out, *a, v);
    std::cout << "H_F " << a->hF.hex() << "\n";
    std::cout << "H_P " << a->hP.hex() << "\n";
    for (const auto* f : {"policy.json", "private.cloak", "verifier.json"}) std::cout << "wrote " << (fs::path(out) / f).string() << "\n";
    return kOk;
}

void printText(const protocol::RunReport& r, bool verbose) {
    std::cout << "scenario " << r.scenario << " seed " << r.seed << "\n";
    std::cout << "outcome " << protocol::outcomeName(r.outcome) << "\n";
    std::cout << "setup txs " << r.setupTxs << "\n";
    for (std::size_t i = 0; i < r.rounds.size(); ++i) {
        const auto& rr = r.rounds[i];
        std::cout << "round " << i << " " << protocol::outcomeName(rr.outcome) << " mpt txs " << rr.mptTxs;
        for (const auto& [k, n] : rr.txCount) std::cout << " " << k << "=" << n;
        std::cout << "\n";
        if (rr.failure) std::cout << "  failure " << *rr.failure << "\n";
        if (!rr.malicious.empty()) {
            std::cout << "  malicious";
            for (const auto& m : rr.malicious) std::cout << " " << m;
            std::cout << "\n";
        }
        if (verbose)
            for (const auto& [n, o] : rr.outputs) std::cout << "  " << n << " reads " << o.dump() << "\n";
    }
    for (const auto& [n, c] : r.finalCoins) std::cout << "coins " << n << " " << c << "\n";
    std::cout << "conserved " << (r.conserved ? "yes" : "no") << "\n";
    if (verbose)
        for (const auto& w : r.warnings) std::cout << "warning " << w << "\n";
}

int cmdRun(const std::string& scenario, std::optional<std::uint64_t> seedFlag, const std::string& out, const std::string& format, bool verbose) {
    try {
        auto cfg = protocol::loadScenario(scenario);
        if (const char* env = std::getenv("CLOAK_SEED"); env && *env) {
            try {
                std::size_t used = 0;
                cfg.seed = std::stoull(env, &used);
                if (used != std::strlen(env)) throw std::invalid_argument(env);
            } catch (const std::exception&) {
                std::cerr << "cloakc: CLOAK_SEED is not an unsigned integer\n";
                return kError;
            }
        }
        if (seedFlag) cfg.seed = *seedFlag;
        auto result = protocol::runScenario(cfg);
        fs::create_directories(out);
        std::ofstream(fs::path(out) / "report.json") << result.report.toJson().dump(2) << "\n";
        std::ofstream(fs::path(out) / "trace.jsonl") << result.traceJsonl();
        if (format == "json") std::cout << result.report.toJson().dump(2) << "\n";
        else printText(result.report, verbose);
        return protocol::exitCodeFor(result.report.outcome);
    } catch (const protocol::ScenarioError& e) {
        std::cerr << "cloakc: " << e.what() << "\n";
        return kError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cloakc: compile privacy-annotated contracts and simulate multi-party transactions"};
    app.require_subcommand(1);

    std::string file, out = ".", enclave, scenario, format = "text";
    std::optional<std::uint64_t> seed;
    bool verbose = false;

    auto* check = app.add_subcommand("check", "type-check a contract");
    check->add_option("file", file, "contract source")->required();

    auto* compile = app.add_subcommand("compile", "write policy.json, private.cloak and verifier.json");
    compile->add_option("file", file, "contract source")->required();
    compile->add_option("--out", out, "output directory")->required();
    compile->add_option("--enclave", enclave, "enclave address bound into the verifier");

    auto* run = app.add_subcommand("run", "simulate a scenario");
    run->add_option("--scenario", scenario, "scenario file")->required();
    run->add_option("--seed", seed, "overrides CLOAK_SEED and the file");
    run->add_option("--out", out, "directory for report.json and trace.jsonl");
    run->add_option("--format", format, "stdout format")->check(CLI::IsMember({"json", "text"}));
    run->add_flag("-v,--verbose", verbose, "print decrypted outputs and warnings");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kError;
    }
    try {
        if (*check) return cmdCheck(file);
        if (*compile) return cmdCompile(file, out, enclave);
        return cmdRun(scenario, seed, out, format, verbose);
    } catch (const std::exception& e) {
        std::cerr << "cloakc: " << e.what() << "\n";
        return kError;
    }
}
