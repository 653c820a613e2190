#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "confal/cli.hpp"

using namespace confal;

namespace {

struct TempDoc {
    std::filesystem::path path;
    explicit TempDoc(const json& j, const char* name)
        : path(std::filesystem::temp_directory_path() / name)
    {
        std::ofstream out(path);
        out << j.dump(2);
    }
    ~TempDoc() { std::error_code ec; std::filesystem::remove(path, ec); }
};

} // namespace

TEST_CASE("check-algebra on the builtin passes with exit status 0")
{
    RunConfig cfg;
    cfg.command = RunConfig::Command::CheckAlgebra;
    cfg.builtin = "cw";
    cfg.window = 2;
    Report rep = run(cfg);
    CHECK(rep.all_pass());
    CHECK(rep.exit_status() == 0);
    CHECK(rep.coverage.at("skew_pairs") == 25);
    CHECK(rep.coverage.at("jacobi_triples") == 125);
}

TEST_CASE("check-algebra on a broken document reports failures with status 1")
{
    TempDoc doc(json::parse(R"({"algebra": {"entries": {"*,*": "-d - 3*l"}}})"),
                "confal_bad_algebra.json");
    RunConfig cfg;
    cfg.command = RunConfig::Command::CheckAlgebra;
    cfg.input_path = doc.path.string();
    cfg.window = 1;
    Report rep = run(cfg);
    CHECK_FALSE(rep.all_pass());
    CHECK(rep.exit_status() == 1);
}

TEST_CASE("usage errors")
{
    RunConfig cfg;
    cfg.command = RunConfig::Command::CheckAlgebra;
    cfg.builtin = "nope";
    CHECK_THROWS_AS(run(cfg), UsageError);

    RunConfig cfg2;
    cfg2.command = RunConfig::Command::CheckDerivation;
    cfg2.builtin = "cw";
    cfg2.format = RunConfig::Format::Json; // randomized campaign without a seed
    CHECK_THROWS_AS(run(cfg2), UsageError);

    RunConfig cfg3;
    cfg3.command = RunConfig::Command::CheckModule;
    CHECK_THROWS_AS(run(cfg3), UsageError); // missing --input
}

TEST_CASE("check-module via documents")
{
    auto mod = make_V_Ab({{-2, 0}, {-1, -1}, {0, 0}, {1, -1}, {2, 0}}, Rational(3));
    TempDoc good(module_to_json(mod), "confal_good_module.json");
    RunConfig cfg;
    cfg.command = RunConfig::Command::CheckModule;
    cfg.input_path = good.path.string();
    cfg.seed = 5;
    Report rep = run(cfg);
    CHECK(rep.all_pass());

    json broken = module_to_json(mod);
    broken["module"]["entries"]["0,0"] = "-d + 1 - 3";
    TempDoc bad(broken, "confal_bad_module.json");
    cfg.input_path = bad.path.string();
    Report rep2 = run(cfg);
    CHECK_FALSE(rep2.all_pass());
    CHECK(rep2.exit_status() == 1);
}

TEST_CASE("classify-graded via documents recovers the descriptor")
{
    std::map<int, int> A{{-2, -1}, {-1, 0}, {0, 0}, {1, -1}, {2, 0}};
    auto mod = make_V_Ab(A, Rational(-5, 2));
    TempDoc doc(module_to_json(mod), "confal_classify_module.json");
    RunConfig cfg;
    cfg.command = RunConfig::Command::ClassifyGraded;
    cfg.input_path = doc.path.string();
    Report rep = run(cfg);
    REQUIRE(rep.all_pass());
    CHECK(rep.machine_payload.at("descriptors").size() == 1);
    CHECK(rep.machine_payload.at("descriptors")[0].at("kind") == "graded_sequence");
    CHECK(rep.machine_payload.at("descriptors")[0].at("b") == "-5/2");
    CHECK(rep.machine_payload.at("descriptors")[0].at("sequence").at("-2") == -1);
}

TEST_CASE("fourier payload matches the rendered lambda bracket")
{
    RunConfig cfg;
    cfg.command = RunConfig::Command::Fourier;
    cfg.index_i = 1;
    cfg.index_j = 2;
    cfg.alpha_band = 8;
    Report rep = run(cfg);
    REQUIRE(rep.all_pass());
    REQUIRE(rep.payload.size() == 1);
    CHECK(rep.payload[0] == "(-d - 2*l) L_3");
}

TEST_CASE("json reports are stable for a fixed seed")
{
    RunConfig cfg;
    cfg.command = RunConfig::Command::CheckDerivation;
    cfg.builtin = "cw";
    cfg.window = 2;
    cfg.deg_bound = 3;
    cfg.seed = 99;
    cfg.format = RunConfig::Format::Json;
    json a = run(cfg).to_json();
    json b = run(cfg).to_json();
    a.erase("timing_ms");
    b.erase("timing_ms");
    CHECK(a == b);
    for (const char* key : {"schema_version", "command", "window", "deg_bound", "seed", "checks",
                            "coverage", "payload", "summary"})
        CHECK(a.contains(key));
}

TEST_CASE("text-mode witnesses parse back through the polynomial grammar")
{
    RunConfig cfg;
    cfg.command = RunConfig::Command::MutateTest;
    Report rep = run(cfg);
    CHECK(rep.all_pass());
    int parsed = 0;
    for (const auto& c : rep.checks)
        for (const auto& w : c.witnesses) {
            std::string text = w.substr(w.rfind(": ") == std::string::npos ? 0 : w.rfind(": ") + 2);
            CHECK_NOTHROW(parse_poly(text));
            ++parsed;
        }
    CHECK(parsed >= 9);
}

TEST_CASE("check-derivation validates loaded documents")
{
    // ad_{L_0} written out as a document over a window
    json entries = json::object();
    for (int i = -6; i <= 6; ++i)
        entries[std::to_string(i)] = json::array({json::array({0, "-d - 2*l"})});
    TempDoc good(json{{"derivation", json{{"entries", entries}}}}, "confal_inner_der.json");
    RunConfig cfg;
    cfg.command = RunConfig::Command::CheckDerivation;
    cfg.builtin = "cw";
    cfg.window = 3;
    cfg.input_path = good.path.string();
    Report rep = run(cfg);
    CHECK(rep.all_pass());
    CHECK(rep.coverage.at("leibniz_pairs") == 49);

    json bad_entries = json::object();
    for (int i = -6; i <= 6; ++i)
        bad_entries[std::to_string(i)] = json::array({json::array({0, "l"})});
    TempDoc bad(json{{"derivation", json{{"entries", bad_entries}}}}, "confal_bad_der.json");
    cfg.input_path = bad.path.string();
    Report rep2 = run(cfg);
    CHECK_FALSE(rep2.all_pass());
}
