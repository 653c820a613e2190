#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "confal/document.hpp"
#include "confal/formal_dist.hpp"

namespace confal {

// malformed invocation: maps to exit status 2
struct UsageError : Error {
    using Error::Error;
};

struct RunConfig {
    enum class Command {
        CheckAlgebra,
        CheckModule,
        ClassifyRank1,
        ClassifyGraded,
        CheckDerivation,
        Fourier,
        MutateTest
    };
    enum class Format { Text, Json };

    Command command = Command::CheckAlgebra;
    std::string builtin;    // "cw" selects the loop Virasoro algebra
    std::string input_path; // document path for user-supplied objects
    int window = 4;         // checks quantify over [-window, window]
    int deg_bound = 6;
    int alpha_band = 8;
    int index_i = 0;
    int index_j = 0;
    Format format = Format::Text;
    std::optional<uint64_t> seed;
};

struct Report {
    std::string command;
    std::vector<CheckReport> checks;
    std::map<std::string, long long> coverage;
    std::vector<std::string> payload; // command-specific result lines
    json machine_payload = json::object();
    uint64_t seed_used = 0;
    long long timing_ms = 0;
    int window = 0;
    int deg_bound = 0;

    bool all_pass() const { return confal::all_pass(checks); }
    int exit_status() const { return all_pass() ? 0 : 1; }

    std::string to_text() const
    {
        std::string out = "command: " + command + "\n";
        for (const auto& c : checks) {
            out += std::string(c.pass ? "[PASS] " : "[FAIL] ") + c.id;
            if (!c.message.empty())
                out += "  " + c.message;
            out += "\n";
            for (const auto& w : c.witnesses)
                out += "       witness: " + w + "\n";
        }
        for (const auto& line : payload)
            out += line + "\n";
        for (const auto& [k, v] : coverage)
            out += "coverage " + k + ": " + std::to_string(v) + "\n";
        long long failed = 0;
        for (const auto& c : checks)
            if (!c.pass)
                ++failed;
        out += "checks: " + std::to_string(checks.size()) + ", failed: " + std::to_string(failed) +
               ", time: " + std::to_string(timing_ms) + " ms\n";
        return out;
    }

    json to_json() const
    {
        json jchecks = json::array();
        for (const auto& c : checks)
            jchecks.push_back(json{{"id", c.id},
                                   {"pass", c.pass},
                                   {"message", c.message},
                                   {"witnesses", c.witnesses}});
        long long failed = 0;
        for (const auto& c : checks)
            if (!c.pass)
                ++failed;
        json jcov = json::object();
        for (const auto& [k, v] : coverage)
            jcov[k] = v;
        return json{{"schema_version", 1},
                    {"command", command},
                    {"window", window},
                    {"deg_bound", deg_bound},
                    {"seed", seed_used},
                    {"checks", jchecks},
                    {"coverage", jcov},
                    {"payload", machine_payload},
                    {"summary", json{{"total", checks.size()}, {"failed", failed}}},
                    {"timing_ms", timing_ms}};
    }
};

namespace cli_detail {

inline GradedConformalAlgebra resolve_algebra(const RunConfig& cfg,
                                              const LoadedDocument* doc = nullptr)
{
    if (!cfg.builtin.empty()) {
        if (cfg.builtin != "cw")
            throw UsageError("unknown builtin '" + cfg.builtin + "' (available: cw)");
        return loop_virasoro();
    }
    if (doc && doc->algebra)
        return *doc->algebra;
    return loop_virasoro();
}

inline void run_check_algebra(const RunConfig& cfg, Report& rep)
{
    std::optional<LoadedDocument> doc;
    if (cfg.builtin.empty() && !cfg.input_path.empty()) {
        doc = load_document(cfg.input_path);
        if (!doc->algebra)
            throw UsageError(cfg.input_path + " has no algebra section");
    }
    GradedConformalAlgebra alg = resolve_algebra(cfg, doc ? &*doc : nullptr);
    IndexWindow w = IndexWindow::symmetric(cfg.window);
    long long pairs = 0, triples = 0;
    for (int i = w.lo; i <= w.hi; ++i)
        for (int j = w.lo; j <= w.hi; ++j) {
            rep.checks.push_back(check_skew_symmetry(alg, i, j));
            ++pairs;
        }
    for (int i = w.lo; i <= w.hi; ++i)
        for (int j = w.lo; j <= w.hi; ++j)
            for (int k = w.lo; k <= w.hi; ++k) {
                rep.checks.push_back(check_jacobi(alg, i, j, k));
                ++triples;
            }
    rep.checks.push_back(check_graded(alg, w));
    rep.coverage["skew_pairs"] = pairs;
    rep.coverage["jacobi_triples"] = triples;
}

inline void run_check_module(const RunConfig& cfg, Report& rep, Rng& rng)
{
    if (cfg.input_path.empty())
        throw UsageError("check-module requires --input with a module document");
    LoadedDocument doc = load_document(cfg.input_path);
    if (!doc.module)
        throw UsageError(cfg.input_path + " has no module section");
    GradedConformalAlgebra alg = resolve_algebra(cfg, &doc);
    const GradedConformalModule& mod = *doc.module;
    long long triples = 0, skipped = 0;
    if (mod.is_graded()) {
        for (const auto& [i, j, k] : admissible_triples(mod.window())) {
            rep.checks.push_back(check_module_axiom(alg, mod, i, j, k));
            ++triples;
        }
    } else {
        IndexWindow span = IndexWindow::symmetric(cfg.window);
        for (int i = span.lo; i <= span.hi; ++i)
            for (int j = span.lo; j <= span.hi; ++j) {
                try {
                    rep.checks.push_back(check_module_axiom(alg, mod, i, j, 0));
                    ++triples;
                } catch (const WindowExceeded&) {
                    ++skipped; // table too small for this pair; reported, not failed
                }
            }
    }
    rep.coverage["axiom_triples"] = triples;
    if (skipped)
        rep.coverage["axiom_triples_skipped"] = skipped;
    try {
        ZeroPropagation zp = propagate_zero(mod, mod.window(), IndexWindow::symmetric(cfg.window));
        rep.checks.push_back(zp.report);
    } catch (const DichotomyViolated& e) {
        rep.checks.push_back(CheckReport::fail("zero-propagation", e.what()));
    }
    rep.checks.push_back(check_sesquilinearity_action(mod, rng, 50));
}

inline void run_classify_rank1(const RunConfig& cfg, Report& rep)
{
    try {
        ClassificationOutcome out = solve_rank_one(cfg.deg_bound);
        rep.checks.push_back(CheckReport::ok("classify-rank1", out.notes));
        for (const auto& d : out.descriptors)
            rep.payload.push_back("descriptor: " + d.to_string());
        for (const auto& c : out.certificates)
            rep.payload.push_back("certificate: " + c);
        rep.machine_payload = outcome_to_json(out);
    } catch (const PipelineStepFailed& e) {
        rep.checks.push_back(CheckReport::fail("classify-rank1", e.what()));
    }
}

inline void run_classify_graded(const RunConfig& cfg, Report& rep)
{
    if (cfg.input_path.empty())
        throw UsageError("classify-graded requires --input with a module document");
    LoadedDocument doc = load_document(cfg.input_path);
    if (!doc.module)
        throw UsageError(cfg.input_path + " has no module section");
    if (!doc.module->is_graded())
        throw UsageError("classify-graded needs a graded module table");
    try {
        ClassificationOutcome out =
            classify_graded(*doc.module, doc.module->window(), cfg.deg_bound);
        rep.checks.push_back(CheckReport::ok("classify-graded", out.notes));
        for (const auto& d : out.descriptors)
            rep.payload.push_back("descriptor: " + d.to_string());
        for (const auto& c : out.certificates)
            rep.payload.push_back("certificate: " + c);
        rep.machine_payload = outcome_to_json(out);
    } catch (const Error& e) {
        rep.checks.push_back(CheckReport::fail("classify-graded", e.what()));
    }
}

inline void run_check_derivation(const RunConfig& cfg, Report& rep, uint64_t seed)
{
    if (cfg.input_path.empty()) {
        // randomized Der = Inn campaign on the builtin algebra
        GradedConformalAlgebra alg = resolve_algebra(cfg);
        rep.checks.push_back(verify_der_equals_inn(alg, IndexWindow::symmetric(cfg.window),
                                                   cfg.deg_bound, 100, seed));
        rep.coverage["trials"] = 100;
        return;
    }
    LoadedDocument doc = load_document(cfg.input_path);
    if (!doc.derivation)
        throw UsageError(cfg.input_path + " has no derivation section");
    GradedConformalAlgebra alg = resolve_algebra(cfg, &doc);
    IndexWindow w = IndexWindow::symmetric(cfg.window);
    long long pairs = 0;
    for (int i = w.lo; i <= w.hi; ++i)
        for (int j = w.lo; j <= w.hi; ++j) {
            rep.checks.push_back(check_leibniz(alg, *doc.derivation, i, j));
            ++pairs;
        }
    rep.coverage["leibniz_pairs"] = pairs;
}

inline void run_fourier(const RunConfig& cfg, Report& rep)
{
    if (cfg.alpha_band < 2)
        throw UsageError("--alpha-band must be at least 2");
    IndexWindow band = IndexWindow::symmetric(cfg.alpha_band);
    Distribution2 br = bracket_distributions(make_L_distribution(cfg.index_i, band),
                                             make_L_distribution(cfg.index_j, band));
    try {
        bool order2 = is_local(br, 2);
        bool order1 = is_local(br, 1);
        rep.checks.push_back(order2 && !order1
                                 ? CheckReport::ok("locality", "locality order exactly 2")
                                 : CheckReport::fail("locality", "unexpected locality order"));
        LambdaValue lv = fourier_as_lambda_value(fourier_lambda(br, 3));
        rep.checks.push_back(CheckReport::ok("fourier", "transform recognized"));
        rep.payload.push_back(lv.to_string());
        rep.machine_payload = json{{"lambda_bracket", lv.to_string()}};
        for (const auto& [k, p] : lv.terms)
            rep.machine_payload["terms"][std::to_string(k)] = p.to_string();
    } catch (const Error& e) {
        rep.checks.push_back(CheckReport::fail("fourier", e.what()));
    }
}

inline void run_mutate_test(const RunConfig& cfg, Report& rep)
{
    GradedConformalAlgebra cw = loop_virasoro();
    MultiPoly d = MultiPoly::variable(vars::partial);
    MultiPoly l = MultiPoly::variable(vars::lambda);
    MultiPoly base = -d - 2 * l;
    IndexWindow w = IndexWindow::symmetric(std::min(cfg.window, 2));

    auto algebra_caught = [&](const GradedConformalAlgebra& alg) {
        for (int i = w.lo; i <= w.hi; ++i)
            for (int j = w.lo; j <= w.hi; ++j) {
                if (!check_skew_symmetry(alg, i, j).pass)
                    return true;
                for (int k = w.lo; k <= w.hi; ++k)
                    if (!check_jacobi(alg, i, j, k).pass)
                        return true;
            }
        return false;
    };

    // nine single-monomial mutations of degree <= 1: eps * mono
    struct Mutation {
        std::string name;
        MultiPoly poly;
    };
    std::vector<Mutation> mutations;
    std::vector<std::pair<std::string, MultiPoly>> monos{{"1", MultiPoly(1)}, {"d", d}, {"l", l}};
    for (long long eps : {1LL, -1LL, 2LL})
        for (const auto& [mname, mono] : monos)
            mutations.push_back({"+(" + std::to_string(eps) + ")*" + mname,
                                 base + Rational(eps) * mono});
    for (const auto& mut : mutations) {
        MultiPoly P = mut.poly;
        GradedConformalAlgebra alg(
            "mutant", [P](int i, int j) { return std::vector<StructureTerm>{{i + j, P}}; }, {0});
        bool caught = algebra_caught(alg);
        rep.checks.push_back(caught
                                 ? CheckReport::ok("mutant" + mut.name, "detected")
                                 : CheckReport::fail("mutant" + mut.name, "undetected mutant"));
        rep.checks.back().witnesses = {P.to_string()};
    }

    // module-table mutations
    auto module_caught = [&](const GradedConformalModule& mod) {
        if (mod.is_graded()) {
            for (const auto& [i, j, k] : admissible_triples(mod.window()))
                if (!check_module_axiom(cw, mod, i, j, k).pass)
                    return true;
        } else {
            for (int i = w.lo; i <= w.hi; ++i)
                for (int j = w.lo; j <= w.hi; ++j)
                    if (!check_module_axiom(cw, mod, i, j, 0).pass)
                        return true;
        }
        return false;
    };
    {
        auto vab = make_V_ab(Rational(1), Rational(0), IndexWindow::symmetric(2));
        auto mutant = GradedConformalModule::graded(vab.window(), [vab](int i, int j) {
            MultiPoly f = vab.coeff(i, j);
            return (i == 0 && j == 0) ? f + MultiPoly(1) : f;
        });
        rep.checks.push_back(module_caught(mutant)
                                 ? CheckReport::ok("mutant-module-vab", "detected")
                                 : CheckReport::fail("mutant-module-vab", "undetected mutant"));
    }
    {
        auto vabc = make_V_abc(Rational(1), Rational(2), Rational(3));
        auto mutant = GradedConformalModule::rank_one([vabc](int i, int j) {
            MultiPoly f = vabc.coeff(i, j);
            return i == 0 ? f + MultiPoly::variable(vars::lambda) : f;
        });
        rep.checks.push_back(module_caught(mutant)
                                 ? CheckReport::ok("mutant-module-vabc", "detected")
                                 : CheckReport::fail("mutant-module-vabc", "undetected mutant"));
    }

    // no-op control: the unmutated algebra must sail through
    GradedConformalAlgebra noop(
        "cw", [base](int i, int j) { return std::vector<StructureTerm>{{i + j, base}}; }, {0});
    rep.checks.push_back(!algebra_caught(noop)
                             ? CheckReport::ok("noop-control", "identity mutation passes")
                             : CheckReport::fail("noop-control", "false positive on identity"));
    rep.coverage["mutations"] = static_cast<long long>(mutations.size()) + 2;
}

} // namespace cli_detail

inline Report run(const RunConfig& cfg)
{
    if (cfg.window < 0 || cfg.deg_bound < 0)
        throw UsageError("window and deg-bound must be nonnegative");
    bool randomized = (cfg.command == RunConfig::Command::CheckDerivation &&
                       cfg.input_path.empty()) ||
                      cfg.command == RunConfig::Command::CheckModule;
    if (cfg.format == RunConfig::Format::Json && randomized && !cfg.seed)
        throw UsageError("randomized campaigns require --seed in json mode");

    Report rep;
    rep.window = cfg.window;
    rep.deg_bound = cfg.deg_bound;
    rep.seed_used = cfg.seed.value_or(0x5eed);
    Rng rng(rep.seed_used);

    auto start = std::chrono::steady_clock::now();
    switch (cfg.command) {
    case RunConfig::Command::CheckAlgebra:
        rep.command = "check-algebra";
        cli_detail::run_check_algebra(cfg, rep);
        break;
    case RunConfig::Command::CheckModule:
        rep.command = "check-module";
        cli_detail::run_check_module(cfg, rep, rng);
        break;
    case RunConfig::Command::ClassifyRank1:
        rep.command = "classify-rank1";
        cli_detail::run_classify_rank1(cfg, rep);
        break;
    case RunConfig::Command::ClassifyGraded:
        rep.command = "classify-graded";
        cli_detail::run_classify_graded(cfg, rep);
        break;
    case RunConfig::Command::CheckDerivation:
        rep.command = "check-derivation";
        cli_detail::run_check_derivation(cfg, rep, rep.seed_used);
        break;
    case RunConfig::Command::Fourier:
        rep.command = "fourier";
        cli_detail::run_fourier(cfg, rep);
        break;
    case RunConfig::Command::MutateTest:
        rep.command = "mutate-test";
        cli_detail::run_mutate_test(cfg, rep);
        break;
    }
    rep.timing_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    return rep;
}

} // namespace confal
