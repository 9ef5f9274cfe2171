#include "jensenlab/jensenlab.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

namespace {

using namespace jensenlab;
using namespace jensenlab::lab;

constexpr int kExitPass = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

struct Output {
    std::string format = "json";
    std::string path;
};

class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty()) return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw std::runtime_error("cannot open output file " + path);
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

ExperimentConfig read_config(const std::string& path, const std::string& theorem_override) {
    ExperimentConfig c = load_config(path);
    if (!theorem_override.empty()) {
        try {
            c.theorem = theorem_from_string(theorem_override);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
        c.validate();
    }
    return c;
}

int cmd_verify(const std::string& config_path, const std::string& theorem, const Output& out) {
    const ExperimentConfig c = read_config(config_path, theorem);
    const StabilityReport r = run_experiment(c);
    Sink sink(out.path);
    if (out.format == "csv")
        emit_csv(sink.stream(), r);
    else
        sink.stream() << emit_json(r);
    if (!r.pass) std::cerr << "violation: " << r.reason << "\n";
    return r.pass ? kExitPass : kExitViolation;
}

int cmd_axioms(const std::string& relation, int dim, int trials, std::uint64_t seed, const std::string& norm_kind,
               const Output& out) {
    NormedSpace space = NormedSpace::euclidean(dim);
    if (norm_kind == "sup") space = NormedSpace::sup(dim);
    else if (norm_kind.rfind("p", 0) == 0) space = NormedSpace::p_norm(dim, std::stod(norm_kind.substr(1)));
    else if (norm_kind != "euclidean") throw ConfigError("unknown norm '" + norm_kind + "'");

    OrthogonalityRelation rel;
    if (relation == "trivial") rel = OrthogonalityRelation::trivial();
    else if (relation == "inner") rel = OrthogonalityRelation::inner_product();
    else if (relation == "bj") rel = OrthogonalityRelation::birkhoff_james();
    else throw ConfigError("unknown relation '" + relation + "'");
    if (rel.kind == RelationKind::inner_product && !space.has_inner_product())
        throw ConfigError("the inner-product relation needs the euclidean norm");

    const AxiomReport rep = check_ratz_axioms(rel, space, trials, seed);
    Sink sink(out.path);
    if (out.format == "csv") {
        sink.stream() << "axiom,applicable,pass,checked\n";
        for (const auto* a : {&rep.o1, &rep.o2, &rep.o3, &rep.o4})
            sink.stream() << a->name << ',' << a->applicable << ',' << a->pass << ',' << a->checked << '\n';
    } else {
        nlohmann::ordered_json j;
        j["relation"] = relation;
        j["norm"] = norm_kind;
        j["dim"] = dim;
        j["trials"] = trials;
        j["seed"] = seed;
        j["axioms"] = to_json(rep);
        j["all_pass"] = rep.all_pass();
        sink.stream() << j.dump(2) << "\n";
    }
    return rep.all_pass() ? kExitPass : kExitViolation;
}

int cmd_search(const std::string& config_path, const SearchSettings& settings, const Output& out) {
    const ExperimentConfig c = read_config(config_path, "");
    const SearchResult res = adversarial_search(c, settings);
    Sink sink(out.path);
    if (out.format == "csv")
        emit_csv(sink.stream(), res.witness_report);
    else
        sink.stream() << to_json(res).dump(2) << "\n";
    return res.worst_ratio <= 1.0 + c.report_tol ? kExitPass : kExitViolation;
}

int cmd_profile(const std::string& config_path, const Output& out) {
    const ExperimentConfig c = read_config(config_path, "");
    if (!c.shells) throw ConfigError("profile needs a shells block in the config");
    const auto f = build_subjects(c).f;
    const ShellProfile p = asymptotic_profile(f, c.space, c.codomain, c.params, *c.shells);
    Sink sink(out.path);
    if (out.format == "csv")
        write_profile_csv(sink.stream(), p);
    else
        sink.stream() << lab::detail::profile_to_json(p, c.residual_tol).dump(2) << "\n";
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stability experiments for the generalized Jensen equation"};
    app.require_subcommand(1);
    Output out;
    app.add_option("--format", out.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", out.path, "Write the report to this file instead of stdout");

    std::string config_path, theorem;
    auto* verify = app.add_subcommand("verify", "Run one theorem's experiment");
    verify->add_option("--config", config_path, "Experiment config (JSON)")->required();
    verify->add_option("--theorem", theorem, "Override the config's theorem id");

    std::string relation = "inner", norm_kind = "euclidean";
    int dim = 2, trials = 1000;
    std::uint64_t seed = 0;
    auto* axioms = app.add_subcommand("axioms", "Sample the orthogonality axioms O1-O4");
    axioms->add_option("--relation", relation)->check(CLI::IsMember({"trivial", "inner", "bj"}));
    axioms->add_option("--dim", dim)->check(CLI::PositiveNumber);
    axioms->add_option("--trials", trials)->check(CLI::PositiveNumber);
    axioms->add_option("--seed", seed);
    axioms->add_option("--norm", norm_kind, "euclidean, sup, or p<value> such as p1.5");

    SearchSettings settings;
    auto* search = app.add_subcommand("search", "Adversarial search for the worst bound ratio");
    search->add_option("--config", config_path)->required();
    search->add_option("--iters", settings.iterations)->check(CLI::PositiveNumber);
    search->add_option("--restarts", settings.restarts)->check(CLI::PositiveNumber);
    search->add_option("--seed", settings.seed);

    auto* profile = app.add_subcommand("profile", "Shell-wise defect profile");
    profile->add_option("--config", config_path)->required();

    for (auto* sub : {verify, axioms, search, profile}) {
        sub->add_option("--format", out.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", out.path, "Write the report to this file instead of stdout");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfig;
    }

    try {
        if (*verify) return cmd_verify(config_path, theorem, out);
        if (*axioms) return cmd_axioms(relation, dim, trials, seed, norm_kind, out);
        if (*search) return cmd_search(config_path, settings, out);
        if (*profile) return cmd_profile(config_path, out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
