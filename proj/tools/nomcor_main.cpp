#include <charconv>
#include <chrono>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "nomcor/classical.hpp"
#include "nomcor/csv.hpp"
#include "nomcor/errors.hpp"
#include "nomcor/gamma_star.hpp"
#include "nomcor/inference.hpp"
#include "nomcor/simulation.hpp"
#include "nomcor/types.hpp"

#ifndef NOMCOR_VERSION
#define NOMCOR_VERSION "0.0.0"
#endif

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw nomcor::parse_error("cannot open '" + path + "'");
    std::uint64_t h = 14695981039346656037ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t seed_or_env(const CLI::Option* opt, std::uint64_t flag_value,
                          std::uint64_t fallback) {
    if (opt->count() > 0) return flag_value;
    const char* v = std::getenv("NOMCOR_SEED");
    if (!v || !*v) return fallback;
    std::uint64_t out = 0;
    auto [p, ec] = std::from_chars(v, v + std::strlen(v), out);
    if (ec != std::errc() || *p != '\0')
        throw nomcor::usage_error("NOMCOR_SEED must be a nonnegative integer");
    return out;
}

json limits_json(const nomcor::Limits& lim) {
    return {{"case1_max_k", lim.case1_max_k},
            {"case2_max_cat", lim.case2_max_cat},
            {"infer_case1_max_k", lim.infer_case1_max_k},
            {"infer_case2_max_cat", lim.infer_case2_max_cat}};
}

json mvn_json(const nomcor::MvnConfig& cfg) {
    return {{"target_error", cfg.target_error},
            {"max_points", cfg.max_points},
            {"randomizations", cfg.randomizations},
            {"first_points", cfg.first_points}};
}

json manifest_json(const std::string& command, const std::string& input,
                   const json& seed, const json& budgets, double seconds) {
    return {{"command", command},
            {"input_digest", fmt::format("{:016x}", file_digest(input))},
            {"seed", seed},
            {"version", NOMCOR_VERSION},
            {"budgets", budgets},
            {"seconds", seconds}};
}

json numbering_json(const nomcor::Numbering& nb,
                    const std::vector<std::string>& x_labels,
                    const std::vector<std::string>& y_labels) {
    json j;
    j["x_ranks"] = nb.x_ranks;
    std::vector<std::string> xo;
    for (int i : nomcor::Numbering::order_of(nb.x_ranks)) xo.push_back(x_labels[i]);
    j["x_order"] = xo;
    if (!nb.y_ranks.empty()) {
        j["y_ranks"] = nb.y_ranks;
        std::vector<std::string> yo;
        for (int i : nomcor::Numbering::order_of(nb.y_ranks)) yo.push_back(y_labels[i]);
        j["y_order"] = yo;
    }
    return j;
}

struct LoadedInput {
    bool is_table = false;
    nomcor::PairedSample sample;
    nomcor::ContingencyTable table;
};

// A sample file has exactly two columns (x, y); a table file has a row-label
// column plus at least two data columns. --table / --sample override.
LoadedInput load_input(const std::string& path, bool as_table, bool as_sample) {
    bool table = as_table;
    if (!as_table && !as_sample) {
        std::ifstream probe(path);
        if (!probe) throw nomcor::parse_error("cannot open '" + path + "'");
        std::string first;
        std::getline(probe, first);
        int fields = 1;
        bool quoted = false;
        for (char ch : first) {
            if (ch == '"') quoted = !quoted;
            else if (ch == ',' && !quoted) ++fields;
        }
        table = fields >= 3;
    }
    LoadedInput in;
    in.is_table = table;
    if (table) in.table = nomcor::table_from_csv(path);
    else in.sample = nomcor::sample_from_csv(path);
    return in;
}

json classical_json(const nomcor::ClassicalReport& r) {
    return {{"msc", r.msc},
            {"cramers_v", r.cramers_v},
            {"tschuprow_t", r.tschuprow_t},
            {"pearson_c", r.pearson_c},
            {"sakoda_s", r.sakoda_s},
            {"lambda_x", r.lambda_x},
            {"lambda_y", r.lambda_y},
            {"lambda_sym", r.lambda_sym},
            {"gk_tau_x", r.gk_tau_x},
            {"gk_tau_y", r.gk_tau_y},
            {"gk_tau_sym", r.gk_tau_sym},
            {"uncertainty", r.uncertainty}};
}

int cmd_measure(const std::string& input, bool as_table, bool as_sample,
                bool all_classical) {
    auto t0 = Clock::now();
    LoadedInput in = load_input(input, as_table, as_sample);

    json out;
    out["command"] = "measure";
    out["input"] = input;
    nomcor::GammaStarResult gs;
    json gamma;
    if (in.is_table) {
        out["format"] = in.table.mode == nomcor::TableMode::counts ? "counts" : "probabilities";
        out["k"] = in.table.k();
        out["l"] = in.table.l();
        gs = nomcor::population_gamma_star(nomcor::normalize(in.table));
        gamma["value"] = gs.value;
        gamma["argmax"] = numbering_json(gs.argmax, in.table.row_labels, in.table.col_labels);
    } else {
        const auto& s = in.sample;
        out["format"] = s.kind == nomcor::SampleKind::nominal_real ? "nominal-real" : "nominal-nominal";
        out["n"] = s.size();
        out["k"] = s.k();
        if (s.kind == nomcor::SampleKind::nominal_nominal) out["l"] = s.l();
        gs = nomcor::gamma_star_estimate(s);
        gamma["value"] = gs.value;
        gamma["argmax"] = numbering_json(gs.argmax, s.x_labels, s.y_labels);
        gamma["concordant_at_max"] = gs.concordant_at_max;
        gamma["untied_pairs"] = gs.untied_pairs;
    }
    gamma["argmax_count"] = gs.argmax_count;
    out["gamma_star"] = gamma;

    if (all_classical) {
        nomcor::ContingencyTable ct;
        if (in.is_table) {
            ct = in.table;
        } else if (in.sample.kind == nomcor::SampleKind::nominal_nominal) {
            ct = nomcor::table_from_sample(in.sample);
        } else {
            throw nomcor::usage_error(
                "--all-classical needs a contingency table or a nominal-nominal sample");
        }
        out["classical"] = classical_json(nomcor::classical_report(ct));
    }

    out["manifest"] = manifest_json("measure", input, 0, limits_json({}), seconds_since(t0));
    std::cout << out.dump(2) << "\n";
    std::cerr << fmt::format("gamma_star {:.6g}  ({} argmax numbering{})\n", gs.value,
                             gs.argmax_count, gs.argmax_count == 1 ? "" : "s");
    if (out.contains("classical")) {
        const auto& c = out["classical"];
        std::cerr << fmt::format(
            "cramers_v {:.6g}  tschuprow_t {:.6g}  pearson_c {:.6g}  sakoda_s {:.6g}\n",
            c["cramers_v"].get<double>(), c["tschuprow_t"].get<double>(),
            c["pearson_c"].get<double>(), c["sakoda_s"].get<double>());
        std::cerr << fmt::format(
            "lambda_sym {:.6g}  gk_tau_sym {:.6g}  uncertainty {:.6g}\n",
            c["lambda_sym"].get<double>(), c["gk_tau_sym"].get<double>(),
            c["uncertainty"].get<double>());
    }
    return 0;
}

int cmd_infer(const std::string& input, double level, bool run_test, std::uint64_t seed) {
    auto t0 = Clock::now();
    LoadedInput in = load_input(input, false, false);
    nomcor::PairedSample s = in.is_table ? nomcor::sample_from_table(in.table) : in.sample;

    auto ci = nomcor::confidence_interval(s, level);
    json out;
    out["command"] = "infer";
    out["input"] = input;
    out["format"] = s.kind == nomcor::SampleKind::nominal_real ? "nominal-real" : "nominal-nominal";
    out["n"] = s.size();
    out["gamma_star"] = ci.gamma_star;
    out["std_error"] = ci.std_error;
    out["ci"] = {{"level", ci.level}, {"lower", ci.lower}, {"upper", ci.upper}};
    out["argmax"] = numbering_json(ci.argmax, s.x_labels, s.y_labels);
    out["argmax_count"] = ci.argmax_count;

    nomcor::MvnConfig mvn;
    mvn.seed = seed;
    if (run_test) {
        auto test = nomcor::independence_test(s, mvn);
        out["test"] = {{"statistic", test.statistic},
                       {"p_value", test.p_value},
                       {"dimension", test.dimension},
                       {"mvn_error", test.mvn_error},
                       {"mvn_points", test.mvn_points}};
    }

    json budgets = limits_json({});
    if (run_test) budgets["mvn"] = mvn_json(mvn);
    out["manifest"] = manifest_json("infer", input, seed, budgets, seconds_since(t0));
    std::cout << out.dump(2) << "\n";
    std::cerr << fmt::format("gamma_star {:.6g}  se {:.6g}  ci{:g} [{:.6g}, {:.6g}]\n",
                             ci.gamma_star, ci.std_error, 100 * level, ci.lower, ci.upper);
    if (run_test) {
        const auto& t = out["test"];
        std::cerr << fmt::format("statistic {:.6g}  p_value {:.6g}  (dimension {})\n",
                                 t["statistic"].get<double>(), t["p_value"].get<double>(),
                                 t["dimension"].get<int>());
    }
    return 0;
}

std::string safe_name(const std::string& s) {
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out.empty() ? "study" : out;
}

const char* kind_str(nomcor::StudyKind k) {
    switch (k) {
    case nomcor::StudyKind::coverage: return "coverage";
    case nomcor::StudyKind::bias: return "bias";
    case nomcor::StudyKind::size: return "size";
    default: return "power";
    }
}

json study_config_json(const nomcor::StudyConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["kind"] = kind_str(cfg.kind);
    std::vector<std::string> fams;
    for (auto f : cfg.families) fams.push_back(nomcor::family_name(f));
    j["families"] = fams;
    j["n"] = cfg.sample_sizes;
    if (cfg.target_gamma_star) j["target_gamma_star"] = *cfg.target_gamma_star;
    else j["alpha"] = cfg.alphas;
    j["replications"] = cfg.replications;
    j["ci_level"] = cfg.ci_level;
    j["test_level"] = cfg.test_level;
    j["baselines"] = cfg.baselines;
    j["seed"] = cfg.seed;
    return j;
}

json study_row_json(const nomcor::StudyRow& r) {
    return {{"family", r.family},
            {"n", r.n},
            {"alpha", r.alpha},
            {"true_gamma_star", r.true_gamma_star},
            {"mean_bias", r.mean_bias},
            {"coverage", r.coverage},
            {"rejection_rate", r.rejection_rate},
            {"baseline_rejection_rate", r.baseline_rejection_rate},
            {"ks_statistic", r.ks_statistic},
            {"replications", r.replications},
            {"seed", r.seed},
            {"p_hist", r.p_hist}};
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 const CLI::Option* seed_opt, std::uint64_t seed_flag, const CLI::Option* threads_opt,
                 int threads_flag) {
    auto t0 = Clock::now();
    auto configs = nomcor::load_study_configs(config_path);
    bool seed_given = seed_opt->count() > 0 || std::getenv("NOMCOR_SEED");
    std::filesystem::create_directories(out_dir);

    json studies = json::array();
    json seeds = json::array();
    for (auto& cfg : configs) {
        if (seed_given) cfg.seed = seed_or_env(seed_opt, seed_flag, cfg.seed);
        if (threads_opt->count() > 0) cfg.threads = threads_flag;
        seeds.push_back(cfg.seed);

        auto ts = Clock::now();
        auto result = nomcor::run_study(cfg);
        std::string base = safe_name(cfg.name);
        auto tsv_path = std::filesystem::path(out_dir) / (base + ".tsv");
        auto json_path = std::filesystem::path(out_dir) / (base + ".json");

        std::ofstream tsv(tsv_path);
        if (!tsv) throw nomcor::usage_error("cannot write " + tsv_path.string());
        tsv << nomcor::study_tsv(result);

        json side;
        side["config"] = study_config_json(result.config);
        side["rows"] = json::array();
        for (const auto& row : result.rows) side["rows"].push_back(study_row_json(row));
        std::ofstream js(json_path);
        if (!js) throw nomcor::usage_error("cannot write " + json_path.string());
        js << side.dump(2) << "\n";

        double dt = seconds_since(ts);
        studies.push_back({{"name", cfg.name},
                           {"tsv", tsv_path.string()},
                           {"json", json_path.string()},
                           {"rows", result.rows.size()},
                           {"seconds", dt}});
        std::cerr << fmt::format("study {}: {} rows, {:.6g}s\n", cfg.name, result.rows.size(), dt);
    }

    json manifest = manifest_json("simulate", config_path, seeds, limits_json({}),
                                  seconds_since(t0));
    auto man_path = std::filesystem::path(out_dir) / "manifest.json";
    std::ofstream man(man_path);
    if (!man) throw nomcor::usage_error("cannot write " + man_path.string());
    man << manifest.dump(2) << "\n";

    json out;
    out["command"] = "simulate";
    out["studies"] = studies;
    out["manifest"] = manifest;
    std::cout << out.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gamma* dependence coefficient for nominal variables"};
    app.set_version_flag("--version", NOMCOR_VERSION);
    app.require_subcommand(1);

    auto* measure = app.add_subcommand(
        "measure", "gamma* (and optionally classical measures) of a CSV table or sample");
    std::string m_input;
    bool m_table = false, m_sample = false, m_classical = false;
    measure->add_option("input", m_input, "CSV file")->required();
    auto* m_table_opt = measure->add_flag("--table", m_table, "input is a contingency table");
    measure->add_flag("--sample", m_sample, "input is a two-column sample")
        ->excludes(m_table_opt);
    measure->add_flag("--all-classical", m_classical, "also report the classical measures");

    auto* infer = app.add_subcommand(
        "infer", "confidence interval (and optionally independence test) from a sample");
    std::string i_input;
    double i_level = 0.9;
    bool i_test = false;
    std::uint64_t i_seed = 1;
    infer->add_option("input", i_input, "CSV file")->required();
    infer->add_option("--level", i_level, "confidence level (default 0.9)");
    infer->add_flag("--test", i_test, "run the independence test");
    auto* i_seed_opt = infer->add_option("--seed", i_seed, "seed of the MVN integration");

    auto* simulate = app.add_subcommand("simulate", "run study configs and write TSV/JSON");
    std::string s_config, s_out = ".";
    std::uint64_t s_seed = 1;
    int s_threads = 0;
    simulate->add_option("config", s_config, "study config file")->required();
    simulate->add_option("--out", s_out, "output directory (default .)");
    auto* s_seed_opt = simulate->add_option("--seed", s_seed, "override every study seed");
    auto* s_threads_opt = simulate->add_option("--threads", s_threads, "worker thread cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(measure))
            return cmd_measure(m_input, m_table, m_sample, m_classical);
        if (app.got_subcommand(infer))
            return cmd_infer(i_input, i_level, i_test,
                             seed_or_env(i_seed_opt, i_seed, 1));
        return cmd_simulate(s_config, s_out, s_seed_opt, s_seed, s_threads_opt, s_threads);
    } catch (const nomcor::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
