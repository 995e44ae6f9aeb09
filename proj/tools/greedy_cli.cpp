#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "greedy/bilinear.hpp"
#include "greedy/harness.hpp"
#include "greedy/io.hpp"
#include "greedy/oracle.hpp"

using namespace greedy;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw std::invalid_argument("unknown key `" + it.key() + "` in " + where);
}

Schedule parse_schedule(const json& j, const std::string& where) {
    reject_unknown(j, {"kind", "value", "values", "tail", "name", "scale", "exponent"}, where);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return Schedule::constant(j.at("value").get<double>());
    if (kind == "sequence")
        return Schedule::sequence(j.at("values").get<std::vector<double>>(),
                                  j.value("tail", 0.0));
    if (kind == "formula") {
        std::string name = j.at("name").get<std::string>();
        if (name == "2/(k+2)") return Schedule::relaxation_k2();
        if (name == "power")
            return Schedule::power(j.value("scale", 1.0), j.at("exponent").get<double>());
        if (name == "log") return Schedule::log_decay(j.value("scale", 1.0));
        throw std::invalid_argument("unknown formula `" + name + "` in " + where);
    }
    throw std::invalid_argument("unknown schedule kind `" + kind + "` in " + where);
}

struct ConfigExperiment {
    Experiment exp;
    std::string kind; // rate_sweep | convergence_probe | lebesgue | recovery | noise_approx
};

std::vector<ConfigExperiment> parse_config(const json& root, std::uint64_t seed_override,
                                           bool has_seed_override) {
    reject_unknown(root, {"seed", "experiments"}, "config root");
    std::uint64_t seed = root.value("seed", std::uint64_t(1));
    if (has_seed_override) seed = seed_override;
    std::vector<ConfigExperiment> out;
    for (const json& je : root.at("experiments")) {
        reject_unknown(je,
                       {"id", "kind", "algorithms", "space", "dictionary", "data", "schedules",
                        "m_max", "replications", "bounds", "b", "threshold_delta"},
                       "experiment");
        ConfigExperiment ce;
        ce.kind = je.value("kind", std::string("rate_sweep"));
        Experiment& e = ce.exp;
        e.id = je.at("id").get<std::string>();
        e.seed = seed;
        if (je.contains("algorithms")) {
            e.algorithms.clear();
            for (const auto& a : je.at("algorithms"))
                e.algorithms.push_back(algorithm_from_name(a.get<std::string>()));
        }
        if (je.contains("space")) {
            const json& js = je.at("space");
            reject_unknown(js, {"dim", "p"}, "space");
            e.dim = js.at("dim").get<std::size_t>();
            e.p = js.at("p").get<double>();
            if (!(e.p > 1.0) || !std::isfinite(e.p))
                throw std::invalid_argument("space.p must satisfy 1 < p < infinity");
        }
        if (je.contains("dictionary")) {
            const json& jd = je.at("dictionary");
            reject_unknown(jd, {"kind", "count", "frequencies", "levels", "mu", "path"},
                           "dictionary");
            e.dictionary.kind = jd.value("kind", e.dictionary.kind);
            e.dictionary.count = jd.value("count", e.dictionary.count);
            e.dictionary.frequencies = jd.value("frequencies", e.dictionary.frequencies);
            e.dictionary.levels = jd.value("levels", e.dictionary.levels);
            e.dictionary.mu = jd.value("mu", e.dictionary.mu);
            e.dictionary.path = jd.value("path", e.dictionary.path);
        }
        if (je.contains("data")) {
            const json& jd = je.at("data");
            reject_unknown(jd, {"kind", "sparsity", "scale", "noise_eps", "coeff_lo", "coeff_hi"},
                           "data");
            e.data.kind = jd.value("kind", e.data.kind);
            e.data.sparsity = jd.value("sparsity", e.data.sparsity);
            e.data.scale = jd.value("scale", e.data.scale);
            e.data.noise_eps = jd.value("noise_eps", e.data.noise_eps);
            e.data.coeff_lo = jd.value("coeff_lo", e.data.coeff_lo);
            e.data.coeff_hi = jd.value("coeff_hi", e.data.coeff_hi);
        }
        if (je.contains("schedules")) {
            const json& js = je.at("schedules");
            reject_unknown(js, {"weakness", "relaxation", "coefficients", "incremental"},
                           "schedules");
            if (js.contains("weakness")) {
                e.schedules.weakness = parse_schedule(js.at("weakness"), "schedules.weakness");
                double t1 = e.schedules.weakness.value(1);
                if (!(t1 > 0.0) || t1 > 1.0)
                    throw std::invalid_argument("schedules.weakness must lie in (0,1]");
            }
            if (js.contains("relaxation"))
                e.schedules.relaxation =
                    parse_schedule(js.at("relaxation"), "schedules.relaxation");
            if (js.contains("coefficients"))
                e.schedules.coefficients =
                    parse_schedule(js.at("coefficients"), "schedules.coefficients");
            if (js.contains("incremental"))
                e.schedules.incremental =
                    parse_schedule(js.at("incremental"), "schedules.incremental");
        }
        e.m_max = je.value("m_max", e.m_max);
        e.replications = je.value("replications", e.replications);
        if (je.contains("bounds"))
            e.bounds = je.at("bounds").get<std::vector<std::string>>();
        e.b = je.value("b", e.b);
        e.threshold_delta = je.value("threshold_delta", e.threshold_delta);
        out.push_back(std::move(ce));
    }
    return out;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::uint64_t seed_override, bool has_seed_override) {
    std::ifstream is(config_path);
    if (!is) {
        std::cerr << "cannot open config: " << config_path << "\n";
        return 1;
    }
    json root = json::parse(is);
    auto experiments = parse_config(root, seed_override, has_seed_override);
    fs::create_directories(out_dir);
    bool hard_violation = false;
    for (const ConfigExperiment& ce : experiments) {
        Report rep;
        if (ce.kind == "rate_sweep") {
            std::vector<std::string> alg_names;
            std::vector<std::size_t> written_for_rep;
            TraceSink sink = [&](const Trace& tr, std::size_t r) {
                std::string path = out_dir + "/" + ce.exp.id + "_" +
                                   algorithm_name(tr.algorithm) + "_rep" + std::to_string(r) +
                                   "_trace.csv";
                write_trace_csv_file(path, tr);
            };
            rep = rate_sweep(ce.exp, sink);
        } else if (ce.kind == "convergence_probe") {
            rep = convergence_probe(ce.exp);
        } else if (ce.kind == "lebesgue") {
            rep = lebesgue_experiment(ce.exp);
        } else if (ce.kind == "recovery") {
            rep = recovery_table(ce.exp);
        } else if (ce.kind == "noise_approx") {
            rep = noise_and_approx_study(ce.exp);
        } else {
            throw std::invalid_argument("unknown experiment kind `" + ce.kind + "`");
        }
        std::ofstream ros(out_dir + "/" + ce.exp.id + "_report.json");
        ros << rep.to_json() << "\n";
        std::cout << ce.exp.id << ": " << (rep.pass ? "pass" : "FAIL") << "\n";
        if (!rep.pass) hard_violation = true;
    }
    return hard_violation ? 2 : 0;
}

int cmd_oracle(const std::string& dict_path, const std::string& signal_path, std::size_t m,
               const std::string& format) {
    Dictionary dict = read_dictionary_file(dict_path);
    Element f = read_element_file(signal_path);
    auto res = best_m_term(dict.space(), dict, f, m);
    if (format == "json") {
        json j;
        j["sigma_m"] = res.value;
        j["m"] = m;
        j["certificate"] = res.certificate;
        j["exact"] = res.exact;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "m,sigma_m,exact,certificate\n"
                  << m << ',' << format_double(res.value) << ',' << (res.exact ? 1 : 0) << ",\""
                  << res.certificate << "\"\n";
    }
    return 0;
}

int cmd_lemmas(const std::string& name, std::size_t horizon, bool adversarial,
               std::uint64_t seed, const std::string& format, const json& params) {
    RecursionSpec spec;
    spec.lemma = lemma_from_name(name);
    spec.horizon = horizon;
    reject_unknown(params,
                   {"c1", "c2", "a_cap", "alpha", "beta", "r", "q", "v", "b_coef", "delta", "w",
                    "c_noise", "phi_power", "a0"},
                   "lemma params");
    spec.c1 = params.value("c1", spec.c1);
    spec.c2 = params.value("c2", spec.c2);
    spec.a_cap = params.value("a_cap", spec.a_cap);
    spec.alpha = params.value("alpha", spec.alpha);
    spec.beta = params.value("beta", spec.beta);
    spec.r = params.value("r", spec.r);
    spec.q = params.value("q", spec.q);
    spec.v = params.value("v", spec.v);
    spec.b_coef = params.value("b_coef", spec.b_coef);
    spec.delta = params.value("delta", spec.delta);
    spec.w = params.value("w", spec.w);
    spec.c_noise = params.value("c_noise", spec.c_noise);
    spec.phi_power = params.value("phi_power", spec.phi_power);
    spec.a0 = params.value("a0", spec.a0);
    auto rep = simulate_recursion(spec, adversarial, seed);
    if (format == "json") {
        json j;
        j["lemma"] = name;
        j["max_ratio"] = rep.max_ratio;
        j["first_violation"] = rep.first_violation;
        j["bound_constant"] = rep.bound_constant;
        j["final_value"] = rep.final_value;
        j["first_below_threshold"] = rep.first_below_threshold;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "lemma,max_ratio,first_violation,bound_constant,final_value\n"
                  << name << ',' << format_double(rep.max_ratio) << ',' << rep.first_violation
                  << ',' << format_double(rep.bound_constant) << ','
                  << format_double(rep.final_value) << "\n";
    }
    return rep.first_violation >= 0 ? 2 : 0;
}

int cmd_recover(double mu, std::size_t count, std::size_t trials, std::uint64_t seed,
                const std::string& format) {
    Experiment exp;
    exp.id = "recover";
    exp.seed = seed;
    exp.dictionary.kind = "equiangular";
    exp.dictionary.count = count;
    exp.dictionary.mu = mu;
    exp.data.kind = "sparse";
    exp.data.sparsity = count;
    exp.replications = trials;
    Report rep = recovery_table(exp);
    if (format == "json") {
        std::cout << rep.to_json() << "\n";
    } else {
        std::cout << "key,value\n";
        for (const auto& [k, v] : rep.scalars) std::cout << k << ',' << format_double(v) << "\n";
    }
    return rep.pass ? 0 : 2;
}

int cmd_bilinear(const std::string& matrix_path, std::size_t m, const std::string& format) {
    Mat a = read_matrix_file(matrix_path);
    auto res = pga_rank_one(a, m);
    if (format == "json") {
        json j = json::array();
        for (std::size_t k = 1; k < res.residual_norms.size(); ++k) {
            double tail = svd_tail(a, k);
            j.push_back({{"m", k},
                         {"residual", res.residual_norms[k]},
                         {"svd_tail", tail},
                         {"delta", std::abs(res.residual_norms[k] - tail)}});
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "m,residual,svd_tail,delta\n";
        for (std::size_t k = 1; k < res.residual_norms.size(); ++k) {
            double tail = svd_tail(a, k);
            std::cout << k << ',' << format_double(res.residual_norms[k]) << ','
                      << format_double(tail) << ','
                      << format_double(std::abs(res.residual_norms[k] - tail)) << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"greedy approximation experiment runner"};
    app.require_subcommand(1);
    std::string format = "csv";
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "top-level seed override");

    auto* run = app.add_subcommand("run", "execute an experiment config");
    std::string config_path;
    run->add_option("config", config_path, "JSON config path")->required();

    auto* oracle = app.add_subcommand("oracle", "best m-term approximation error");
    std::string dict_path, signal_path;
    std::size_t m = 1;
    oracle->add_option("--dict", dict_path, "GREEDYDICT file")->required();
    oracle->add_option("--signal", signal_path, "element file")->required();
    oracle->add_option("--m", m, "term count")->required();

    auto* lemmas = app.add_subcommand("lemmas", "sequence-lemma simulator");
    std::string lemma_id;
    std::size_t horizon = 100000;
    bool adversarial = true;
    std::string params_json = "{}";
    lemmas->add_option("lemma", lemma_id, "lemma id (e.g. LeL1)")->required();
    lemmas->add_option("--n", horizon, "horizon");
    lemmas->add_flag("--adversarial,!--randomized", adversarial, "slack mode");
    lemmas->add_option("--params", params_json, "lemma parameters as JSON");

    auto* recover = app.add_subcommand("recover", "sparse recovery phase table");
    double mu = 0.1;
    std::size_t count = 16, trials = 20;
    recover->add_option("--mu", mu, "pairwise inner product (coherence)");
    recover->add_option("--count", count, "atom count");
    recover->add_option("--trials", trials, "trials per cell");

    auto* bilinear = app.add_subcommand("bilinear", "rank-one greedy vs svd tail");
    std::string matrix_path;
    bilinear->add_option("--matrix", matrix_path, "GREEDYMAT file")->required();
    bilinear->add_option("--m", m, "term count");

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    try {
        if (*run) return cmd_run(config_path, out_dir, seed, seed_set);
        if (*oracle) return cmd_oracle(dict_path, signal_path, m, format);
        if (*lemmas)
            return cmd_lemmas(lemma_id, horizon, adversarial, seed_set ? seed : 7,
                              format, json::parse(params_json));
        if (*recover) return cmd_recover(mu, count, trials, seed_set ? seed : 7, format);
        if (*bilinear) return cmd_bilinear(matrix_path, m, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
