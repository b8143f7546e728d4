#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bnw/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"composite index weights from learned network ensembles"};
    app.require_subcommand(1);

    std::string config_path, data, schema, constraints, external, network;
    std::string out_dir, target, group, algorithm, baseline, mode;
    std::vector<std::string> schemes;
    double threshold = 6.0, discount = 1.0;
    int bootstrap = 200, jobs = 1;
    std::uint64_t seed = 0, rows = 0;

    auto* o_config = app.add_option("--config", config_path, "key = value config file");
    auto* o_data = app.add_option("--data", data, "data CSV");
    auto* o_schema = app.add_option("--schema", schema, "schema file");
    auto* o_constraints = app.add_option("--constraints", constraints, "constraint file");
    auto* o_external = app.add_option("--external-weights", external, "external weights CSV");
    auto* o_network = app.add_option("--network", network, "serialized network (simulate)");
    auto* o_out = app.add_option("--out", out_dir, "output directory");
    auto* o_target = app.add_option("--target", target, "target variable");
    auto* o_group = app.add_option("--group", group, "group variable (compare)");
    auto* o_algorithm = app.add_option("--algorithm", algorithm, "strength algorithm");
    auto* o_baseline = app.add_option("--baseline", baseline, "baseline scheme for shifts");
    auto* o_schemes =
        app.add_option("--schemes", schemes, "weight schemes, comma separated")->delimiter(',');
    auto* o_threshold = app.add_option("--threshold", threshold, "robustness threshold");
    auto* o_bootstrap = app.add_option("--bootstrap", bootstrap, "bootstrap replicates");
    auto* o_mode = app.add_option("--mode", mode, "bn weight mode: literal or dwi");
    auto* o_discount = app.add_option("--discount", discount, "dwi distance discount");
    auto* o_seed = app.add_option("--seed", seed, "global seed");
    auto* o_jobs = app.add_option("--jobs", jobs, "worker threads");
    auto* o_rows = app.add_option("--rows", rows, "sample size (simulate)");

    auto* learn = app.add_subcommand("learn", "run the 11-algorithm suite and robust network");
    auto* weights = app.add_subcommand("weights", "derive weight table for the chosen schemes");
    auto* compare = app.add_subcommand("compare", "composite index group ranks per scheme");
    auto* simulate = app.add_subcommand("simulate", "forward-sample a serialized network");
    auto* strength = app.add_subcommand("strength", "bootstrap arc strengths");
    for (auto* sub : {learn, weights, compare, simulate, strength}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        bnw::RunConfig cfg =
            o_config->count() ? bnw::RunConfig::from_file(config_path) : bnw::RunConfig{};
        if (o_data->count()) cfg.data_path = data;
        if (o_schema->count()) cfg.schema_path = schema;
        if (o_constraints->count()) cfg.constraints_path = constraints;
        if (o_external->count()) cfg.external_weights_path = external;
        if (o_network->count()) cfg.network_path = network;
        if (o_out->count()) cfg.out_dir = out_dir;
        if (o_target->count()) cfg.target = target;
        if (o_group->count()) cfg.group_var = group;
        if (o_algorithm->count()) {
            if (!bnw::is_canonical_algorithm(algorithm))
                throw bnw::UsageError("unknown algorithm '" + algorithm + "'");
            cfg.strength_algorithm = algorithm;
        }
        if (o_baseline->count()) cfg.baseline = bnw::canonical_scheme(baseline);
        if (o_schemes->count()) {
            cfg.schemes.clear();
            for (const auto& s : schemes) cfg.schemes.push_back(bnw::canonical_scheme(s));
        }
        if (o_threshold->count()) cfg.threshold = threshold;
        if (o_bootstrap->count()) cfg.bootstrap = bootstrap;
        if (o_mode->count()) cfg.mode = bnw::parse_bn_mode(mode);
        if (o_discount->count()) cfg.discount = discount;
        if (o_seed->count()) cfg.seed = seed;
        if (o_jobs->count()) cfg.jobs = jobs;
        if (o_rows->count()) cfg.sample_rows = rows;

        std::vector<std::string> written;
        if (app.got_subcommand(learn)) written = bnw::cmd_learn(cfg);
        else if (app.got_subcommand(weights)) written = bnw::cmd_weights(cfg);
        else if (app.got_subcommand(compare)) written = bnw::cmd_compare(cfg);
        else if (app.got_subcommand(simulate)) written = bnw::cmd_simulate(cfg);
        else written = bnw::cmd_strength(cfg);
        for (const auto& path : written) std::cout << "wrote " << path << '\n';
        return 0;
    } catch (const bnw::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const bnw::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
