#include "spotbid/cli_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

namespace spotbid {

using nlohmann::json;

namespace {

std::string json_type_name(const json& v) {
    return v.type_name();
}

class SectionReader {
public:
    SectionReader(const json& doc, std::string prefix)
        : section_(doc.is_null() ? json::object() : doc), prefix_(std::move(prefix)) {
        if (!section_.is_object()) {
            throw ConfigError(prefix_ + ": expected an object, got " +
                              json_type_name(section_));
        }
    }

    template <typename T>
    void read(const char* key, T& out) {
        auto it = section_.find(key);
        if (it == section_.end()) return;
        try {
            out = it->get<T>();
        } catch (const json::exception&) {
            throw ConfigError(prefix_ + "." + key + ": invalid value of type " +
                              json_type_name(*it));
        }
        seen_.insert(key);
    }

    // Everything not consumed by read() is an unknown key.
    void reject_unknown() const {
        for (auto it = section_.begin(); it != section_.end(); ++it) {
            if (!seen_.count(it.key())) {
                throw ConfigError("unknown key \"" + prefix_ + "." + it.key() + "\"");
            }
        }
    }

    std::set<std::string> present_keys() const {
        std::set<std::string> keys;
        for (auto it = section_.begin(); it != section_.end(); ++it) {
            keys.insert(prefix_ + "." + it.key());
        }
        return keys;
    }

private:
    json section_;
    std::string prefix_;
    std::set<std::string> seen_;
};

json resolved_instance(const InstanceConfig& c) {
    return json{{"max_arrivals", c.max_arrivals},
                {"tau_max", c.tau_max},
                {"dist_min", c.dist_min},
                {"dist_max", c.dist_max},
                {"vol_max", c.vol_max},
                {"hold_cost", c.hold_cost},
                {"penalty_cost", c.penalty_cost},
                {"mile_cost", c.mile_cost},
                {"capacity", c.capacity},
                {"sharing_rate", c.sharing_rate}};
}

json resolved_learn(const LearnConfig& c) {
    return json{{"episodes", c.episodes},
                {"horizon", c.horizon},
                {"alpha_mu", c.alpha_mu},
                {"alpha_sigma", c.alpha_sigma},
                {"sigma0", c.sigma0},
                {"sigma_floor", c.sigma_floor},
                {"theta0", c.theta0},
                {"validation_every", c.validation_every},
                {"validation_episodes", c.validation_episodes},
                {"validation_horizon", c.validation_horizon},
                {"seed", c.seed}};
}

json resolved_scenario(const ScenarioSpec& s) {
    return json{{"name", s.name},
                {"replications", s.replications},
                {"seeds", s.seeds},
                {"sweep_axis", s.sweep_axis},
                {"sweep_values", s.sweep_values}};
}

}  // namespace

ParsedConfig parse_config_json(const json& doc) {
    if (!doc.is_object()) {
        throw ConfigError("config: top level must be an object");
    }
    // A run manifest can stand in for its config: replay from resolved_config.
    if (doc.contains("resolved_config")) {
        return parse_config_json(doc.at("resolved_config"));
    }

    static const std::set<std::string> top_keys = {"instance", "learn", "scenario"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!top_keys.count(it.key())) {
            throw ConfigError("unknown key \"" + it.key() + "\"");
        }
    }

    ParsedConfig parsed;

    SectionReader instance(doc.value("instance", json::object()), "instance");
    instance.read("max_arrivals", parsed.instance.max_arrivals);
    instance.read("tau_max", parsed.instance.tau_max);
    instance.read("dist_min", parsed.instance.dist_min);
    instance.read("dist_max", parsed.instance.dist_max);
    instance.read("vol_max", parsed.instance.vol_max);
    instance.read("hold_cost", parsed.instance.hold_cost);
    instance.read("penalty_cost", parsed.instance.penalty_cost);
    instance.read("mile_cost", parsed.instance.mile_cost);
    instance.read("capacity", parsed.instance.capacity);
    instance.read("sharing_rate", parsed.instance.sharing_rate);
    instance.reject_unknown();

    parsed.learn.theta0.assign(kStandardFeatureCount, 0.0);
    SectionReader learn(doc.value("learn", json::object()), "learn");
    learn.read("episodes", parsed.learn.episodes);
    learn.read("horizon", parsed.learn.horizon);
    learn.read("alpha_mu", parsed.learn.alpha_mu);
    learn.read("alpha_sigma", parsed.learn.alpha_sigma);
    learn.read("sigma0", parsed.learn.sigma0);
    learn.read("sigma_floor", parsed.learn.sigma_floor);
    learn.read("theta0", parsed.learn.theta0);
    learn.read("validation_every", parsed.learn.validation_every);
    learn.read("validation_episodes", parsed.learn.validation_episodes);
    learn.read("validation_horizon", parsed.learn.validation_horizon);
    learn.read("seed", parsed.learn.seed);
    learn.reject_unknown();

    SectionReader scenario(doc.value("scenario", json::object()), "scenario");
    scenario.read("name", parsed.scenario.name);
    scenario.read("replications", parsed.scenario.replications);
    scenario.read("seeds", parsed.scenario.seeds);
    scenario.read("sweep_axis", parsed.scenario.sweep_axis);
    scenario.read("sweep_values", parsed.scenario.sweep_values);
    scenario.reject_unknown();

    for (const SectionReader* section : {&instance, &learn, &scenario}) {
        for (const std::string& key : section->present_keys()) {
            parsed.explicit_keys.insert(key);
        }
    }

    parsed.instance.validate();
    parsed.learn.validate();
    if (parsed.learn.theta0.size() != kStandardFeatureCount) {
        throw ConfigError("learn.theta0: must have " + std::to_string(kStandardFeatureCount) +
                          " entries");
    }
    if (parsed.scenario.replications < 1) {
        throw ConfigError("scenario.replications: must be >= 1");
    }
    static const std::set<std::string> axes = {"", "sharing_rate", "capacity", "horizon"};
    if (!axes.count(parsed.scenario.sweep_axis)) {
        throw ConfigError("scenario.sweep_axis: unknown axis \"" + parsed.scenario.sweep_axis +
                          "\"");
    }
    if (parsed.scenario.sweep_axis == "sharing_rate") {
        for (double v : parsed.scenario.sweep_values) {
            if (v < 0.0 || v > 1.0)
                throw ConfigError("scenario.sweep_values: sharing rate outside [0,1]");
        }
    } else if (parsed.scenario.sweep_axis == "capacity" ||
               parsed.scenario.sweep_axis == "horizon") {
        for (double v : parsed.scenario.sweep_values) {
            if (v < 1.0 || v != std::floor(v))
                throw ConfigError("scenario.sweep_values: expected positive integers");
        }
    }
    parsed.scenario.instance = parsed.instance;
    parsed.scenario.learn = parsed.learn;

    parsed.resolved = json{{"instance", resolved_instance(parsed.instance)},
                           {"learn", resolved_learn(parsed.learn)},
                           {"scenario", resolved_scenario(parsed.scenario)}};
    return parsed;
}

ParsedConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open " + path.string());
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config: malformed JSON in " + path.string() + ": " + e.what());
    }
    return parse_config_json(doc);
}

std::string instance_config_hash(const InstanceConfig& cfg) {
    const std::string dump = resolved_instance(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void save_checkpoint(const PolicyParams& params, const std::vector<std::string>& feature_order,
                     const std::string& config_hash, const std::filesystem::path& path) {
    if (params.theta.size() != feature_order.size()) {
        throw ConfigError("checkpoint: theta length does not match feature_order");
    }
    const json doc{{"theta", params.theta},
                   {"sigma", params.sigma},
                   {"feature_order", feature_order},
                   {"config_hash", config_hash}};
    std::ofstream out(path);
    if (!out) throw ConfigError("checkpoint: cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

PolicyParams load_checkpoint(const std::filesystem::path& path,
                             const std::vector<std::string>& expected_order) {
    std::ifstream in(path);
    if (!in) throw ConfigError("checkpoint: cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("checkpoint: malformed JSON in " + path.string() + ": " + e.what());
    }
    for (const char* key : {"theta", "sigma", "feature_order"}) {
        if (!doc.contains(key)) {
            throw ConfigError("checkpoint: missing key \"" + std::string(key) + "\"");
        }
    }
    std::vector<std::string> order;
    PolicyParams params;
    try {
        order = doc.at("feature_order").get<std::vector<std::string>>();
        params.theta = doc.at("theta").get<std::vector<double>>();
        params.sigma = doc.at("sigma").get<double>();
    } catch (const json::exception&) {
        throw ConfigError("checkpoint: invalid field types in " + path.string());
    }
    if (order != expected_order) {
        throw ConfigError("checkpoint: feature_order does not match this build's features");
    }
    if (params.theta.size() != expected_order.size()) {
        throw ConfigError("checkpoint: expected " + std::to_string(expected_order.size()) +
                          " weights, found " + std::to_string(params.theta.size()));
    }
    if (!(params.sigma > 0.0) || !std::isfinite(params.sigma)) {
        throw ConfigError("checkpoint: sigma must be a positive finite number");
    }
    for (double w : params.theta) {
        if (!std::isfinite(w)) throw ConfigError("checkpoint: non-finite weight");
    }
    return params;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trace_csv(const TrainingTrace& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("trace: cannot write " + path.string());
    const std::size_t k = trace.rows.empty() ? kStandardFeatureCount : trace.rows[0].theta.size();
    out << "episode,sigma";
    for (std::size_t i = 0; i < k; ++i) out << ",theta_" << i;
    out << ",avg_reward_per_completed_job,shipped_fraction,avg_bids_per_job,"
           "carrier_profit_margin,validation_avg_cost\n";
    for (const TraceRow& row : trace.rows) {
        out << row.episode << ',' << format_number(row.sigma);
        for (double w : row.theta) out << ',' << format_number(w);
        out << ',' << format_number(row.avg_reward_per_completed_job) << ','
            << format_number(row.shipped_fraction) << ',' << format_number(row.avg_bids_per_job)
            << ',' << format_number(row.carrier_profit_margin) << ',';
        if (row.validation_avg_cost) out << format_number(*row.validation_avg_cost);
        out << '\n';
    }
}

void write_sweep_csv(const SweepTable& table, std::size_t theta_size,
                     const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("sweep: cannot write " + path.string());
    out << "axis,value,seed,status,avg_reward_per_completed_job,shipped_fraction,"
           "avg_bids_per_job,carrier_profit_margin,carrier_profit,final_sigma";
    for (std::size_t i = 0; i < theta_size; ++i) out << ",theta_" << i;
    out << '\n';
    for (const SweepRow& row : table.rows) {
        out << row.axis << ',' << row.value << ',' << row.seed << ',' << row.status << ','
            << format_number(row.metrics.avg_reward_per_completed_job) << ','
            << format_number(row.metrics.shipped_fraction) << ','
            << format_number(row.metrics.avg_bids_per_job) << ','
            << format_number(row.metrics.carrier_profit_margin) << ','
            << format_number(row.metrics.carrier_profit) << ','
            << format_number(row.metrics.final_sigma);
        for (std::size_t i = 0; i < theta_size; ++i) {
            out << ',';
            if (i < row.metrics.final_theta.size()) {
                out << format_number(row.metrics.final_theta[i]);
            }
        }
        out << '\n';
    }
}

namespace {

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct ManifestWriter {
    std::filesystem::path path;
    json doc;

    ManifestWriter(const std::filesystem::path& out_dir,
                   const std::vector<std::string>& args, const json& resolved,
                   std::uint64_t seed) {
        path = out_dir / "manifest.json";
        doc = json{{"tool_version", kToolVersion},
                   {"command_line", args},
                   {"seed", seed},
                   {"resolved_config", resolved},
                   {"outputs", json::object()},
                   {"started_at", iso_timestamp()},
                   {"finished_at", nullptr},
                   {"status", "running"}};
        flush();
    }

    void add_output(const std::string& name, const std::filesystem::path& file) {
        doc["outputs"][name] = file.filename().string();
    }

    void finish(const std::string& status) {
        doc["finished_at"] = iso_timestamp();
        doc["status"] = status;
        flush();
    }

    void flush() const {
        std::ofstream out(path);
        if (!out) throw ConfigError("manifest: cannot write " + path.string());
        out << doc.dump(2) << "\n";
    }
};

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int replications = 0;  // 0 = use scenario value
    bool paper_scale = false;
    int jobs = 1;
};

ParsedConfig load_parsed(const CommonOptions& opt) {
    ParsedConfig parsed = opt.config_path.empty() ? parse_config_json(json::object())
                                                  : parse_config(opt.config_path);
    if (opt.seed_set) {
        parsed.learn.seed = opt.seed;
        parsed.scenario.learn.seed = opt.seed;
        parsed.resolved["learn"]["seed"] = opt.seed;
    }
    if (opt.replications > 0) {
        parsed.scenario.replications = opt.replications;
        parsed.scenario.seeds.clear();
        parsed.resolved["scenario"]["replications"] = opt.replications;
        parsed.resolved["scenario"]["seeds"] = json::array();
    }
    return parsed;
}

std::filesystem::path prepare_out_dir(const std::string& dir) {
    std::filesystem::path out(dir);
    std::filesystem::create_directories(out);
    return out;
}

// Desk-scale sweeps keep runs laptop-sized; --paper-scale restores the
// full-size experiment presets.
constexpr int kDeskEpisodes = 1000;
constexpr int kPaperEpisodes = 4000;
constexpr long kDeskTotalSteps = 100000;
constexpr long kPaperTotalSteps = 1000000;

// Config-specified episode counts always win over the preset scale.
void apply_scale(ParsedConfig& parsed, const CommonOptions& opt) {
    if (parsed.explicit_keys.count("learn.episodes")) return;
    const int n = opt.paper_scale ? kPaperEpisodes : kDeskEpisodes;
    parsed.scenario.learn.episodes = n;
    parsed.learn.episodes = n;
    parsed.resolved["learn"]["episodes"] = n;
}

int cmd_train(const CommonOptions& opt, const std::vector<std::string>& args) {
    ParsedConfig parsed = load_parsed(opt);
    const auto out = prepare_out_dir(opt.out_dir);
    ManifestWriter manifest(out, args, parsed.resolved, parsed.learn.seed);
    manifest.add_output("trace", "trace.csv");
    manifest.add_output("policy", "policy.json");
    manifest.flush();

    try {
        const TrainResult result = train(parsed.learn, parsed.instance);
        write_trace_csv(result.trace, out / "trace.csv");
        save_checkpoint(result.params, standard_feature_names(),
                        instance_config_hash(parsed.instance), out / "policy.json");
        manifest.finish("ok");
        const TraceRow& last = result.trace.rows.back();
        std::cout << "trained " << parsed.learn.episodes << " episodes; final sigma "
                  << format_number(result.params.sigma) << "; last-episode avg reward "
                  << format_number(last.avg_reward_per_completed_job) << "\n";
        std::cout << "outputs: " << (out / "trace.csv").string() << ", "
                  << (out / "policy.json").string() << "\n";
    } catch (const DivergenceError& e) {
        manifest.finish("diverged");
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

int cmd_validate(const CommonOptions& opt, const std::string& policy_path, int episodes,
                 int horizon, const std::vector<std::string>& args) {
    ParsedConfig parsed = load_parsed(opt);
    const PolicyParams params = load_checkpoint(policy_path, standard_feature_names());

    RngStreams rng(mix_seed(parsed.learn.seed, 0x636c6976ULL));
    std::vector<double> per_episode;
    EpisodeMetrics pooled;
    for (int e = 0; e < episodes; ++e) {
        const ValidationResult one = validate_policy(params, parsed.instance, 1, horizon, rng,
                                                     standard_feature_set());
        per_episode.push_back(one.avg_cost_per_completed_job);
        pooled += one.pooled;
    }
    const double mean_cost =
        pooled.completed_jobs > 0 ? -pooled.avg_reward_per_completed_job() : 0.0;
    std::cout << "validation episodes: " << episodes << " (horizon " << horizon << ")\n";
    std::cout << "mean cost per completed job: " << format_number(mean_cost) << "\n";
    std::cout << "shipped fraction: " << format_number(pooled.shipped_fraction()) << "\n";

    if (!opt.out_dir.empty()) {
        const auto out = prepare_out_dir(opt.out_dir);
        ManifestWriter manifest(out, args, parsed.resolved, parsed.learn.seed);
        manifest.add_output("validation", "validation.csv");
        std::ofstream csv(out / "validation.csv");
        csv << "episode,avg_cost_per_completed_job\n";
        for (std::size_t i = 0; i < per_episode.size(); ++i) {
            csv << i << ',' << format_number(per_episode[i]) << '\n';
        }
        csv << "mean," << format_number(mean_cost) << '\n';
        manifest.finish("ok");
    }
    return 0;
}

int cmd_sweep(const CommonOptions& opt, const std::string& axis,
              const std::vector<std::string>& args) {
    ParsedConfig parsed = load_parsed(opt);
    apply_scale(parsed, opt);

    const auto out = prepare_out_dir(opt.out_dir);
    ManifestWriter manifest(out, args, parsed.resolved, parsed.learn.seed);

    SweepTable table;
    std::string file;
    if (axis == "sharing") {
        std::vector<double> rates = default_sharing_rates();
        if (parsed.scenario.sweep_axis == "sharing_rate" && !parsed.scenario.sweep_values.empty())
            rates = parsed.scenario.sweep_values;
        table = sharing_sweep(parsed.scenario, rates, opt.jobs);
        file = "sharing.csv";
    } else if (axis == "capacity") {
        std::vector<int> caps = default_capacity_levels();
        if (parsed.scenario.sweep_axis == "capacity" && !parsed.scenario.sweep_values.empty()) {
            caps.clear();
            for (double v : parsed.scenario.sweep_values) caps.push_back(static_cast<int>(v));
        }
        table = capacity_sweep(parsed.scenario, caps, opt.jobs);
        file = "capacity.csv";
    } else if (axis == "horizon") {
        std::vector<int> horizons = default_horizon_levels();
        if (parsed.scenario.sweep_axis == "horizon" && !parsed.scenario.sweep_values.empty()) {
            horizons.clear();
            for (double v : parsed.scenario.sweep_values)
                horizons.push_back(static_cast<int>(v));
        }
        const long total = opt.paper_scale ? kPaperTotalSteps : kDeskTotalSteps;
        table = horizon_sweep(parsed.scenario, horizons, total, opt.jobs);
        file = "horizon.csv";
    } else {  // learning-rate
        table = learning_rate_and_init_sweeps(parsed.scenario, opt.jobs);
        file = "learning_rate.csv";
    }

    write_sweep_csv(table, kStandardFeatureCount, out / file);
    manifest.add_output("sweep", file);
    manifest.finish("ok");
    std::cout << "sweep rows: " << table.rows.size() << " -> " << (out / file).string() << "\n";
    return 0;
}

int cmd_toy(const CommonOptions& opt, const ToyConfig& toy,
            const std::vector<std::string>& args) {
    ParsedConfig parsed = load_parsed(opt);
    const auto out = prepare_out_dir(opt.out_dir);
    ManifestWriter manifest(out, args, parsed.resolved, parsed.learn.seed);
    manifest.add_output("toy", "toy.csv");

    const std::vector<std::uint64_t> seeds = parsed.scenario.replication_seeds();
    const std::vector<ToyResult> results = toy_scenarios(toy, seeds);

    std::ofstream csv(out / "toy.csv");
    csv << "scenario,seed,mean_accepted_bid,final_mean_bid,transport_cost,failure_cost,"
           "shipped_fraction,carrier_profit_margin,final_sigma\n";
    for (const ToyResult& r : results) {
        csv << r.scenario << ',' << r.seed << ',' << format_number(r.mean_accepted_bid) << ','
            << format_number(r.final_mean_bid) << ',' << format_number(r.transport_cost) << ','
            << format_number(r.failure_cost) << ','
            << format_number(r.metrics.shipped_fraction) << ','
            << format_number(r.metrics.carrier_profit_margin) << ','
            << format_number(r.metrics.final_sigma) << '\n';
        std::cout << r.scenario << " seed " << r.seed << ": mean accepted bid "
                  << format_number(r.mean_accepted_bid) << ", learned mean "
                  << format_number(r.final_mean_bid) << " (transport cost "
                  << format_number(r.transport_cost) << ", failure cost "
                  << format_number(r.failure_cost) << ")\n";
    }
    manifest.finish("ok");
    return 0;
}

int cmd_cost_feature(const CommonOptions& opt, const std::vector<std::string>& args) {
    ParsedConfig parsed = load_parsed(opt);
    apply_scale(parsed, opt);
    const auto out = prepare_out_dir(opt.out_dir);
    ManifestWriter manifest(out, args, parsed.resolved, parsed.learn.seed);
    manifest.add_output("cost_feature", "cost_feature.csv");

    try {
        const RunMetrics metrics =
            carrier_cost_feature_scenario(parsed.scenario, parsed.learn.seed);
        std::ofstream csv(out / "cost_feature.csv");
        csv << "seed,avg_reward_per_completed_job,shipped_fraction,avg_bids_per_job,"
               "carrier_profit_margin,final_sigma,theta_bias,theta_cost\n";
        csv << parsed.learn.seed << ',' << format_number(metrics.avg_reward_per_completed_job)
            << ',' << format_number(metrics.shipped_fraction) << ','
            << format_number(metrics.avg_bids_per_job) << ','
            << format_number(metrics.carrier_profit_margin) << ','
            << format_number(metrics.final_sigma) << ','
            << format_number(metrics.final_theta[0]) << ','
            << format_number(metrics.final_theta[1]) << '\n';
        std::cout << "cost-feature carrier profit margin: "
                  << format_number(metrics.carrier_profit_margin) << "\n";
        manifest.finish("ok");
    } catch (const DivergenceError& e) {
        manifest.finish("diverged");
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"Freight spot-market bidding simulator and policy-gradient trainer"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    CommonOptions opt;
    ToyConfig toy;
    std::string policy_path;
    int val_episodes = 10;
    int val_horizon = 1000;

    auto add_common = [&](CLI::App* cmd, bool with_out_default) {
        cmd->add_option("--config", opt.config_path, "JSON config file (or run manifest)");
        auto* seed = cmd->add_option("--seed", opt.seed, "master seed override");
        cmd->parse_complete_callback([&opt, seed] { opt.seed_set = seed->count() > 0; });
        cmd->add_option("--replications", opt.replications, "replications per sweep cell");
        cmd->add_flag("--paper-scale", opt.paper_scale, "full-size experiment presets");
        cmd->add_option("--jobs", opt.jobs, "parallel sweep cells");
        if (with_out_default) {
            cmd->add_option("--out", opt.out_dir, "output directory")->required();
        } else {
            cmd->add_option("--out", opt.out_dir, "output directory");
        }
    };

    CLI::App* train_cmd = app.add_subcommand("train", "train a bidding policy");
    add_common(train_cmd, true);

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "evaluate a saved policy with frozen parameters");
    add_common(validate_cmd, false);
    validate_cmd->add_option("--policy", policy_path, "policy checkpoint")->required();
    validate_cmd->add_option("--episodes", val_episodes, "validation episodes");
    validate_cmd->add_option("--horizon", val_horizon, "validation horizon");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run an experiment sweep");
    sweep_cmd->require_subcommand(1);
    std::vector<std::string> sweep_axes = {"sharing", "capacity", "horizon", "learning-rate"};
    for (const std::string& axis : sweep_axes) {
        CLI::App* cmd = sweep_cmd->add_subcommand(axis, axis + " sweep");
        add_common(cmd, true);
    }

    CLI::App* toy_cmd = app.add_subcommand("toy", "deterministic single-container scenarios");
    add_common(toy_cmd, true);
    auto* toy_episodes =
        toy_cmd->add_option("--episodes", toy.episodes, "training episodes per toy run");
    toy_cmd->add_option("--horizon", toy.horizon, "epochs per episode");

    CLI::App* cost_cmd =
        app.add_subcommand("cost-feature", "bid on the carrier's transport cost only");
    add_common(cost_cmd, true);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (train_cmd->parsed()) return cmd_train(opt, args);
        if (validate_cmd->parsed()) {
            return cmd_validate(opt, policy_path, val_episodes, val_horizon, args);
        }
        if (sweep_cmd->parsed()) {
            for (const std::string& axis : sweep_axes) {
                if (sweep_cmd->get_subcommand(axis)->parsed()) {
                    return cmd_sweep(opt, axis, args);
                }
            }
        }
        if (toy_cmd->parsed()) {
            if (opt.paper_scale && toy_episodes->count() == 0) toy.episodes = kPaperEpisodes;
            return cmd_toy(opt, toy, args);
        }
        if (cost_cmd->parsed()) return cmd_cost_feature(opt, args);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace spotbid
