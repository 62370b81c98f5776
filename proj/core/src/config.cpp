#include "qkdsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace qkdsim {

namespace {

using json = nlohmann::ordered_json;

std::string joined_path(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
}

void reject_unknown_keys(const json& object, const std::string& section,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : object.items()) {
        bool known = std::any_of(allowed.begin(), allowed.end(),
                                 [&](const char* k) { return item.key() == k; });
        if (!known)
            throw ConfigError("unknown key: " + joined_path(section, item.key()));
    }
}

const json* find(const json& object, const char* key) {
    auto it = object.find(key);
    return it == object.end() ? nullptr : &*it;
}

double get_number(const json& object, const std::string& section, const char* key,
                  double fallback) {
    const json* value = find(object, key);
    if (!value) return fallback;
    if (!value->is_number())
        throw ConfigError(joined_path(section, key) + " must be a number");
    return value->get<double>();
}

std::uint64_t get_uint(const json& object, const std::string& section,
                       const char* key, std::uint64_t fallback) {
    const json* value = find(object, key);
    if (!value) return fallback;
    if (value->is_number_unsigned()) return value->get<std::uint64_t>();
    if (value->is_number_integer()) {
        auto v = value->get<std::int64_t>();
        if (v < 0)
            throw ConfigError(joined_path(section, key) + " must be >= 0");
        return static_cast<std::uint64_t>(v);
    }
    if (value->is_number_float()) {
        double v = value->get<double>();
        if (v < 0.0 || v > 9.007199254740992e15 || std::rint(v) != v)
            throw ConfigError(joined_path(section, key) +
                              " must be a non-negative integer");
        return static_cast<std::uint64_t>(v);
    }
    throw ConfigError(joined_path(section, key) + " must be a non-negative integer");
}

std::string get_string(const json& object, const std::string& section,
                       const char* key, const std::string& fallback) {
    const json* value = find(object, key);
    if (!value) return fallback;
    if (!value->is_string())
        throw ConfigError(joined_path(section, key) + " must be a string");
    return value->get<std::string>();
}

std::vector<std::pair<double, double>> get_table(const json& object,
                                                 const std::string& section,
                                                 const char* key,
                                                 std::vector<std::pair<double, double>> fallback) {
    const json* value = find(object, key);
    if (!value) return fallback;
    std::string path = joined_path(section, key);
    if (!value->is_array())
        throw ConfigError(path + " must be an array of [rate_hz, seconds] pairs");
    std::vector<std::pair<double, double>> table;
    table.reserve(value->size());
    for (const auto& entry : *value) {
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
            !entry[1].is_number())
            throw ConfigError(path + " must be an array of [rate_hz, seconds] pairs");
        table.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    }
    return table;
}

DetectorModel parse_detector(const json& object, const std::string& section,
                             const DetectorModel& fallback) {
    reject_unknown_keys(object, section,
                        {"variant", "efficiency", "dark_rate_hz", "dead_time_s",
                         "jitter_table", "shift_table"});
    DetectorModel model = fallback;
    if (const json* variant = find(object, "variant")) {
        if (!variant->is_string())
            throw ConfigError(section + ".variant must be a string");
        std::string name = variant->get<std::string>();
        double efficiency = model.efficiency;
        double dark = model.dark_rate_hz;
        double dead = model.dead_time_s;
        try {
            model = detector_variant_from_string(name) == DetectorVariant::standard
                        ? DetectorModel::standard_spcm()
                        : DetectorModel::enhanced_spcm();
        } catch (const std::invalid_argument&) {
            throw ConfigError(section + ".variant must be \"standard\" or \"enhanced\"");
        }
        model.efficiency = efficiency;
        model.dark_rate_hz = dark;
        model.dead_time_s = dead;
    }
    model.efficiency = get_number(object, section, "efficiency", model.efficiency);
    model.dark_rate_hz = get_number(object, section, "dark_rate_hz", model.dark_rate_hz);
    model.dead_time_s = get_number(object, section, "dead_time_s", model.dead_time_s);
    model.jitter_table = get_table(object, section, "jitter_table", model.jitter_table);
    model.shift_table = get_table(object, section, "shift_table", model.shift_table);
    return model;
}

ScenarioConfig parse_json(const json& root) {
    if (!root.is_object())
        throw ConfigError("config root must be a JSON object");
    reject_unknown_keys(root, "",
                        {"clock_hz", "duration_s", "slot_count", "seed", "mode",
                         "source", "path", "detectors", "receiver", "postprocessing"});

    ScenarioConfig config;
    if (root.contains("duration_s") && root.contains("slot_count"))
        throw ConfigError("specify either duration_s or slot_count, not both");

    config.source.clock_hz = get_number(root, "", "clock_hz", config.source.clock_hz);
    config.duration_s = get_number(root, "", "duration_s", config.duration_s);
    config.slot_count = get_uint(root, "", "slot_count", config.slot_count);
    config.seed = get_uint(root, "", "seed", config.seed);
    std::string mode = get_string(root, "", "mode", std::string(to_string(config.mode)));
    try {
        config.mode = sim_mode_from_string(mode);
    } catch (const std::invalid_argument&) {
        throw ConfigError("mode must be \"analytic\" or \"monte_carlo\"");
    }

    if (const json* source = find(root, "source")) {
        if (!source->is_object()) throw ConfigError("source must be an object");
        reject_unknown_keys(*source, "source",
                            {"mu", "pulse_fwhm_s", "wavelength_nm", "linewidth_nm"});
        config.source.mu = get_number(*source, "source", "mu", config.source.mu);
        config.source.pulse_fwhm_s =
            get_number(*source, "source", "pulse_fwhm_s", config.source.pulse_fwhm_s);
        config.source.wavelength_nm =
            get_number(*source, "source", "wavelength_nm", config.source.wavelength_nm);
        config.source.linewidth_nm =
            get_number(*source, "source", "linewidth_nm", config.source.linewidth_nm);
    }

    if (const json* path = find(root, "path")) {
        if (!path->is_object()) throw ConfigError("path must be an object");
        reject_unknown_keys(*path, "path",
                            {"fiber_length_km", "fiber_loss_db_per_km", "splitter_loss_db",
                             "lumped_attenuation_db", "pdl_db", "pdl_axis",
                             "receiver_excess_loss_db", "dispersion_ps_per_nm_km"});
        LinkPath& p = config.path;
        p.fiber_length_km = get_number(*path, "path", "fiber_length_km", p.fiber_length_km);
        p.fiber_loss_db_per_km =
            get_number(*path, "path", "fiber_loss_db_per_km", p.fiber_loss_db_per_km);
        p.splitter_loss_db =
            get_number(*path, "path", "splitter_loss_db", p.splitter_loss_db);
        p.lumped_attenuation_db =
            get_number(*path, "path", "lumped_attenuation_db", p.lumped_attenuation_db);
        p.pdl_db = get_number(*path, "path", "pdl_db", p.pdl_db);
        p.pdl_axis = get_number(*path, "path", "pdl_axis", p.pdl_axis);
        p.receiver_excess_loss_db =
            get_number(*path, "path", "receiver_excess_loss_db", p.receiver_excess_loss_db);
        p.dispersion_ps_per_nm_km =
            get_number(*path, "path", "dispersion_ps_per_nm_km", p.dispersion_ps_per_nm_km);
    }

    if (const json* detectors = find(root, "detectors")) {
        if (!detectors->is_object()) throw ConfigError("detectors must be an object");
        reject_unknown_keys(*detectors, "detectors", {"channel0", "channel1"});
        if (const json* ch = find(*detectors, "channel0")) {
            if (!ch->is_object()) throw ConfigError("detectors.channel0 must be an object");
            config.detectors.channel0 =
                parse_detector(*ch, "detectors.channel0", config.detectors.channel0);
        }
        if (const json* ch = find(*detectors, "channel1")) {
            if (!ch->is_object()) throw ConfigError("detectors.channel1 must be an object");
            config.detectors.channel1 =
                parse_detector(*ch, "detectors.channel1", config.detectors.channel1);
        }
    }

    if (const json* receiver = find(root, "receiver")) {
        if (!receiver->is_object()) throw ConfigError("receiver must be an object");
        reject_unknown_keys(*receiver, "receiver",
                            {"analyzer1_angle_rad", "analyzer0_angle_rad", "splitting_ratio",
                             "extinction_ratio_db", "window_fraction"});
        ReceiverSetup& r = config.receiver;
        r.analyzer1_angle_rad =
            get_number(*receiver, "receiver", "analyzer1_angle_rad", r.analyzer1_angle_rad);
        r.analyzer0_angle_rad =
            get_number(*receiver, "receiver", "analyzer0_angle_rad", r.analyzer0_angle_rad);
        r.splitting_ratio =
            get_number(*receiver, "receiver", "splitting_ratio", r.splitting_ratio);
        r.extinction_ratio_db =
            get_number(*receiver, "receiver", "extinction_ratio_db", r.extinction_ratio_db);
        r.window_fraction =
            get_number(*receiver, "receiver", "window_fraction", r.window_fraction);
    }

    if (const json* post = find(root, "postprocessing")) {
        if (!post->is_object()) throw ConfigError("postprocessing must be an object");
        reject_unknown_keys(*post, "postprocessing",
                            {"reconciliation_efficiency", "pa_margin", "sample_fraction",
                             "cascade_passes", "cascade_block_constant"});
        PostprocessConfig& pp = config.postprocessing;
        pp.reconciliation_efficiency = get_number(*post, "postprocessing",
                                                  "reconciliation_efficiency",
                                                  pp.reconciliation_efficiency);
        pp.pa_margin = get_number(*post, "postprocessing", "pa_margin", pp.pa_margin);
        pp.sample_fraction =
            get_number(*post, "postprocessing", "sample_fraction", pp.sample_fraction);
        pp.cascade.passes = static_cast<int>(
            get_uint(*post, "postprocessing", "cascade_passes",
                     static_cast<std::uint64_t>(pp.cascade.passes)));
        pp.cascade.block_constant = get_number(*post, "postprocessing",
                                               "cascade_block_constant",
                                               pp.cascade.block_constant);
    }

    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return config;
}

bool is_blank(const std::string& text) {
    return std::all_of(text.begin(), text.end(), [](unsigned char c) {
        return std::isspace(c) != 0;
    });
}

json detector_to_json(const DetectorModel& model) {
    json j;
    j["variant"] = std::string(to_string(model.variant));
    j["efficiency"] = model.efficiency;
    j["dark_rate_hz"] = model.dark_rate_hz;
    j["dead_time_s"] = model.dead_time_s;
    json jitter = json::array();
    for (const auto& [rate, value] : model.jitter_table)
        jitter.push_back(json::array({rate, value}));
    j["jitter_table"] = std::move(jitter);
    json shift = json::array();
    for (const auto& [rate, value] : model.shift_table)
        shift.push_back(json::array({rate, value}));
    j["shift_table"] = std::move(shift);
    return j;
}

} // namespace

ScenarioConfig parse_config_text(const std::string& text) {
    if (is_blank(text)) {
        ScenarioConfig config;
        config.validate();
        return config;
    }
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_json(root);
}

ScenarioConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

std::string serialize_config(const ScenarioConfig& config) {
    json root;
    root["clock_hz"] = config.source.clock_hz;
    if (config.slot_count > 0)
        root["slot_count"] = config.slot_count;
    else
        root["duration_s"] = config.duration_s;
    root["seed"] = config.seed;
    root["mode"] = std::string(to_string(config.mode));

    json source;
    source["mu"] = config.source.mu;
    source["pulse_fwhm_s"] = config.source.pulse_fwhm_s;
    source["wavelength_nm"] = config.source.wavelength_nm;
    source["linewidth_nm"] = config.source.linewidth_nm;
    root["source"] = std::move(source);

    json path;
    path["fiber_length_km"] = config.path.fiber_length_km;
    path["fiber_loss_db_per_km"] = config.path.fiber_loss_db_per_km;
    path["splitter_loss_db"] = config.path.splitter_loss_db;
    path["lumped_attenuation_db"] = config.path.lumped_attenuation_db;
    path["pdl_db"] = config.path.pdl_db;
    path["pdl_axis"] = config.path.pdl_axis;
    path["receiver_excess_loss_db"] = config.path.receiver_excess_loss_db;
    path["dispersion_ps_per_nm_km"] = config.path.dispersion_ps_per_nm_km;
    root["path"] = std::move(path);

    json detectors;
    detectors["channel0"] = detector_to_json(config.detectors.channel0);
    detectors["channel1"] = detector_to_json(config.detectors.channel1);
    root["detectors"] = std::move(detectors);

    json receiver;
    receiver["analyzer1_angle_rad"] = config.receiver.analyzer1_angle_rad;
    receiver["analyzer0_angle_rad"] = config.receiver.analyzer0_angle_rad;
    receiver["splitting_ratio"] = config.receiver.splitting_ratio;
    receiver["extinction_ratio_db"] = config.receiver.extinction_ratio_db;
    receiver["window_fraction"] = config.receiver.window_fraction;
    root["receiver"] = std::move(receiver);

    json post;
    post["reconciliation_efficiency"] = config.postprocessing.reconciliation_efficiency;
    post["pa_margin"] = config.postprocessing.pa_margin;
    post["sample_fraction"] = config.postprocessing.sample_fraction;
    post["cascade_passes"] = config.postprocessing.cascade.passes;
    post["cascade_block_constant"] = config.postprocessing.cascade.block_constant;
    root["postprocessing"] = std::move(post);

    return root.dump(2) + "\n";
}

SimMode sim_mode_from_string(std::string_view name) {
    if (name == "analytic") return SimMode::analytic;
    if (name == "monte_carlo") return SimMode::monte_carlo;
    throw std::invalid_argument("unknown simulation mode: " + std::string(name));
}

std::string_view to_string(SimMode mode) {
    return mode == SimMode::analytic ? "analytic" : "monte_carlo";
}

DetectorVariant detector_variant_from_string(std::string_view name) {
    if (name == "standard") return DetectorVariant::standard;
    if (name == "enhanced") return DetectorVariant::enhanced;
    throw std::invalid_argument("unknown detector variant: " + std::string(name));
}

std::string_view to_string(DetectorVariant variant) {
    return variant == DetectorVariant::standard ? "standard" : "enhanced";
}

} // namespace qkdsim
