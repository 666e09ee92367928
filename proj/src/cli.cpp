#include "slitdiff/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace slitdiff::cli
{
namespace
{
using nlohmann::ordered_json;

std::string trim(const std::string& text)
{
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text)
{
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value))
        throw ConfigError(key, "expected a number, got '" + text + "'");
    return value;
}

int parse_int(const std::string& key, const std::string& text)
{
    int value = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(key, "expected an integer, got '" + text + "'");
    return value;
}

// "M,N" or "auto".
void apply_truncation(RunConfig& config, const std::string& text)
{
    if (text == "auto") {
        config.auto_truncation = true;
        return;
    }
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw ConfigError("truncation", "expected M,N or auto, got '" + text + "'");
    config.truncation = Truncation{parse_int("truncation_m", trim(text.substr(0, comma))),
                                   parse_int("truncation_n", trim(text.substr(comma + 1)))};
    config.auto_truncation = false;
}

std::vector<FitParameter> parse_free_list(const std::string& text)
{
    std::vector<FitParameter> free;
    std::stringstream stream(text);
    for (std::string item; std::getline(stream, item, ',');) {
        item = trim(item);
        if (!item.empty())
            free.push_back(parse_fit_parameter(item));
    }
    if (free.empty())
        throw ConfigError("free", "the list of free parameters is empty");
    return free;
}

std::string format_number(double value)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.11e", value);
    return buffer;
}

std::string json_path_for(const std::string& csv_path)
{
    const std::filesystem::path path(csv_path);
    if (path.extension() == ".csv") {
        auto copy = path;
        return copy.replace_extension(".json").string();
    }
    return csv_path + ".json";
}

ordered_json provenance(const RunConfig& config, Truncation truncation)
{
    ordered_json j;
    j["model"] = std::string(to_string(config.model));
    ordered_json params = ordered_json::object();
    for (const auto& [key, value] : parameter_map(config.parameters))
        params[key] = value;
    j["parameters"] = params;
    j["truncation"] = {{"m", truncation.m_count}, {"n", truncation.n_count}, {"auto", config.auto_truncation}};
    j["grid"] = {{"beta_min", config.beta_min}, {"beta_max", config.beta_max}, {"beta_step", config.beta_step}};
    return j;
}

ordered_json report_json(const FitReport& report)
{
    ordered_json j;
    j["rmse"] = report.rmse;
    j["max_abs_residual"] = report.max_abs_residual;
    j["points"] = report.points;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    ordered_json fitted = ordered_json::object();
    for (const auto& [name, value] : report.fitted_params)
        fitted[name] = value;
    j["fitted_params"] = fitted;
    ordered_json ident = ordered_json::object();
    for (const auto& [name, status] : report.identifiability)
        ident[name] = std::string(to_string(status));
    j["identifiability"] = ident;
    return j;
}

void emit_json(const ordered_json& doc, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << doc.dump(2) << '\n';
        return;
    }
    std::ofstream file(path);
    if (!file)
        throw DataError(path + ": cannot open output file");
    file << doc.dump(2) << '\n';
}

struct CurveRun
{
    IntensityCurve curve;
    Truncation truncation;
};

CurveRun compute_curve(const RunConfig& config, Normalization normalization)
{
    const auto grid = beta_grid(config.beta_min, config.beta_max, config.beta_step);
    Truncation truncation = config.truncation;
    if (config.auto_truncation)
        truncation = converge_truncation(config.model, config.parameters, grid, config.truncation).truncation;
    return {scan_curve(config.model, config.parameters, grid, truncation, normalization), truncation};
}

int cmd_scan(const RunConfig& config, std::ostream& out)
{
    const std::string csv_path = config.output_path.empty() ? "curve.csv" : config.output_path;
    const CurveRun run = compute_curve(config, config.normalization);

    ordered_json doc;
    doc["command"] = "scan";
    doc.update(provenance(config, run.truncation));
    doc["normalization"] = std::string(to_string(config.normalization));
    doc["csv"] = csv_path;
    doc["samples"] = run.curve.size();
    doc["peak"] = run.curve.peak();
    try {
        const VisibilityReport v = fringe_visibility(run.curve);
        doc["fringe_visibility"] = {{"visibility", v.visibility}, {"i_max", v.i_max}, {"i_min", v.i_min},
                                    {"sin_beta_max", v.sin_beta_max}, {"sin_beta_min", v.sin_beta_min}};
    } catch (const NumericalError&) {
        doc["fringe_visibility"] = nullptr;
    }

    std::ofstream csv(csv_path);
    if (!csv)
        throw DataError(csv_path + ": cannot open output file");
    write_curve_csv(csv, run.curve);
    csv.close();
    emit_json(doc, json_path_for(csv_path), out);
    out << "wrote " << csv_path << " (" << run.curve.size() << " samples)\n";
    return exit_ok;
}

int cmd_compare(const RunConfig& config, const std::string& data_path, std::ostream& out)
{
    const ExperimentDataset data = load_dataset(std::filesystem::path(data_path));
    const CurveRun run = compute_curve(config, Normalization::peak_one);
    const FitReport report = compare(run.curve, data);

    ordered_json doc;
    doc["command"] = "compare";
    doc["data"] = data_path;
    doc.update(provenance(config, run.truncation));
    doc["report"] = report_json(report);
    emit_json(doc, config.output_path, out);
    return exit_ok;
}

int cmd_fit(const RunConfig& config, const std::string& data_path, const std::vector<FitParameter>& free,
            std::ostream& out, std::ostream& err)
{
    const ExperimentDataset data = load_dataset(std::filesystem::path(data_path));
    FitOptions options;
    options.model = config.model;
    options.truncation = config.truncation;
    if (config.auto_truncation)
        options.truncation = converge_truncation(config.model, config.parameters,
                                                 beta_grid(config.beta_min, config.beta_max, config.beta_step),
                                                 config.truncation)
                                 .truncation;
    const FitResult fit = fit_parameters(data, free, config.parameters, options);

    RunConfig fitted = config;
    fitted.parameters = fit.parameters;

    ordered_json doc;
    doc["command"] = "fit";
    doc["data"] = data_path;
    doc.update(provenance(fitted, options.truncation));
    doc["status"] = fit.report.converged ? "converged" : "warning: iteration cap reached";
    doc["report"] = report_json(fit.report);
    ordered_json warnings = ordered_json::array();
    for (const auto& [name, status] : fit.report.identifiability) {
        if (status == Identifiability::unidentifiable)
            warnings.push_back(name + " is structurally unidentifiable under peak-one normalization");
        else if (status == Identifiability::ratio_only)
            warnings.push_back(name + " is determined only through c1*A1/(c2*A2) relative to the fixed parameters");
    }
    doc["warnings"] = warnings;
    emit_json(doc, config.output_path, out);
    if (!fit.report.converged)
        err << "warning: fit stopped at the iteration cap; best parameters so far were reported\n";
    return exit_ok;
}
} // namespace

void RunConfig::validate() const
{
    if (!(beta_step > 0.0))
        throw ConfigError("beta_step", "must be positive");
    if (!(beta_min < beta_max))
        throw ConfigError("beta_min", "must be below beta_max");
    if (!(beta_min > -1.0))
        throw ConfigError("beta_min", "must be above -1");
    if (!(beta_max < 1.0))
        throw ConfigError("beta_max", "must be below 1");
    if (truncation.m_count < 1)
        throw ConfigError("truncation_m", "must be at least 1");
    if (truncation.n_count < 1)
        throw ConfigError("truncation_n", "must be at least 1");
    check_compatible(parameters.geometry, parameters.optics);
}

std::map<std::string, double> parameter_map(const ModelParameters& p)
{
    return {
        {"slit_width_a", p.geometry.width()},
        {"slit_length_b", p.geometry.length()},
        {"separation_d", p.geometry.separation()},
        {"thickness_c", p.geometry.thickness()},
        {"wavelength", p.optics.wavelength()},
        {"amplitude_a1", p.optics.amplitude_a1()},
        {"amplitude_a2", p.optics.amplitude_a2()},
        {"screen_distance", p.optics.screen_distance()},
        {"c1", p.weights.c1()},
        {"c2", p.weights.c2()},
        {"coherence_lambda", p.coherence.lambda_t()},
    };
}

RunConfig parse_config(std::istream& in, RunConfig base)
{
    std::map<std::string, double> physical = parameter_map(base.parameters);
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_number), "expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (physical.count(key))
            physical[key] = parse_double(key, value);
        else if (key == "model")
            base.model = parse_intensity_model(value);
        else if (key == "normalization")
            base.normalization = parse_normalization(value);
        else if (key == "beta_min")
            base.beta_min = parse_double(key, value);
        else if (key == "beta_max")
            base.beta_max = parse_double(key, value);
        else if (key == "beta_step")
            base.beta_step = parse_double(key, value);
        else if (key == "truncation_m")
            base.truncation.m_count = parse_int(key, value);
        else if (key == "truncation_n")
            base.truncation.n_count = parse_int(key, value);
        else if (key == "truncation")
            apply_truncation(base, value);
        else if (key == "output_path")
            base.output_path = value;
        else
            throw ConfigError(key, "unknown configuration key");
    }

    base.parameters = ModelParameters{
        ApertureGeometry{physical["slit_width_a"], physical["slit_length_b"], physical["separation_d"],
                         physical["thickness_c"]},
        OpticalSetup{physical["wavelength"], physical["amplitude_a1"], physical["amplitude_a2"],
                     physical["screen_distance"]},
        SuperpositionWeights{physical["c1"], physical["c2"]},
        CoherenceModel{physical["coherence_lambda"]},
    };
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config", path + ": cannot open configuration file");
    return parse_config(in, std::move(base));
}

void write_curve_csv(std::ostream& out, const IntensityCurve& curve)
{
    out << "sin_beta,intensity\n";
    for (const auto& s : curve.samples())
        out << format_number(s.sin_beta) << ',' << format_number(s.intensity) << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Double-slit diffraction intensity: modal quantum model, decoherence and classical reference"};
    app.require_subcommand(1);

    std::string config_path;
    std::string model_name;
    std::string out_path;
    std::string truncation_text;
    std::string normalize_name;
    std::string data_path;
    std::string free_text;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Flat key = value parameter file");
        sub->add_option("--model", model_name, "quantum-coherent, quantum-decoherent or classical");
        sub->add_option("--out", out_path, "Output path");
        sub->add_option("--truncation", truncation_text, "Mode counts M,N, or auto");
        sub->add_option("--normalize", normalize_name, "raw or peak-one");
    };
    CLI::App* scan = app.add_subcommand("scan", "Write an intensity curve as CSV plus a JSON provenance envelope");
    CLI::App* compare_cmd = app.add_subcommand("compare", "Compare a model curve with measured data");
    CLI::App* fit = app.add_subcommand("fit", "Fit free parameters to measured data");
    for (CLI::App* sub : {scan, compare_cmd, fit})
        add_common(sub);
    compare_cmd->add_option("--data", data_path, "Two-column CSV of sin_beta, intensity")->required();
    fit->add_option("--data", data_path, "Two-column CSV of sin_beta, intensity")->required();
    fit->add_option("--free", free_text, "Comma list from A1, A2, c1, c2, lambda_t")->required();

    std::vector<const char*> argv{"slitdiff"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        RunConfig config;
        if (!config_path.empty())
            config = load_config(config_path);
        if (!model_name.empty())
            config.model = parse_intensity_model(model_name);
        if (!normalize_name.empty())
            config.normalization = parse_normalization(normalize_name);
        if (!truncation_text.empty())
            apply_truncation(config, truncation_text);
        if (!out_path.empty())
            config.output_path = out_path;
        config.validate();

        if (scan->parsed())
            return cmd_scan(config, out);
        if (compare_cmd->parsed())
            return cmd_compare(config, data_path, out);
        return cmd_fit(config, data_path, parse_free_list(free_text), out, err);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const NumericalError& e) {
        err << "error: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_numerical;
    }
}

} // namespace slitdiff::cli
