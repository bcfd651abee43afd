#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "chernweil/report.hpp"

namespace {

int run_one(const cw::ScenarioConfig& cfg, const std::string& format, const std::string& out) {
    cw::ReportDocument doc = cw::run_scenario(cfg);
    std::string body = cw::emit_report(doc, format);
    if (out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw cw::config_error("cannot open output file: " + out);
        f << body;
    }
    return doc.verdict_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical Chern-Weil localization checks on scenario manifolds"};
    app.require_subcommand(1);

    auto* list_cmd = app.add_subcommand("list", "list built-in scenarios");

    cw::ScenarioConfig cfg;
    std::string trunc, format = "text", out;
    auto* run_cmd = app.add_subcommand("run", "run one scenario");
    run_cmd->add_option("--scenario", cfg.name, "scenario name")->required();
    run_cmd->add_option("--resolution", cfg.resolution, "grid resolution per axis");
    run_cmd->add_option("--tube-radius", cfg.tube_radius, "tube radius override");
    run_cmd->add_option("--trunc", trunc, "truncation radii a,b");
    run_cmd->add_option("--tolerance", cfg.tolerance, "tolerance override for every check");
    run_cmd->add_option("--format", format, "text or json");
    run_cmd->add_option("--out", out, "write the report to a file");

    int all_res = 0;
    auto* all_cmd = app.add_subcommand("verify-all", "run every built-in scenario");
    all_cmd->add_option("--resolution", all_res, "grid resolution per axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (list_cmd->parsed()) {
            for (const auto& [name, summary] : cw::list_scenarios())
                std::cout << name << " - " << summary << "\n";
            return 0;
        }
        if (run_cmd->parsed()) {
            if (!trunc.empty()) {
                auto comma = trunc.find(',');
                if (comma == std::string::npos)
                    throw cw::config_error("--trunc expects two values a,b");
                cfg.trunc_a = std::stod(trunc.substr(0, comma));
                cfg.trunc_b = std::stod(trunc.substr(comma + 1));
            }
            return run_one(cfg, format, out);
        }
        // verify-all
        int exit_code = 0;
        for (const auto& [name, summary] : cw::list_scenarios()) {
            cw::ScenarioConfig c;
            c.name = name;
            c.resolution = all_res;
            cw::ReportDocument doc = cw::run_scenario(c);
            std::cout << emit_report(doc, "text") << "\n";
            if (!doc.verdict_pass()) exit_code = 1;
        }
        return exit_code;
    } catch (const cw::config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
