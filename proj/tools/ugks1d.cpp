// ugks1d: run a preset case or a convergence study and write CSV output.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ugks/config.hpp"
#include "ugks/errors.hpp"
#include "ugks/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

ugks::CaseConfig assemble(const std::string& case_name, const std::string& config_file,
                          const std::string& scheme, const std::vector<std::string>& sets) {
    ugks::CaseConfig cfg = ugks::preset(case_name);
    if (!config_file.empty()) ugks::apply_config_file(cfg, config_file);
    if (!scheme.empty()) cfg.scheme = scheme;
    for (const auto& s : sets) ugks::apply_assignment(cfg, s);
    ugks::validate(cfg);
    return cfg;
}

std::vector<int> parse_meshes(const std::string& text) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ugks::ConfigError("--meshes: bad entry '" + item + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D slab linear transport: UGKS, UGKS-M1, UGKS-M2 and a diffusion reference"};
    app.require_subcommand(1);

    std::string case_name = "convergence";
    std::string scheme;
    std::string config_file;
    std::vector<std::string> sets;
    std::string out_dir;

    auto* run = app.add_subcommand("run", "advance one case and write profiles and monitors");
    run->add_option("--case", case_name, "convergence | transport | intermediate | diffusion")
        ->required();
    run->add_option("--scheme", scheme, "ugks | ugks-m1 | ugks-m1-o2 | ugks-m2 | diffusion-ref");
    run->add_option("--config", config_file, "key = value file applied after the preset");
    run->add_option("--set", sets, "key=value override, repeatable");
    run->add_option("--out", out_dir, "output directory")->required();

    std::string meshes = "25,50,100,200,400";
    int ref_nx = 3200;
    auto* conv = app.add_subcommand("converge", "L2 self-convergence study on the convergence case");
    conv->add_option("--scheme", scheme, "scheme to study")->required();
    conv->add_option("--meshes", meshes, "comma-separated cell counts");
    conv->add_option("--ref", ref_nx, "reference cell count");
    conv->add_option("--config", config_file, "key = value file applied after the preset");
    conv->add_option("--set", sets, "key=value override, repeatable");
    conv->add_option("--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*run) {
            const auto cfg = assemble(case_name, config_file, scheme, sets);
            const auto rec = ugks::run_case(cfg);
            ugks::write_run(rec, out_dir);
            std::printf("%s/%s: %zu profiles, %zu steps, %.2f s -> %s\n", cfg.name.c_str(),
                        cfg.scheme.c_str(), rec.profiles.size(), rec.monitors.size() - 1,
                        rec.wall_seconds, out_dir.c_str());
        } else {
            const auto cfg = assemble("convergence", config_file, scheme, sets);
            const auto res = ugks::convergence_study(cfg, parse_meshes(meshes), ref_nx);
            std::filesystem::create_directories(out_dir);
            std::ofstream csv(std::filesystem::path(out_dir) / "convergence.csv");
            csv << "nx,dx,l2_error\n";
            csv.precision(17);
            csv << std::scientific;
            for (std::size_t k = 0; k < res.meshes.size(); ++k)
                csv << res.meshes[k] << "," << res.dx[k] << "," << res.errors[k] << "\n";
            std::ofstream(std::filesystem::path(out_dir) / "config.txt") << ugks::to_text(cfg);
            std::printf("%s: slope %.4f over %zu meshes (reference nx = %d)\n", cfg.scheme.c_str(),
                        res.slope, res.meshes.size(), res.reference_nx);
        }
    } catch (const ugks::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const ugks::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    }
    return 0;
}
