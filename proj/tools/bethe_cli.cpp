/*
   Copyright 2026 The bethe-xxx Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Batch driver: runs the verification suites on a JSON configuration and
// writes a JSON report. Exit codes: 0 pass, 1 verification failure, 2 solver
// nonconvergence, 64 configuration error.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "bethe/io.hpp"
#include "bethe/suites.hpp"

namespace {

constexpr int kConfigError = 64;

struct Options {
    std::string config;
    std::string out;
    std::string mode;
    std::string csv;
};

void write_csv(const std::string& path, const bethe::Section& spectrum) {
    std::ofstream os(path);
    if (!os) throw bethe::ConfigError("cannot write '" + path + "'");
    os.precision(17);
    os << "solution,k,u_re,u_im,value_re,value_im\n";
    for (const auto& row : spectrum.extra.at("table"))
        os << row[0].get<int>() << ',' << row[1].get<int>() << ',' << row[2][0].get<double>() << ',' << row[2][1].get<double>() << ','
           << row[3][0].get<double>() << ',' << row[3][1].get<double>() << '\n';
}

int run(const std::string& command, const Options& opt) {
    auto cfg = bethe::load_config(opt.config);
    if (!opt.mode.empty()) {
        try {
            cfg.mode = bethe::parse_mode(opt.mode);
        } catch (const std::invalid_argument& e) {
            throw bethe::ConfigError(e.what());
        }
    }
    const bool exact = cfg.mode == bethe::Mode::exact;
    const bool everything = command == "all";
    std::vector<bethe::Section> sections;

    if (command == "verify-algebra" || everything) {
        if (everything && !exact) {
            sections.push_back({"verify-algebra", {}, false, bethe::Json::object()});
            sections.back().skip("suite", "exact mode only");
        } else {
            sections.push_back(bethe::cmd_verify_algebra(cfg));
        }
    }
    if (command == "spectrum" || command == "fiber" || everything) {
        const auto solved = bethe::solve_config(cfg);
        if (command == "spectrum" || everything) sections.push_back(bethe::cmd_spectrum(cfg, solved));
        if (command == "fiber" || everything) sections.push_back(bethe::cmd_fiber(cfg, solved));
    }
    if (command == "characters" || everything) {
        if (everything && !exact) {
            sections.push_back({"characters", {}, false, bethe::Json::object()});
            sections.back().skip("suite", "exact mode only");
        } else {
            sections.push_back(bethe::cmd_characters(cfg));
        }
    }

    if (!opt.csv.empty()) {
        auto it = std::find_if(sections.begin(), sections.end(), [](const auto& s) { return s.command == "spectrum"; });
        if (it == sections.end()) throw bethe::ConfigError("--csv needs the spectrum command");
        write_csv(opt.csv, *it);
    }

    const auto report = bethe::make_report(cfg, sections);
    const std::string out = opt.out.empty() ? cfg.output : opt.out;
    if (out.empty()) {
        std::cout << report.dump(2) << '\n';
    } else {
        std::ofstream os(out);
        if (!os) throw bethe::ConfigError("cannot write '" + out + "'");
        os << report.dump(2) << '\n';
    }
    for (const auto& s : sections)
        for (const auto& c : s.checks) std::cerr << s.command << ' ' << c.name << ": " << bethe::to_string(c.status) << '\n';
    return bethe::exit_code(sections);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bethe ansatz and discrete Wronskian verification driver"};
    app.require_subcommand(1);
    Options opt;
    for (const char* name : {"verify-algebra", "spectrum", "fiber", "characters", "all"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", opt.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opt.out, "report path (default: config 'output', else stdout)");
        sub->add_option("--mode", opt.mode, "arithmetic mode override")->check(CLI::IsMember({"exact", "float"}));
        if (std::string(name) == "spectrum" || std::string(name) == "all") sub->add_option("--csv", opt.csv, "eigenvalue table as CSV");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }
    try {
        return run(app.get_subcommands().front()->get_name(), opt);
    } catch (const bethe::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
}
