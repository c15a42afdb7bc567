// Copyright 2026 The vswsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "vswsim/engine.hpp"
#include "vswsim/estimator.hpp"
#include "vswsim/fabric.hpp"
#include "vswsim/mgmt.hpp"
#include "vswsim/scenario.hpp"

namespace {

vswsim::Scenario resolve_scenario(const std::string& ref) {
    constexpr const char* kPrefix = "builtin:";
    if (ref.rfind(kPrefix, 0) == 0) {
        return vswsim::builtin_scenario(ref.substr(std::string(kPrefix).size()));
    }
    return vswsim::load_scenario_file(ref);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

int run_simulate(const std::string& scenario_ref, const std::string& out_dir,
                 bool log_events, bool explain_latency) {
    vswsim::Scenario scenario = resolve_scenario(scenario_ref);
    vswsim::Engine engine(std::move(scenario));
    std::ofstream event_log;
    if (log_events && !out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        event_log.open(std::filesystem::path(out_dir) / "events.log");
        engine.on_event = [&event_log](vswsim::SimTime t, vswsim::EventKind kind,
                                       const std::string& detail) {
            event_log << t << " " << vswsim::to_string(kind);
            if (!detail.empty()) event_log << " " << detail;
            event_log << "\n";
        };
    }
    engine.trace_first_packet = explain_latency;
    engine.run();
    std::cout << engine.summary_text();
    if (explain_latency) {
        const auto& trace = engine.first_packet_trace();
        std::cout << "\nfirst packet timeline:\n";
        vswsim::SimTime prev = trace.empty() ? 0 : trace.front().at_ps;
        for (const auto& hop : trace) {
            std::cout << "  " << hop.label << " t=" << hop.at_ps << " ps (+"
                      << (hop.at_ps - prev) << ")\n";
            prev = hop.at_ps;
        }
        if (trace.size() >= 2) {
            std::cout << "  total " << (trace.back().at_ps - trace.front().at_ps)
                      << " ps from first arrival to delivery\n";
        }
    }
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        write_file(std::filesystem::path(out_dir) / "metrics.csv", engine.metrics_csv());
        write_file(std::filesystem::path(out_dir) / "summary.txt", engine.summary_text());
    }
    return engine.totals().conserved() ? 0 : 2;
}

int run_estimate(const std::string& deployment_ref, int lanes) {
    vswsim::LayerRates rates;
    rates.phy_lanes = lanes;
    std::vector<vswsim::PipelineSpec> deployment;
    vswsim::FabricCapacity cap;
    if (!deployment_ref.empty()) {
        vswsim::Scenario scenario = resolve_scenario(deployment_ref);
        cap = scenario.capacity;
        for (const auto& [slot, name] : scenario.deployments) {
            const vswsim::PipelineSpec* spec = scenario.find_pipeline(name);
            if (spec != nullptr) deployment.push_back(*spec);
        }
    }
    std::cout << vswsim::estimate_report(rates, deployment, cap);
    return 0;
}

int run_plan_fifos(int slots) {
    const auto inventory = vswsim::build_inventory(slots);
    std::cout << vswsim::tiling_report_csv(inventory, vswsim::default_macro_constraints());
    return 0;
}

int run_shell(const std::string& scenario_ref, const std::string& script) {
    vswsim::Scenario scenario =
        scenario_ref.empty() ? vswsim::Scenario{} : resolve_scenario(scenario_ref);
    vswsim::Engine engine(std::move(scenario));
    if (!script.empty()) {
        std::ifstream in(script);
        if (!in) {
            std::cerr << "cannot open script: " << script << "\n";
            return 1;
        }
        vswsim::cli_session(in, std::cout, engine);
        return 0;
    }
    vswsim::cli_session(std::cin, std::cout, engine);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic packet-level simulator of a hybrid "
                 "FPGA-ASIC switch-virtualization platform"};
    app.require_subcommand(1);

    std::string scenario_ref;
    std::string out_dir;
    bool log_events = false;
    bool explain_latency = false;
    auto* simulate = app.add_subcommand("simulate", "Run a scenario and report metrics");
    simulate->add_option("--scenario", scenario_ref,
                         "Scenario file or builtin:<name>")->required();
    simulate->add_option("--out", out_dir, "Directory for metrics.csv and summary.txt");
    simulate->add_flag("--log-events", log_events, "Write events.log to the out directory");
    simulate->add_flag("--explain-latency", explain_latency,
                       "Print the first packet's hop-by-hop timeline");

    std::string deployment_ref;
    int lanes = vswsim::kPhysicalLanes;
    auto* estimate = app.add_subcommand("estimate", "Print the layer throughput estimate");
    estimate->add_option("--deployment", deployment_ref,
                         "Scenario file or builtin:<name> naming the deployment");
    estimate->add_option("--lanes", lanes, "Active physical lanes");

    int slots = vswsim::kMaxSlots;
    auto* plan = app.add_subcommand("plan-fifos", "Print the FIFO tiling report");
    plan->add_option("--slots", slots, "Configured vS slots");

    std::string shell_scenario;
    std::string script;
    auto* shell = app.add_subcommand("shell", "Interactive management session");
    shell->add_option("--scenario", shell_scenario, "Scenario file or builtin:<name>");
    shell->add_option("--script", script, "Command file to execute instead of stdin");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            return run_simulate(scenario_ref, out_dir, log_events, explain_latency);
        }
        if (estimate->parsed()) return run_estimate(deployment_ref, lanes);
        if (plan->parsed()) return run_plan_fifos(slots);
        if (shell->parsed()) return run_shell(shell_scenario, script);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
