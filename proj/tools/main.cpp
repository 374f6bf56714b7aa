#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "nlx/experiment.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        nlx::ExperimentConfig cfg;
        if (args.size() == 2 && args[0] == "--config") {
            cfg = nlx::parse_config_file(args[1]);
        } else {
            cfg = nlx::parse_config(args);
        }
        const nlx::Report report = nlx::run_experiment(cfg);
        nlx::emit_report(report, cfg.format, cfg.out_path);
        return report.verdict == "FAIL" ? 2 : 0;
    } catch (const nlx::HelpRequested& help) {
        std::cout << help.text;
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
