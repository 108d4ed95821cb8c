// bhmax: evolve the decoupled Maxwell field on the Schwarzschild exterior
// and verify its conservation laws and decay rates.
//
// Usage: bhmax <command> [--config <path>] [--out <dir>] [--resolution-scale <1|2|4>]
// Commands: evolve, verify, decay-fit, energy-report, static

#include <cstring>
#include <iostream>
#include <string>

#include "bhmax/commands.hpp"

namespace {

void usage(std::ostream& os) {
    os << "usage: bhmax <command> [--config <path>] [--out <dir>]"
          " [--resolution-scale <1|2|4>]\n"
          "commands:\n"
          "  evolve         full run: series, manifest, optional decay table\n"
          "  verify         identity/invariant suite; nonzero exit on failure\n"
          "  decay-fit      decay table over an existing run directory\n"
          "  energy-report  energy series only\n"
          "  static         static-charge oracle regression\n";
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage(std::cerr);
        return 2;
    }
    bhmax::CommandOptions opt;
    opt.command = argv[1];
    if (opt.command == "--help" || opt.command == "-h") {
        usage(std::cout);
        return 0;
    }
    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        auto next = [&](const char* flag) -> std::string {
            if (i + 1 >= argc) {
                std::cerr << "configuration error: missing value for " << flag << "\n";
                std::exit(2);
            }
            return argv[++i];
        };
        if (arg == "--config") opt.config_path = next("--config");
        else if (arg == "--out") opt.out_dir = next("--out");
        else if (arg == "--resolution-scale") opt.resolution_scale = std::atoi(next("--resolution-scale").c_str());
        else {
            std::cerr << "configuration error: unknown flag " << arg << "\n";
            usage(std::cerr);
            return 2;
        }
    }
    return bhmax::dispatch(opt, std::cout);
}
