#include <chrono>
#include <fstream>
#include <iostream>

#include "jkit/workspace.hpp"

namespace {

void print_usage(std::ostream& os) {
    os << "usage: jacobi-kit <definitions-file> <command...> [--json] [--lazy] [--emit <path>]\n"
          "\n"
          "commands:\n"
          "  verify jacobi|dj|contact|lcs <name> [--samples <grid>]\n"
          "  verify commute-diracization <entity> <one-form> --samples <grid>\n"
          "  verify commute-poissonization <jacobi> <one-form> --samples <grid>\n"
          "  verify algebroid-iso <jacobi> <one-form> --samples <grid>\n"
          "  gauge jacobi|contact|lcs|dj <name> --one-form <name> [--samples <grid>]\n"
          "  poissonize <jacobi>\n"
          "  groupoid pair <contact> [--gauge <one-form>] --samples <grid-on-total-chart>\n"
          "  glb canonical|compat <jacobi>\n"
          "  glb psi-b <jacobi> <one-form> --samples <grid>\n"
          "  gcs from-contact <contact> [--bfield <one-form>]\n"
          "\n"
          "exit codes: 0 all checks pass, 1 any FAIL, 2 input/usage error, 3 any UNDECIDED\n";
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h") {
        print_usage(args.empty() ? std::cerr : std::cout);
        return args.empty() ? 2 : 0;
    }
    bool json = false, lazy = false;
    std::string emit_path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--json") {
            json = true;
        } else if (args[i] == "--lazy") {
            lazy = true;
        } else if (args[i] == "--emit") {
            if (i + 1 >= args.size()) {
                std::cerr << "error: --emit needs a path\n";
                return 2;
            }
            emit_path = args[++i];
        } else {
            rest.push_back(args[i]);
        }
    }
    if (rest.size() < 2) {
        print_usage(std::cerr);
        return 2;
    }
    try {
        auto t0 = std::chrono::steady_clock::now();
        jkit::Workspace ws = jkit::load_workspace(rest[0], lazy);
        std::vector<std::string> cmd(rest.begin() + 1, rest.end());
        jkit::Report rep = jkit::run_command(ws, cmd);
        auto t1 = std::chrono::steady_clock::now();
        rep.elapsed_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        if (!emit_path.empty()) {
            if (rep.emitted.empty()) {
                std::cerr << "error: this command does not emit structures\n";
                return 2;
            }
            std::ofstream out(emit_path);
            if (!out) {
                std::cerr << "error: cannot write " << emit_path << "\n";
                return 2;
            }
            out << rep.emitted;
        }
        std::cout << (json ? jkit::render_json(rep) : jkit::render_text(rep));
        return jkit::report_exit_code(rep);
    } catch (const jkit::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const jkit::Inconclusive& e) {
        std::cerr << "undecided: " << e.what() << "\n";
        return 3;
    } catch (const jkit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
