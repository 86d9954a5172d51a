#pragma once

#include "jkit/gencontact.hpp"
#include "jkit/glb.hpp"
#include "jkit/groupoid.hpp"

namespace jkit {

// Input or usage problems reported with exit code 2.
struct UsageError : Error {
    using Error::Error;
};

struct LcsData {
    Chart chart;
    Tensor omega;
    Tensor theta;
};

// Named entities parsed from one definition file.
struct Workspace {
    std::map<std::string, Chart> charts;
    std::map<std::string, Tensor> oneforms;
    std::map<std::string, Tensor> twoforms;
    std::map<std::string, JacobiStructure> jacobis;
    std::map<std::string, ContactForm> contacts;
    std::map<std::string, LcsData> lcss;
    std::map<std::string, std::vector<Point>> samples;

    const Chart& chart(const std::string& name) const;
    const Tensor& oneform(const std::string& name) const;
    const JacobiStructure& jacobi(const std::string& name) const;
    const ContactForm& contact(const std::string& name) const;
    const LcsData& lcs(const std::string& name) const;
    const std::vector<Point>& sample_grid(const std::string& name) const;
};

// Parses a definition file; eager invariant checks unless lazy.
Workspace load_workspace(const std::string& path, bool lazy);
Workspace parse_workspace(const std::string& text, bool lazy);

struct Check {
    std::string name;
    std::string status;  // PASS | FAIL | UNDECIDED
    std::string witness;
    std::string residue;
};

struct Report {
    std::string command;
    std::vector<Check> checks;
    long elapsed_ms = 0;
    std::string emitted;  // definition-grammar output for --emit
};

struct RunOptions {
    bool lazy = false;
    std::string emit_path;
};

// Dispatches one command; throws UsageError for unknown entities/commands.
Report run_command(Workspace& ws, const std::vector<std::string>& args);

int report_exit_code(const Report& r);
std::string render_text(const Report& r);
std::string render_json(const Report& r);

}  // namespace jkit
