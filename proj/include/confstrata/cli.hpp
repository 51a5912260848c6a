#pragma once

// Command-line front end: configuration, caps, report emission.

#include <iosfwd>
#include <optional>
#include <string>

#include "confstrata/weightalg.hpp"

namespace confstrata::cli {

enum class Command {
    forests,
    nests,
    strata,
    deltafin_check,
    con,
    blowup_validate,
    forget_centers,
    purity,
    hilbert,
    koszul,
};

enum class Format { json, text, dot };

std::string to_string(Command c);
std::optional<Command> parse_command(const std::string& name);

inline constexpr const char* kSchema = "confstrata.report/1";
inline constexpr int kMaxPoints = 6;
inline constexpr int kMaxTruncation = 40;
inline constexpr int kMaxLevel = 4;
inline constexpr int kMaxSize = 4;

struct RunConfig {
    Command command = Command::forests;
    std::optional<int> n;
    int d = 1;
    int max_level = 3;
    int max_size = 3;
    std::optional<int> max_degree;
    std::string input;   // primary JSON input
    std::string order;   // blow-up order JSON
    std::string output;  // report destination; empty means the output stream
    std::string dot;     // DOT artifact
    std::string log;     // sidecar log with timestamps
    Format format = Format::text;
    bool count = false;
    bool list = false;
    bool check_functor = false;
    bool selftest = false;
    bool unsafe_no_cap = false;
    weightalg::RelationOptions relations;
};

// Throws CapExceeded when a limit is past the hard caps and the override is off.
void check_caps(const RunConfig& config);

// 0 success, 1 input error or cap exceeded, 2 hypothesis refusal.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

struct ParseResult {
    std::optional<RunConfig> config;
    int exit_code = 0;  // meaningful when config is empty (help or usage error)
};

ParseResult parse_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::string sha256_hex(const std::string& bytes);

}  // namespace confstrata::cli
