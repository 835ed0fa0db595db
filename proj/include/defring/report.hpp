#pragma once

#include "defring/cochain.hpp"
#include "defring/inputs.hpp"
#include "defring/pseudo.hpp"
#include "defring/transfer.hpp"

#include <json.hpp>

#include <string>

namespace defring {

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
    std::string command;
    std::string input;
    std::string quiver;
    std::string ring = "eps:1";
    int truncate = 0;      // 0: command default
    int max_arity = 0;     // 0: derived from the truncation
    int dmax = 0;           // 0: command default
    bool abelian = false;
    bool gma = false;
    std::string format = "json";
    int threads = 1;
};

struct Report {
    nlohmann::json doc;
    bool ok = true;
};

struct Pipeline {
    InputDocument doc;
    CochainComplex cx;
    Retract R;
    AInfStructure A;
};

CochainComplex build_complex(const Representation& rep, int dmax);
Pipeline build_pipeline(const InputDocument& doc, int dmax, int arity, Priority pr = Priority::Standard, bool extended = false);

nlohmann::json pseudo_payload(const Quiver& q, int N);

// Throws the library's error types; the caller maps them to exit codes.
Report run_command(const RunConfig& cfg);
std::string render(const Report& rep, const std::string& format);

} // namespace defring
