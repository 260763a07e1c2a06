#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace qsusy {

inline constexpr const char* kVersion = "1.0.0";

enum class Outcome { Pass, Fail, Skipped };
std::string to_string(Outcome o);

struct CheckResult {
    std::string id;
    /// Short description of the identity or property being checked.
    std::string anchor;
    Outcome outcome = Outcome::Fail;
    double residual = 0.0;
    double millis = 0.0;
    std::string detail;
};

struct Summary {
    int pass = 0;
    int fail = 0;
    int skipped = 0;
    int total() const { return pass + fail + skipped; }
};

struct Report {
    std::uint64_t seed = 1;
    nlohmann::json config = nlohmann::json::object();
    std::vector<CheckResult> checks;

    Summary summary() const;
    /// 0 when nothing failed, 1 otherwise.
    int exit_code() const;
    /// Sorts checks by id; serialization calls this on a copy.
    void sort();
};

/// {meta: {seed, version, config}, checks: [...], summary: {pass, fail, skipped}}.
nlohmann::json to_json(const Report& r, bool timing = true);
std::string emit_json(const Report& r, bool timing = true);
std::string emit_markdown(const Report& r);

}  // namespace qsusy
