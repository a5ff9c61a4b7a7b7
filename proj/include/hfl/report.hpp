#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

namespace hfl {

/// One verification outcome.  `anchor` names the statement being checked in words.
struct CheckRecord {
    std::string id;
    std::string anchor;
    bool pass = true;
    std::size_t checked = 0;
    std::string witness;
    nlohmann::json data = nlohmann::json::object();
};

struct Report {
    std::vector<CheckRecord> records;
    nlohmann::json timing = nlohmann::json::object();

    bool ok() const;
    std::size_t failures() const;
    CheckRecord& add(std::string id, std::string anchor);
    void merge(const Report& other, const std::string& prefix = {});
    const CheckRecord* find(const std::string& id) const;
};

/// Accumulates a pass/fail over many items, keeping the first failing witness.
class Tally {
public:
    Tally(Report& r, std::string id, std::string anchor);
    void check(bool ok, const std::string& witness);
    CheckRecord& record() { return rep_.records[idx_]; }

private:
    Report& rep_;
    std::size_t idx_;
};

inline constexpr const char* kReportSchema = "hfl-report/1";

nlohmann::json to_json(const Report& r, bool with_timing = true);
/// Indented JSON; byte-identical for identical records when timing is excluded.
std::string render(const Report& r, bool with_timing = true);
std::string summary(const Report& r);

}  // namespace hfl
