#include "hfl/report.hpp"

#include <algorithm>
#include <sstream>

namespace hfl {

bool Report::ok() const { return failures() == 0; }

std::size_t Report::failures() const {
    return std::size_t(std::count_if(records.begin(), records.end(), [](const CheckRecord& r) { return !r.pass; }));
}

CheckRecord& Report::add(std::string id, std::string anchor) {
    CheckRecord r;
    r.id = std::move(id);
    r.anchor = std::move(anchor);
    records.push_back(std::move(r));
    return records.back();
}

void Report::merge(const Report& other, const std::string& prefix) {
    for (auto r : other.records) {
        if (!prefix.empty()) r.id = prefix + "/" + r.id;
        records.push_back(std::move(r));
    }
    for (auto it = other.timing.begin(); it != other.timing.end(); ++it)
        timing[prefix.empty() ? it.key() : prefix + "/" + it.key()] = it.value();
}

const CheckRecord* Report::find(const std::string& id) const {
    for (const auto& r : records)
        if (r.id == id) return &r;
    return nullptr;
}

Tally::Tally(Report& r, std::string id, std::string anchor) : rep_(r), idx_(r.records.size()) {
    r.add(std::move(id), std::move(anchor));
}

void Tally::check(bool ok, const std::string& witness) {
    auto& rec = record();
    ++rec.checked;
    if (!ok && rec.pass) {
        rec.pass = false;
        rec.witness = witness;
    }
}

nlohmann::json to_json(const Report& r, bool with_timing) {
    nlohmann::json j;
    j["schema"] = kReportSchema;
    j["status"] = r.ok() ? "pass" : "fail";
    j["summary"] = {{"records", r.records.size()}, {"failures", r.failures()}};
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& c : r.records) {
        nlohmann::json x;
        x["id"] = c.id;
        x["anchor"] = c.anchor;
        x["status"] = c.pass ? "pass" : "fail";
        x["checked"] = c.checked;
        if (!c.witness.empty()) x["witness"] = c.witness;
        if (!c.data.empty()) x["data"] = c.data;
        recs.push_back(std::move(x));
    }
    j["records"] = std::move(recs);
    if (with_timing) j["timing"] = r.timing;
    return j;
}

std::string render(const Report& r, bool with_timing) { return to_json(r, with_timing).dump(2) + "\n"; }

std::string summary(const Report& r) {
    std::ostringstream os;
    for (const auto& c : r.records)
        if (!c.pass) os << "FAIL " << c.id << " (" << c.anchor << "): " << c.witness << "\n";
    os << r.records.size() << " records, " << r.failures() << " failed\n";
    return os.str();
}

}  // namespace hfl
