#ifndef ADIC_REPORT_HPP
#define ADIC_REPORT_HPP

#include <json.hpp>

#include "adic/cech.hpp"

namespace adic {

/* deterministic machine-readable reports: field order is fixed by using
 * ordered json throughout, and the canonical input hash excludes timing */

using Json = nlohmann::ordered_json;

inline const char* engine_version()
{
    return "1.0.0";
}

inline Json json_of(const ProZeroCertificate& c)
{
    Json j;
    j["certified"] = c.certified;
    Json pairs = Json::array();
    for (auto& [i, jj] : c.pairs)
        pairs.push_back(Json::array({i, jj}));
    j["pairs"] = pairs;
    j["beyondCap"] = c.beyond_cap;
    j["maxOffset"] = c.max_offset();
    return j;
}

inline Json json_of(const WprCertificate& c)
{
    Json j;
    j["certified"] = c.certified;
    Json per;
    for (auto& [k, cert] : c.per_degree)
        per[std::to_string(k)] = json_of(cert);
    j["perDegree"] = per;
    j["note"] = c.note;
    return j;
}

inline Json json_of(const VerifyReport& r, std::size_t max_cells = 2048)
{
    Json j;
    j["verdict"] = r.verdict.empty() ? (r.pass ? "pass" : "fail") : r.verdict;
    j["pass"] = r.pass;
    if (!r.notes.empty())
        j["notes"] = r.notes;
    Json cells = Json::array();
    std::size_t emitted = 0;
    for (auto& c : r.cells) {
        if (emitted >= max_cells)
            break;
        Json cj;
        cj["k"] = c.k;
        cj["d"] = c.d;
        cj["pass"] = c.pass;
        if (!c.note.empty())
            cj["note"] = c.note;
        cells.push_back(cj);
        ++emitted;
    }
    j["cells"] = cells;
    return j;
}

template <class K>
Json json_of_quasi_iso(const QuasiIsoReport<K>& q)
{
    Json j;
    j["quasiIso"] = q.is_quasi_iso;
    Json f = Json::array();
    for (auto& fl : q.failures) {
        Json e;
        e["degree"] = fl.degree;
        e["reason"] = fl.reason;
        e["witness"] = fl.witness;
        f.push_back(e);
    }
    j["failures"] = f;
    return j;
}

} // namespace adic

#endif
