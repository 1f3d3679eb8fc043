#include "regcheck/report.hpp"

#include "regcheck/util.hpp"
#include "regcheck/ziparchive.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <stdexcept>

namespace regcheck::report {

using ordered_json = nlohmann::ordered_json;

std::string write_report_json(const ComplianceReport& report) {
    ordered_json j;
    j["model"] = {{"path", report.model_path}, {"hash", report.model_hash}};
    j["pack"] = {{"name", report.pack_name}, {"version", report.pack_version}};
    j["rules"] = ordered_json::array();
    for (const auto& r : report.rules)
        j["rules"].push_back({{"id", r.id},
                              {"topic", r.topic},
                              {"candidates", r.candidates},
                              {"findings", r.findings},
                              {"ms", r.ms}});
    j["findings"] = ordered_json::array();
    for (const auto& f : report.findings) {
        ordered_json expl = ordered_json::array();
        for (const auto& e : f.explanation)
            expl.push_back({{"role", e.role}, {"iri", e.iri}, {"guid", e.guid}});
        j["findings"].push_back({{"rule", f.rule_id},
                                 {"topic", f.topic},
                                 {"severity", f.severity},
                                 {"guid", f.target_guid},
                                 {"iri", f.target_iri},
                                 {"message", f.message},
                                 {"explanation", expl}});
    }
    j["diagnostics"] = ordered_json::array();
    for (const auto& d : report.diagnostics)
        j["diagnostics"].push_back({{"stage", d.stage}, {"message", d.message}});
    return j.dump(2) + "\n";
}

ComplianceReport read_report_json(const std::string& json_text) {
    ordered_json j = ordered_json::parse(json_text);
    ComplianceReport report;
    report.model_path = j.at("model").value("path", "");
    report.model_hash = j.at("model").value("hash", "");
    report.pack_name = j.at("pack").value("name", "");
    report.pack_version = j.at("pack").value("version", "");
    for (const auto& r : j.value("rules", ordered_json::array())) {
        RuleStats stats;
        stats.id = r.value("id", "");
        stats.topic = r.value("topic", "");
        stats.candidates = r.value("candidates", 0u);
        stats.findings = r.value("findings", 0u);
        stats.ms = r.value("ms", 0);
        report.rules.push_back(std::move(stats));
    }
    for (const auto& f : j.value("findings", ordered_json::array())) {
        Finding finding;
        finding.rule_id = f.value("rule", "");
        finding.topic = f.value("topic", "");
        finding.severity = f.value("severity", "");
        finding.target_guid = f.value("guid", "");
        finding.target_iri = f.value("iri", "");
        finding.message = f.value("message", "");
        for (const auto& e : f.value("explanation", ordered_json::array()))
            finding.explanation.push_back(
                {e.value("role", ""), e.value("iri", ""), e.value("guid", "")});
        report.findings.push_back(std::move(finding));
    }
    for (const auto& d : j.value("diagnostics", ordered_json::array()))
        report.diagnostics.push_back({d.value("stage", ""), d.value("message", "")});
    return report;
}

std::string finding_uuid(const std::string& rule_id, const std::string& guid) {
    std::string name = rule_id + "\x1f" + guid;
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(name.data(), name.size(), digest, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("uuid digest failed");
    digest[6] = static_cast<unsigned char>((digest[6] & 0x0f) | 0x50);  // name-based version
    digest[8] = static_cast<unsigned char>((digest[8] & 0x3f) | 0x80);
    std::string hex = hex_bytes(digest, 16);
    return hex.substr(0, 8) + "-" + hex.substr(8, 4) + "-" + hex.substr(12, 4) + "-" +
           hex.substr(16, 4) + "-" + hex.substr(20, 12);
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string markup_xml(const Finding& f, const std::string& uuid, bool include_components) {
    std::string xml = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<Markup>\n";
    xml += "  <Topic Guid=\"" + uuid + "\" TopicType=\"Issue\" TopicStatus=\"Open\">\n";
    xml += "    <Title>" + xml_escape(f.rule_id) + "</Title>\n";
    xml += "    <Description>" + xml_escape(f.message) + "</Description>\n";
    xml += "  </Topic>\n  <Viewpoints>\n    <Components>\n";
    if (include_components) {
        xml += "      <Component IfcGuid=\"" + xml_escape(f.target_guid) + "\" />\n";
        for (const auto& e : f.explanation)
            if (!e.guid.empty())
                xml += "      <Component IfcGuid=\"" + xml_escape(e.guid) + "\" />\n";
    }
    xml += "    </Components>\n  </Viewpoints>\n</Markup>\n";
    return xml;
}

}  // namespace

std::string write_bcf(const ComplianceReport& report, std::vector<dsl::Diagnostic>* diagnostics) {
    zip::Writer writer;
    writer.add("bcf.version",
               "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
               "<Version VersionId=\"2.1\"><DetailedVersion>2.1</DetailedVersion></Version>\n");
    for (const auto& f : report.findings) {
        std::string uuid = finding_uuid(f.rule_id, f.target_guid);
        bool has_guid = !f.target_guid.empty();
        if (!has_guid && diagnostics)
            diagnostics->push_back({"bcf", "finding for rule '" + f.rule_id + "' target <" +
                                               f.target_iri +
                                               "> has no GUID; component list left empty"});
        writer.add(uuid + "/markup.bcf", markup_xml(f, uuid, has_guid));
    }
    return writer.finish();
}

}  // namespace regcheck::report
