#include "sqrs/io.hpp"

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sqrs {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json phases_json(const ProbePreparation &p) {
    ordered_json a = ordered_json::array();
    for (EncodingPhase e : p.phases()) a.push_back(quarter_turns(e));
    return a;
}

ProbePreparation prep_from_json(const std::string &kind, const ordered_json &phases) {
    std::vector<EncodingPhase> ph;
    for (const auto &q : phases) {
        int v = q.get<int>();
        if (v < 0 || v > 3) throw std::runtime_error("phase must be 0..3 quarter turns");
        ph.push_back(encoding_from_quarter_turns(v));
    }
    if (kind == "separable") return ProbePreparation::separable(std::move(ph));
    if (kind == "entangled") {
        if (ph.size() != 1) throw std::runtime_error("entangled preparation needs exactly one phase");
        return ProbePreparation::entangled(ph[0]);
    }
    throw std::runtime_error("unknown prep kind '" + kind + "'");
}

ordered_json round_json(std::size_t index, const RoundTranscript &t) {
    ordered_json j;
    j["round_index"] = index;
    j["prep_kind"] = prep_kind_name(t.preparation.kind());
    j["prep_phases"] = phases_json(t.preparation);
    ordered_json bobs = ordered_json::array();
    for (const BobRecord &b : t.bob_records)
        bobs.push_back({{"applied", b.applied_phase}, {"basis", basis_name(b.basis)}, {"outcome", sign(b.outcome)}});
    j["bobs"] = std::move(bobs);
    j["detected"] = t.detected;
    if (!t.attack_record) {
        j["attack"] = nullptr;
        return j;
    }
    const EveRoundKnowledge &k = *t.attack_record;
    ordered_json a;
    a["resent_kind"] = prep_kind_name(k.resent_preparation.kind());
    a["resent_phases"] = phases_json(k.resent_preparation);
    if (k.measured_bases) {
        ordered_json mb = ordered_json::array(), mo = ordered_json::array();
        for (Basis b : *k.measured_bases) mb.push_back(basis_name(b));
        for (Outcome o : *k.measured_outcomes) mo.push_back(sign(o));
        a["measured_bases"] = std::move(mb);
        a["measured_outcomes"] = std::move(mo);
    } else {
        a["measured_bases"] = nullptr;
        a["measured_outcomes"] = nullptr;
    }
    j["attack"] = std::move(a);
    return j;
}

}  // namespace

void write_transcript_jsonl(std::ostream &os, std::span<const RoundTranscript> rounds) {
    for (std::size_t i = 0; i < rounds.size(); ++i) os << round_json(i, rounds[i]).dump() << '\n';
}

std::string transcript_to_jsonl(std::span<const RoundTranscript> rounds) {
    std::ostringstream os;
    write_transcript_jsonl(os, rounds);
    return os.str();
}

std::vector<RoundTranscript> read_transcript_jsonl(std::istream &is) {
    std::vector<RoundTranscript> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            auto j = ordered_json::parse(line);
            RoundTranscript t{prep_from_json(j.at("prep_kind").get<std::string>(), j.at("prep_phases")), {},
                              std::nullopt, j.at("detected").get<bool>()};
            for (const auto &b : j.at("bobs"))
                t.bob_records.push_back({b.at("applied").get<bool>(), parse_basis(b.at("basis").get<std::string>()),
                                         outcome_from_sign(b.at("outcome").get<int>())});
            const auto &a = j.at("attack");
            if (!a.is_null()) {
                EveRoundKnowledge k{prep_from_json(a.at("resent_kind").get<std::string>(), a.at("resent_phases")),
                                    std::nullopt, std::nullopt};
                if (!a.at("measured_bases").is_null()) {
                    std::vector<Basis> mb;
                    std::vector<Outcome> mo;
                    for (const auto &x : a.at("measured_bases")) mb.push_back(parse_basis(x.get<std::string>()));
                    for (const auto &x : a.at("measured_outcomes")) mo.push_back(outcome_from_sign(x.get<int>()));
                    k.measured_bases = std::move(mb);
                    k.measured_outcomes = std::move(mo);
                }
                t.attack_record = std::move(k);
            }
            out.push_back(std::move(t));
        } catch (const std::exception &e) {
            throw std::runtime_error("transcript line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void write_text_file(const std::string &path, const std::string &contents) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << contents;
    if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace sqrs
