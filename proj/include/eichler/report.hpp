#pragma once

// Rendering of reports: canonical JSON (stable field order, rationals as
// "num/den" strings, ideals as {ell, kind, root}), human-readable text, and
// the sweep CSV row.  The JSON writer is the single source of the schema;
// parse + re-serialize is byte-identical.

#include <sstream>
#include <string>

#include <json.hpp>

#include "eichler/quaternion.hpp"

namespace eichler {

using ordered_json = nlohmann::ordered_json;

inline ordered_json ideal_to_json(const PrimeIdealF& P) {
    ordered_json j;
    j["ell"] = P.ell;
    j["kind"] = to_string(P.kind);
    if (P.kind != SplitKind::Inert) j["root"] = P.root;
    return j;
}

inline PrimeIdealF ideal_from_json(const ordered_json& j) {
    PrimeIdealF P;
    P.ell = j.at("ell").get<long>();
    std::string k = j.at("kind").get<std::string>();
    P.kind = (k == "split") ? SplitKind::Split : (k == "inert" ? SplitKind::Inert : SplitKind::Ramified);
    P.root = j.contains("root") ? j.at("root").get<long>() : -1;
    return P;
}

inline ordered_json report_to_json(const ClassNumberReport& rep, long d_F) {
    ordered_json j;
    j["p"] = rep.p;
    j["d_F"] = d_F;
    j["D"] = ordered_json::array();
    for (const auto& P : rep.D) j["D"].push_back(ideal_to_json(P));
    j["N"] = ordered_json::array();
    for (const auto& P : rep.N) j["N"].push_back(ideal_to_json(P));
    j["mass"] = rep.mass_value.str();
    j["contributions"] = ordered_json::array();
    for (const auto& c : rep.contributions) {
        ordered_json cj;
        cj["order"] = c.order;
        cj["field"] = c.field;
        cj["h"] = c.h_b;
        cj["w"] = c.w_b;
        cj["E"] = c.embedding;
        cj["term"] = c.term.str();
        j["contributions"].push_back(cj);
    }
    j["elliptic"] = rep.elliptic.str();
    j["h"] = rep.h_O;
    return j;
}

inline std::string report_to_json_string(const ClassNumberReport& rep, long d_F) {
    return report_to_json(rep, d_F).dump(2) + "\n";
}

inline std::string report_to_text(const ClassNumberReport& rep) {
    std::ostringstream os;
    os << "p = " << rep.p << "\nD =";
    if (rep.D.empty()) os << " (1)";
    for (const auto& P : rep.D) os << " " << P.str();
    os << "\nN =";
    if (rep.N.empty()) os << " (1)";
    for (const auto& P : rep.N) os << " " << P.str();
    os << "\nmass = " << rep.mass_value.str() << "\n";
    for (const auto& c : rep.contributions)
        os << "  " << c.order << " in " << c.field << ": h(B)=" << c.h_b << " w(B)=" << c.w_b
           << " E=" << c.embedding << " term=" << c.term.str() << "\n";
    os << "elliptic = " << rep.elliptic.str() << "\n";
    os << "h(O) = " << rep.h_O << "\n";
    return os.str();
}

inline std::string field_to_text(const RealQuadField& F) {
    std::ostringstream os;
    os << "F = Q(sqrt " << F.p << ")\n";
    os << "d_F = " << F.d_F << "\n";
    os << "eps = " << F.eps.str() << "\n";
    os << "N(eps) = " << F.norm_eps << "\n";
    if (F.p % 4 == 1) os << "varpi = " << F.varpi_ << "\n";
    os << "h(F) = " << F.h_F << "\n";
    os << "zeta_F(-1) = " << F.zeta_m1.str() << "\n";
    return os.str();
}

inline std::string orders_to_text(const std::vector<OrderInvariant>& inv) {
    std::ostringstream os;
    os << "order\tfield\tindex\tw(B)\th(B)\tconductor\n";
    for (const auto& B : inv) {
        os << B.name() << "\t" << B.field.name() << "\t" << B.index_in_OK << "\t" << B.w_b << "\t"
           << B.h_b << "\t";
        if (B.conductor_support.empty()) os << "(1)";
        for (const auto& P : B.conductor_support) os << P.str();
        if (B.support_provisional) os << " (provisional)";
        os << "\n";
    }
    return os.str();
}

// one row of the sweep CSV; the header is
// p,d_F,eps_a,eps_b,norm_eps,varpi,h_F,zeta_m1,h_K1,h_K2,h_K3,h_O_unramified
inline std::string sweep_csv_header() {
    return "p,d_F,eps_a,eps_b,norm_eps,varpi,h_F,zeta_m1,h_K1,h_K2,h_K3,h_O_unramified";
}

inline std::string sweep_csv_row(const RealQuadField& F, const std::vector<CMFieldDescriptor>& fields,
                                 long h_O_unramified) {
    std::ostringstream os;
    os << F.p << "," << F.d_F << "," << F.eps.a.get_str() << "," << F.eps.b.get_str() << ","
       << F.norm_eps << ",";
    if (F.p % 4 == 1) os << F.varpi_;
    os << "," << F.h_F << "," << F.zeta_m1.str() << ",";
    auto h_of = [&](CMTag t) -> std::string {
        for (const auto& K : fields)
            if (K.tag == t) return std::to_string(K.h_k);
        return "";
    };
    os << h_of(CMTag::K1) << "," << h_of(CMTag::K2) << "," << h_of(CMTag::K3) << "," << h_O_unramified;
    return os.str();
}

} // namespace eichler
