#include <set>
#include <sstream>

#include "json.hpp"
#include "sseq/convergence.hpp"
#include "sseq/frontend.hpp"

namespace sseq {

namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<int> system_degrees(const CESystem& sys)
{
    std::set<int> ts;
    for (auto& [ij, h] : sys.obj)
        for (int t : graded_degrees(h))
            ts.insert(t);
    return {ts.begin(), ts.end()};
}

std::string dim_label(const CoordObject& v)
{
    auto d = coord_dim(v);
    return d ? std::to_string(*d) : to_string(v);
}

ordered_json graded_json(const GradedObject& g)
{
    ordered_json out = ordered_json::object();
    for (int t : graded_degrees(g))
        out["t=" + std::to_string(t)] = to_string(g.at(t));
    return out;
}

ordered_json report_json(const ValidationReport& r)
{
    return {{"ok", r.ok}, {"checks", r.checks}, {"failures", r.failures}};
}

const char* mode_str(ConvMode m)
{
    switch (m) {
    case ConvMode::WEAK: return "weak";
    case ConvMode::CONVERGES: return "converges";
    case ConvMode::STRONG: return "strong";
    default: return "none";
    }
}

ordered_json certificate_json(const ConvergenceCertificate& cc)
{
    return {{"status", "attempted"},
            {"ok", cc.report.ok},
            {"mode", mode_str(cc.mode)},
            {"exhaustive", cc.exhaustive},
            {"hausdorff", cc.hausdorff},
            {"complete", cc.complete},
            {"checks", cc.report.checks},
            {"failures", cc.report.failures},
            {"target", graded_json(cc.target)},
            {"error", graded_json(cc.error)},
            {"W", graded_json(cc.W)}};
}

ordered_json wkappa_json(const WKappa& wk)
{
    return {{"status", "attempted"},
            {"ok", wk.report.ok},
            {"checks", wk.report.checks},
            {"failures", wk.report.failures},
            {"degree", wk.iso.deg},
            {"W", graded_json(wk.W)},
            {"ker_kappa", graded_json(wk.ker_kappa)},
            {"verdict", wk.report.ok ? "PASS" : "FAIL"}};
}

const char* side_name(Side s) { return s == Side::LEFT ? "left" : "right"; }

std::string to_string_lines(const GradedObject& g)
{
    if (graded_is_zero(g))
        return "0\n";
    std::ostringstream os;
    bool first = true;
    for (int t : graded_degrees(g)) {
        os << (first ? "" : "  +  ") << to_string(g.at(t)) << " @ t=" << t;
        first = false;
    }
    os << "\n";
    return os.str();
}

}  // namespace

std::string pages_csv(const CESystem& sys, int rmax)
{
    if (rmax <= 0)
        rmax = sys.b - sys.a + 2;
    std::ostringstream os;
    os << "r,s,t,descriptor,dim\n";
    for (int r = 1; r <= rmax; ++r)
        for (int s = sys.a; s <= sys.b; ++s) {
            PageEntry pe = page_objects(sys, r, s);
            for (int t : graded_degrees(pe.E)) {
                CoordObject v = pe.E.at(t);
                auto d = coord_dim(v);
                os << r << "," << s << "," << t << "," << to_string(v) << ","
                   << (d ? std::to_string(*d) : "inf") << "\n";
            }
        }
    return os.str();
}

std::string pages_svg(const CESystem& sys, int r)
{
    const int cw = 70, ch = 50, mx = 60, my = 40;
    std::vector<int> ts = system_degrees(sys);
    if (ts.empty())
        ts = {0};
    int tmin = ts.front(), tmax = ts.back();
    int ns = sys.b - sys.a + 1, nt = tmax - tmin + 1;
    auto X = [&](int s) { return mx + (s - sys.a) * cw + cw / 2; };
    auto Y = [&](int t) { return my + (tmax - t) * ch + ch / 2; };
    std::map<int, PageEntry> pe;
    for (int s = sys.a; s <= sys.b; ++s)
        pe.emplace(s, page_objects(sys, r, s));
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * mx + ns * cw
       << "\" height=\"" << 2 * my + nt * ch << "\">\n";
    os << "<defs><marker id=\"a\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\""
          " refY=\"3\" orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\"/></marker>"
          "</defs>\n";
    os << "<text x=\"" << mx << "\" y=\"" << my - 16 << "\" font-size=\"14\">page r="
       << r << "</text>\n";
    for (int s = sys.a; s <= sys.b; ++s)
        os << "<text x=\"" << X(s) - 4 << "\" y=\"" << 2 * my + nt * ch - 12
           << "\" font-size=\"11\">" << s << "</text>\n";
    for (int t = tmin; t <= tmax; ++t)
        os << "<text x=\"" << mx - 30 << "\" y=\"" << Y(t) + 4
           << "\" font-size=\"11\">" << t << "</text>\n";
    for (int s = sys.a; s <= sys.b; ++s) {
        if (s - r < sys.a)
            continue;
        GradedMap d = page_differential(sys, pe.at(s), pe.at(s - r));
        for (auto& [t, cm] : d.comp) {
            if (map_is_zero(cm))
                continue;
            os << "<line x1=\"" << X(s) << "\" y1=\"" << Y(t) << "\" x2=\""
               << X(s - r) << "\" y2=\"" << Y(t - 1)
               << "\" stroke=\"black\" marker-end=\"url(#a)\"/>\n";
        }
    }
    for (int s = sys.a; s <= sys.b; ++s)
        for (int t : graded_degrees(pe.at(s).E)) {
            os << "<circle cx=\"" << X(s) << "\" cy=\"" << Y(t)
               << "\" r=\"4\"/>\n";
            os << "<text x=\"" << X(s) + 7 << "\" y=\"" << Y(t) - 6
               << "\" font-size=\"10\">" << dim_label(pe.at(s).E.at(t))
               << "</text>\n";
        }
    os << "</svg>\n";
    return os.str();
}

std::string interchange_summary(const CESystem& sys, int probe)
{
    InterchangeData ic = compute_interchange(sys, probe);
    FourTerm ft = four_term_sequence(ic);
    std::ostringstream os;
    os << "interchange kappa: colim lim H -> lim colim H\n";
    os << "  CRH = " << to_string_lines(ic.CRH);
    os << "  RLD = " << to_string_lines(ic.RLD);
    os << "  CLL = " << to_string_lines(ic.CLL);
    os << "  LCL = " << to_string_lines(ic.LCL);
    os << "four-term 0 -> CRH -> RLD -> CLL -> LCL -> 0: "
       << (ft.report.ok ? "exact" : "FAILED") << " (" << ft.report.checks
       << " checks)\n";
    for (auto& f : ft.report.failures)
        os << "  failure: " << f << "\n";
    os << "kappa surjective: " << (ft.kappa_surjective ? "yes" : "no") << "\n";
    os << "ker(kappa) = " << to_string_lines(ft.ker_kappa);
    return os.str();
}

DiagnoseResult diagnose(const CESystem& sys, const ReportOptions& opt)
{
    int rmax = opt.rmax > 0 ? opt.rmax : sys.b - sys.a + 2;
    DiagnoseResult out;
    ordered_json doc;
    doc["digest"] = system_digest(sys);
    doc["system"] = {{"p", sys.p},
                     {"window", {sys.a, sys.b}},
                     {"endpoints",
                      {{"neg", sys.has_neg}, {"pos", sys.has_pos}}},
                     {"degrees", system_degrees(sys)}};
    ValidationReport vr = validate(sys);
    out.valid = vr.ok;
    doc["validation"] = report_json(vr);
    if (!vr.ok) {
        out.text = doc.dump(2) + "\n";
        return out;
    }

    ordered_json pages = ordered_json::object();
    for (int r = 1; r <= rmax; ++r) {
        ordered_json row = ordered_json::object();
        for (int s = sys.a; s <= sys.b; ++s) {
            PageEntry pe = page_objects(sys, r, s);
            if (!graded_is_zero(pe.E))
                row["s=" + std::to_string(s)] = graded_json(pe.E);
        }
        pages["r=" + std::to_string(r)] = row;
    }
    doc["pages"] = pages;

    LimitPage lp = limit_page(sys, sys.a, sys.b, opt.probe);
    ordered_json lpj = ordered_json::object();
    for (auto& [s, le] : lp.at_s) {
        if (graded_is_zero(le.Einf) && graded_is_zero(le.REinf))
            continue;
        lpj["s=" + std::to_string(s)] = {{"Einf", graded_json(le.Einf)},
                                         {"REinf", graded_json(le.REinf)},
                                         {"stabilized", le.stabilized}};
    }
    doc["limit_page"] = lpj;

    ordered_json couples = ordered_json::object();
    for (Side side : {Side::LEFT, Side::RIGHT}) {
        bool present = side == Side::LEFT ? sys.has_neg : sys.has_pos;
        if (!present) {
            couples[side_name(side)] = {{"status", "no endpoint"}};
            continue;
        }
        ExactCouple c = build_couple(sys, side);
        ValidationReport cv = validate_couple(c);
        CoupleLimits cl = couple_limits(c, opt.probe);
        couples[side_name(side)] = {
            {"valid", cv.ok},
            {"cc_colimit", cl.cc_colimit},
            {"cc_limit", cl.cc_limit},
            {"filtration_complete_hausdorff", cl.filt_lim_complete_hausdorff},
            {"Ainf", graded_json(cl.Ainf)},
            {"Alim", graded_json(cl.Alim)},
            {"RAlim", graded_json(cl.RAlim)}};
    }
    doc["couples"] = couples;

    InterchangeData ic = compute_interchange(sys, opt.probe);
    FourTerm ft = four_term_sequence(ic);
    doc["interchange"] = {{"triangles_ok", ic.triangles.ok},
                          {"four_term", report_json(ft.report)},
                          {"kappa_surjective", ft.kappa_surjective},
                          {"CRH", graded_json(ic.CRH)},
                          {"RLD", graded_json(ic.RLD)},
                          {"CLL", graded_json(ic.CLL)},
                          {"LCL", graded_json(ic.LCL)},
                          {"ker_kappa", graded_json(ft.ker_kappa)}};

    VanishingScan vs = kappa_vanishing_criterion(sys, sys.a, sys.b, rmax);
    ordered_json vsj = {{"global", vs.global == Verdict::APPLIES
                                       ? "APPLIES"
                                       : "NOT_APPLICABLE"},
                        {"certified_tail", vs.certified_tail}};
    if (vs.global == Verdict::APPLIES)
        vsj["region"] = {vs.region.first, vs.region.second};
    ordered_json per_t = ordered_json::object();
    for (auto& [t, v] : vs.per_t) {
        ordered_json e = {{"verdict", v == Verdict::APPLIES ? "APPLIES"
                                                            : "NOT_APPLICABLE"}};
        if (v == Verdict::APPLIES)
            e["region"] = {vs.region_t.at(t).first, vs.region_t.at(t).second};
        per_t["t=" + std::to_string(t)] = e;
    }
    vsj["per_t"] = per_t;
    doc["vanishing"] = vsj;

    if (opt.theorems) {
        ordered_json th = ordered_json::object();
        for (Side side : {Side::LEFT, Side::RIGHT}) {
            bool present = side == Side::LEFT ? sys.has_neg : sys.has_pos;
            std::string key = std::string("convergence_") + side_name(side);
            std::string wkey = std::string("w_kappa_") + side_name(side);
            if (!present) {
                th[key] = {{"status", "no endpoint"}};
                th[wkey] = {{"status", "no endpoint"}};
                continue;
            }
            ExactCouple c = build_couple(sys, side);
            CoupleLimits cl = couple_limits(c, opt.probe);
            if (cl.cc_colimit || cl.cc_limit) {
                try {
                    ObstructionData od = boardman_groups(c, opt.probe);
                    ConvergenceCertificate cc = cl.cc_limit
                                                    ? verify_limit_convergence(od)
                                                    : verify_colimit_convergence(od);
                    ordered_json cj = certificate_json(cc);
                    cj["kind"] = cl.cc_limit ? "limit" : "colimit";
                    th[key] = cj;
                    if (!cc.report.ok)
                        out.hypotheses_met = false;
                } catch (const HypothesesUnmet& e) {
                    th[key] = {{"status", "hypotheses unmet"}, {"error", e.what()}};
                    out.hypotheses_met = false;
                }
            } else {
                th[key] = {{"status", "not conditionally convergent"}};
            }
            try {
                WKappa wk = w_kappa_iso(sys, side, opt.probe);
                th[wkey] = wkappa_json(wk);
                if (!wk.report.ok)
                    out.hypotheses_met = false;
            } catch (const HypothesesUnmet& e) {
                th[wkey] = {{"status", "hypotheses unmet"}, {"error", e.what()}};
                out.hypotheses_met = false;
            }
        }
        doc["theorems"] = th;
    }
    doc["hypotheses_met"] = out.hypotheses_met;
    out.text = doc.dump(2) + "\n";
    return out;
}

}  // namespace sseq
