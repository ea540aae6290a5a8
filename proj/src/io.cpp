#include "symchord/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace symchord {

std::string format_double(double v)
{
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

nlohmann::json to_json(const Chord& ch)
{
    return {{"schema_version", kSchemaVersion},
            {"system", ch.system},
            {"involution", ch.involution},
            {"involution_end", ch.involution_end},
            {"tau", ch.tau},
            {"s", ch.s},
            {"branch", ch.branch},
            {"T", ch.T},
            {"eta", ch.eta},
            {"m", ch.m},
            {"nondegenerate", ch.nondegenerate},
            {"residual", ch.residual}};
}

Chord chord_from_json(const nlohmann::json& j)
{
    Chord ch;
    ch.system = j.at("system").get<std::string>();
    ch.involution = j.at("involution").get<std::string>();
    ch.involution_end = j.value("involution_end", ch.involution);
    ch.tau = j.at("tau").get<double>();
    ch.s = j.at("s").get<double>();
    ch.branch = j.value("branch", -1);
    ch.T = j.at("T").get<double>();
    ch.eta = j.value("eta", 0.0);
    ch.m = j.value("m", 1);
    ch.nondegenerate = j.value("nondegenerate", true);
    ch.residual = j.value("residual", 0.0);
    return ch;
}

nlohmann::json to_json(const IndexResult& idx)
{
    nlohmann::json crossings = nlohmann::json::array();
    for (const auto& c : idx.crossings)
        crossings.push_back({{"t", c.t}, {"sign", c.sign}});
    return {{"schema_version", kSchemaVersion},
            {"mu_rs_x2", idx.mu_rs_x2},
            {"mu_x2", idx.mu_x2},
            {"crossings", crossings},
            {"degeneracy_measure", idx.degeneracy_measure},
            {"degenerate_interior", idx.degenerate_interior}};
}

nlohmann::json to_json(const ReversibilityReport& rep)
{
    return {{"schema_version", kSchemaVersion},
            {"samples", rep.samples},
            {"f_invariance", rep.max_f_invariance},
            {"involution", rep.max_involution},
            {"antisymplectic", rep.max_antisymplectic},
            {"liouville_pullback", rep.max_liouville_pullback},
            {"flow_reversal", rep.max_flow_reversal},
            {"chart_residual", rep.max_chart_residual},
            {"worst", rep.worst()}};
}

namespace {

const char* kind_name(EventKind k)
{
    switch (k) {
        case EventKind::IndexJump: return "index-jump";
        case EventKind::Fold: return "fold";
        case EventKind::Termination: return "family-termination";
    }
    return "unknown";
}

}  // namespace

nlohmann::json to_json(const BifurcationEvent& ev)
{
    return {{"tau_star", ev.tau_star},
            {"kind", kind_name(ev.kind)},
            {"jump_x2", ev.jump_x2},
            {"chord", to_json(ev.chord)}};
}

nlohmann::json to_json(const SymmetryReport& rep)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : rep.verdicts)
        out.push_back({{"involution", v.involution},
                       {"symmetric", v.symmetric},
                       {"distance", v.distance}});
    return out;
}

nlohmann::json to_json(const DiagramForest& forest)
{
    nlohmann::json records = nlohmann::json::array();
    for (const auto& rec : forest.records) {
        nlohmann::json branches = nlohmann::json::array();
        for (std::size_t i = 0; i < rec.branches.size(); ++i) {
            const auto& fam = rec.branches[i];
            nlohmann::json b = {{"cover", fam.cover},
                                {"points", fam.points.size()}};
            if (!fam.points.empty()) b["seed"] = to_json(fam.points.front().chord);
            if (i < rec.symmetry.size()) b["symmetry"] = to_json(rec.symmetry[i]);
            branches.push_back(std::move(b));
        }
        records.push_back({{"event", to_json(rec.event)}, {"branches", branches}});
    }
    return {{"schema_version", kSchemaVersion},
            {"cover", forest.root.cover},
            {"involution", forest.root.involution},
            {"root_points", forest.root.points.size()},
            {"events", records}};
}

nlohmann::json to_json(const GradedZ2Complex& cx)
{
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : cx.generators)
        gens.push_back({{"label", g.label}, {"degree", g.degree}});
    nlohmann::json bnd = nlohmann::json::array();
    for (const auto& [i, j] : cx.boundary) bnd.push_back({i, j});
    return {{"schema_version", kSchemaVersion}, {"generators", gens}, {"boundary", bnd}};
}

GradedZ2Complex complex_from_json(const nlohmann::json& j)
{
    GradedZ2Complex cx;
    for (const auto& g : j.at("generators"))
        cx.generators.push_back({g.at("label").get<std::string>(), g.at("degree").get<int>()});
    for (const auto& e : j.at("boundary"))
        cx.boundary.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return cx;
}

nlohmann::json to_json(const HomologyProfile& profile)
{
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [d, h] : profile.dims) out[std::to_string(d)] = h;
    return out;
}

HomologyProfile profile_from_json(const nlohmann::json& j)
{
    HomologyProfile p;
    for (const auto& [key, value] : j.items()) {
        const int h = value.get<int>();
        if (h != 0) p.dims[std::stoi(key)] = h;
    }
    return p;
}

std::string families_csv(const std::vector<Family>& families)
{
    std::ostringstream out;
    out << "family_id,tau,s,T,eta,mu_x2,m\n";
    for (std::size_t id = 0; id < families.size(); ++id) {
        for (const auto& pt : families[id].points) {
            out << id << ',' << format_double(pt.tau) << ',' << format_double(pt.chord.s)
                << ',' << format_double(pt.chord.T) << ',' << format_double(pt.chord.eta)
                << ',' << pt.mu_x2 << ',' << pt.chord.m << '\n';
        }
    }
    return out.str();
}

namespace {

struct Bounds {
    double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    void include(double x, double y)
    {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    }
};

const char* palette(int mu_x2)
{
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    int idx = mu_x2 % 8;
    if (idx < 0) idx += 8;
    return colors[idx];
}

}  // namespace

std::string diagram_svg(const DiagramForest& forest, int width, int height)
{
    std::vector<const Family*> fams;
    fams.push_back(&forest.root);
    for (const auto& rec : forest.records)
        for (const auto& b : rec.branches) fams.push_back(&b);

    bool first = true;
    Bounds box;
    for (const Family* f : fams) {
        for (const auto& pt : f->points) {
            if (first) {
                box = Bounds{pt.tau, pt.tau, pt.chord.s, pt.chord.s};
                first = false;
            } else {
                box.include(pt.tau, pt.chord.s);
            }
        }
    }
    const double margin = 40.0;
    const double dx = std::max(box.x_hi - box.x_lo, 1e-12);
    const double dy = std::max(box.y_hi - box.y_lo, 1e-12);
    auto px = [&](double tau) { return margin + (tau - box.x_lo) / dx * (width - 2 * margin); };
    auto py = [&](double s) {
        return height - margin - (s - box.y_lo) / dy * (height - 2 * margin);
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<!-- symchord diagram v" << kSchemaVersion << " -->\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const Family* f : fams) {
        if (f->points.empty()) continue;
        // split the polyline at plateau boundaries so each run is colored by mu
        for (const auto& [i0, i1] : f->plateaus()) {
            svg << "<polyline fill=\"none\" stroke=\"" << palette(f->points[i0].mu_x2)
                << "\" stroke-width=\"1.5\" points=\"";
            for (int i = i0; i <= i1; ++i)
                svg << format_double(px(f->points[i].tau)) << ','
                    << format_double(py(f->points[i].chord.s)) << ' ';
            svg << "\"/>\n";
        }
    }
    for (const auto& rec : forest.records) {
        svg << "<circle cx=\"" << format_double(px(rec.event.tau_star)) << "\" cy=\""
            << format_double(py(rec.event.chord.s))
            << "\" r=\"4\" fill=\"black\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace symchord
