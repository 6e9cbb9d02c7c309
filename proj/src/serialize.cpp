#include "formred/serialize.hpp"

#include "formred/error.hpp"

#include <cmath>
#include <limits>

namespace formred {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedInput, what); }

// nlohmann writes non-finite doubles as null
double number(const json& j, const char* what) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!j.is_number()) malformed(std::string(what) + " must be a number");
    return j.get<double>();
}

json pair_of(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_of(const json& j, const char* what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) malformed(std::string(what) + " must be [re, im]");
    return {number(j[0], what), number(j[1], what)};
}

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) malformed(std::string("missing key \"") + key + "\"");
    return *it;
}

std::optional<Relation> relation_from_string(std::string_view s) {
    for (Relation r : {Relation::Less, Relation::LessEqual, Relation::Greater, Relation::GreaterEqual})
        if (to_string(r) == s) return r;
    return std::nullopt;
}

json disk_json(const Disk& d) { return {{"center", pair_of(d.center)}, {"radius", d.radius}}; }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

} // namespace

json to_json(const BinaryForm& form) {
    json roots = json::array();
    for (Complex a : form.roots()) roots.push_back(pair_of(a));
    json j = {{"degree", form.degree()}, {"leading", form.leading()}, {"roots", roots}, {"coeffs", expand(form)}};
    if (form.infinite_roots() > 0) j["infinite_roots"] = form.infinite_roots();
    return j;
}

BinaryForm form_from_json(const json& j, const RootFinderOptions& opts) {
    if (!j.is_object()) malformed("form must be a JSON object");
    if (j.contains("roots")) {
        const json& r = j["roots"];
        if (!r.is_array()) malformed("\"roots\" must be an array");
        std::vector<Complex> roots;
        roots.reserve(r.size());
        for (const json& x : r) roots.push_back(complex_of(x, "root"));
        double leading = j.contains("leading") ? number(j["leading"], "leading") : 1.0;
        if (!std::isfinite(leading)) malformed("\"leading\" must be finite");
        int infinite = 0;
        if (j.contains("infinite_roots")) {
            if (!j["infinite_roots"].is_number_integer()) malformed("\"infinite_roots\" must be an integer");
            infinite = j["infinite_roots"].get<int>();
            if (infinite < 0) malformed("\"infinite_roots\" must be non-negative");
        }
        BinaryForm form = BinaryForm::from_projective_roots(roots, infinite, leading);
        if (j.contains("coeffs")) {
            auto given = j["coeffs"].get<std::vector<double>>();
            auto ours = expand(form);
            if (given.size() != ours.size() || relative_coeff_error(ours, given) > 1e-6)
                malformed("\"coeffs\" disagree with \"roots\"");
        }
        if (j.contains("degree") && j["degree"].get<int>() != form.degree()) malformed("\"degree\" disagrees with roots");
        return form;
    }
    if (j.contains("coeffs")) {
        const json& c = j["coeffs"];
        if (!c.is_array()) malformed("\"coeffs\" must be an array");
        std::vector<double> coeffs;
        coeffs.reserve(c.size());
        for (const json& x : c) {
            double v = number(x, "coefficient");
            if (!std::isfinite(v)) malformed("coefficients must be finite");
            coeffs.push_back(v);
        }
        return BinaryForm::from_coeffs(coeffs, opts);
    }
    malformed("form needs \"coeffs\" or \"roots\"");
}

BinaryForm parse_form(std::string_view text, const RootFinderOptions& opts) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        malformed(e.what());
    }
    try {
        return form_from_json(j, opts);
    } catch (const json::exception& e) {
        malformed(e.what());
    }
}

json to_json(const UnimodularMatrix& g) { return json::array({json::array({g.a, g.b}), json::array({g.c, g.d})}); }

UnimodularMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 || j[1].size() != 2)
        malformed("matrix must be [[a,b],[c,d]]");
    return {j[0][0].get<std::int64_t>(), j[0][1].get<std::int64_t>(), j[1][0].get<std::int64_t>(),
            j[1][1].get<std::int64_t>()};
}

json to_json(UpperHalfPoint z) { return {{"t", z.t}, {"u", z.u}}; }

UpperHalfPoint point_from_json(const json& j) {
    if (!j.is_object()) malformed("point must be {\"t\":..,\"u\":..}");
    return {number(field(j, "t"), "t"), number(field(j, "u"), "u")};
}

json to_json(const ReductionTrace& trace) {
    json steps = json::array();
    for (const auto& s : trace.steps) {
        json step = {{"kind", to_string(s.kind)},
                     {"m", s.m},
                     {"z_before", to_json(s.z_before)},
                     {"z_after", to_json(s.z_after)},
                     {"u_growth", s.u_growth}};
        step["case"] = s.tag ? json(to_string(*s.tag)) : json(nullptr);
        step["label"] = s.tag ? json(short_label(*s.tag)) : json(nullptr);
        step["d1"] = optional_number(s.d1);
        steps.push_back(std::move(step));
    }
    return {{"steps", steps}, {"total", to_json(trace.total)}, {"final_z", to_json(trace.final_z)},
            {"warnings", trace.warnings}};
}

ReductionTrace trace_from_json(const json& j) {
    if (!j.is_object()) malformed("trace must be an object");
    ReductionTrace trace;
    for (const json& s : field(j, "steps")) {
        ReductionStep step;
        auto kind = step_kind_from_string(field(s, "kind").get<std::string>());
        if (!kind) malformed("unknown step kind");
        step.kind = *kind;
        step.m = field(s, "m").get<std::int64_t>();
        step.z_before = point_from_json(field(s, "z_before"));
        step.z_after = point_from_json(field(s, "z_after"));
        step.u_growth = number(field(s, "u_growth"), "u_growth");
        if (s.contains("case") && !s["case"].is_null()) {
            auto tag = case_tag_from_string(s["case"].get<std::string>());
            if (!tag) malformed("unknown case tag");
            step.tag = *tag;
        }
        if (s.contains("d1") && !s["d1"].is_null()) step.d1 = s["d1"].get<double>();
        trace.steps.push_back(step);
    }
    trace.total = matrix_from_json(field(j, "total"));
    trace.final_z = point_from_json(field(j, "final_z"));
    if (j.contains("warnings")) trace.warnings = j["warnings"].get<std::vector<std::string>>();
    return trace;
}

json to_json(const BoundReport& r) {
    json ctx = json::object();
    for (const auto& [k, v] : r.context) ctx[k] = v;
    return {{"name", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"relation", to_string(r.relation)},
            {"holds", r.holds}, {"context", ctx}};
}

BoundReport report_from_json(const json& j) {
    if (!j.is_object()) malformed("report must be an object");
    BoundReport r;
    r.name = field(j, "name").get<std::string>();
    r.lhs = number(field(j, "lhs"), "lhs");
    r.rhs = number(field(j, "rhs"), "rhs");
    auto rel = relation_from_string(field(j, "relation").get<std::string>());
    if (!rel) malformed("unknown relation");
    r.relation = *rel;
    r.holds = field(j, "holds").get<bool>();
    if (j.contains("context"))
        for (const auto& [k, v] : j["context"].items()) r.context.emplace_back(k, number(v, "context value"));
    return r;
}

json to_json(const Classification& c) {
    json out = {{"tag", to_string(c.tag)},
                {"label", short_label(c.tag)},
                {"eps", c.eps},
                {"eps_in_range", c.eps_in_range},
                {"k", c.k},
                {"center", pair_of(c.center)},
                {"r1", c.r1},
                {"r2", c.r2},
                {"c_dist", c.c_dist},
                {"ratio", c.ratio},
                {"product", c.product},
                {"ambiguous", c.ambiguous},
                {"notes", c.notes}};
    if (c.cluster)
        out["cluster"] = {{"k", c.cluster->k},
                          {"anchor", c.cluster->anchor},
                          {"indices", c.cluster->indices},
                          {"disk", disk_json(c.cluster->disk)}};
    if (c.split)
        out["split"] = {{"cluster_indices", c.split->cluster_indices},
                        {"complement_indices", c.split->complement_indices},
                        {"disk1", disk_json(c.split->disk1)},
                        {"disk2", disk_json(c.split->disk2)},
                        {"d1", optional_number(c.split->d1)},
                        {"d2", optional_number(c.split->d2)},
                        {"swapped", c.split->swapped}};
    if (c.refined) out["refined"] = disk_json(*c.refined);
    return out;
}

json to_json(const CovariantSolution& s) {
    return {{"t", s.z.t},
            {"u", s.z.u},
            {"residuals", {{"mass", s.residuals.mass}, {"balance", pair_of(s.residuals.balance)}}},
            {"scaled_residual", s.scaled_residual},
            {"newton_iterations", s.newton_iterations},
            {"used_fallback", s.used_fallback},
            {"uncertainty", s.uncertainty}};
}

} // namespace formred
