#include "formred/formred.h"

#include "formred/bounds.hpp"
#include "formred/error.hpp"
#include "formred/reduction.hpp"
#include "formred/selftest.hpp"
#include "formred/serialize.hpp"

#include <cstring>
#include <memory>
#include <string>

using namespace formred;

struct fr_form {
    BinaryForm form;
};

struct fr_reduction {
    ReductionResult result;
    bool classic = false;
    double eps = 0;
};

struct fr_classification {
    Classification c;
    std::string tag;
    std::string label;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_code;

void clear_error() {
    last_error.clear();
    last_code.clear();
}

fr_status status_of(ErrorCode code) {
    switch (code) {
    case ErrorCode::NoConvergence:
    case ErrorCode::NonConvergentRoots:
    case ErrorCode::StepLimit:
    case ErrorCode::CovariantDrift:
    case ErrorCode::MatrixOverflow: return FR_ERR_CONVERGENCE;
    case ErrorCode::GrowthAssertionFailed: return FR_ERR_VIOLATION;
    default: return FR_ERR_INPUT;
    }
}

template <class F>
fr_status guarded(F&& body) {
    clear_error();
    try {
        return body();
    } catch (const Error& e) {
        last_error = e.what();
        last_code = std::string(to_string(e.code()));
        return status_of(e.code());
    } catch (const json::exception& e) {
        last_error = e.what();
        last_code = "MalformedInput";
        return FR_ERR_INPUT;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return FR_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return FR_ERR_INTERNAL;
    }
}

fr_status null_argument(const char* what) {
    last_error = std::string("null argument: ") + what;
    last_code = "InvalidArgument";
    return FR_ERR_INPUT;
}

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

fr_options options_or_default(const fr_options* opts) {
    fr_options o;
    fr_options_init(&o);
    return opts ? *opts : o;
}

RootFinderOptions root_options(const fr_options& o) {
    RootFinderOptions r;
    if (o.max_iter > 0) r.max_iter = o.max_iter;
    return r;
}

SolverOptions solver_options(double tol, int max_iter) {
    SolverOptions s;
    if (tol > 0) s.tolerance = tol;
    if (max_iter > 0) s.max_newton = max_iter;
    return s;
}

double eps_for(const fr_options& o, int n) { return o.eps > 0 ? o.eps : thresholds(n).minimum(); }

} // namespace

extern "C" {

void fr_options_init(fr_options* opts) {
    if (!opts) return;
    opts->eps = 0;
    opts->tol = SolverOptions{}.tolerance;
    opts->max_iter = RootFinderOptions{}.max_iter;
    opts->max_steps = ReduceOptions{}.max_steps;
    opts->classic = 0;
}

void fr_selftest_options_init(fr_selftest_options* opts) {
    if (!opts) return;
    opts->count = 1000;
    opts->seed = 42;
    opts->eps = 0;
    opts->threads = 0;
    opts->tol = SolverOptions{}.tolerance;
    opts->max_iter = SolverOptions{}.max_newton;
}

const char* fr_version(void) { return "0.1.0"; }

const char* fr_last_error(void) { return last_error.c_str(); }

const char* fr_last_error_code(void) { return last_code.c_str(); }

void fr_string_free(char* s) { std::free(s); }

fr_status fr_form_from_json(const char* text, const fr_options* opts, fr_form** out) {
    return guarded([&] {
        if (!text) return null_argument("text");
        if (!out) return null_argument("out");
        *out = new fr_form{parse_form(text, root_options(options_or_default(opts)))};
        return FR_OK;
    });
}

fr_status fr_form_from_coeffs(const double* coeffs, size_t count, const fr_options* opts, fr_form** out) {
    return guarded([&] {
        if (!coeffs && count) return null_argument("coeffs");
        if (!out) return null_argument("out");
        std::span<const double> c(coeffs, count);
        *out = new fr_form{BinaryForm::from_coeffs(c, root_options(options_or_default(opts)))};
        return FR_OK;
    });
}

fr_status fr_form_from_roots(const double* re, const double* im, size_t count, double leading, fr_form** out) {
    return guarded([&] {
        if ((!re || !im) && count) return null_argument("re/im");
        if (!out) return null_argument("out");
        std::vector<Complex> roots(count);
        for (size_t i = 0; i < count; ++i) roots[i] = {re[i], im[i]};
        *out = new fr_form{BinaryForm::from_roots(roots, leading)};
        return FR_OK;
    });
}

void fr_form_free(fr_form* form) { delete form; }

int fr_form_degree(const fr_form* form) { return form ? form->form.degree() : 0; }

int fr_form_infinite_roots(const fr_form* form) { return form ? form->form.infinite_roots() : 0; }

fr_status fr_form_roots(const fr_form* form, double* re, double* im, size_t capacity) {
    return guarded([&] {
        if (!form) return null_argument("form");
        auto roots = form->form.roots();
        if (capacity < roots.size()) throw Error(ErrorCode::InvalidArgument, "capacity below the finite root count");
        if (!re || !im) return null_argument("re/im");
        for (size_t i = 0; i < roots.size(); ++i) {
            re[i] = roots[i].real();
            im[i] = roots[i].imag();
        }
        return FR_OK;
    });
}

fr_status fr_form_to_json(const fr_form* form, char** out) {
    return guarded([&] {
        if (!form) return null_argument("form");
        if (!out) return null_argument("out");
        *out = dup_string(to_json(form->form).dump());
        return FR_OK;
    });
}

fr_status fr_covariant(const fr_form* form, const fr_options* opts, double* t, double* u) {
    return guarded([&] {
        if (!form) return null_argument("form");
        auto o = options_or_default(opts);
        UpperHalfPoint z = solve_covariant(form->form, solver_options(o.tol, o.max_iter)).z;
        if (t) *t = z.t;
        if (u) *u = z.u;
        return FR_OK;
    });
}

fr_status fr_covariant_json(const fr_form* form, const fr_options* opts, char** out) {
    return guarded([&] {
        if (!form) return null_argument("form");
        if (!out) return null_argument("out");
        auto o = options_or_default(opts);
        CovariantSolution s = solve_covariant(form->form, solver_options(o.tol, o.max_iter));
        json j = to_json(s);
        j["degree"] = form->form.degree();
        *out = dup_string(j.dump());
        return FR_OK;
    });
}

fr_status fr_reduce(const fr_form* form, const fr_options* opts, fr_reduction** out) {
    return guarded([&] {
        if (!form) return null_argument("form");
        if (!out) return null_argument("out");
        auto o = options_or_default(opts);
        ReduceOptions ro;
        if (o.max_steps > 0) ro.max_steps = o.max_steps;
        ro.solver = solver_options(o.tol, o.max_iter);
        const double eps = eps_for(o, form->form.degree());
        auto red = std::make_unique<fr_reduction>(fr_reduction{
            o.classic ? classic_reduce(form->form, ro) : cluster_reduce(form->form, eps, ro), o.classic != 0, eps});
        *out = red.release();
        return FR_OK;
    });
}

void fr_reduction_free(fr_reduction* red) { delete red; }

fr_status fr_reduction_form(const fr_reduction* red, fr_form** out) {
    return guarded([&] {
        if (!red) return null_argument("reduction");
        if (!out) return null_argument("out");
        *out = new fr_form{red->result.form};
        return FR_OK;
    });
}

void fr_reduction_matrix(const fr_reduction* red, int64_t out[4]) {
    if (!red || !out) return;
    const auto& g = red->result.trace.total;
    out[0] = g.a;
    out[1] = g.b;
    out[2] = g.c;
    out[3] = g.d;
}

void fr_reduction_final_z(const fr_reduction* red, double* t, double* u) {
    if (!red) return;
    if (t) *t = red->result.trace.final_z.t;
    if (u) *u = red->result.trace.final_z.u;
}

size_t fr_reduction_step_count(const fr_reduction* red) { return red ? red->result.trace.steps.size() : 0; }

fr_status fr_reduction_to_json(const fr_reduction* red, char** out) {
    return guarded([&] {
        if (!red) return null_argument("reduction");
        if (!out) return null_argument("out");
        const auto& tr = red->result.trace;
        auto st = fundamental_status(tr.final_z);
        json j = {{"method", red->classic ? "classic" : "cluster"},
                  {"form", to_json(red->result.form)},
                  {"matrix", to_json(tr.total)},
                  {"reduced", st.in_domain},
                  {"trace", to_json(tr)}};
        if (!red->classic) j["eps"] = red->eps;
        *out = dup_string(j.dump());
        return FR_OK;
    });
}

fr_status fr_classify(const fr_form* form, double eps, fr_classification** out) {
    return guarded([&] {
        if (!form) return null_argument("form");
        if (!out) return null_argument("out");
        if (!(eps > 0)) eps = thresholds(form->form.degree()).minimum();
        Classification c = classify(form->form, eps);
        *out = new fr_classification{c, std::string(to_string(c.tag)), std::string(short_label(c.tag))};
        return FR_OK;
    });
}

void fr_classification_free(fr_classification* c) { delete c; }

const char* fr_classification_tag(const fr_classification* c) { return c ? c->tag.c_str() : ""; }

const char* fr_classification_label(const fr_classification* c) { return c ? c->label.c_str() : ""; }

fr_status fr_classification_to_json(const fr_classification* c, char** out) {
    return guarded([&] {
        if (!c) return null_argument("classification");
        if (!out) return null_argument("out");
        *out = dup_string(to_json(c->c).dump());
        return FR_OK;
    });
}

fr_status fr_bounds_json(const fr_form* form, const fr_options* opts, char** out, size_t* violations) {
    return guarded([&] {
        if (!form) return null_argument("form");
        if (!out) return null_argument("out");
        auto o = options_or_default(opts);
        if (form->form.infinite_roots() > 0)
            throw Error(ErrorCode::InvalidArgument, "bounds need every root finite");
        auto roots = form->form.roots();
        const int n = form->form.degree();
        CovariantSolution s = solve_covariant(roots, solver_options(o.tol, o.max_iter));
        CatalogOptions co;
        if (o.eps > 0) {
            co.eps_values = {o.eps};
        } else {
            auto th = thresholds(n);
            for (double v : {th.majority_window, th.ratio_far, th.center_distance, th.real_product,
                             th.growth_majority, th.growth_half})
                co.eps_values.push_back(v);
        }
        auto reports = evaluate_catalog(roots, s.z, co);
        json arr = json::array();
        size_t bad = 0;
        for (const auto& r : reports) {
            bad += !r.holds;
            arr.push_back(to_json(r));
        }
        json j = {{"t", s.z.t}, {"u", s.z.u}, {"eps", co.eps_values}, {"evaluated", reports.size()},
                  {"violations", bad}, {"reports", arr}};
        if (violations) *violations = bad;
        *out = dup_string(j.dump());
        return FR_OK;
    });
}

fr_status fr_selftest_json(const fr_selftest_options* opts, char** out, size_t* violations, size_t* solver_failures) {
    return guarded([&] {
        if (!out) return null_argument("out");
        fr_selftest_options o;
        fr_selftest_options_init(&o);
        if (opts) o = *opts;
        SelftestOptions so;
        so.count = o.count;
        so.seed = o.seed;
        if (o.eps > 0) so.eps = o.eps;
        so.threads = o.threads;
        so.solver = solver_options(o.tol, o.max_iter);
        SelftestResult r = run_selftest(so);

        json statements = json::object();
        for (const auto& [name, t] : r.statements)
            statements[name] = {{"evaluated", t.evaluated}, {"violated", t.violated}};
        json tags = json::object();
        json first = json::object();
        for (CaseTag tag : kAllCaseTags) {
            auto it = r.tags.find(tag);
            tags[std::string(to_string(tag))] = it == r.tags.end() ? 0 : it->second;
            auto f = r.first_instance.find(tag);
            first[std::string(to_string(tag))] = f == r.first_instance.end() ? json(nullptr) : json(f->second);
        }
        json examples = json::array();
        for (const auto& v : r.examples) {
            json roots = json::array();
            for (Complex a : v.roots) roots.push_back({a.real(), a.imag()});
            examples.push_back({{"instance", v.instance}, {"family", to_string(v.family)},
                                {"report", to_json(v.report)}, {"roots", roots}});
        }
        json failures = json::array();
        for (const auto& [i, msg] : r.solver_failures) failures.push_back({{"instance", i}, {"error", msg}});
        json j = {{"count", r.instances}, {"seed", o.seed},         {"reports", r.reports},
                  {"violations", r.violations}, {"solver_failures", failures}, {"statements", statements},
                  {"tags", tags},          {"first_instance", first}, {"examples", examples},
                  {"seconds", r.seconds}};
        if (violations) *violations = r.violations;
        if (solver_failures) *solver_failures = r.solver_failures.size();
        *out = dup_string(j.dump());
        return FR_OK;
    });
}

} // extern "C"
