// formred command line front end, a thin shell over the C API

#include "formred/formred.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>

namespace {

using json = nlohmann::json;

struct Config {
    std::string input = "-";
    double eps = 0;
    double tol = 0;
    int max_iter = 0;
    int max_steps = 0;
    std::uint64_t seed = 42;
    std::size_t count = 1000;
    bool classic = false;
    bool plain = false;
};

struct Failure {
    int code;
    std::string message;
};

std::string read_input(const std::string& input) {
    if (!input.empty() && input.front() == '{') return input;
    if (input == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream f(input);
    if (!f) throw Failure{1, "cannot open " + input};
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int exit_code(fr_status s) { return s == FR_ERR_INTERNAL ? 1 : static_cast<int>(s); }

void check(fr_status s) {
    if (s != FR_OK) throw Failure{exit_code(s), fr_last_error()};
}

struct StringDeleter {
    void operator()(char* s) const { fr_string_free(s); }
};
using owned_string = std::unique_ptr<char, StringDeleter>;

json take_json(char* raw) {
    owned_string s(raw);
    return json::parse(s.get());
}

std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

// one "path value" line per leaf
void flatten(const json& j, const std::string& path, std::ostream& os) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, os);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), os);
    } else {
        os << path << ' ';
        if (j.is_number_float()) os << number(j.get<double>());
        else if (j.is_string()) os << j.get<std::string>();
        else if (j.is_null()) os << "nan";
        else os << j.dump();
        os << '\n';
    }
}

void emit(const json& j, const Config& cfg) {
    if (cfg.plain) flatten(j, "", std::cout);
    else std::cout << j.dump(2) << '\n';
}

fr_options options_of(const Config& cfg) {
    fr_options o;
    fr_options_init(&o);
    o.eps = cfg.eps;
    if (cfg.tol > 0) o.tol = cfg.tol;
    if (cfg.max_iter > 0) o.max_iter = cfg.max_iter;
    if (cfg.max_steps > 0) o.max_steps = cfg.max_steps;
    o.classic = cfg.classic;
    return o;
}

struct FormDeleter {
    void operator()(fr_form* f) const { fr_form_free(f); }
};
using form_ptr = std::unique_ptr<fr_form, FormDeleter>;

form_ptr load_form(const Config& cfg, const fr_options& o) {
    std::string text = read_input(cfg.input);
    fr_form* raw = nullptr;
    check(fr_form_from_json(text.c_str(), &o, &raw));
    return form_ptr(raw);
}

int run_covariant(const Config& cfg) {
    fr_options o = options_of(cfg);
    form_ptr form = load_form(cfg, o);
    char* out = nullptr;
    check(fr_covariant_json(form.get(), &o, &out));
    emit(take_json(out), cfg);
    return 0;
}

int run_reduce(const Config& cfg) {
    fr_options o = options_of(cfg);
    form_ptr form = load_form(cfg, o);
    fr_reduction* raw = nullptr;
    check(fr_reduce(form.get(), &o, &raw));
    std::unique_ptr<fr_reduction, void (*)(fr_reduction*)> red(raw, fr_reduction_free);
    char* out = nullptr;
    check(fr_reduction_to_json(red.get(), &out));
    emit(take_json(out), cfg);
    return 0;
}

int run_classify(const Config& cfg) {
    fr_options o = options_of(cfg);
    form_ptr form = load_form(cfg, o);
    fr_classification* raw = nullptr;
    check(fr_classify(form.get(), cfg.eps, &raw));
    std::unique_ptr<fr_classification, void (*)(fr_classification*)> c(raw, fr_classification_free);
    char* out = nullptr;
    check(fr_classification_to_json(c.get(), &out));
    emit(take_json(out), cfg);
    return 0;
}

int run_bounds(const Config& cfg) {
    fr_options o = options_of(cfg);
    form_ptr form = load_form(cfg, o);
    char* out = nullptr;
    std::size_t bad = 0;
    check(fr_bounds_json(form.get(), &o, &out, &bad));
    emit(take_json(out), cfg);
    return bad ? 3 : 0;
}

int run_selftest(const Config& cfg) {
    fr_selftest_options o;
    fr_selftest_options_init(&o);
    o.count = cfg.count;
    o.seed = cfg.seed;
    o.eps = cfg.eps;
    if (cfg.tol > 0) o.tol = cfg.tol;
    if (cfg.max_iter > 0) o.max_iter = cfg.max_iter;
    char* out = nullptr;
    std::size_t bad = 0, failed = 0;
    check(fr_selftest_json(&o, &out, &bad, &failed));
    json j = take_json(out);
    if (cfg.plain) {
        std::cout << "count " << j["count"] << "\nreports " << j["reports"] << "\nviolations " << j["violations"]
                  << "\nsolver_failures " << j["solver_failures"].size() << '\n';
        for (const auto& [name, t] : j["statements"].items())
            if (t["violated"].get<std::size_t>() > 0)
                std::cout << "violated " << name << ' ' << t["violated"] << '/' << t["evaluated"] << '\n';
        for (const auto& [tag, c] : j["tags"].items()) std::cout << "tag " << tag << ' ' << c << '\n';
        std::cout << "seconds " << number(j["seconds"].get<double>()) << '\n';
    } else {
        emit(j, cfg);
    }
    if (bad) return 3;
    return failed ? 2 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reduction of real binary forms under SL2(Z)", "formred"};
    app.require_subcommand(1);
    app.fallthrough();
    Config cfg;

    app.add_option("--eps", cfg.eps, "cluster scale (default: smallest threshold for the degree)")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol", cfg.tol, "covariant solver tolerance (default 1e-11)")->check(CLI::PositiveNumber);
    app.add_option("--max-iter", cfg.max_iter, "root finder and Newton iteration cap")->check(CLI::PositiveNumber);
    app.add_option("--max-steps", cfg.max_steps, "reduction step cap (default 64)")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "selftest seed");
    app.add_option("--count", cfg.count, "selftest instance count");
    app.add_flag("--classic", cfg.classic, "reduce with the classic translate/invert loop");
    auto* json_flag = app.add_flag("--json", "JSON output (default)");
    auto* plain_flag = app.add_flag("--plain", cfg.plain, "one value per line");
    json_flag->excludes(plain_flag);

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const Config&);
        bool takes_form;
    };
    const Command commands[] = {
        {"covariant", "covariant point and residuals", run_covariant, true},
        {"reduce", "reduce a form, printing form, matrix and trace", run_reduce, true},
        {"classify", "cluster case of the roots", run_classify, true},
        {"bounds", "evaluate every applicable inequality", run_bounds, true},
        {"selftest", "randomized inequality sweep", run_selftest, false},
    };
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const auto& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        if (c.takes_form) sub->add_option("input", cfg.input, "form JSON, file path, or - for stdin");
        subs.emplace_back(sub, &c);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        for (auto [sub, cmd] : subs)
            if (sub->parsed()) return cmd->run(cfg);
    } catch (const Failure& f) {
        std::cerr << "formred: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "formred: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
