// Command-line front end: pi0 / pi1 / verify / homotopy / validate-action
// over a finite commutative ring, with text or JSON reports.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "globact/covering.hpp"
#include "globact/kstab.hpp"
#include "globact/path.hpp"
#include "globact/ring.hpp"
#include "globact/unimodular.hpp"

using json = nlohmann::ordered_json;
using namespace globact;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitCap = 2;
constexpr int kExitUndecided = 3;
constexpr int kExitMathFail = 4;

struct Options {
    std::string ring_spec = "GF:2";
    std::uint32_t n = 3;
    std::size_t cap_closure = Caps{}.closure_max;
    std::size_t cap_steps = Caps{}.homotopy_max_steps;
    std::string format = "text";
    std::uint64_t seed = 0;
    std::string out_path;
    bool timing = false;
    bool cross_check = false;
    std::string path_file_a, path_file_b;
};

Caps make_caps(const Options& o) {
    Caps caps;
    caps.closure_max = o.cap_closure;
    caps.homotopy_max_steps = o.cap_steps;
    return caps;
}

void emit(const Options& o, const json& report, const std::string& text) {
    std::ostringstream body;
    if (o.format == "json")
        body << report.dump(2) << "\n";
    else
        body << text;
    if (o.out_path.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(o.out_path);
        f << body.str();
    }
}

json base_report(const Options& o, const std::string& command) {
    json j;
    j["schema"] = "globact-report/1";
    j["command"] = command;
    j["config"] = {{"ring", o.ring_spec},
                   {"n", o.n},
                   {"cap_closure", o.cap_closure},
                   {"cap_steps", o.cap_steps},
                   {"seed", o.seed}};
    return j;
}

json path_to_json(const UmAction& um, const Path& p) {
    json rows = json::array();
    for (Point pt : p.window) {
        json row = json::array();
        for (std::uint32_t v : um.rows[pt].entries) row.push_back(v);
        rows.push_back(row);
    }
    return json{{"ld", p.ld}, {"rows", rows}};
}

int cmd_pi0(const Options& o) {
    auto ring = FiniteRing::parse(o.ring_spec);
    Caps caps = make_caps(o);
    auto t0 = std::chrono::steady_clock::now();
    UmAction um = build_um_action(o.n, ring, caps);
    Pi0Result r = pi0(um.pointed.action, um.pointed.base);

    json j = base_report(o, "pi0");
    j["result"]["carrier_size"] = um.pointed.action.num_points;
    j["result"]["class_count"] = r.classes.size();
    j["result"]["base_class"] = *r.base_class;
    json cls = json::array();
    std::ostringstream text;
    text << "pi0(Um_" << o.n << "(" << o.ring_spec << ")): " << r.classes.size()
         << " class(es), carrier " << um.pointed.action.num_points << "\n";
    for (std::size_t i = 0; i < r.classes.size(); ++i) {
        json c;
        c["size"] = r.classes[i].size();
        c["representative"] = json::array();
        for (std::uint32_t v : um.rows[r.classes[i].front()].entries)
            c["representative"].push_back(v);
        cls.push_back(c);
        text << "  class " << i << ": size " << r.classes[i].size() << ", rep "
             << um.pointed.action.point_labels[r.classes[i].front()]
             << (r.base_class == i ? "  (base)" : "") << "\n";
    }
    j["result"]["classes"] = cls;
    if (o.timing)
        j["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    emit(o, j, text.str());
    return kExitOk;
}

int cmd_pi1(const Options& o) {
    auto ring = FiniteRing::parse(o.ring_spec);
    Caps caps = make_caps(o);
    auto t0 = std::chrono::steady_clock::now();
    Pi1Algebraic alg = pi1_algebraic(o.n, ring, caps);

    json j = base_report(o, "pi1");
    j["result"]["ep_order"] = alg.ep->size();
    j["result"]["ep2_order"] = alg.ep2->size();
    j["result"]["pi1_order"] = alg.pi1.order();
    j["result"]["table"] = alg.pi1.table;

    std::ostringstream text;
    text << "pi1(EUm_" << o.n << "(" << o.ring_spec << ")) = EP/(EP)_2: order "
         << alg.pi1.order() << "  (|EP| = " << alg.ep->size() << ", |(EP)_2| = " << alg.ep2->size()
         << ")\n";

    int rc = kExitOk;
    if (o.cross_check) {
        UmAction um = build_um_action(o.n, ring, caps);
        EumComponent eum = eum_component(um);
        Pi1SearchResult sr = pi1_by_search(eum.pointed, caps);
        j["result"]["cross_check"]["decided"] = sr.decided;
        j["result"]["cross_check"]["order"] = sr.order;
        j["result"]["cross_check"]["states"] = sr.states;
        j["result"]["cross_check"]["note"] = sr.note;
        if (!sr.decided) {
            text << "cross-check: undecided (" << sr.note << ")\n";
            rc = kExitUndecided;
        } else {
            GroupTable st;
            st.labels.assign(sr.order, "");
            st.table = sr.table;
            bool agree = tables_isomorphic(st, alg.pi1);
            j["result"]["cross_check"]["agrees"] = agree;
            text << "cross-check (homotopy search): order " << sr.order
                 << (agree ? ", agrees" : ", DISAGREES") << "\n";
            if (!agree) rc = kExitMathFail;
        }
    }
    if (o.timing)
        j["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    emit(o, j, text.str());
    return rc;
}

int cmd_verify(const Options& o) {
    auto ring = FiniteRing::parse(o.ring_spec);
    Caps caps = make_caps(o);
    auto t0 = std::chrono::steady_clock::now();
    SequenceReport rep = verify_sequence(o.n, ring, caps);

    json j = base_report(o, "verify");
    json checks = json::array();
    std::ostringstream text;
    text << "exact sequence checks for n = " << o.n << " over " << o.ring_spec << ":\n";
    for (const auto& c : rep.checks) {
        checks.push_back(json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        text << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
        if (!c.detail.empty()) text << "  [" << c.detail << "]";
        text << "\n";
    }
    j["result"]["checks"] = checks;
    j["result"]["all_pass"] = rep.all_pass();
    text << (rep.all_pass() ? "all checks passed\n" : "CHECK FAILURES PRESENT\n");
    if (o.timing)
        j["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
    emit(o, j, text.str());
    return rep.all_pass() ? kExitOk : kExitMathFail;
}

Path parse_path_file(const UmAction& um, const std::string& file) {
    std::ifstream f(file);
    if (!f) throw ConfigError("cannot open path file " + file);
    json j;
    try {
        f >> j;
    } catch (const std::exception& e) {
        throw ConfigError("malformed path file " + file + ": " + e.what());
    }
    json rows = j.is_array() ? j : j.value("rows", json::array());
    int ld = j.is_object() ? j.value("ld", 0) : 0;
    if (!rows.is_array() || rows.empty())
        throw ConfigError("path file " + file + " must hold a list of row vectors");
    std::vector<Point> window;
    for (const auto& row : rows) {
        std::vector<std::uint32_t> entries;
        for (const auto& v : row) entries.push_back(v.get<std::uint32_t>());
        auto pt = um.point_of(entries);
        if (!pt) throw ConfigError("row in " + file + " is not unimodular over the ring");
        window.push_back(*pt);
    }
    return make_path(um.pointed.action, std::move(window), ld);
}

int cmd_homotopy(const Options& o) {
    auto ring = FiniteRing::parse(o.ring_spec);
    Caps caps = make_caps(o);
    UmAction um = build_um_action(o.n, ring, caps);
    Path a = parse_path_file(um, o.path_file_a);
    Path b = parse_path_file(um, o.path_file_b);

    json j = base_report(o, "homotopy");
    std::ostringstream text;
    HomotopyResult r = stably_homotopic(um.pointed.action, a, b, caps);
    j["result"]["states"] = r.states;
    int rc = kExitOk;
    switch (r.status) {
        case HomotopyStatus::yes: {
            j["result"]["answer"] = "yes";
            json trace = json::array();
            for (const auto& row : r.trace.rows) trace.push_back(path_to_json(um, row));
            j["result"]["trace"] = trace;
            j["result"]["trace_valid"] = validate_trace(um.pointed.action, r.trace);
            text << "stably homotopic: yes (trace length " << r.trace.rows.size() << ")\n";
            break;
        }
        case HomotopyStatus::no:
            j["result"]["answer"] = "no";
            text << "stably homotopic: no (class exhausted, " << r.states << " states)\n";
            break;
        case HomotopyStatus::undecided:
            j["result"]["answer"] = "undecided";
            text << "stably homotopic: undecided within caps (" << r.states << " states)\n";
            rc = kExitUndecided;
            break;
    }
    emit(o, j, text.str());
    return rc;
}

int cmd_validate_action(const Options& o) {
    auto ring = FiniteRing::parse(o.ring_spec);
    Caps caps = make_caps(o);
    UmAction um = build_um_action(o.n, ring, caps);
    auto violations = validate(um.pointed.action);

    json j = base_report(o, "validate-action");
    j["result"]["carrier_size"] = um.pointed.action.num_points;
    j["result"]["index_count"] = um.pointed.action.locals.size();
    j["result"]["violations"] = violations;
    std::ostringstream text;
    text << "Um_" << o.n << "(" << o.ring_spec << "): carrier "
         << um.pointed.action.num_points << ", " << um.pointed.action.locals.size()
         << " local groups, " << violations.size() << " violation(s)\n";
    for (const auto& v : violations) text << "  " << v << "\n";
    emit(o, j, text.str());
    return violations.empty() ? kExitOk : kExitMathFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"global-action homotopy computations over finite commutative rings"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--ring", o.ring_spec, "ring spec: Zmod:<m> | GF:<p> | GFpoly:<p>:<c0,..,1>");
        sub->add_option("--n", o.n, "matrix/row dimension (>= 3)");
        sub->add_option("--cap-closure", o.cap_closure, "max elements per subgroup closure");
        sub->add_option("--cap-steps", o.cap_steps, "max states in homotopy searches");
        sub->add_option("--format", o.format, "text | json")
            ->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--seed", o.seed, "seed for sampled checks");
        sub->add_option("--out", o.out_path, "write the report to a file");
        sub->add_flag("--timing", o.timing, "include wall time in JSON reports");
    };

    CLI::App* pi0cmd = app.add_subcommand("pi0", "path components of Um_n(R)");
    add_common(pi0cmd);
    CLI::App* pi1cmd = app.add_subcommand("pi1", "pi1(EUm_n(R)) = EP_n/(EP_n)_2");
    add_common(pi1cmd);
    pi1cmd->add_flag("--cross-check", o.cross_check, "also run the homotopy-search oracle");
    CLI::App* vercmd = app.add_subcommand("verify", "exact sequence checks");
    add_common(vercmd);
    CLI::App* homcmd = app.add_subcommand("homotopy", "stable homotopy of two paths");
    add_common(homcmd);
    homcmd->add_option("path_a", o.path_file_a, "JSON path file")->required();
    homcmd->add_option("path_b", o.path_file_b, "JSON path file")->required();
    CLI::App* valcmd = app.add_subcommand("validate-action", "global action axioms for Um_n(R)");
    add_common(valcmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (o.n < 3) throw ConfigError("n must be >= 3");
        if (pi0cmd->parsed()) return cmd_pi0(o);
        if (pi1cmd->parsed()) return cmd_pi1(o);
        if (vercmd->parsed()) return cmd_verify(o);
        if (homcmd->parsed()) return cmd_homotopy(o);
        if (valcmd->parsed()) return cmd_validate_action(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kExitCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
