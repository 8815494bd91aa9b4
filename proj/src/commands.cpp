#include "flowcat/commands.hpp"

#include "flowcat/errors.hpp"
#include "flowcat/nerve.hpp"
#include "flowcat/zigloc.hpp"
#include "fixture_data.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace flowcat::app {

using nlohmann::json;

namespace {

json issues_json(const ValidationReport& r)
{
    json out = json::array();
    for (const auto& i : r.issues) out.push_back({{"check", i.check}, {"message", i.message}, {"witness", i.witness}});
    return out;
}

json summary_json(const HomologySummary& h)
{
    json torsion = json::array();
    for (const auto& d : h.degrees) {
        json t = json::array();
        for (const auto& v : d.torsion) t.push_back(v.get_str());
        torsion.push_back(t);
    }
    return {{"ring", h.ring.name()}, {"summary", h.to_string()}, {"betti", h.betti()}, {"torsion", torsion}};
}

std::vector<std::string> ids(const Complex& c, const std::vector<std::size_t>& cells)
{
    std::vector<std::string> out;
    for (std::size_t x : cells) out.push_back(c.id(x));
    return out;
}

Report make_report(const std::string& command)
{
    Report r;
    r.json = {{"command", command}, {"results", json::object()}, {"warnings", json::array()}};
    return r;
}

Report guarded(const std::string& command, const std::function<void(Report&)>& body)
{
    Report r = make_report(command);
    try {
        body(r);
    } catch (const ComputationError& e) {
        r.json["results"]["error"] = {{"kind", "computation"}, {"message", e.what()}};
        r.exit_code = exit_computation;
    } catch (const Error& e) {
        r.json["results"]["error"] = {{"kind", "input"}, {"message", e.what()}};
        r.exit_code = exit_invalid;
    }
    return r;
}

Complex load_complex(const Inputs& in) { return parse_complex(in.complex_text, in.complex_source); }

MatchingInput load_matching(const Complex& c, const Inputs& in)
{
    if (!in.matching_text) throw ParseError("a matching file is required");
    return parse_matching(c, *in.matching_text, in.matching_source);
}

// The category a matching is localized on, with its Morse system.
struct System {
    Complex complex;
    MatchingInput matching;
    bool face_poset = false;
    PCategory en;
    MorseSystem en_s;
    PCategory fc;
    MorseSystem fc_s;

    const PCategory& cat() const { return face_poset ? fc : en; }
    const MorseSystem& sigma() const { return face_poset ? fc_s : en_s; }
};

System load_system(const Inputs& in, const std::optional<std::string>& category)
{
    System sys;
    sys.complex = load_complex(in);
    sys.matching = load_matching(sys.complex, in);
    std::string cat = category.value_or(sys.matching.category);
    if (cat != "entrance" && cat != "face-poset") throw ParseError("unknown category '" + cat + "'");
    sys.face_poset = cat == "face-poset";
    auto acyclic = check_acyclic(sys.complex, sys.matching.matching);
    if (!acyclic.ok()) throw BadPair("matching is not acyclic: " + acyclic.issues.front().message);
    sys.en = entrance_path_category(sys.complex);
    sys.en_s = matching_to_morse_system(sys.en, sys.complex, sys.matching.matching);
    if (sys.face_poset) {
        sys.fc = face_poset_category(sys.complex);
        sys.fc_s = matching_to_morse_system(sys.fc, sys.complex, sys.matching.matching);
    }
    return sys;
}

struct FlowRun {
    FlowCategory flow;
    std::string status;
    int max_len = -1;
    std::vector<std::string> log;
    std::optional<HomologySummary> nerve;
};

FlowRun run_flow(const System& sys, int max_len, std::size_t maxdim, const Ring& ring)
{
    FlowRun run;
    if (sys.face_poset) {
        run.flow = projected_flow_category(sys.en, sys.en_s, sys.fc, sys.fc_s);
        run.status = to_string(Stability::Exact);
        run.log.push_back("face-poset classes are images of entrance-path classes");
        return run;
    }
    if (classical_mode(sys.en, sys.en_s)) {
        run.flow = flow_category(sys.en, sys.en_s, -1);
        run.status = to_string(Stability::Exact);
        return run;
    }
    auto st = stabilized_flow(sys.en, sys.en_s, max_len, stabilization_cap, maxdim, ring);
    run.flow = std::move(st.flow);
    run.status = to_string(st.status);
    run.max_len = st.max_len;
    run.log = std::move(st.log);
    run.nerve = st.nerve;
    return run;
}

void mildness_warnings(const System& sys, Report& r)
{
    auto mild = check_mildness(sys.cat(), sys.sigma());
    if (!mild.mild())
        r.json["warnings"].push_back(
            "Morse system is not mild: homotopy-equivalence claims for the flow category are not guaranteed");
}

std::size_t critical_index(const System& sys, const FlowCategory& flow, const std::string& id)
{
    auto obj = flow.cat.find_object(id);
    if (!obj) {
        if (!sys.complex.find(id)) throw ParseError("unknown cell '" + id + "'");
        throw ParseError("'" + id + "' is not a critical cell");
    }
    return *obj;
}

json hom_json(const FlowCategory& flow, const PCategory& base, std::size_t a, std::size_t b)
{
    const LocHom& h = flow.loc(a, b);
    json classes = json::array();
    for (std::size_t i = 0; i < h.classes.size(); ++i) {
        json essential = json::array();
        for (const auto& f : h.classes[i].essential) essential.push_back(base.label(f));
        classes.push_back({{"canonical", h.poset.labels[i]}, {"members", h.classes[i].members.size()},
                           {"essential", essential}});
    }
    json covers = json::array();
    for (auto [lo, hi] : h.poset.cover_relations()) covers.push_back({h.poset.labels[lo], h.poset.labels[hi]});
    auto bottom = h.poset.minimum();
    auto top = h.poset.maximum();
    return {{"from", flow.cat.object(a)},
            {"to", flow.cat.object(b)},
            {"classes", classes},
            {"covers", covers},
            {"bottom", bottom ? json(h.poset.labels[*bottom]) : json(nullptr)},
            {"top", top ? json(h.poset.labels[*top]) : json(nullptr)}};
}

Ring coefficient_ring(const std::optional<std::string>& text) { return Ring::parse(text.value_or("Z")); }

std::vector<std::size_t> trimmed(std::vector<std::size_t> b)
{
    while (!b.empty() && b.back() == 0) b.pop_back();
    return b;
}

}  // namespace

Report cmd_validate(const Inputs& in)
{
    return guarded("validate", [&](Report& r) {
        auto& res = r.json["results"];
        bool ok = true;
        Complex c = load_complex(in);
        auto cr = validate_complex(c);
        res["complex"] = {{"cells", c.size()}, {"ok", cr.ok()}, {"issues", issues_json(cr)}};
        ok = cr.ok();
        if (ok) {
            try {
                assign_incidence_signs(c);
                res["signs"] = {{"ok", true}};
            } catch (const SignInconsistency& e) {
                res["signs"] = {{"ok", false}, {"message", e.what()}};
                ok = false;
            }
        }
        if (ok && in.matching_text) {
            auto mi = load_matching(c, in);
            json mj = {{"kind", to_string(mi.matching.kind)}, {"category", mi.category},
                       {"pairs", mi.matching.pairs.size()}};
            ValidationReport acyclic;
            try {
                acyclic = check_acyclic(c, mi.matching);
            } catch (const BadPair& e) {
                acyclic.add("pairs", e.what());
            }
            mj["acyclic"] = {{"ok", acyclic.ok()}, {"issues", issues_json(acyclic)}};
            res["matching"] = mj;
            ok = acyclic.ok();
            if (ok) {
                System sys = load_system(in, std::nullopt);
                auto sr = validate_morse_system(sys.cat(), sys.sigma());
                res["morse_system"] = {{"ok", sr.ok()},
                                       {"critical", ids(c, sys.sigma().critical)},
                                       {"issues", issues_json(sr)}};
                auto mild = check_mildness(sys.cat(), sys.sigma());
                json entries = json::array();
                for (const auto& e : mild.entries)
                    entries.push_back({{"f", sys.cat().label(e.f)},
                                       {"verdict", to_string(e.verdict)},
                                       {"chain_terminates", e.chain_terminates},
                                       {"finite", e.finite},
                                       {"loopfree", e.loopfree},
                                       {"mild", e.mild()},
                                       {"reason", e.reason}});
                res["mildness"] = {{"ok", mild.mild()}, {"entries", entries}};
                ok = sr.ok() && mild.mild();
            }
        }
        res["ok"] = ok;
        if (!ok) r.exit_code = exit_invalid;
    });
}

Report cmd_flow(const Inputs& in, const FlowOptions& opt)
{
    return guarded("flow", [&](Report& r) {
        System sys = load_system(in, opt.category);
        auto sr = validate_morse_system(sys.cat(), sys.sigma());
        if (!sr.ok()) r.json["warnings"].push_back("Morse system fails " + sr.issues.front().check + ": " +
                                                   sr.issues.front().message);
        mildness_warnings(sys, r);
        FlowRun run = run_flow(sys, opt.max_zigzag_len, 3, Ring::rationals());
        auto& res = r.json["results"];
        res["category"] = sys.face_poset ? "face-poset" : "entrance";
        res["status"] = run.status;
        res["max_zigzag_len"] = run.max_len < 0 ? json(nullptr) : json(run.max_len);
        res["critical"] = ids(sys.complex, run.flow.base_objects);
        res["log"] = run.log;
        std::vector<std::size_t> from, to;
        std::size_t n = run.flow.base_objects.size();
        if (opt.from) from = {critical_index(sys, run.flow, *opt.from)};
        if (opt.to) to = {critical_index(sys, run.flow, *opt.to)};
        if (!opt.from)
            for (std::size_t a = 0; a < n; ++a) from.push_back(a);
        if (!opt.to)
            for (std::size_t b = 0; b < n; ++b) to.push_back(b);
        json homs = json::array();
        for (std::size_t a : from)
            for (std::size_t b : to) homs.push_back(hom_json(run.flow, sys.cat(), a, b));
        res["homs"] = homs;
    });
}

Report cmd_homology(const Inputs& in, const std::string& kind, const HomologyOptions& opt)
{
    return guarded("homology", [&](Report& r) {
        auto& res = r.json["results"];
        res["kind"] = kind;
        if (opt.max_nerve_dim < 1) throw ParseError("--max-nerve-dim must be at least 1");
        auto maxdim = static_cast<std::size_t>(opt.max_nerve_dim);
        if (kind == "complex") {
            Complex c = load_complex(in);
            auto h = homology(cellular_chain_complex(c, assign_incidence_signs(c), coefficient_ring(opt.coefficients)));
            res["homology"] = summary_json(h);
        } else if (kind == "nerve-en") {
            Complex c = load_complex(in);
            auto h = nerve_homology(entrance_path_category(c), maxdim, coefficient_ring(opt.coefficients));
            res["homology"] = summary_json(h);
            res["max_nerve_dim"] = maxdim;
        } else if (kind == "nerve-flow") {
            System sys = load_system(in, opt.category);
            mildness_warnings(sys, r);
            Ring ring = coefficient_ring(opt.coefficients);
            FlowRun run = run_flow(sys, opt.max_zigzag_len, maxdim, ring);
            auto h = run.nerve ? *run.nerve : nerve_homology(run.flow.cat, maxdim, ring);
            res["homology"] = summary_json(h);
            res["category"] = sys.face_poset ? "face-poset" : "entrance";
            res["status"] = run.status;
            res["max_zigzag_len"] = run.max_len < 0 ? json(nullptr) : json(run.max_len);
            res["max_nerve_dim"] = maxdim;
            res["log"] = run.log;
        } else if (kind == "cosheaf") {
            Complex c = load_complex(in);
            if (!in.cosheaf_text) throw ParseError("a cosheaf file is required");
            Cosheaf F = parse_cosheaf(c, *in.cosheaf_text, in.cosheaf_source);
            if (opt.coefficients && Ring::parse(*opt.coefficients) != F.ring)
                r.json["warnings"].push_back("coefficients come from the cosheaf file (" + F.ring.name() + ")");
            auto vr = validate_cosheaf(c, F);
            res["cosheaf"] = {{"ok", vr.ok()}, {"issues", issues_json(vr)}};
            if (!vr.ok()) {
                r.exit_code = exit_invalid;
                return;
            }
            res["homology"] = summary_json(cosheaf_homology(c, assign_incidence_signs(c), F));
        } else if (kind == "morse") {
            Complex c = load_complex(in);
            auto mi = load_matching(c, in);
            Cosheaf F = in.cosheaf_text ? parse_cosheaf(c, *in.cosheaf_text, in.cosheaf_source)
                                        : Cosheaf::constant(c, coefficient_ring(opt.coefficients));
            auto vr = validate_cosheaf(c, F);
            if (!vr.ok()) {
                res["cosheaf"] = {{"ok", false}, {"issues", issues_json(vr)}};
                r.exit_code = exit_invalid;
                return;
            }
            auto acyclic = check_acyclic(c, mi.matching);
            if (!acyclic.ok()) {
                res["matching"] = {{"ok", false}, {"issues", issues_json(acyclic)}};
                r.exit_code = exit_invalid;
                return;
            }
            auto signs = assign_incidence_signs(c);
            auto mc = morse_chain_complex(c, signs, F, mi.matching);
            auto h = homology(mc.complex);
            auto full = cosheaf_homology(c, signs, F);
            json gens = json::array();
            for (const auto& g : mc.generators) gens.push_back(ids(c, g));
            res["generators"] = gens;
            res["homology"] = summary_json(h);
            res["cellular"] = summary_json(full);
            res["agrees"] = h == full;
            if (!(h == full)) r.json["warnings"].push_back("Morse homology differs from cosheaf homology");
        } else {
            throw ParseError("unknown homology kind '" + kind + "'");
        }
    });
}

namespace {

json catalog()
{
    auto text = fixture_file("catalog.json");
    if (!text) throw ComputationError("fixture catalog missing");
    return json::parse(*text);
}

Inputs fixture_inputs(const json& entry)
{
    Inputs in;
    auto take = [](const json& e, const char* key, std::optional<std::string>& text, std::string& source) {
        if (!e.contains(key)) return;
        std::string file = e[key].get<std::string>();
        text = fixture_file(file);
        if (!text) throw ComputationError("fixture file missing: " + file);
        source = file;
    };
    std::optional<std::string> complex;
    take(entry, "complex", complex, in.complex_source);
    in.complex_text = complex.value_or("");
    take(entry, "matching", in.matching_text, in.matching_source);
    take(entry, "cosheaf", in.cosheaf_text, in.cosheaf_source);
    return in;
}

std::pair<std::size_t, std::size_t> pair_key(const FlowCategory& flow, const std::string& key)
{
    auto comma = key.find(',');
    auto a = flow.cat.find_object(key.substr(0, comma));
    auto b = flow.cat.find_object(key.substr(comma + 1));
    if (!a || !b) throw ComputationError("fixture pair '" + key + "' is not a pair of critical cells");
    return {*a, *b};
}

}  // namespace

Report cmd_fixture_list()
{
    return guarded("fixture list", [&](Report& r) {
        json list = json::array();
        for (const auto& e : catalog()) {
            json files = json::array();
            for (const char* k : {"complex", "matching", "cosheaf"})
                if (e.contains(k)) files.push_back(e[k]);
            list.push_back({{"name", e["name"]}, {"description", e["description"]}, {"files", files}});
        }
        r.json["results"]["fixtures"] = list;
    });
}

Report cmd_fixture_run(const std::string& name)
{
    return guarded("fixture run", [&](Report& r) {
        json entry;
        for (const auto& e : catalog())
            if (e["name"] == name) entry = e;
        if (entry.is_null()) throw ParseError("unknown fixture '" + name + "'");
        Inputs in = fixture_inputs(entry);
        Complex c = load_complex(in);
        std::optional<System> sys;
        std::optional<FlowRun> run;
        auto system = [&]() -> System& {
            if (!sys) sys = load_system(in, std::nullopt);
            return *sys;
        };
        auto flow = [&]() -> FlowRun& {
            if (!run) run = run_flow(system(), 4, 3, Ring::rationals());
            return *run;
        };
        json checks = json::array();
        bool all = true;
        for (const auto& [key, expected] : entry["expected"].items()) {
            json actual;
            if (key == "cellular") {
                actual = homology(cellular_chain_complex(c, assign_incidence_signs(c), Ring::integers())).to_string();
            } else if (key == "nerve_en_betti") {
                actual = nerve_homology(entrance_path_category(c), 3, Ring::rationals()).betti();
            } else if (key == "critical") {
                auto crit = ids(c, system().sigma().critical);
                std::sort(crit.begin(), crit.end());
                actual = crit;
            } else if (key == "classes" || key == "hom_order_betti" || key == "unique_bottom") {
                actual = json::object();
                for (const auto& [pk, _] : expected.items()) {
                    auto [a, b] = pair_key(flow().flow, pk);
                    const auto& poset = flow().flow.loc(a, b).poset;
                    if (key == "classes")
                        actual[pk] = poset.size();
                    else if (key == "hom_order_betti")
                        actual[pk] = trimmed(order_complex_homology(poset, Ring::rationals()).betti());
                    else
                        actual[pk] = poset.minimum().has_value();
                }
            } else if (key == "nerve_flow_betti") {
                auto h = flow().nerve ? *flow().nerve : nerve_homology(flow().flow.cat, 3, Ring::rationals());
                actual = h.betti();
            } else if (key == "status") {
                actual = flow().status;
            } else if (key == "morse") {
                auto mi = load_matching(c, in);
                Cosheaf F = Cosheaf::constant(c, Ring::integers());
                actual = homology(morse_chain_complex(c, assign_incidence_signs(c), F, mi.matching).complex).to_string();
            } else if (key == "acyclic") {
                auto mi = load_matching(c, in);
                actual = check_acyclic(c, mi.matching).ok();
            } else {
                throw ComputationError("unknown fixture check '" + key + "'");
            }
            bool ok = actual == expected;
            all = all && ok;
            checks.push_back({{"check", key}, {"expected", expected}, {"actual", actual}, {"ok", ok}});
        }
        r.json["results"] = {{"name", name}, {"checks", checks}, {"ok", all}};
        if (!all) r.exit_code = exit_invalid;
    });
}

const std::vector<std::string>& fixture_files()
{
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : embedded_fixtures()) out.emplace_back(name);
        return out;
    }();
    return names;
}

std::optional<std::string> fixture_file(const std::string& name)
{
    for (const auto& [file, text] : embedded_fixtures())
        if (file == name) return std::string(text);
    return std::nullopt;
}

namespace {

std::string join(const json& arr, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (i) out += sep;
        out += arr[i].is_string() ? arr[i].get<std::string>() : arr[i].dump();
    }
    return out;
}

void render_issues(std::ostringstream& os, const json& issues)
{
    for (const auto& i : issues) {
        os << "    [" << i["check"].get<std::string>() << "] " << i["message"].get<std::string>();
        if (!i["witness"].empty()) os << " (" << join(i["witness"], ", ") << ")";
        os << "\n";
    }
}

std::string pass(bool ok) { return ok ? "PASS" : "FAIL"; }

}  // namespace

std::string render_text(const Report& r)
{
    std::ostringstream os;
    const json& res = r.json["results"];
    std::string cmd = r.json["command"];
    if (res.contains("error")) {
        os << "error: " << res["error"]["message"].get<std::string>() << "\n";
    } else if (cmd == "validate") {
        os << "complex: " << pass(res["complex"]["ok"]) << " (" << res["complex"]["cells"] << " cells)\n";
        render_issues(os, res["complex"]["issues"]);
        if (res.contains("signs")) {
            os << "incidence signs: " << pass(res["signs"]["ok"]) << "\n";
            if (res["signs"].contains("message")) os << "    " << res["signs"]["message"].get<std::string>() << "\n";
        }
        if (res.contains("matching")) {
            const auto& m = res["matching"];
            os << "matching (" << m["kind"].get<std::string>() << ", " << m["category"].get<std::string>()
               << "): acyclic " << pass(m["acyclic"]["ok"]) << "\n";
            render_issues(os, m["acyclic"]["issues"]);
        }
        if (res.contains("morse_system")) {
            os << "Morse system axioms: " << pass(res["morse_system"]["ok"]) << "\n";
            render_issues(os, res["morse_system"]["issues"]);
            os << "critical cells: " << join(res["morse_system"]["critical"], ", ") << "\n";
        }
        if (res.contains("mildness")) {
            os << "mildness: " << pass(res["mildness"]["ok"]) << "\n";
            for (const auto& e : res["mildness"]["entries"]) {
                os << "    " << e["f"].get<std::string>() << ": " << e["verdict"].get<std::string>();
                if (!e["reason"].get<std::string>().empty()) os << " (" << e["reason"].get<std::string>() << ")";
                os << "\n";
            }
        }
        os << (res["ok"].get<bool>() ? "OK" : "FAILED") << "\n";
    } else if (cmd == "flow") {
        os << "category: " << res["category"].get<std::string>() << ", status: " << res["status"].get<std::string>();
        if (!res["max_zigzag_len"].is_null()) os << " at max zigzag length " << res["max_zigzag_len"];
        os << "\ncritical cells: " << join(res["critical"], ", ") << "\n";
        for (const auto& line : res["log"]) os << "  " << line.get<std::string>() << "\n";
        for (const auto& h : res["homs"]) {
            os << "hom(" << h["from"].get<std::string>() << ", " << h["to"].get<std::string>()
               << "): " << h["classes"].size() << " classes, " << h["covers"].size() << " cover relations\n";
            for (const auto& cls : h["classes"]) {
                os << "  " << cls["canonical"].get<std::string>();
                if (!cls["essential"].empty()) os << "    essential: " << join(cls["essential"], ", ");
                os << "\n";
            }
            for (const auto& cv : h["covers"])
                os << "  " << cv[0].get<std::string>() << "  =>  " << cv[1].get<std::string>() << "\n";
        }
    } else if (cmd == "homology") {
        if (res.contains("homology")) {
            const auto& h = res["homology"];
            os << res["kind"].get<std::string>() << ": " << h["summary"].get<std::string>() << "  betti "
               << h["betti"].dump() << "\n";
        }
        if (res.contains("status")) {
            os << "status: " << res["status"].get<std::string>();
            if (!res["max_zigzag_len"].is_null()) os << " at max zigzag length " << res["max_zigzag_len"];
            os << "\n";
            for (const auto& line : res["log"]) os << "  " << line.get<std::string>() << "\n";
        }
        if (res.contains("generators")) {
            os << "critical generators:";
            for (std::size_t d = 0; d < res["generators"].size(); ++d)
                os << " C" << d << "={" << join(res["generators"][d], ", ") << "}";
            os << "\ncellular: " << res["cellular"]["summary"].get<std::string>() << ", "
               << (res["agrees"].get<bool>() ? "agrees" : "DISAGREES") << "\n";
        }
        for (const char* k : {"cosheaf", "matching"})
            if (res.contains(k) && !res[k]["ok"].get<bool>()) {
                os << k << ": FAIL\n";
                render_issues(os, res[k]["issues"]);
            }
    } else if (cmd == "fixture list") {
        for (const auto& f : res["fixtures"])
            os << f["name"].get<std::string>() << "  " << f["description"].get<std::string>() << "  ["
               << join(f["files"], ", ") << "]\n";
    } else if (cmd == "fixture run") {
        for (const auto& ch : res["checks"])
            os << pass(ch["ok"]) << "  " << ch["check"].get<std::string>() << "  expected " << ch["expected"].dump()
               << "  actual " << ch["actual"].dump() << "\n";
        os << res["name"].get<std::string>() << ": " << (res["ok"].get<bool>() ? "OK" : "MISMATCH") << "\n";
    }
    for (const auto& w : r.json["warnings"]) os << "warning: " << w.get<std::string>() << "\n";
    return os.str();
}

}  // namespace flowcat::app
