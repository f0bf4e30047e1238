#include "paperfold/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace paperfold::cli {

Json exact(const Rat& r) { return Json{{"dec", dec12(r)}, {"rat", rat_str(r)}}; }

Json decimal(long double v) { return Json{{"dec", dec12(static_cast<double>(v))}}; }

namespace {

Json param_json(const BoundaryParam& b) { return Json{{"polygon", b.polygon}, {"t", exact(b.t)}}; }

std::string param_text(const Json& j) {
    std::string t = j["t"]["rat"];
    int p = j["polygon"];
    return p == 0 ? t : std::to_string(p) + ":" + t;
}

std::string rat_of(const Json& j) { return j["rat"].get<std::string>(); }
std::string dec_of(const Json& j) { return j["dec"].get<std::string>(); }

}  // namespace

BoundaryParam parse_param(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) return {0, parse_rat(text)};
    return {std::stoi(text.substr(0, colon)), parse_rat(text.substr(colon + 1))};
}

Json validate_report(const FoldingScheme& s, const Rat& eps) {
    Json j;
    j["command"] = "validate";
    j["scheme"] = s.meta.name;
    auto rep = validate(s);
    j["checks"] = Json::array();
    for (const auto& c : rep.checks) j["checks"].push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    j["total_pairing_length"] = exact(rep.total_pairing_length);
    j["boundary_length"] = exact(s.mp.boundary_length);
    auto pl = is_plain(s);
    j["plain"] = pl.plain;
    j["plain_reason"] = pl.reason;
    j["ok"] = rep.ok();
    auto fs = truncate_items(s, eps);
    Json tr{{"max_item", exact(eps)},
            {"pairings", fs.pairings.size()},
            {"gaps", fs.gaps.size()},
            {"items", fs.items.size()},
            {"tail_measure", exact(fs.tail_measure)}};
    if (pl.plain && rep.ok()) {
        auto t = build_scar(fs, TailMode::COLLAPSE);
        tr["scar_nodes"] = t.nodes.size();
        tr["scar_edges"] = t.edges.size();
        tr["euler_characteristic"] = euler_characteristic(t);
    }
    j["truncation"] = tr;
    return j;
}

Json classify_report(TruncationCache& cache, const Rat& eps, const ClassifyQuery& q) {
    Json j;
    j["command"] = "classify";
    j["scheme"] = cache.scheme().meta.name;
    j["max_item"] = exact(eps);
    const auto& e = cache.at_items(eps);
    j["points"] = Json::array();
    for (const auto& b : q.at) {
        Json p;
        p["param"] = param_json(b);
        auto pc = classify_point(e.free, b);
        p["kind"] = point_kind_name(pc.kind);
        p["valence"] = pc.valence;
        if (q.r) {
            Json ball;
            ball["r"] = exact(*q.r);
            ball["base"] = q.lambda_base ? "lambda" : "point";
            for (const ScarTree* t : {&e.collapse, &e.free}) {
                ScarPoint sp = t->normalize(t->locate(b));
                if (q.lambda_base && (!sp.at_node() || !t->nodes[sp.node].lambda))
                    throw SchemeError("q = " + rat_str(b.t) + " is not a singular node at this truncation");
                auto ci = ball_component(*t, q.lambda_base, sp, *q.r);
                ball[tail_mode_name(t->mode)] = {{"cm", exact(ci.cm)},
                                                 {"cn", ci.cn},
                                                 {"cn_status", cn_status_name(ci.cn_status)},
                                                 {"tail_touch", ci.tail_touch}};
            }
            const auto& c = ball[tail_mode_name(TailMode::COLLAPSE)];
            const auto& f = ball[tail_mode_name(TailMode::FREE)];
            ball["exact"] = c["cm"] == f["cm"] && c["cn"] == f["cn"] && c["cn_status"] == "KNOWN" &&
                            f["cn_status"] == "KNOWN";
            p["ball"] = ball;
        }
        j["points"].push_back(p);
    }
    return j;
}

namespace {

Json params_json(const ResolvedParams& rp) {
    return Json{{"rbar", exact(rp.cp.rbar)},
                {"rbar_source", rp.ir.from_override ? "override" : rp.ir.note},
                {"hbar", exact(rp.cp.hbar)},
                {"hbar_source", rp.collar.from_override ? "override" : "collar bisection"},
                {"M", exact(rp.cp.M)}};
}

}  // namespace

Json criterion_report(const ResolvedParams& rp, const DivergenceCertificate& cert) {
    Json j;
    j["command"] = "criterion";
    j["params"] = params_json(rp);
    j["hypothesis"] = hypothesis_name(cert.hypothesis);
    j["K"] = cert.K;
    j["windows"] = Json::array();
    for (const auto& w : cert.windows)
        j["windows"].push_back({{"k", w.k},
                                {"a", exact(w.a)},
                                {"b", exact(w.b)},
                                {"W", decimal(w.W)},
                                {"W_error", "1e-12"},
                                {"components", w.components},
                                {"worst", param_json(w.worst)},
                                {"approximate", w.approximate}});
    j["c"] = decimal(cert.c);
    j["verdict"] = verdict_name(cert.verdict);
    j["reason"] = cert.reason;
    return j;
}

Json mcmullen_report(const ResolvedParams& rp, const AnnulusSystem& sys) {
    Json j;
    j["command"] = "mcmullen";
    j["params"] = params_json(rp);
    j["K0"] = sys.K0;
    j["K1"] = sys.K1;
    j["levels"] = Json::array();
    for (const auto& l : sys.levels) {
        Json lv{{"k", l.k}, {"r_outer", exact(l.r_outer)}, {"r_inner", exact(l.r_inner)}, {"W", decimal(l.W)}};
        lv["classes"] = Json::array();
        for (const auto& c : l.classes) {
            Json cj{{"rep", param_json(c.rep)},
                    {"members", c.members.size()},
                    {"parent", c.parent},
                    {"eps_ok", c.eps_ok},
                    {"blocking", c.blocking},
                    {"window_bound", decimal(c.window_bound)}};
            if (c.eps_ok) {
                cj["eps"] = exact(c.eps);
                cj["inner"] = exact(c.inner);
                cj["outer"] = exact(c.outer);
                cj["module_bound"] = decimal(c.module_bound);
            }
            lv["classes"].push_back(cj);
        }
        j["levels"].push_back(lv);
    }
    j["cond_a"] = sys.cond_a;
    j["cond_b"] = sys.cond_b;
    j["cond_c"] = sys.cond_c;
    j["caps_ok"] = sys.caps_ok;
    j["min_chain_sum"] = decimal(sys.min_chain_sum);
    j["required_chain_sum"] = decimal(sys.required_chain_sum);
    return j;
}

Json modulus_report(const ModulusProfile& prof) {
    const auto& mp = prof.params;
    Json j;
    j["command"] = "modulus";
    j["params"] = {{"rbar", exact(mp.rbar)},
                   {"hbar", exact(mp.hbar)},
                   {"boundary_length", exact(mp.boundary_length)},
                   {"delta", exact(mp.delta)},
                   {"M", exact(mp.M)},
                   {"kappa_upper", exp_decimal(mp.log_kappa)},
                   {"ln_kappa_upper", decimal(mp.log_kappa)},
                   {"R_mode", mp.R ? "EXPLICIT" : "NORMALIZED"}};
    if (mp.R) j["params"]["R"] = exact(*mp.R);
    j["status"] = "GRID-APPROXIMATE";
    j["error_direction"] =
        "rho_hat is a grid lower bound for the supremum over Q(delta/2); each sampled rho_q is an upper bound";
    j["rows"] = Json::array();
    for (const auto& r : prof.rows)
        j["rows"].push_back({{"t", exact(r.t)},
                             {"rho_hat", exp_decimal(r.log_rho_hat)},
                             {"rho_bar", exp_decimal(r.log_rho_bar)},
                             {"ln_rho_hat", decimal(r.log_rho_hat)},
                             {"ln_rho_bar", decimal(r.log_rho_bar)},
                             {"dominating_branch", r.branch},
                             {"argmax", param_json(r.argmax_t)},
                             {"argmax_height", exact(r.argmax_h)}});
    j["grid_points"] = prof.grid_points;
    j["converged"] = prof.converged;
    j["trace"] = prof.trace;
    return j;
}

std::string emit_text(const Json& j) {
    std::ostringstream o;
    const std::string cmd = j.at("command");
    if (cmd == "validate") {
        o << "scheme " << j["scheme"].get<std::string>() << "\n";
        for (const auto& c : j["checks"]) {
            o << "check " << c["name"].get<std::string>() << " " << (c["ok"].get<bool>() ? "PASS" : "FAIL");
            if (!c["detail"].get<std::string>().empty()) o << "  " << c["detail"].get<std::string>();
            o << "\n";
        }
        o << "total_pairing_length " << rat_of(j["total_pairing_length"]) << " (|dP|/2 = "
          << Rat(parse_rat(rat_of(j["boundary_length"])) / 2).get_str() << ")\n";
        o << "plain " << (j["plain"].get<bool>() ? "yes" : "no");
        if (!j["plain"].get<bool>()) o << " (" << j["plain_reason"].get<std::string>() << ")";
        o << "\n";
        const auto& t = j["truncation"];
        o << "truncation max_item=" << rat_of(t["max_item"]) << " pairings=" << t["pairings"].get<int>()
          << " gaps=" << t["gaps"].get<int>() << " tail=" << rat_of(t["tail_measure"]);
        if (t.contains("euler_characteristic"))
            o << " scar_nodes=" << t["scar_nodes"].get<int>() << " scar_edges=" << t["scar_edges"].get<int>()
              << " euler=" << t["euler_characteristic"].get<int>();
        o << "\n";
        o << "verdict " << (j["ok"].get<bool>() ? "VALID" : "INVALID") << "\n";
    } else if (cmd == "classify") {
        o << "scheme " << j["scheme"].get<std::string>() << " max_item=" << rat_of(j["max_item"]) << "\n";
        for (const auto& p : j["points"]) {
            o << "point " << param_text(p["param"]) << " kind=" << p["kind"].get<std::string>();
            if (p["kind"] == "VERTEX") o << "(" << p["valence"].get<int>() << ")";
            o << "\n";
            if (p.contains("ball")) {
                const auto& b = p["ball"];
                for (const char* mode : {"COLLAPSE", "FREE"}) {
                    const auto& m = b[mode];
                    o << "  ball base=" << b["base"].get<std::string>() << " r=" << rat_of(b["r"]) << " " << mode
                      << " cm=" << rat_of(m["cm"]) << " cn=" << m["cn"].get<int>() << " "
                      << m["cn_status"].get<std::string>() << "\n";
                }
                o << "  exact " << (b["exact"].get<bool>() ? "yes" : "no") << "\n";
            }
        }
    } else if (cmd == "criterion" || cmd == "mcmullen") {
        const auto& p = j["params"];
        o << "rbar=" << rat_of(p["rbar"]) << " (" << p["rbar_source"].get<std::string>() << ") hbar="
          << rat_of(p["hbar"]) << " (" << p["hbar_source"].get<std::string>() << ") M=" << rat_of(p["M"]) << "\n";
        if (cmd == "criterion") {
            for (const auto& w : j["windows"]) {
                o << "window k=" << w["k"].get<int>() << " [a,b]=[" << rat_of(w["a"]) << "," << rat_of(w["b"])
                  << "] W_k=" << dec_of(w["W"]) << "+/-" << w["W_error"].get<std::string>()
                  << " hypothesis=" << j["hypothesis"].get<std::string>()
                  << " components=" << w["components"].get<int>();
                if (w["approximate"].get<bool>()) o << " approximate";
                o << "\n";
            }
            o << "c=" << dec_of(j["c"]) << "\n";
            o << "verdict " << j["verdict"].get<std::string>() << ": " << j["reason"].get<std::string>() << "\n";
        } else {
            for (const auto& l : j["levels"]) {
                o << "level k=" << l["k"].get<int>() << " window=[" << rat_of(l["r_inner"]) << ","
                  << rat_of(l["r_outer"]) << "] classes=" << l["classes"].size() << " W=" << dec_of(l["W"]) << "\n";
                for (const auto& c : l["classes"]) {
                    o << "  class rep=" << param_text(c["rep"]) << " members=" << c["members"].get<int>()
                      << " parent=" << c["parent"].get<int>();
                    if (c["eps_ok"].get<bool>())
                        o << " eps=" << rat_of(c["eps"]) << " annulus=[" << rat_of(c["inner"]) << ","
                          << rat_of(c["outer"]) << "] module>=" << dec_of(c["module_bound"]);
                    else
                        o << " blocked: " << c["blocking"].get<std::string>();
                    o << "\n";
                }
            }
            auto flag = [&](const char* k) { return j[k].get<bool>() ? "true" : "false"; };
            o << "condition_a " << flag("cond_a") << "\ncondition_b " << flag("cond_b") << "\ncondition_c "
              << flag("cond_c") << " (min chain " << dec_of(j["min_chain_sum"]) << " >= required "
              << dec_of(j["required_chain_sum"]) << ")\neps_caps " << flag("caps_ok") << "\n";
        }
    } else if (cmd == "modulus") {
        const auto& p = j["params"];
        o << "rbar=" << rat_of(p["rbar"]) << " hbar=" << rat_of(p["hbar"]) << " |dP|=" << rat_of(p["boundary_length"])
          << " delta=" << rat_of(p["delta"]) << " M=" << rat_of(p["M"]) << " kappa<=" << p["kappa_upper"].get<std::string>()
          << " R_mode=" << p["R_mode"].get<std::string>();
        if (p.contains("R")) o << " R=" << rat_of(p["R"]);
        o << "\n";
        o << "# " << j["status"].get<std::string>() << ": " << j["error_direction"].get<std::string>() << "\n";
        o << "t  rho_hat(t)  rho_bar(t)  dominating_branch\n";
        for (const auto& r : j["rows"])
            o << rat_of(r["t"]) << "  " << r["rho_hat"].get<std::string>() << "  " << r["rho_bar"].get<std::string>()
              << "  " << r["dominating_branch"].get<std::string>() << "\n";
        for (const auto& t : j["trace"]) o << "# " << t.get<std::string>() << "\n";
    } else {
        o << j.dump(2) << "\n";
    }
    return o.str();
}

namespace {

std::optional<Rat> opt_rat(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_rat(s);
}

void write_out(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Paper-folding schemes: scars, extension criteria and moduli of continuity", "paperfold"};
    std::string command, input, builtin, eps_s = "1/64", format = "text", out_path, rbar_s, hbar_s, R_s;
    std::string hyp_s = "none", r_s, base_s = "lambda", scene_s = "scheme";
    std::vector<std::string> at_s;
    int K = 8, K0 = 1, K1 = 5, workers = 1, t_count = 11, refinements = 2, heights = 3;
    app.add_option("command", command, "validate | classify | criterion | mcmullen | modulus | render | example")
        ->required()
        ->check(CLI::IsMember({"validate", "classify", "criterion", "mcmullen", "modulus", "render", "example"}));
    app.add_option("input", input, "scheme file (.pfs), or the builtin name for 'example'");
    app.add_option("--builtin", builtin, "builtin scheme: seq or cantor");
    app.add_option("--eps", eps_s, "truncation: every unexpanded rule image has measure at most eps");
    app.add_option("--K", K, "verification depth (windows)");
    app.add_option("--K0", K0, "first annulus level");
    app.add_option("--K1", K1, "last annulus level");
    app.add_option("--hypothesis", hyp_s, "constant | harmonic | none")
        ->check(CLI::IsMember({"constant", "harmonic", "none"}));
    app.add_option("--rbar", rbar_s, "injectivity radius override");
    app.add_option("--hbar", hbar_s, "collar height override");
    app.add_option("--R", R_s, "explicit Koebe radius (default: report in units of 8R)");
    app.add_option("--out", out_path, "output path");
    app.add_option("--format", format, "text | machine | svg")->check(CLI::IsMember({"text", "machine", "svg"}));
    app.add_option("--workers", workers, "threads for the modulus grid");
    app.add_option("--at", at_s, "boundary parameters 't' or 'p:t'")->delimiter(',');
    app.add_option("--r", r_s, "ball radius for classify and disk scenes");
    app.add_option("--base", base_s, "lambda | point")->check(CLI::IsMember({"lambda", "point"}));
    app.add_option("--scene", scene_s, "scheme | scar | collar | disk | mcmullen")
        ->check(CLI::IsMember({"scheme", "scar", "collar", "disk", "mcmullen"}));
    app.add_option("--t-count", t_count, "modulus table rows");
    app.add_option("--refinements", refinements, "modulus grid refinements");
    app.add_option("--heights", heights, "modulus height samples above 0");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    std::string source = input;
    try {
        if (command == "example") {
            std::string name = !builtin.empty() ? builtin : input;
            if (name.empty()) throw std::runtime_error("example needs a builtin name (seq or cantor)");
            write_out(out_path, builtin_text(name), out);
            return 0;
        }
        FoldingScheme s;
        if (!builtin.empty()) {
            source = "builtin:" + builtin;
            s = builtin_example(builtin);
        } else if (!input.empty()) {
            std::ifstream f(input);
            if (!f) throw std::runtime_error("cannot read " + input);
            std::stringstream buf;
            buf << f.rdbuf();
            s = parse_scheme(buf.str());
        } else {
            throw std::runtime_error("no scheme given (file path or --builtin)");
        }
        Rat eps = parse_rat(eps_s);
        if (eps <= 0) throw std::runtime_error("--eps must be positive");
        auto emit = [&](const Json& j) {
            write_out(out_path, format == "machine" ? j.dump(2) + "\n" : emit_text(j), out);
        };

        if (command == "validate") {
            auto j = validate_report(s, eps);
            emit(j);
            return j["ok"].get<bool>() ? 0 : 1;
        }
        auto pl = is_plain(s);
        if (!pl.plain) throw SchemeError("scheme is not plain (" + pl.reason + ")");
        TruncationCache cache(s);
        if (command == "classify") {
            ClassifyQuery q;
            for (const auto& a : at_s) q.at.push_back(parse_param(a));
            if (q.at.empty()) throw std::runtime_error("classify needs --at");
            q.r = opt_rat(r_s);
            q.lambda_base = base_s == "lambda";
            emit(classify_report(cache, eps, q));
            return 0;
        }
        auto rp = resolve_params(cache, opt_rat(rbar_s), opt_rat(hbar_s));
        if (command == "criterion") {
            auto cert = divergence_report(cache, rp.cp, K, parse_hypothesis(hyp_s));
            emit(criterion_report(rp, cert));
            return cert.verdict == Verdict::CERTIFIED_UNDER_HYPOTHESIS ? 0 : 2;
        }
        if (command == "mcmullen") {
            auto sys = mcmullen_system(cache, rp.cp, K0, K1);
            emit(mcmullen_report(rp, sys));
            return sys.cond_a && sys.cond_b && sys.cond_c && sys.caps_ok ? 0 : 2;
        }
        if (command == "modulus") {
            auto mp = modulus_params(rp.cp.rbar, rp.cp.hbar, s.mp.boundary_length, opt_rat(R_s));
            GridControls gc;
            gc.max_item = eps;
            gc.t_count = t_count;
            gc.max_refinements = refinements;
            gc.heights = heights;
            gc.workers = workers;
            emit(modulus_report(rho_global(cache, mp, gc)));
            return 0;
        }
        // render
        const auto& e = cache.at_items(eps);
        RenderScene scene = outline_scene(s.mp);
        scene.title = (s.meta.name.empty() ? source : s.meta.name) + " " + scene_s;
        if (scene_s == "scheme") {
            add_pairings(scene, e.fs);
        } else if (scene_s == "scar") {
            add_pairings(scene, e.fs);
            add_scar(scene, e.collapse);
        } else if (scene_s == "collar") {
            add_collar(scene, rp.collar);
        } else if (scene_s == "disk") {
            if (at_s.empty() || r_s.empty()) throw std::runtime_error("disk scene needs --at and --r");
            add_collar(scene, rp.collar);
            auto d = disk_boundary(e.free, rp.collar, base_s == "lambda", parse_param(at_s.front()), parse_rat(r_s),
                                   rp.cp.rbar);
            add_disk(scene, d, "disk", "#d62728");
        } else {
            auto sys = mcmullen_system(cache, rp.cp, K0, K1);
            const auto& ref = cache.at_items(eps);
            const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
            for (const auto& l : sys.levels)
                for (std::size_t c = 0; c < l.classes.size(); ++c) {
                    const auto& ac = l.classes[c];
                    if (!ac.eps_ok) continue;
                    for (const Rat& r : {ac.inner, ac.outer}) {
                        try {
                            auto d = disk_boundary(ref.free, rp.collar, true, ac.rep, r, rp.cp.rbar);
                            add_disk(scene, d, "annulus-" + std::to_string(l.k) + "-" + std::to_string(c),
                                     colours[(l.k - 1) % 5]);
                        } catch (const CollarError&) {
                            // radius not resolved at this truncation: the annulus is omitted
                        }
                    }
                }
        }
        write_out(out_path, render_svg(scene), out);
        return 0;
    } catch (const ParseError& e) {
        err << source << ":" << e.line << ":" << e.column << ": error: " << e.message << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace paperfold::cli
