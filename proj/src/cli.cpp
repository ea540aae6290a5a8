#include "symchord/cli.hpp"

#include "symchord/config.hpp"
#include "symchord/continuation.hpp"
#include "symchord/io.hpp"
#include "symchord/kepler_oracle.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

namespace symchord {

namespace {

struct Artifacts {
    std::vector<std::pair<std::string, std::string>> files;  // path, content
    std::string stdout_text;

    void add(const std::string& path, std::string content)
    {
        if (path.empty())
            stdout_text += content;
        else
            files.emplace_back(path, std::move(content));
    }

    /// Written only after the whole command succeeded, so failures leave no
    /// partial artifacts behind.
    void flush() const
    {
        for (const auto& [path, content] : files) {
            std::ofstream out(path, std::ios::binary);
            if (!out) throw config_error("cannot write output file: " + path);
            out << content;
        }
        if (!stdout_text.empty()) std::cout << stdout_text;
    }
};

ReversibleSystem system_from_config(const Config& cfg)
{
    const std::string id = cfg.get_string("system", "rotating-kepler");
    ReversibleSystem sys;
    if (id == "custom") {
        sys = make_custom_system("custom", cfg.get_double("custom.gm", 0.0),
                                 cfg.get_double("custom.kr", 0.0),
                                 cfg.get_double("custom.c1", 0.0),
                                 cfg.get_double("custom.c2", 0.0),
                                 cfg.get_double("custom.omega", 1.0));
    } else if (id == "rotating-kepler" && cfg.has("kepler.thetas")) {
        sys = make_rotating_kepler(cfg.get_double_list("kepler.thetas"));
    } else {
        sys = make_system(id);
    }
    sys.collision_radius = cfg.get_double("flow.collision_radius", sys.collision_radius);
    return sys;
}

FlowOptions flow_from_config(const Config& cfg)
{
    FlowOptions flow;
    flow.abs_tol = cfg.get_double("flow.abs_tol", flow.abs_tol);
    flow.rel_tol = cfg.get_double("flow.rel_tol", flow.rel_tol);
    flow.max_step = cfg.get_double("flow.max_step", flow.max_step);
    flow.collision_radius = cfg.get_double("flow.collision_radius", flow.collision_radius);
    return flow;
}

ShootOptions shoot_from_config(const Config& cfg)
{
    ShootOptions opts;
    opts.tol = cfg.get_double("shoot.tol", opts.tol);
    opts.max_iter = cfg.get_int("shoot.max_iter", opts.max_iter);
    opts.flow = flow_from_config(cfg);
    return opts;
}

ContinuationOptions continuation_from_config(const Config& cfg)
{
    ContinuationOptions opts;
    opts.dtau = cfg.get_double("continuation.dtau", opts.dtau);
    opts.bracket_tol = cfg.get_double("continuation.bracket_tol", opts.bracket_tol);
    opts.switch_dtau = cfg.get_double("continuation.switch_dtau", opts.switch_dtau);
    opts.dedup_tol = cfg.get_double("continuation.dedup_tol", opts.dedup_tol);
    opts.post_switch_range =
        cfg.get_double("continuation.post_switch_range", opts.post_switch_range);
    opts.shoot = shoot_from_config(cfg);
    opts.index.flow = opts.shoot.flow;
    opts.index.degeneracy_threshold =
        cfg.get_double("index.degeneracy_threshold", opts.index.degeneracy_threshold);
    return opts;
}

struct SeedSpec {
    double s = 0.0;
    double T = 0.0;
    int branch = -1;
};

SeedSpec seed_from_config(const Config& cfg, double tau)
{
    SeedSpec seed;
    seed.branch = cfg.get_int("seed.branch", -1);
    if (cfg.get_bool("seed.circular", false)) {
        const CircularData data = circular_data(tau);
        seed.s = data.r;
        seed.T = data.half_period;
        seed.branch = -1;
    } else {
        seed.s = cfg.get_double("seed.s");
        seed.T = cfg.get_double("seed.T");
    }
    return seed;
}

HomologyProfile parse_target(const std::string& spec)
{
    HomologyProfile profile;
    if (spec.empty()) return profile;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw config_error("target spec entries must look like degree:dim");
        profile.dims[std::stoi(item.substr(0, colon))] = std::stoi(item.substr(colon + 1));
    }
    for (auto it = profile.dims.begin(); it != profile.dims.end();)
        it = it->second == 0 ? profile.dims.erase(it) : std::next(it);
    return profile;
}

std::vector<int> parse_degrees(const std::string& spec)
{
    std::vector<int> out;
    if (spec.empty()) return out;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stoi(item));
    return out;
}

int cmd_find_chord(const Config& cfg, Artifacts& art)
{
    const ReversibleSystem sys = system_from_config(cfg);
    const Involution& inv = involution_by_id(sys, cfg.get_string("involution"));
    const Involution& inv_end = involution_by_id(
        sys, cfg.get_string("involution_end", cfg.get_string("involution")));
    const double tau = cfg.get_double("tau");
    SeedSpec seed = seed_from_config(cfg, tau);
    const int cover = cfg.get_int("cover", 1);
    seed.T *= cover;
    Chord ch = shoot(sys, inv, inv_end, tau, seed.s, seed.T, seed.branch,
                     shoot_from_config(cfg));
    ch.m = covering_analysis(sys, ch).m;
    art.add(cfg.get_string("output.json", ""), to_json(ch).dump(2) + "\n");
    return 0;
}

int cmd_index(const Config& cfg, Artifacts& art)
{
    const ReversibleSystem sys = system_from_config(cfg);
    const Involution& inv = involution_by_id(sys, cfg.get_string("involution"));
    const Involution& inv_end = involution_by_id(
        sys, cfg.get_string("involution_end", cfg.get_string("involution")));
    const double tau = cfg.get_double("tau");
    SeedSpec seed = seed_from_config(cfg, tau);
    seed.T *= cfg.get_int("cover", 1);
    const Chord ch = shoot(sys, inv, inv_end, tau, seed.s, seed.T, seed.branch,
                           shoot_from_config(cfg));
    IndexOptions iopts;
    iopts.flow = flow_from_config(cfg);
    iopts.degeneracy_threshold =
        cfg.get_double("index.degeneracy_threshold", iopts.degeneracy_threshold);
    const IndexResult idx = rs_index(sys, ch, iopts);
    nlohmann::json out = {{"schema_version", kSchemaVersion},
                          {"chord", to_json(ch)},
                          {"index", to_json(idx)}};
    art.add(cfg.get_string("output.json", ""), out.dump(2) + "\n");
    return 0;
}

int cmd_continue(const Config& cfg, Artifacts& art)
{
    const ReversibleSystem sys = system_from_config(cfg);
    const Involution& inv = involution_by_id(sys, cfg.get_string("involution"));
    const double tau_lo = cfg.get_double("tau_min");
    const double tau_hi = cfg.get_double("tau_max");
    const double tau_seed = cfg.get_double("tau", tau_lo);
    const int cover = cfg.get_int("cover", 1);
    SeedSpec seed = seed_from_config(cfg, tau_seed);
    const ContinuationOptions opts = continuation_from_config(cfg);

    Chord seed_chord = shoot(sys, inv, tau_seed, seed.s, cover * seed.T, seed.branch,
                             opts.shoot);
    seed_chord.m = cover;
    const Family fam = continue_family(sys, inv, seed_chord, tau_lo, tau_hi, opts);
    art.add(cfg.get_string("output.csv", ""), families_csv({fam}));
    if (cfg.get_bool("locate", false) || cfg.has("output.events")) {
        const auto events = locate_index_jump(sys, fam, opts);
        nlohmann::json j = nlohmann::json::array();
        for (const auto& ev : events) j.push_back(to_json(ev));
        nlohmann::json out = {{"schema_version", kSchemaVersion}, {"events", j}};
        art.add(cfg.get_string("output.events", ""), out.dump(2) + "\n");
    }
    return 0;
}

int cmd_scan(const Config& cfg, Artifacts& art)
{
    const ReversibleSystem sys = system_from_config(cfg);
    const Involution& inv = involution_by_id(sys, cfg.get_string("involution"));
    const double tau_lo = cfg.get_double("tau_min");
    const double tau_hi = cfg.get_double("tau_max");
    const int cover = cfg.get_int("cover", 1);
    const double tau_seed = cfg.get_double("tau", tau_lo);
    const SeedSpec seed = seed_from_config(cfg, tau_seed);
    const ContinuationOptions opts = continuation_from_config(cfg);

    const Chord simple_seed =
        shoot(sys, inv, tau_seed, seed.s, seed.T, seed.branch, opts.shoot);
    const DiagramForest forest =
        scan_bifurcation_diagram(sys, inv, simple_seed, cover, tau_lo, tau_hi, opts);

    std::vector<Family> families{forest.root};
    for (const auto& rec : forest.records)
        for (const auto& b : rec.branches) families.push_back(b);
    art.add(cfg.get_string("output.csv", ""), families_csv(families));
    art.add(cfg.get_string("output.json", ""), to_json(forest).dump(2) + "\n");
    if (cfg.has("output.svg")) art.add(cfg.get_string("output.svg"), diagram_svg(forest));

    if (cfg.has("scan.expect_events")) {
        const int expected = cfg.get_int("scan.expect_events");
        if (int(forest.records.size()) != expected) {
            std::cerr << "error: code=4 msg=expected " << expected << " events, found "
                      << forest.records.size() << "\n";
            return 4;
        }
    }
    return 0;
}

int cmd_tau_table(const Config& cfg, Artifacts& art)
{
    const int N = cfg.get_int("N", 1);
    const int kmax = cfg.get_int("kmax", 9);
    if (N < 1 || kmax <= N) throw config_error("tau-table requires N >= 1 and kmax > N");
    std::ostringstream csv;
    csv << "k,l,N,tau,doubly_symmetric\n";
    for (int l = 1; l + N <= kmax; ++l) {
        const int k = l + N;
        if (std::gcd(k, l) != 1) continue;
        const ResonanceLabel lbl(k, l);
        csv << k << ',' << l << ',' << N << ',' << format_double(tau_kl(lbl)) << ','
            << (doubly_symmetric_condition(lbl) ? "true" : "false") << '\n';
    }
    art.add(cfg.get_string("output.csv", ""), csv.str());
    return 0;
}

int cmd_homology(const Config& cfg, Artifacts& art)
{
    nlohmann::json out = {{"schema_version", kSchemaVersion}};
    if (cfg.has("complex")) {
        std::ifstream in(cfg.get_string("complex"));
        if (!in) throw config_error("cannot open complex file");
        nlohmann::json j;
        in >> j;
        const GradedZ2Complex cx = complex_from_json(j);
        out["homology"] = to_json(z2_homology(cx));
    } else if (cfg.has("batch")) {
        // realizability table: each line "degrees ; target"
        std::ifstream in(cfg.get_string("batch"));
        if (!in) throw config_error("cannot open batch file");
        std::ostringstream csv;
        csv << "degrees,target,realizable\n";
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            const auto semi = line.find(';');
            if (semi == std::string::npos)
                throw config_error("batch line must be 'degrees ; target'");
            auto trim = [](std::string v) {
                const auto b = v.find_first_not_of(" \t");
                const auto e = v.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
            };
            const std::string dspec = trim(line.substr(0, semi));
            const std::string tspec = trim(line.substr(semi + 1));
            const bool r = realizable(parse_degrees(dspec), parse_target(tspec));
            csv << dspec << ';' << tspec << ',' << (r ? "true" : "false") << '\n';
        }
        art.add(cfg.get_string("output.csv", ""), csv.str());
        return 0;
    } else {
        const std::vector<int> degrees = parse_degrees(cfg.get_string("degrees", ""));
        const HomologyProfile target = parse_target(cfg.get_string("target", ""));
        if (cfg.get_bool("complete", false)) {
            const auto window = parse_degrees(cfg.get_string("window", "-8,8"));
            if (window.size() != 2) throw config_error("window must be 'lo,hi'");
            const auto completions = minimal_completion(
                degrees, target, cfg.get_bool("pairing", false), window[0], window[1]);
            out["minimal_completions"] = completions;
            out["size"] = completions.empty() ? 0 : completions.front().size();
        } else {
            out["realizable"] = realizable(degrees, target);
        }
    }
    art.add(cfg.get_string("output.json", ""), out.dump(2) + "\n");
    return 0;
}

int cmd_verify(const Config& cfg, Artifacts& art)
{
    const ReversibleSystem sys = system_from_config(cfg);
    const ReversibilityReport rep =
        verify_reversibility(sys, cfg.get_int("samples", 1000));
    art.add(cfg.get_string("output.json", ""), to_json(rep).dump(2) + "\n");
    if (cfg.has("max_residual") && rep.worst() > cfg.get_double("max_residual")) {
        std::cerr << "error: code=4 msg=reversibility residual " << rep.worst()
                  << " exceeds bound\n";
        return 4;
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args)
{
    CLI::App app{"symmetric-chord toolkit for reversible planar Hamiltonian systems"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--set", overrides, "override a config key (key=value)");

    struct Flag {
        std::string key;
        std::string value;
    };
    std::vector<Flag> flags;
    auto bind = [&flags](CLI::App* cmd, const std::string& name, const std::string& key,
                         const std::string& help) {
        cmd->add_option_function<std::string>(
               name,
               [&flags, key](const std::string& v) {
                   flags.push_back({key, v});
               },
               help)
            ->expected(1);
    };

    CLI::App* find = app.add_subcommand("find-chord", "shoot a single chord");
    CLI::App* cont = app.add_subcommand("continue", "continue a chord family in energy");
    CLI::App* scan = app.add_subcommand("scan", "bifurcation diagram scan");
    CLI::App* index = app.add_subcommand("index", "Robbin-Salamon index of a chord");
    CLI::App* tau = app.add_subcommand("tau-table", "resonance energy table");
    CLI::App* hom = app.add_subcommand("homology", "Z2 complex queries");
    CLI::App* verify = app.add_subcommand("verify", "reversibility residual report");

    for (CLI::App* cmd : {find, cont, scan, index}) {
        bind(cmd, "--system", "system", "system id");
        bind(cmd, "--involution", "involution", "involution id");
        bind(cmd, "--involution-end", "involution_end", "end involution id");
        bind(cmd, "--tau", "tau", "energy level");
        bind(cmd, "--seed-s", "seed.s", "chart parameter seed");
        bind(cmd, "--seed-T", "seed.T", "duration seed");
        bind(cmd, "--branch", "seed.branch", "chart branch sign");
        bind(cmd, "--cover", "cover", "covering number of the seed");
        cmd->add_flag_callback(
            "--circular-seed", [&flags] { flags.push_back({"seed.circular", "true"}); },
            "seed from the direct circular orbit at tau");
        bind(cmd, "--json", "output.json", "JSON output path");
    }
    for (CLI::App* cmd : {cont, scan}) {
        bind(cmd, "--tau-min", "tau_min", "lower end of the energy range");
        bind(cmd, "--tau-max", "tau_max", "upper end of the energy range");
        bind(cmd, "--csv", "output.csv", "CSV output path");
    }
    cont->add_flag_callback(
        "--locate", [&flags] { flags.push_back({"locate", "true"}); },
        "locate index jumps in the continued family");
    bind(cont, "--events", "output.events", "events JSON output path");
    bind(scan, "--svg", "output.svg", "SVG diagram output path");
    bind(scan, "--expect-events", "scan.expect_events", "fail unless this many events");
    bind(tau, "--N", "N", "cover k - l");
    bind(tau, "--kmax", "kmax", "largest k");
    bind(tau, "--csv", "output.csv", "CSV output path");
    bind(hom, "--complex", "complex", "complex JSON file");
    bind(hom, "--degrees", "degrees", "generator degrees, comma separated");
    bind(hom, "--target", "target", "target profile degree:dim,...");
    bind(hom, "--window", "window", "completion window lo,hi");
    bind(hom, "--batch", "batch", "batch realizability query file");
    hom->add_flag_callback(
        "--pairing", [&flags] { flags.push_back({"pairing", "true"}); },
        "even multiplicities in completions");
    hom->add_flag_callback(
        "--complete", [&flags] { flags.push_back({"complete", "true"}); },
        "search minimal completions");
    bind(hom, "--json", "output.json", "JSON output path");
    bind(verify, "--system", "system", "system id");
    bind(verify, "--samples", "samples", "sample count");
    bind(verify, "--max-residual", "max_residual", "fail above this residual");
    bind(verify, "--json", "output.json", "JSON output path");

    // CLI11 wants argv-style reversed input
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: code=2 msg=" << e.what() << "\n";
        return 2;
    }

    try {
        Config cfg;
        if (!config_path.empty()) cfg = Config::from_file(config_path);
        for (const auto& o : overrides) {
            const auto eq = o.find('=');
            if (eq == std::string::npos)
                throw config_error("--set expects key=value, got: " + o);
            cfg.set(o.substr(0, eq), o.substr(eq + 1));
        }
        for (const auto& f : flags) cfg.set(f.key, f.value);

        Artifacts art;
        int code = 0;
        if (find->parsed())
            code = cmd_find_chord(cfg, art);
        else if (cont->parsed())
            code = cmd_continue(cfg, art);
        else if (scan->parsed())
            code = cmd_scan(cfg, art);
        else if (index->parsed())
            code = cmd_index(cfg, art);
        else if (tau->parsed())
            code = cmd_tau_table(cfg, art);
        else if (hom->parsed())
            code = cmd_homology(cfg, art);
        else if (verify->parsed())
            code = cmd_verify(cfg, art);
        if (code == 0) art.flush();
        return code;
    } catch (const config_error& e) {
        std::cerr << "error: code=2 msg=" << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: code=3 msg=" << e.what() << "\n";
        return 3;
    }
}

}  // namespace symchord
