#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include <salamander/construct.hpp>
#include <salamander/io.hpp>
#include <salamander/nfold.hpp>
#include <salamander/theorems.hpp>
#include <salamander/total.hpp>
#include <salamander/twist.hpp>

using namespace salamander;
using json = nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Out {
    json j = json::object();
    std::ostringstream text;
    bool ok = true;
    std::string first_failure;

    void fail(const std::string& what) {
        if (ok) first_failure = what;
        ok = false;
    }
};

std::vector<long> parse_ints(const std::string& s, std::size_t n, const char* what) {
    std::vector<long> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stol(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw UsageError(std::string("bad ") + what + " '" + s + "'");
        }
    }
    if (n && out.size() != n) throw UsageError(std::string("bad ") + what + " '" + s + "'");
    return out;
}

Position parse_pos(const std::string& s) {
    auto v = parse_ints(s, 2, "position");
    return {static_cast<int>(v[0]), static_cast<int>(v[1])};
}

std::pair<Position, Direction> parse_arrow(const std::string& s) {
    auto comma = s.rfind(',');
    if (comma == std::string::npos) throw UsageError("bad arrow '" + s + "'");
    std::string d = s.substr(comma + 1);
    if (d != "h" && d != "v") throw UsageError("arrow direction must be h or v");
    return {parse_pos(s.substr(0, comma)), d == "h" ? Direction::horizontal : Direction::vertical};
}

AnyComplex load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_complex(ss.str());
    } catch (const ParseError& e) {
        throw UsageError(path + ":" + e.what());
    }
}

template <class F>
json sequence_json(SequenceReport<F>& rep) {
    rep.evaluate();
    json terms = json::array();
    for (const auto& t : rep.terms) terms.push_back({{"label", t.label}, {"dim", t.value->dim()}});
    return {{"name", rep.name}, {"terms", terms}, {"verdicts", rep.verdicts}, {"exact", rep.exact()}};
}

template <class F>
void sequence_text(std::ostream& os, const SequenceReport<F>& rep) {
    os << rep.name << ":";
    for (const auto& t : rep.terms) os << " " << t.label << "[" << t.value->dim() << "]";
    os << "\n  verdicts:";
    for (bool v : rep.verdicts) os << (v ? " exact" : " NOT-EXACT");
    os << "\n";
}

template <class F>
void record_sequence(Out& o, SequenceReport<F>& rep, json& into) {
    into.push_back(sequence_json(rep));
    sequence_text(o.text, rep);
    if (!rep.exact()) o.fail(rep.name + " is not exact");
}

const char* kind_name(CornerKind k) {
    switch (k) {
        case CornerKind::horizontal: return "horizontal";
        case CornerKind::vertical: return "vertical";
        case CornerKind::receptor: return "receptor";
        case CornerKind::donor: return "donor";
    }
    return "?";
}

const std::vector<CornerKind> all_kinds{CornerKind::horizontal, CornerKind::vertical, CornerKind::receptor,
                                        CornerKind::donor};

template <class F>
const DoubleComplex<F>& need_double(const AnyComplex& a) {
    if (auto* c = std::get_if<DoubleComplex<F>>(&a)) return *c;
    throw UsageError("this command needs a double complex over the file's field");
}

// Calls fn with the double complex stored in `a`, whatever its field.
template <class Fn>
void with_double(const AnyComplex& a, Fn&& fn) {
    if (is_triple(a)) throw UsageError("this command needs a double complex");
    std::visit(
        [&](const auto& c) {
            if constexpr (requires { c.window(); }) fn(c);
        },
        a);
}

template <class Fn>
void with_triple(const AnyComplex& a, Fn&& fn) {
    if (!is_triple(a)) throw UsageError("this command needs a triple complex");
    std::visit(
        [&](const auto& c) {
            if constexpr (requires { c.arity(); }) fn(c);
        },
        a);
}

std::vector<Position> arrows_of(const Window& w, Direction dir) {
    std::vector<Position> out;
    for (Position p : w.positions())
        if (w.contains(step(p, dir))) out.push_back(p);
    return out;
}

// ---- commands on double complexes ----

template <class F>
void cmd_validate(const DoubleComplex<F>& c, Out& o) {
    auto rep = validate(c);
    json issues = json::array();
    for (const auto& i : rep.issues) issues.push_back(i.to_string());
    auto prof = exactness_profile(c);
    o.j["valid"] = rep.valid();
    o.j["issues"] = issues;
    o.j["total_dim"] = c.total_dim();
    o.j["rows_exact"] = prof.rows_exact();
    o.j["cols_exact"] = prof.cols_exact();
    o.text << (rep.valid() ? "valid double complex" : "NOT a double complex") << ", total dimension " << c.total_dim()
           << "\n";
    for (const auto& i : rep.issues) o.text << "  " << i.to_string() << "\n";
    o.text << "rows exact: " << (prof.rows_exact() ? "yes" : "no") << ", columns exact: "
           << (prof.cols_exact() ? "yes" : "no") << "\n";
    if (!rep.valid()) o.fail(rep.issues.front().to_string());
}

template <class F>
void cmd_corners(const DoubleComplex<F>& c, Out& o, const std::string& pos, const std::string& kind) {
    std::vector<CornerKind> kinds;
    if (kind == "all") kinds = all_kinds;
    for (auto k : all_kinds)
        if (kind == kind_name(k) || (kind.size() == 1 && kind[0] == kind_name(k)[0])) kinds.push_back(k);
    if (kinds.empty()) throw UsageError("unknown corner kind '" + kind + "'");
    std::vector<Position> ps = pos.empty() ? c.window().positions() : std::vector<Position>{parse_pos(pos)};
    CornerContext<F> ctx(c);
    json rows = json::array();
    o.text << "position";
    for (auto k : kinds) o.text << " " << kind_name(k);
    o.text << "\n";
    for (Position p : ps) {
        json row = {{"pos", {p.i, p.r}}};
        o.text << p.to_string();
        for (auto k : kinds) {
            auto d = ctx.object(p, k)->dim();
            row[kind_name(k)] = d;
            o.text << " " << d;
        }
        o.text << "\n";
        rows.push_back(row);
    }
    o.j["corners"] = rows;
}

template <class F>
void cmd_salamander(const DoubleComplex<F>& c, Out& o, const std::string& arrow) {
    std::vector<std::pair<Position, Direction>> arrows;
    if (!arrow.empty())
        arrows.push_back(parse_arrow(arrow));
    else
        for (Direction dir : {Direction::horizontal, Direction::vertical})
            for (Position p : arrows_of(c.window(), dir)) arrows.push_back({p, dir});
    CornerContext<F> ctx(c);
    json seqs = json::array();
    std::size_t verdicts = 0;
    for (auto [p, dir] : arrows) {
        auto rep = ctx.salamander(p, dir);
        record_sequence(o, rep, seqs);
        verdicts += rep.verdicts.size();
    }
    o.j["sequences"] = seqs;
    o.j["arrows"] = arrows.size();
    o.j["verdicts"] = verdicts;
    o.text << arrows.size() << " arrows, " << verdicts << " verdicts\n";
}

template <class F>
void cmd_snake(const DoubleComplex<F>& c, Out& o) {
    auto rep = snake(c);
    json seqs = json::array();
    record_sequence(o, rep.sequence, seqs);
    o.j["sequence"] = seqs[0];
    o.j["oracle_agrees"] = rep.oracle_agrees;
    json chain = json::array();
    for (const auto& t : rep.connecting_chain.trace) chain.push_back(t.to_string());
    o.j["connecting_chain"] = chain;
    o.text << "connecting map " << rep.connecting.shape() << ", lifting oracle "
           << (rep.oracle_agrees ? "agrees" : "DISAGREES") << "\n";
    for (const auto& t : rep.connecting_chain.trace) o.text << "  " << t.to_string() << "\n";
    if (!rep.oracle_agrees) o.fail("connecting map differs from the lifting oracle");
}

template <class F>
void cmd_sharp(const DoubleComplex<F>& c, Out& o, bool augmented) {
    auto rep = sharp_3x3(c, augmented);
    json seqs = json::array();
    record_sequence(o, rep.first_row, seqs);
    o.j["first_row"] = seqs[0];
    json chains = json::array();
    for (const auto& ch : rep.chains) {
        json steps = json::array();
        for (const auto& t : ch.trace) steps.push_back(t.to_string());
        chains.push_back(steps);
        o.text << "chain:";
        for (const auto& t : ch.trace) o.text << " [" << t.to_string() << "]";
        o.text << "\n";
    }
    o.j["chains"] = chains;
}

LongSequenceSpec parse_longseq(const std::string& s) {
    static const std::map<std::string, std::pair<LongSequenceSpec::Kind, std::size_t>> kinds{
        {"one_row", {LongSequenceSpec::one_row, 1}},       {"linked_all", {LongSequenceSpec::linked_all, 0}},
        {"ijk", {LongSequenceSpec::ijk, 3}},               {"ijk_mixed", {LongSequenceSpec::ijk_mixed, 3}},
        {"nine_term", {LongSequenceSpec::nine_term, 2}},   {"splice_3_1", {LongSequenceSpec::splice_3_1, 2}},
        {"splice_2_2", {LongSequenceSpec::splice_2_2, 2}}};
    auto colon = s.find(':');
    auto it = kinds.find(s.substr(0, colon));
    if (it == kinds.end()) throw UsageError("unknown sequence kind '" + s + "'");
    LongSequenceSpec spec;
    spec.kind = it->second.first;
    std::vector<long> args;
    if (colon != std::string::npos) args = parse_ints(s.substr(colon + 1), 0, "sequence arguments");
    if (args.size() != it->second.second) throw UsageError("wrong number of arguments in '" + s + "'");
    int* slots[] = {&spec.i, &spec.j, &spec.k};
    for (std::size_t k = 0; k < args.size(); ++k) *slots[k] = static_cast<int>(args[k]);
    return spec;
}

template <class F>
void cmd_longseq(const DoubleComplex<F>& c, Out& o, const std::string& spec) {
    auto res = long_sequences(c, parse_longseq(spec));
    json seqs = json::array();
    for (auto& s : res.sequences) record_sequence(o, s, seqs);
    json links = json::array();
    for (const auto& l : res.links) {
        links.push_back({{"claim", l.claim}, {"iso", l.iso}});
        o.text << "link " << l.claim << ": " << (l.iso ? "iso" : "NOT iso") << "\n";
        if (!l.iso) o.fail("link " + l.claim + " is not an isomorphism");
    }
    o.j["sequences"] = seqs;
    o.j["links"] = links;
}

template <class F>
void cmd_total(const DoubleComplex<F>& c, Out& o, std::optional<int> degree) {
    TotalContext<F> ctx(c);
    const auto& t = ctx.total();
    std::vector<int> ns;
    if (degree)
        ns.push_back(*degree);
    else
        for (int n = t.nmin - 1; n <= t.nmax + 1; ++n) ns.push_back(n);
    json degs = json::array();
    for (int n : ns) {
        auto h = ctx.corner(n, TotalKind::diag).value->dim();
        auto sal = total_salamander(ctx, n);
        json seq = json::array();
        record_sequence(o, sal.direct, seq);
        degs.push_back({{"n", n}, {"homology", h}, {"salamander", seq[0]}, {"skew_dims_match", sal.dims_match}});
        o.text << "degree " << n << ": homology " << h << ", skew dimensions "
               << (sal.dims_match ? "match" : "DIFFER") << "\n";
        if (!sal.dims_match) o.fail("skew dimensions differ in degree " + std::to_string(n));
    }
    o.j["degrees"] = degs;
}

template <class F>
void cmd_decompose(const DoubleComplex<F>& c, Out& o) {
    auto d = decompose_fx(c);
    json blocks = json::array();
    for (const auto& b : d.blocks) {
        blocks.push_back({{"anchor", {b.anchor.i, b.anchor.r}}, {"dim", b.dim}});
        o.text << "block at " << b.anchor.to_string() << " of dimension " << b.dim << "\n";
    }
    o.j["blocks"] = blocks;
    o.j["steps"] = d.certificate.size();
    o.text << d.blocks.size() << " blocks\n";
}

template <class F>
void cmd_twist(const DoubleComplex<F>& c, Out& o, const std::string& arrow) {
    auto [p, dir] = parse_arrow(arrow);
    auto t = twist_build(c, p, dir);
    auto tr = twist_sequence(t);
    json seqs = json::array();
    record_sequence(o, tr.sequence, seqs);
    json signs = json::object();
    for (const auto& [name, s] : t.signs) signs[name] = s;
    o.j["sequence"] = seqs[0];
    o.j["signs"] = signs;
    o.j["interior"] = {tr.interior_first, tr.interior_last};
}

// ---- triple complexes ----

template <class F>
void cmd_triple(const CubicalComplex<F>& t, Out& o, const std::string& spec, const std::string& pos) {
    auto cat = enumerate_downsets(3);
    std::vector<DownSet> sets;
    if (spec == "all") {
        sets = cat.sets;
    } else {
        DownSet s{3, {}};
        std::stringstream ss(spec);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (part.size() != 3 || part.find_first_not_of("01") != std::string::npos)
                throw UsageError("down-set members are 0/1 strings of length 3");
            unsigned v = 0;
            for (int b = 0; b < 3; ++b)
                if (part[static_cast<std::size_t>(b)] == '1') v |= 1u << b;
            s.members.push_back(v);
        }
        std::sort(s.members.begin(), s.members.end());
        if (std::find(cat.sets.begin(), cat.sets.end(), s) == cat.sets.end())
            throw UsageError("'" + spec + "' is not one of the 18 up-sets");
        sets.push_back(s);
    }
    std::vector<Position3> ps;
    if (pos.empty())
        ps = t.box();
    else {
        auto v = parse_ints(pos, 3, "position");
        ps.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])});
    }
    o.j["valid"] = is_valid(t);
    if (!is_valid(t)) o.fail("not a triple complex");
    json rows = json::array();
    for (const auto& p : ps)
        for (const auto& s : sets) {
            auto d = downset_homology(t, p, s).dim();
            rows.push_back({{"pos", {p[0], p[1], p[2]}}, {"downset", s.label()}, {"dim", d}});
            o.text << to_string(p) << " " << s.label() << " " << d << "\n";
        }
    o.j["homology"] = rows;
}

template <class F>
void cmd_validate_triple(const CubicalComplex<F>& t, Out& o) {
    auto issues = cubical_issues(t);
    o.j["valid"] = issues.empty();
    o.j["issues"] = issues;
    o.j["total_dim"] = t.total_dim();
    o.text << (issues.empty() ? "valid triple complex" : "NOT a triple complex") << ", total dimension "
           << t.total_dim() << "\n";
    for (const auto& i : issues) o.text << "  " << i << "\n";
    if (!issues.empty()) o.fail(issues.front());
}

void cmd_downsets(Out& o, int n) {
    auto cat = enumerate_downsets(n);
    json sets = json::array();
    for (const auto& s : cat.sets) sets.push_back(s.label());
    json orbits = json::array();
    for (const auto& orb : cat.orbits) {
        json members = json::array();
        o.text << "orbit of size " << orb.size() << ":";
        for (auto k : orb) {
            members.push_back(cat.sets[k].label());
            o.text << " " << cat.sets[k].label();
        }
        o.text << "\n";
        orbits.push_back(members);
    }
    o.j["n"] = n;
    o.j["downsets"] = sets;
    o.j["orbits"] = orbits;
    o.text << cat.sets.size() << " down-sets in " << cat.orbits.size() << " orbits\n";
}

struct GenOptions {
    std::string mode = "tensor", out, window = "0,4,0,4", lines;
    std::size_t max_dim = 3, count = 3;
    std::uint32_t prime = 101;
    bool rows_exact = false, cols_exact = false, augmented = false;
};

void cmd_gen(Out& o, const GenOptions& g, std::uint64_t seed) {
    PrimeField f(g.prime);
    std::string text;
    if (g.mode == "cube-extensions") {
        Rng rng(seed);
        text = print_complex(cube_extensions(f, 3, 2, g.count, std::max<std::size_t>(1, g.max_dim / 2), rng));
    } else {
        static const std::map<std::string, GeneratorMode> modes{
            {"tensor", GeneratorMode::tensor},
            {"ex-extensions", GeneratorMode::ex_extensions},
            {"chain-map-fill", GeneratorMode::chain_map_fill},
            {"snake-instance", GeneratorMode::snake_instance},
            {"sharp3x3-instance", GeneratorMode::sharp3x3_instance},
            {"nonexact-rows", GeneratorMode::nonexact_rows}};
        auto it = modes.find(g.mode);
        if (it == modes.end()) throw UsageError("unknown generator mode '" + g.mode + "'");
        GeneratorSpec spec;
        spec.seed = seed;
        auto w = parse_ints(g.window, 4, "window");
        spec.window = {static_cast<int>(w[0]), static_cast<int>(w[1]), static_cast<int>(w[2]), static_cast<int>(w[3])};
        spec.max_dim = g.max_dim;
        spec.mode = it->second;
        spec.rows_exact = g.rows_exact;
        spec.cols_exact = g.cols_exact;
        spec.count = g.count;
        spec.augmented = g.augmented;
        std::stringstream ss(g.lines);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (part.size() < 2 || (part[0] != 'r' && part[0] != 'c')) throw UsageError("lines are r<i> or c<r>");
            spec.lines.push_back({part[0] == 'r', static_cast<int>(parse_ints(part.substr(1), 1, "line")[0])});
        }
        text = print_complex(generate(f, spec));
    }
    if (g.out.empty() || g.out == "-") {
        std::cout << text;
    } else {
        std::ofstream outf(g.out, std::ios::binary);
        if (!outf) throw UsageError("cannot write " + g.out);
        outf << text;
    }
    o.j["mode"] = g.mode;
    o.j["seed"] = seed;
    o.j["out"] = g.out;
}

// The property suite over `seeds` generated instances.
void cmd_selfcheck(Out& o, std::size_t seeds, std::uint64_t base) {
    PrimeField f(101);
    std::map<std::string, std::size_t> passed, failed;
    auto note = [&](const std::string& name, bool ok) {
        (ok ? passed : failed)[name]++;
        if (!ok) o.fail(name);
    };
    GeneratorMode modes[] = {GeneratorMode::tensor, GeneratorMode::chain_map_fill, GeneratorMode::ex_extensions,
                             GeneratorMode::nonexact_rows};
    for (std::uint64_t s = base; s < base + seeds; ++s) {
        GeneratorSpec spec;
        spec.seed = s;
        spec.window = {0, 4, 0, 4};
        spec.max_dim = 3;
        spec.mode = modes[s % 4];
        spec.lines = {{true, 1}, {false, 2}};
        auto c = generate(f, spec);
        note("valid", is_valid(c));
        CornerContext<PrimeField> ctx(c);
        for (Direction dir : {Direction::horizontal, Direction::vertical})
            for (Position p : arrows_of(c.window(), dir)) {
                auto rep = ctx.salamander(p, dir);
                rep.evaluate();
                note("salamander", rep.exact());
            }
        TotalContext<PrimeField> tctx(c);
        for (int n = tctx.total().nmin; n <= tctx.total().nmax; ++n) {
            auto sal = total_salamander(tctx, n);
            sal.direct.evaluate();
            note("total salamander", sal.direct.exact() && sal.dims_match);
        }
        auto t = from_double(c);
        for (Position p : c.window().positions())
            note("down-set n=2", downset_homology(t, {p.i, p.r, 0}, DownSet{2, {3}}) ==
                                     *ctx.object(p, CornerKind::donor));

        spec.mode = GeneratorMode::tensor;
        spec.rows_exact = spec.cols_exact = true;
        auto e = generate(f, spec);
        for (Direction dir : {Direction::horizontal, Direction::vertical})
            for (Position p : arrows_of(e.window(), dir)) note("extramural iso", check_extramural_iso(e, p, dir).iso);

        spec.mode = GeneratorMode::snake_instance;
        auto sn = snake(generate(f, spec));
        sn.sequence.evaluate();
        note("snake", sn.sequence.exact() && sn.oracle_agrees);

        spec.mode = GeneratorMode::sharp3x3_instance;
        auto sh = sharp_3x3(generate(f, spec), false);
        sh.first_row.evaluate();
        note("sharp 3x3", sh.first_row.exact());

        Rng rng(s);
        std::vector<std::pair<Position, std::size_t>> made;
        auto x = ex_extensions(f, {0, 4, 0, 4}, 3, 4, rng, &made);
        auto d = decompose_fx(x);
        std::size_t total = 0;
        for (const auto& b : d.blocks) total += 4 * b.dim;
        note("decompose", total == x.total_dim());
    }
    json pj = json::object(), fj = json::object();
    for (const auto& [k, v] : passed) pj[k] = v;
    for (const auto& [k, v] : failed) fj[k] = v;
    o.j["passed"] = pj;
    o.j["failed"] = fj;
    o.j["seeds"] = seeds;
    for (const auto& [k, v] : passed) o.text << k << ": " << v << " passed, " << (failed.count(k) ? failed[k] : 0) << " failed\n";
    for (const auto& [k, v] : failed)
        if (!passed.count(k)) o.text << k << ": 0 passed, " << v << " failed\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Salamander lemma toolkit for finite double and triple complexes"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    std::uint64_t seed = 1;
    app.add_flag("--json", as_json, "Emit a JSON report");
    app.add_option("--seed", seed, "Seed for generators")->capture_default_str();

    std::string file, pos, kind = "all", arrow, spec, downset = "all";
    std::optional<int> degree;
    bool augmented = false;
    int n = 3;
    std::size_t seeds = 20;
    GenOptions g;

    auto* validate_cmd = app.add_subcommand("validate", "Check d^2 = 0 and commuting squares");
    validate_cmd->add_option("file", file)->required();
    auto* corners_cmd = app.add_subcommand("corners", "Dimensions of the four corner objects");
    corners_cmd->add_option("file", file)->required();
    corners_cmd->add_option("--pos", pos, "i,r");
    corners_cmd->add_option("--kind", kind, "horizontal|vertical|receptor|donor|all");
    auto* sal_cmd = app.add_subcommand("salamander", "Six-term sequences of arrows");
    sal_cmd->add_option("file", file)->required();
    sal_cmd->add_option("--arrow", arrow, "i,r,h or i,r,v (default: every arrow)");
    auto* snake_cmd = app.add_subcommand("snake", "Snake sequence of a two-row input");
    snake_cmd->add_option("file", file)->required();
    auto* sharp_cmd = app.add_subcommand("sharp3x3", "Sharp 3x3 lemma");
    sharp_cmd->add_option("file", file)->required();
    sharp_cmd->add_flag("--augmented", augmented);
    auto* long_cmd = app.add_subcommand("longseq", "Long exact sequences");
    long_cmd->add_option("file", file)->required();
    long_cmd->add_option("--spec", spec, "one_row:i | linked_all | ijk:i,j,k | ijk_mixed:i,j,k | nine_term:i,r | "
                                         "splice_3_1:r,k | splice_2_2:r,k")
        ->required();
    auto* total_cmd = app.add_subcommand("total", "Total complex homology and salamanders");
    total_cmd->add_option("file", file)->required();
    total_cmd->add_option("--degree", degree);
    auto* dec_cmd = app.add_subcommand("decompose", "Split an exact complex into elementary blocks");
    dec_cmd->add_option("file", file)->required();
    auto* twist_cmd = app.add_subcommand("twist", "Twisted diagram and its long exact sequence");
    twist_cmd->add_option("file", file)->required();
    twist_cmd->add_option("--arrow", arrow, "i,r,h or i,r,v")->required();
    auto* down_cmd = app.add_subcommand("downsets", "List the down-set constructions");
    down_cmd->add_option("--n", n)->check(CLI::IsMember({2, 3}));
    auto* triple_cmd = app.add_subcommand("triple", "Down-set homology of a triple complex");
    triple_cmd->add_option("file", file)->required();
    triple_cmd->add_option("--downset", downset, "comma-separated 0/1 strings, or all");
    triple_cmd->add_option("--pos", pos, "i,r,s");
    auto* gen_cmd = app.add_subcommand("gen", "Generate a complex file");
    gen_cmd->add_option("--mode", g.mode,
                        "tensor|ex-extensions|chain-map-fill|snake-instance|sharp3x3-instance|nonexact-rows|"
                        "cube-extensions");
    gen_cmd->add_option("--out", g.out, "output file (default stdout)");
    gen_cmd->add_option("--window", g.window, "i0,i1,r0,r1");
    gen_cmd->add_option("--max-dim", g.max_dim);
    gen_cmd->add_option("--count", g.count);
    gen_cmd->add_option("--prime", g.prime);
    gen_cmd->add_option("--lines", g.lines, "e.g. r1,c2");
    gen_cmd->add_flag("--rows-exact", g.rows_exact);
    gen_cmd->add_flag("--cols-exact", g.cols_exact);
    gen_cmd->add_flag("--augmented", g.augmented);
    auto* self_cmd = app.add_subcommand("selfcheck", "Run the property suite on generated instances");
    self_cmd->add_option("--seeds", seeds);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Out o;
    std::string command = app.get_subcommands().front()->get_name();
    o.j["command"] = command;
    try {
        if (*validate_cmd) {
            auto c = load(file);
            if (is_triple(c))
                with_triple(c, [&](const auto& t) { cmd_validate_triple(t, o); });
            else
                with_double(c, [&](const auto& x) { cmd_validate(x, o); });
        } else if (*corners_cmd) {
            with_double(load(file), [&](const auto& x) { cmd_corners(x, o, pos, kind); });
        } else if (*sal_cmd) {
            with_double(load(file), [&](const auto& x) { cmd_salamander(x, o, arrow); });
        } else if (*snake_cmd) {
            with_double(load(file), [&](const auto& x) { cmd_snake(x, o); });
        } else if (*sharp_cmd) {
            with_double(load(file), [&](const auto& x) { cmd_sharp(x, o, augmented); });
        } else if (*long_cmd) {
            auto c = load(file);
            with_double(c, [&](const auto& x) { cmd_longseq(x, o, spec); });
        } else if (*total_cmd) {
            with_double(load(file), [&](const auto& x) { cmd_total(x, o, degree); });
        } else if (*dec_cmd) {
            with_double(load(file), [&](const auto& x) { cmd_decompose(x, o); });
        } else if (*twist_cmd) {
            with_double(load(file), [&](const auto& x) { cmd_twist(x, o, arrow); });
        } else if (*down_cmd) {
            cmd_downsets(o, n);
        } else if (*triple_cmd) {
            with_triple(load(file), [&](const auto& t) { cmd_triple(t, o, downset, pos); });
        } else if (*gen_cmd) {
            cmd_gen(o, g, seed);
            if (g.out.empty() || g.out == "-") return 0;
        } else if (*self_cmd) {
            cmd_selfcheck(o, seeds, seed);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        o.fail(e.what());
    }
    o.j["ok"] = o.ok;
    if (!o.ok) o.j["failure"] = o.first_failure;
    if (as_json)
        std::cout << o.j.dump(2) << "\n";
    else {
        std::cout << o.text.str();
        if (!o.ok) std::cout << "FAIL: " << o.first_failure << "\n";
    }
    return o.ok ? 0 : 1;
}
