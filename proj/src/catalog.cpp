#include "hgt/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "hgt/common.hpp"

namespace hgt {

SmallHypergraph Obstruction::as_hypergraph() const {
    SmallHypergraph h;
    h.v = vertex_count;
    h.triples = triples;
    return h;
}

namespace {

// Sorted triples over labels 0..max_label-1 where any label >= base must be
// taken from the contiguous fresh block base, base+1, base+2. Fresh labels
// are interchangeable before canonicalization, so this loses nothing.
std::vector<std::array<std::uint8_t, 3>> candidate_triples(int base, int max_label) {
    std::vector<std::array<std::uint8_t, 3>> out;
    int hi = std::min(base + 3, max_label);
    for (int a = 0; a < hi; ++a)
        for (int b = a + 1; b < hi; ++b)
            for (int c = b + 1; c < hi; ++c) {
                // fresh part must be a prefix of {base, base+1, base+2}
                bool ok = true;
                int expect = base;
                for (int x : {a, b, c})
                    if (x >= base) ok = ok && (x == expect++);
                if (ok)
                    out.push_back({static_cast<std::uint8_t>(a),
                                   static_cast<std::uint8_t>(b),
                                   static_cast<std::uint8_t>(c)});
            }
    return out;
}

std::uint16_t vertex_mask(const std::array<std::uint8_t, 3>& t) {
    return static_cast<std::uint16_t>((1u << t[0]) | (1u << t[1]) | (1u << t[2]));
}

// Checks every subset J containing the new triple t. A candidate survives iff
// no such J with v_J >= 4 has e_J = v_J - 2, except J = S + t itself when the
// full set is being emitted as an obstruction.
bool extension_stays_sparse(const std::vector<std::uint16_t>& smasks,
                            std::uint16_t tmask, bool skip_full) {
    const int e = static_cast<int>(smasks.size());
    const std::uint32_t full = (1u << e) - 1;
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
        if (skip_full && mask == full) continue;
        std::uint16_t vm = tmask;
        for (int i = 0; i < e; ++i)
            if (mask & (1u << i)) vm |= smasks[i];
        int vj = __builtin_popcount(vm);
        int ej = __builtin_popcount(mask) + 1;
        if (vj >= 4 && ej == vj - 2) return false;
    }
    return true;
}

}  // namespace

ObstructionCatalog enumerate_obstructions(int ell) {
    HGT_CHECK(ell >= kMinEll, "ell must be at least 4");
    HGT_CHECK(ell <= kMaxEll, "ell above 9 is not supported (enumeration cost is exponential)");

    // Level sets hold canonical representatives of "sparse" triple sets:
    // every subset spanning >= 4 vertices has at most span-3 triples. Every
    // proper subset of a minimal configuration is sparse, so growing sparse
    // sets one triple at a time reaches every target class.
    std::map<std::string, SmallHypergraph> level;
    std::map<std::string, SmallHypergraph> finals;

    {
        SmallHypergraph seed = make_hypergraph(3, {{{0, 1, 2}}});
        level.emplace(canonical_label(seed), std::move(seed));
    }

    for (int e = 1; e + 1 <= ell - 2; ++e) {
        std::map<std::string, SmallHypergraph> next;
        for (const auto& [key, s] : level) {
            (void)key;
            std::vector<std::uint16_t> smasks;
            smasks.reserve(s.triples.size());
            for (const auto& t : s.triples) smasks.push_back(vertex_mask(t));

            for (const auto& t : candidate_triples(s.v, ell)) {
                if (std::binary_search(s.triples.begin(), s.triples.end(), t)) continue;
                int fresh = 0;
                for (int x : t)
                    if (x >= s.v) ++fresh;
                int v2 = s.v + fresh;
                if (v2 > ell) continue;
                int e2 = e + 1;
                bool final_candidate = (e2 == v2 - 2);
                if (!extension_stays_sparse(smasks, vertex_mask(t), final_candidate))
                    continue;

                SmallHypergraph grown = s;
                grown.v = v2;
                grown.triples.push_back(t);
                grown.normalize();
                CanonicalForm cf = canonical_form(grown);
                if (final_candidate)
                    finals.emplace(std::move(cf.key), std::move(cf.form));
                else if (e2 + 1 <= ell - 2)  // room for at least one more triple
                    next.emplace(std::move(cf.key), std::move(cf.form));
            }
        }
        level = std::move(next);
    }

    ObstructionCatalog cat;
    cat.ell = ell;
    std::vector<std::pair<std::pair<int, std::string>, const SmallHypergraph*>> ordered;
    for (const auto& [key, h] : finals)
        ordered.push_back({{h.v, key}, &h});
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [vk, h] : ordered) {
        Obstruction o;
        o.vertex_count = h->v;
        o.triples = h->triples;
        o.aut_count = automorphism_count(*h);
        o.canonical_key = vk.second;
        if (o.vertex_count >= 6) cat.large_members.push_back(o);
        cat.all_members.push_back(std::move(o));
    }
    return cat;
}

std::string catalog_to_json(const ObstructionCatalog& c) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["ell"] = c.ell;
    j["obstructions"] = nlohmann::json::array();
    for (const auto& o : c.all_members) {
        nlohmann::json jo;
        jo["v"] = o.vertex_count;
        auto arr = nlohmann::json::array();
        for (const auto& t : o.triples) arr.push_back({t[0], t[1], t[2]});
        jo["triples"] = arr;
        jo["aut"] = o.aut_count;
        jo["key"] = to_hex(o.canonical_key);
        j["obstructions"].push_back(jo);
    }
    return j.dump(2);
}

ObstructionCatalog catalog_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    ObstructionCatalog c;
    c.ell = j.at("ell").get<int>();
    for (const auto& jo : j.at("obstructions")) {
        Obstruction o;
        o.vertex_count = jo.at("v").get<int>();
        for (const auto& t : jo.at("triples"))
            o.triples.push_back({t[0].get<std::uint8_t>(), t[1].get<std::uint8_t>(),
                                 t[2].get<std::uint8_t>()});
        o.aut_count = jo.at("aut").get<std::uint64_t>();
        o.canonical_key = from_hex(jo.at("key").get<std::string>());
        if (o.vertex_count >= 6) c.large_members.push_back(o);
        c.all_members.push_back(std::move(o));
    }
    return c;
}

void save_catalog(const ObstructionCatalog& c, const std::string& path) {
    std::ofstream out(path);
    HGT_REQUIRE_STATE(out.good(), "cannot open catalog file for writing: " + path);
    out << catalog_to_json(c) << "\n";
}

ObstructionCatalog load_catalog(const std::string& path) {
    std::ifstream in(path);
    HGT_REQUIRE_STATE(in.good(), "cannot open catalog file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return catalog_from_json(ss.str());
}

}  // namespace hgt
