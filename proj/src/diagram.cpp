#include "foamcalc/diagram.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace foamcalc {

namespace {

// Arc union-find used while assembling diagrams and resolutions.
struct ArcUF {
    std::map<Id, Id> parent;
    void ensure(Id a) { parent.emplace(a, a); }
    Id find(Id a) {
        ensure(a);
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(Id a, Id b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);  // keep the least id
    }
};

void canonicalizeArcs(LinkDiagram& d, ArcUF& uf, const std::vector<Id>& loops) {
    for (auto& c : d.crossings) {
        c.sw = uf.find(c.sw);
        c.se = uf.find(c.se);
        c.ne = uf.find(c.ne);
        c.nw = uf.find(c.nw);
    }
    std::set<Id> ids;
    for (const auto& c : d.crossings) {
        ids.insert(c.sw);
        ids.insert(c.se);
        ids.insert(c.ne);
        ids.insert(c.nw);
    }
    for (Id l : loops) {
        Id r = uf.find(l);
        if (!ids.count(r)) d.freeLoops.push_back(r);
        ids.insert(r);
    }
    std::sort(d.freeLoops.begin(), d.freeLoops.end());
    d.freeLoops.erase(std::unique(d.freeLoops.begin(), d.freeLoops.end()), d.freeLoops.end());
    d.arcs.assign(ids.begin(), ids.end());
}

}  // namespace

LinkDiagram parseBraid(int strands, const std::vector<int>& word) {
    if (strands < 1) throw DiagramError("braid needs at least one strand");
    LinkDiagram d;
    d.source = DiagramSource::Braid;

    std::vector<Id> initial(strands), cur(strands);
    Id next = 1;
    for (int p = 0; p < strands; ++p) initial[p] = cur[p] = next++;

    for (int letter : word) {
        int a = letter > 0 ? letter : -letter;
        if (a < 1 || a >= strands)
            throw DiagramError("braid letter out of range: " + std::to_string(letter));
        int p = a - 1;
        CrossingData c;
        c.sign = letter > 0 ? +1 : -1;
        c.sw = cur[p];
        c.se = cur[p + 1];
        c.nw = next++;
        c.ne = next++;
        cur[p] = c.nw;
        cur[p + 1] = c.ne;
        d.crossings.push_back(c);
    }

    ArcUF uf;
    std::vector<Id> loops;
    for (int p = 0; p < strands; ++p) {
        uf.unite(initial[p], cur[p]);
        if (initial[p] == cur[p]) loops.push_back(initial[p]);
    }
    canonicalizeArcs(d, uf, loops);
    return d;
}

LinkDiagram parseBraidString(const std::string& text) {
    auto semi = text.find(';');
    if (semi == std::string::npos)
        throw DiagramError("braid input must look like \"<strands>; <letters>\"");
    auto parseInt = [](const std::string& s, const char* what) {
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(s, &pos);
        } catch (...) {
            throw DiagramError(std::string("bad integer in ") + what + ": '" + s + "'");
        }
        while (pos < s.size()) {
            if (!std::isspace(static_cast<unsigned char>(s[pos])))
                throw DiagramError(std::string("bad integer in ") + what + ": '" + s + "'");
            ++pos;
        }
        return v;
    };
    int strands = parseInt(text.substr(0, semi), "strand count");
    std::vector<int> word;
    std::string rest = text.substr(semi + 1);
    std::stringstream ss(rest);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        bool blank = true;
        for (char ch : tok)
            if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
        if (blank) continue;
        word.push_back(parseInt(tok, "braid word"));
    }
    return parseBraid(strands, word);
}

LinkDiagram parsePD(const std::string& text) {
    LinkDiagram d;
    d.source = DiagramSource::PD;
    std::size_t i = 0;
    auto skipWsOnly = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto skipWs = [&] {  // between crossings commas are also separators
        while (i < text.size() &&
               (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
            ++i;
    };
    skipWs();
    while (i < text.size()) {
        if (text[i] != 'X')
            throw DiagramError("expected 'Xp' or 'Xm' at position " + std::to_string(i));
        ++i;
        if (i >= text.size() || (text[i] != 'p' && text[i] != 'm'))
            throw DiagramError("crossing sign must be 'p' or 'm'");
        int sign = text[i] == 'p' ? +1 : -1;
        ++i;
        skipWsOnly();
        if (i >= text.size() || text[i] != '[') throw DiagramError("expected '[' after crossing tag");
        ++i;
        Id slots[4];
        for (int k = 0; k < 4; ++k) {
            skipWsOnly();
            std::size_t start = i;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            if (start == i) throw DiagramError("expected arc label in crossing");
            slots[k] = static_cast<Id>(std::stoul(text.substr(start, i - start)));
            if (slots[k] == 0) throw DiagramError("arc labels must be positive");
            skipWsOnly();
            if (k < 3) {
                if (i >= text.size() || text[i] != ',')
                    throw DiagramError("expected ',' between arc labels");
                ++i;
            }
        }
        if (i >= text.size() || text[i] != ']') throw DiagramError("expected ']' closing crossing");
        ++i;
        CrossingData c;
        c.sign = sign;
        c.sw = slots[0];
        c.se = slots[1];
        c.ne = slots[2];
        c.nw = slots[3];
        d.crossings.push_back(c);
        skipWs();
    }
    if (d.crossings.empty()) throw DiagramError("PD input contains no crossings");

    std::map<Id, int> inCount, outCount;
    for (const auto& c : d.crossings) {
        inCount[c.sw]++;
        inCount[c.se]++;
        outCount[c.ne]++;
        outCount[c.nw]++;
    }
    for (const auto& [arc, n] : inCount) {
        if (n > 1)
            throw DiagramError("orientation conflict: arc " + std::to_string(arc) +
                               " enters two crossings");
        if (!outCount.count(arc))
            throw DiagramError("dangling arc " + std::to_string(arc) + " (never leaves a crossing)");
    }
    for (const auto& [arc, n] : outCount) {
        if (n > 1)
            throw DiagramError("orientation conflict: arc " + std::to_string(arc) +
                               " leaves two crossings");
        if (!inCount.count(arc))
            throw DiagramError("dangling arc " + std::to_string(arc) + " (never enters a crossing)");
    }

    ArcUF uf;
    canonicalizeArcs(d, uf, {});
    return d;
}

Id crossingBarId(const LinkDiagram& d, int j) {
    Id base = d.arcs.empty() ? 0 : d.arcs.back();
    return base + 1 + static_cast<Id>(j);
}

Resolution resolve(const LinkDiagram& d, const std::vector<bool>& choice) {
    if (choice.size() != d.crossings.size())
        throw DiagramError("resolution choice length must match the crossing count");

    Resolution r;
    r.sites.resize(d.crossings.size());

    ArcUF uf;
    for (Id a : d.arcs) uf.ensure(a);
    for (std::size_t j = 0; j < d.crossings.size(); ++j) {
        const auto& c = d.crossings[j];
        bool identity = (c.sign > 0) ? !choice[j] : choice[j];
        if (c.sign > 0) {
            r.qShift += choice[j] ? 3 : 2;
            r.height += choice[j] ? 1 : 0;
        } else {
            r.qShift += choice[j] ? -2 : -3;
            r.height += choice[j] ? 0 : -1;
        }
        if (identity) {
            uf.unite(c.sw, c.nw);
            uf.unite(c.se, c.ne);
        }
    }

    // Classes with no H-smoothed endpoint close into free circles; the rest
    // become edges between the H-sites' vertices.
    struct EndInfo {
        bool haveHead = false, haveTail = false;
        VId headV = 0, tailV = 0;
    };
    std::map<Id, EndInfo> ends;
    for (std::size_t j = 0; j < d.crossings.size(); ++j) {
        const auto& c = d.crossings[j];
        auto& site = r.sites[j];
        site.swClass = uf.find(c.sw);
        site.seClass = uf.find(c.se);
        site.neClass = uf.find(c.ne);
        site.nwClass = uf.find(c.nw);
        bool identity = (c.sign > 0) ? !choice[j] : choice[j];
        site.smoothedH = !identity;
        if (!site.smoothedH) continue;
        site.bar = crossingBarId(d, static_cast<int>(j));
        site.sink = crossingSinkId(static_cast<int>(j));
        site.source = crossingSourceId(static_cast<int>(j));
        for (Id cls : {site.swClass, site.seClass}) {
            auto& e = ends[cls];
            if (e.haveHead) throw DiagramError("orientation conflict in resolution");
            e.haveHead = true;
            e.headV = site.sink;
        }
        for (Id cls : {site.neClass, site.nwClass}) {
            auto& e = ends[cls];
            if (e.haveTail) throw DiagramError("orientation conflict in resolution");
            e.haveTail = true;
            e.tailV = site.source;
        }
    }

    std::set<Id> classes;
    for (Id a : d.arcs) classes.insert(uf.find(a));
    for (Id cls : classes) {
        auto it = ends.find(cls);
        if (it == ends.end()) {
            r.web.addCircle(cls);
        } else {
            if (!it->second.haveHead || !it->second.haveTail)
                throw DiagramError("internal: arc class with a single loose end");
            r.web.addEdgeRaw(cls, it->second.tailV, it->second.headV);
        }
    }
    for (std::size_t j = 0; j < d.crossings.size(); ++j) {
        const auto& site = r.sites[j];
        if (!site.smoothedH) continue;
        r.web.addEdgeRaw(site.bar, site.source, site.sink);
        r.web.addVertexRaw(site.sink, Polarity::Sink,
                           {EdgeEnd{site.swClass, true}, EdgeEnd{site.seClass, true},
                            EdgeEnd{site.bar, true}});
        r.web.addVertexRaw(site.source, Polarity::Source,
                           {EdgeEnd{site.nwClass, false}, EdgeEnd{site.bar, false},
                            EdgeEnd{site.neClass, false}});
    }
    r.web.validate();
    return r;
}

}  // namespace foamcalc
