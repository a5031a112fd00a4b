#include "foamcalc/algebra.hpp"

namespace foamcalc {
namespace detail {

std::string renderTerm(const Rational& c, int qExp, bool hasT, int tExp) {
    std::string body;
    auto append = [&body](const std::string& factor) {
        if (!body.empty()) body += "*";
        body += factor;
    };
    if (qExp != 0) append(qExp == 1 ? "q" : "q^" + std::to_string(qExp));
    if (hasT && tExp != 0) append(tExp == 1 ? "t" : "t^" + std::to_string(tExp));

    Rational a = abs(c);
    std::string mag;
    if (body.empty()) {
        mag = a.str();
    } else if (a.isOne()) {
        mag = body;
    } else {
        mag = a.str() + "*" + body;
    }
    return (c.sign() < 0 ? "-" : "") + mag;
}

}  // namespace detail

std::string LaurentPoly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        std::string t = detail::renderTerm(c, e, false, 0);
        if (first) {
            out = t;
            first = false;
        } else if (!t.empty() && t[0] == '-') {
            out += " - " + t.substr(1);
        } else {
            out += " + " + t;
        }
    }
    return out;
}

std::string BiPoly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        std::string t = detail::renderTerm(c, k.qExp, true, k.tExp);
        if (first) {
            out = t;
            first = false;
        } else if (!t.empty() && t[0] == '-') {
            out += " - " + t.substr(1);
        } else {
            out += " + " + t;
        }
    }
    return out;
}

}  // namespace foamcalc
