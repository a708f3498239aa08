#include "cuspkit/words.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace cuspkit {

void free_reduce(Word& w) {
    Word out;
    out.reserve(w.size());
    for (int x : w) {
        if (!out.empty() && out.back() == -x) out.pop_back();
        else out.push_back(x);
    }
    w = std::move(out);
}

Word word_inverse(const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (int& x : r) x = -x;
    return r;
}

Word word_concat(const Word& u, const Word& v) {
    Word r = u;
    r.insert(r.end(), v.begin(), v.end());
    free_reduce(r);
    return r;
}

Word word_power(const Word& w, long n) {
    const Word base = n < 0 ? word_inverse(w) : w;
    Word r;
    for (long i = 0; i < std::abs(n); ++i) r.insert(r.end(), base.begin(), base.end());
    free_reduce(r);
    return r;
}

std::string format_word(const Word& w) {
    if (w.empty()) return "1";
    std::string s;
    for (int x : w) {
        int g = std::abs(x) - 1;
        if (g < 26) {
            s += static_cast<char>((x > 0 ? 'a' : 'A') + g);
        } else {
            s += '[';
            if (x < 0) s += '-';
            s += std::to_string(g);
            s += ']';
        }
    }
    return s;
}

Word parse_word(std::string_view s) {
    Word w;
    if (s == "1") return w;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char ch = s[i];
        if (ch >= 'a' && ch <= 'z') {
            w.push_back(ch - 'a' + 1);
        } else if (ch >= 'A' && ch <= 'Z') {
            w.push_back(-(ch - 'A' + 1));
        } else if (ch == '[') {
            auto close = s.find(']', i);
            if (close == std::string_view::npos) throw std::invalid_argument("unterminated [ in word");
            std::string_view body = s.substr(i + 1, close - i - 1);
            bool neg = !body.empty() && body.front() == '-';
            if (neg) body.remove_prefix(1);
            int g = 0;
            auto [p, ec] = std::from_chars(body.data(), body.data() + body.size(), g);
            if (ec != std::errc() || p != body.data() + body.size() || body.empty())
                throw std::invalid_argument("bad generator index in word");
            w.push_back(neg ? -(g + 1) : g + 1);
            i = close;
        } else {
            throw std::invalid_argument(std::string("bad letter '") + ch + "' in word");
        }
    }
    return w;
}

MoebiusMap evaluate(const std::vector<MoebiusMap>& gens, const Word& w) {
    MoebiusMap m;
    for (int x : w) {
        std::size_t g = static_cast<std::size_t>(std::abs(x) - 1);
        if (g >= gens.size()) throw std::out_of_range("word uses an unknown generator");
        m = m * (x > 0 ? gens[g] : gens[g].inverse());
    }
    return m;
}

} // namespace cuspkit
