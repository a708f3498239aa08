#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cuspkit/hmodel.hpp"

namespace cuspkit {

// A group word. Letter +k is generator k-1, letter -k its inverse.
using Word = std::vector<int>;

Word word_inverse(const Word& w);
Word word_concat(const Word& u, const Word& v);
Word word_power(const Word& w, long n);
void free_reduce(Word& w);

// Letters a..z for generators 0..25 (upper case for inverses); [n] / [-n] beyond.
std::string format_word(const Word& w);
Word parse_word(std::string_view s);

MoebiusMap evaluate(const std::vector<MoebiusMap>& gens, const Word& w);

} // namespace cuspkit
