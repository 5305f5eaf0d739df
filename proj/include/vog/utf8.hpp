#pragma once

#include <string>
#include <vector>

namespace vog {

// Decodes UTF-8 into codepoints. Throws vog::Error("parse", ...) on malformed input.
std::vector<char32_t> utf8_decode(const std::string& s);

void utf8_append(std::string& out, char32_t cp);

std::string utf8_encode(const std::vector<char32_t>& cps);
std::string utf8_encode(const char32_t* cps, std::size_t n);

// Number of codepoints in a UTF-8 string.
std::size_t utf8_length(const std::string& s);

}  // namespace vog
