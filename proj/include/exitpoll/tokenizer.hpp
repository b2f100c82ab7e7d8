#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace exitpoll {

struct TokenizerConfig {
    bool lowercase = true;
    std::size_t min_token_length = 2;  // in code points, >= 1
    std::set<std::string> stopwords;   // compared after case folding

    /// Throws Error when min_token_length is zero.
    void validate() const;
};

/// Splits UTF-8 text into maximal runs of Unicode letters and decimal
/// digits. Invalid byte sequences act as separators.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config = {});

}  // namespace exitpoll
