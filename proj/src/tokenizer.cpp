#include "exitpoll/tokenizer.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "exitpoll/error.hpp"

namespace exitpoll {

void TokenizerConfig::validate() const {
    if (min_token_length < 1) throw Error("min_token_length must be at least 1");
}

std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& config) {
    config.validate();
    std::vector<std::string> tokens;
    std::string current;
    std::size_t length = 0;

    auto flush = [&] {
        if (length >= config.min_token_length && !config.stopwords.contains(current))
            tokens.push_back(current);
        current.clear();
        length = 0;
    };

    const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
    const auto size = static_cast<int32_t>(text.size());
    int32_t i = 0;
    while (i < size) {
        UChar32 c;
        U8_NEXT(bytes, i, size, c);
        if (c < 0 || !(u_isalpha(c) || u_isdigit(c))) {
            flush();
            continue;
        }
        if (config.lowercase) c = u_tolower(c);
        char buf[U8_MAX_LENGTH];
        int32_t n = 0;
        U8_APPEND_UNSAFE(buf, n, c);
        current.append(buf, static_cast<std::size_t>(n));
        ++length;
    }
    flush();
    return tokens;
}

}  // namespace exitpoll
