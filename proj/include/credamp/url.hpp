#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>

namespace credamp {

// Extracts the normalized host from a URL: lowercase, scheme/userinfo/port/
// path/query/fragment removed, one leading "www." stripped.
// Returns nullopt for unparseable input or an empty/implausible host.
inline std::optional<std::string> extract_domain(std::string_view url) {
    if (url.empty()) return std::nullopt;

    // Strip scheme.
    if (auto pos = url.find("://"); pos != std::string_view::npos) {
        url.remove_prefix(pos + 3);
    } else if (url.starts_with("//")) {
        url.remove_prefix(2);
    }

    // Authority ends at the first path/query/fragment delimiter.
    if (auto pos = url.find_first_of("/?#"); pos != std::string_view::npos) {
        url = url.substr(0, pos);
    }

    // Userinfo.
    if (auto pos = url.rfind('@'); pos != std::string_view::npos) {
        url.remove_prefix(pos + 1);
    }

    // Port.
    if (auto pos = url.find(':'); pos != std::string_view::npos) {
        url = url.substr(0, pos);
    }

    std::string host(url);
    std::transform(host.begin(), host.end(), host.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

    while (!host.empty() && host.back() == '.') host.pop_back();
    if (host.starts_with("www.") && host.size() > 4) host.erase(0, 4);

    if (host.empty() || host.find('.') == std::string::npos) return std::nullopt;
    for (unsigned char c : host) {
        bool ok = std::isalnum(c) || c == '.' || c == '-' || c == '_';
        if (!ok) return std::nullopt;
    }
    if (host.front() == '.' || host.find("..") != std::string::npos) return std::nullopt;
    return host;
}

}  // namespace credamp
