// Process oracle answering "does this path exist?" below a root directory.
//
//   semre-path-oracle ROOT
//
// Reads `query<TAB>payload` lines (payload escaped with \\ \t \n \r) and
// answers 1 or 0 per line. Every path, absolute or relative, is resolved
// below ROOT, so "/etc/hosts" means ROOT/etc/hosts. Empty payloads are
// never paths.

#include <filesystem>
#include <iostream>
#include <string>

namespace fs = std::filesystem;

static bool unescape(const std::string& in, std::string& out) {
    out.clear();
    for (std::size_t i = 0; i < in.size(); ++i) {
        if (in[i] != '\\') {
            out += in[i];
            continue;
        }
        if (++i == in.size()) return false;
        switch (in[i]) {
        case '\\': out += '\\'; break;
        case 't': out += '\t'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        default: return false;
        }
    }
    return true;
}

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: semre-path-oracle ROOT\n";
        return 2;
    }
    fs::path root(argv[1]);
    std::ios::sync_with_stdio(false);
    std::string line, payload;
    while (std::getline(std::cin, line)) {
        auto tab = line.find('\t');
        if (tab == std::string::npos || !unescape(line.substr(tab + 1), payload)) {
            std::cerr << "semre-path-oracle: malformed request\n";
            return 2;
        }
        bool exists = false;
        if (!payload.empty() && payload.find('\0') == std::string::npos) {
            fs::path p(payload);
            std::error_code ec;
            exists = fs::exists(root / p.relative_path(), ec);
        }
        std::cout << (exists ? "1\n" : "0\n") << std::flush;
    }
    return 0;
}
