#include "seqbell/cli/matrix_io.h"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "seqbell/cli/config.h"

namespace seqbell::cli {

namespace {

bool parse_real(const std::string &s, double &out) {
    if (s.empty()) return false;
    errno = 0;
    char *end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && errno != ERANGE;
}

std::vector<std::vector<std::string>> tokenize(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> row;
        std::string tok;
        while (ls >> tok) row.push_back(tok);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Complex parse_complex(const std::string &token) {
    const auto bad = [&]() { return ConfigError("malformed complex number '" + token + "'"); };
    if (token.empty()) throw bad();
    double re = 0.0;
    if (token.back() != 'i') {
        if (!parse_real(token, re)) throw bad();
        return {re, 0.0};
    }
    const std::string body = token.substr(0, token.size() - 1);
    // Split at the last sign that is not part of an exponent or the leading sign.
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const std::string re_part = split == std::string::npos ? "" : body.substr(0, split);
    std::string im_part = split == std::string::npos ? body : body.substr(split);
    if (im_part.empty() || im_part == "+") im_part = "1";
    else if (im_part == "-") im_part = "-1";
    double im = 0.0;
    if (!parse_real(im_part, im)) throw bad();
    if (!re_part.empty() && !parse_real(re_part, re)) throw bad();
    return {re, im};
}

std::string format_complex(Complex z) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

CMatrix parse_matrix(const std::string &text, const std::string &origin) {
    const auto rows = tokenize(text);
    if (rows.empty()) throw ConfigError(origin + ": empty matrix");
    const std::size_t cols = rows.front().size();
    std::vector<Complex> entries;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw ConfigError(origin + ": row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                              " entries, expected " + std::to_string(cols));
        }
        for (const auto &tok : rows[r]) {
            try {
                entries.push_back(parse_complex(tok));
            } catch (const ConfigError &e) {
                throw ConfigError(origin + ": row " + std::to_string(r + 1) + ": " + e.what());
            }
        }
    }
    return CMatrix(rows.size(), cols, std::move(entries));
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CMatrix read_matrix_file(const std::filesystem::path &path) { return parse_matrix(read_text_file(path), path.string()); }

BehaviorTable parse_behavior_table(const std::string &text, const std::string &origin) {
    const auto rows = tokenize(text);
    if (rows.empty()) throw ConfigError(origin + ": empty behavior table");
    if (rows.front().size() != 4) {
        throw ConfigError(origin + ": header must be 'settings_a settings_b outcomes_a outcomes_b'");
    }
    std::size_t dims[4];
    for (int k = 0; k < 4; ++k) {
        double v = 0.0;
        if (!parse_real(rows.front()[k], v) || v < 1.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
            throw ConfigError(origin + ": header entry '" + rows.front()[k] + "' is not a positive integer");
        }
        dims[k] = static_cast<std::size_t>(v);
    }
    const std::size_t blocks = dims[0] * dims[1];
    const std::size_t per_block = dims[2] * dims[3];
    if (rows.size() - 1 != blocks) {
        throw ConfigError(origin + ": expected " + std::to_string(blocks) + " setting rows, found " +
                          std::to_string(rows.size() - 1));
    }
    std::vector<double> p;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != per_block) {
            throw ConfigError(origin + ": setting row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                              " entries, expected " + std::to_string(per_block));
        }
        for (const auto &tok : rows[r]) {
            double v = 0.0;
            if (!parse_real(tok, v)) throw ConfigError(origin + ": malformed probability '" + tok + "'");
            p.push_back(v);
        }
    }
    return BehaviorTable(dims[0], dims[1], dims[2], dims[3], std::move(p));
}

BehaviorTable read_behavior_table_file(const std::filesystem::path &path) {
    return parse_behavior_table(read_text_file(path), path.string());
}

}  // namespace seqbell::cli
