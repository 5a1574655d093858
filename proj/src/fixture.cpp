#include "qhosvd/fixture.hpp"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "qhosvd/errors.hpp"

namespace qhosvd {

namespace detail {
extern const char* const kAppendixText;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t j = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > j) out.push_back(line.substr(j, i - j));
    }
    return out;
}

template <class T>
T parse_number(std::string_view tok, std::size_t line_no) {
    T v{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw DataError("fixture line " + std::to_string(line_no) + ": bad number '" + std::string(tok) + "'");
    }
    return v;
}

struct Row {
    std::vector<std::size_t> idx;
    Quaternion q;
};

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

QTensor parse_tensor_text(std::string_view text) {
    std::vector<Row> rows;
    std::size_t order = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto toks = split_ws(line);
        if (toks.empty() || toks[0].front() == '#') continue;
        if (toks.size() < 5) throw DataError("fixture line " + std::to_string(line_no) + ": too few fields");
        const std::size_t n = toks.size() - 4;
        if (order == 0) order = n;
        if (n != order) throw DataError("fixture line " + std::to_string(line_no) + ": inconsistent order");
        Row r;
        for (std::size_t l = 0; l < n; ++l) {
            const auto i = parse_number<std::size_t>(toks[l], line_no);
            if (i == 0) throw DataError("fixture line " + std::to_string(line_no) + ": indices are 1-based");
            r.idx.push_back(i - 1);
        }
        r.q = Quaternion{parse_number<double>(toks[n], line_no), parse_number<double>(toks[n + 1], line_no),
                         parse_number<double>(toks[n + 2], line_no), parse_number<double>(toks[n + 3], line_no)};
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw DataError("fixture contains no entries");

    std::vector<std::size_t> dims(order, 0);
    for (const auto& r : rows)
        for (std::size_t l = 0; l < order; ++l) dims[l] = std::max(dims[l], r.idx[l] + 1);
    QTensor t(dims);
    std::vector<bool> seen(t.size(), false);
    for (const auto& r : rows) {
        const std::size_t lin = t.linear_index(r.idx);
        if (seen[lin]) throw DataError("fixture lists an entry twice");
        seen[lin] = true;
        t.data()[lin] = r.q;
    }
    if (rows.size() != t.size()) throw DataError("fixture is missing entries");
    return t;
}

QTensor appendix_tensor() {
    const std::string_view text(detail::kAppendixText);
    if (fnv1a64(text) != kAppendixChecksum) throw DataError("embedded fixture checksum mismatch");
    return parse_tensor_text(text);
}

QTensor load_appendix_fixture(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open fixture '" + path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("cannot read fixture '" + path + "'");
    const std::uint64_t h = fnv1a64(text);
    if (h != kAppendixChecksum) {
        std::ostringstream os;
        os << "fixture '" << path << "' checksum mismatch (got " << std::hex << h << ", expected "
           << kAppendixChecksum << ")";
        throw DataError(os.str());
    }
    return parse_tensor_text(text);
}

}  // namespace qhosvd
