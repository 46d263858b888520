#include "crosseai/io/map_file.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>
#include <vector>

#include "crosseai/errors.hpp"

namespace crosseai::io {
namespace {

constexpr char kNpyMagic[] = "\x93NUMPY";
constexpr std::size_t kNpyMagicLen = 6;

std::vector<char> read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_all(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

[[noreturn]] void bad(const std::filesystem::path& path, const std::string& why) {
    throw FormatError(path.string() + ": " + why);
}

// Value text following `'key':` in a numpy header dict, up to the next
// top-level comma or closing brace.
std::string header_field(const std::string& header, const std::string& key, const std::filesystem::path& path) {
    const std::string needle = "'" + key + "'";
    auto pos = header.find(needle);
    if (pos == std::string::npos) bad(path, "NPY header lacks '" + key + "'");
    pos = header.find(':', pos + needle.size());
    if (pos == std::string::npos) bad(path, "malformed NPY header");
    ++pos;
    int depth = 0;
    std::size_t end = pos;
    for (; end < header.size(); ++end) {
        const char c = header[end];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth == 0 && (c == ',' || c == '}')) break;
    }
    std::string v = header.substr(pos, end - pos);
    const auto first = v.find_first_not_of(" \t");
    const auto last = v.find_last_not_of(" \t");
    return first == std::string::npos ? std::string() : v.substr(first, last - first + 1);
}

std::vector<long long> parse_shape(const std::string& text, const std::filesystem::path& path) {
    if (text.size() < 2 || text.front() != '(' || text.back() != ')') bad(path, "malformed NPY shape '" + text + "'");
    std::vector<long long> dims;
    std::string inner = text.substr(1, text.size() - 2);
    std::size_t i = 0;
    while (i < inner.size()) {
        while (i < inner.size() && (inner[i] == ' ' || inner[i] == ',')) ++i;
        if (i >= inner.size()) break;
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(inner.substr(i), &used);
        } catch (const std::exception&) {
            bad(path, "malformed NPY shape '" + text + "'");
        }
        if (used == 0 || v < 0) bad(path, "malformed NPY shape '" + text + "'");
        dims.push_back(v);
        i += used;
        while (i < inner.size() && inner[i] == 'L') ++i;
    }
    return dims;
}

float load_le_f32(const char* p) {
    std::uint32_t bits;
    std::memcpy(&bits, p, sizeof bits);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    return std::bit_cast<float>(bits);
}

void store_le_f32(float v, char* p) {
    auto bits = std::bit_cast<std::uint32_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap32(bits);
    std::memcpy(p, &bits, sizeof bits);
}

SaliencyMap checked_map(int w, int h, std::vector<double> cells, const std::filesystem::path& path) {
    for (double v : cells) {
        if (!std::isfinite(v)) bad(path, "non-finite intensity");
    }
    return SaliencyMap(w, h, std::move(cells));
}

}  // namespace

bool is_map_file(const std::filesystem::path& path) {
    const auto ext = path.extension();
    return ext == ".npy" || ext == ".pgm";
}

SaliencyMap load_npy(const std::filesystem::path& path) {
    const std::vector<char> bytes = read_all(path);
    if (bytes.size() < kNpyMagicLen + 4 || std::memcmp(bytes.data(), kNpyMagic, kNpyMagicLen) != 0) {
        bad(path, "missing NPY magic");
    }
    const auto major = static_cast<unsigned char>(bytes[6]);
    const auto minor = static_cast<unsigned char>(bytes[7]);
    if (major != 1 || minor != 0) {
        bad(path, "unsupported NPY version " + std::to_string(major) + "." + std::to_string(minor));
    }
    const std::size_t header_len =
        static_cast<unsigned char>(bytes[8]) | (static_cast<std::size_t>(static_cast<unsigned char>(bytes[9])) << 8);
    const std::size_t data_offset = 10 + header_len;
    if (bytes.size() < data_offset) bad(path, "truncated NPY header");
    const std::string header(bytes.data() + 10, header_len);

    const std::string descr = header_field(header, "descr", path);
    const std::string order = header_field(header, "fortran_order", path);
    const std::vector<long long> shape = parse_shape(header_field(header, "shape", path), path);

    if (order != "False") bad(path, "Fortran-order arrays are not supported");
    if (shape.size() != 2) bad(path, "expected 2 dimensions, found " + std::to_string(shape.size()));

    std::size_t item = 0;
    if (descr == "'<f4'") {
        item = 4;
    } else if (descr == "'|u1'" || descr == "'<u1'") {
        item = 1;
    } else {
        bad(path, "unsupported dtype " + descr + " (expected '<f4' or '|u1')");
    }

    const long long h = shape[0];
    const long long w = shape[1];
    if (h < 1 || w < 1 || h > std::numeric_limits<int>::max() || w > std::numeric_limits<int>::max()) {
        bad(path, "invalid shape " + std::to_string(h) + "x" + std::to_string(w));
    }
    const auto count = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
    if (bytes.size() - data_offset != count * item) {
        bad(path, "payload is " + std::to_string(bytes.size() - data_offset) + " bytes, expected " +
                      std::to_string(count * item));
    }

    std::vector<double> cells(count);
    const char* p = bytes.data() + data_offset;
    for (std::size_t i = 0; i < count; ++i) {
        cells[i] = item == 4 ? static_cast<double>(load_le_f32(p + 4 * i)) : static_cast<unsigned char>(p[i]);
    }
    return checked_map(static_cast<int>(w), static_cast<int>(h), std::move(cells), path);
}

void save_npy(const SaliencyMap& map, const std::filesystem::path& path) {
    std::string dict = "{'descr': '<f4', 'fortran_order': False, 'shape': (" + std::to_string(map.height()) + ", " +
                       std::to_string(map.width()) + "), }";
    // Pad so the payload starts on a 64-byte boundary; the header ends in '\n'.
    const std::size_t unpadded = 10 + dict.size() + 1;
    dict.append((64 - unpadded % 64) % 64, ' ');
    dict.push_back('\n');

    std::string out(kNpyMagic, kNpyMagicLen);
    out.push_back(1);
    out.push_back(0);
    out.push_back(static_cast<char>(dict.size() & 0xff));
    out.push_back(static_cast<char>((dict.size() >> 8) & 0xff));
    out += dict;

    const std::size_t offset = out.size();
    out.resize(offset + 4 * map.size());
    const auto values = map.values();
    for (std::size_t i = 0; i < values.size(); ++i) store_le_f32(static_cast<float>(values[i]), out.data() + offset + 4 * i);
    write_all(path, out);
}

SaliencyMap load_pgm(const std::filesystem::path& path) {
    const std::vector<char> bytes = read_all(path);
    if (bytes.size() < 2 || bytes[0] != 'P') bad(path, "missing PGM magic");
    if (bytes[1] != '5') bad(path, std::string("unsupported PGM variant P") + bytes[1] + " (only binary P5)");

    std::size_t pos = 2;
    const auto next_int = [&]() -> long long {
        for (;;) {
            while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
            if (pos < bytes.size() && bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
        if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos]))) bad(path, "malformed PGM header");
        long long v = 0;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            v = v * 10 + (bytes[pos] - '0');
            if (v > std::numeric_limits<int>::max()) bad(path, "PGM header value out of range");
            ++pos;
        }
        return v;
    };

    const long long w = next_int();
    const long long h = next_int();
    const long long maxval = next_int();
    if (w < 1 || h < 1) bad(path, "PGM dimensions must be positive");
    if (maxval != 255) bad(path, "unsupported PGM maxval " + std::to_string(maxval) + " (only 255)");
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) bad(path, "malformed PGM header");
    ++pos;

    const auto count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    if (bytes.size() - pos != count) {
        bad(path, "payload is " + std::to_string(bytes.size() - pos) + " bytes, expected " + std::to_string(count));
    }
    std::vector<double> cells(count);
    for (std::size_t i = 0; i < count; ++i) cells[i] = static_cast<unsigned char>(bytes[pos + i]);
    return checked_map(static_cast<int>(w), static_cast<int>(h), std::move(cells), path);
}

void save_pgm(const SaliencyMap& map, const std::filesystem::path& path) {
    std::string out = "P5\n" + std::to_string(map.width()) + " " + std::to_string(map.height()) + "\n255\n";
    for (double v : map.values()) {
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 255.0)))));
    }
    write_all(path, out);
}

SaliencyMap load_map(const std::filesystem::path& path) {
    const std::vector<char> head = [&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
        std::vector<char> b(kNpyMagicLen, 0);
        in.read(b.data(), static_cast<std::streamsize>(b.size()));
        b.resize(static_cast<std::size_t>(in.gcount()));
        return b;
    }();
    if (head.size() == kNpyMagicLen && std::memcmp(head.data(), kNpyMagic, kNpyMagicLen) == 0) return load_npy(path);
    if (head.size() >= 2 && head[0] == 'P') return load_pgm(path);
    bad(path, "unrecognized map format (expected NPY or PGM)");
}

void save_map(const SaliencyMap& map, const std::filesystem::path& path) {
    if (path.extension() == ".pgm") {
        save_pgm(map, path);
    } else {
        save_npy(map, path);
    }
}

}  // namespace crosseai::io
