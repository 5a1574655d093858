#include "qhosvd/media_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qhosvd/errors.hpp"

namespace qhosvd {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'Q', 'T', 'N', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

bool get_u64(std::istream& in, std::uint64_t& v) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) return false;
    v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return true;
}

}  // namespace

void write_tensor(const QTensor& t, std::ostream& out) {
    if (t.empty()) throw ShapeError("write_tensor: empty tensor");
    if (t.order() > 255) throw ShapeError("write_tensor: order exceeds 255");
    out.write(kMagic, 4);
    out.put(static_cast<char>(t.order()));
    for (auto d : t.dims()) put_u64(out, d);
    for (const auto& q : t.data()) {
        for (double c : {q.w, q.x, q.y, q.z}) put_u64(out, std::bit_cast<std::uint64_t>(c));
    }
    if (!out) throw IoError("write_tensor: write failed");
}

QTensor read_tensor(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4)) throw ParseError(ParseError::Kind::truncated, "QTN1: file too short for magic");
    if (!std::equal(magic, magic + 4, kMagic)) {
        throw ParseError(ParseError::Kind::bad_magic,
                         "QTN1: bad magic '" + std::string(magic, 4) + "' (expected 'QTN1')");
    }
    const int order = in.get();
    if (order == std::char_traits<char>::eof()) throw ParseError(ParseError::Kind::truncated, "QTN1: missing order byte");
    if (order == 0) throw ParseError(ParseError::Kind::zero_order, "QTN1: order 0 tensor");

    std::vector<std::size_t> dims(static_cast<std::size_t>(order));
    // Each entry is 32 bytes, so the entry count must fit in size_t / 32.
    constexpr std::uint64_t kMaxEntries = std::numeric_limits<std::size_t>::max() / 32;
    std::uint64_t count = 1;
    for (auto& d : dims) {
        std::uint64_t v = 0;
        if (!get_u64(in, v)) throw ParseError(ParseError::Kind::truncated, "QTN1: truncated header");
        if (v == 0) throw ParseError(ParseError::Kind::bad_header, "QTN1: zero dimension");
        if (v > kMaxEntries || count > kMaxEntries / v) {
            throw ParseError(ParseError::Kind::dimension_overflow, "QTN1: dimensions overflow the addressable size");
        }
        count *= v;
        d = static_cast<std::size_t>(v);
    }

    // Read in bounded chunks so a forged header cannot force a huge allocation
    // before the payload proves to exist.
    std::vector<Quaternion> data;
    data.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 20)));
    std::vector<unsigned char> buf;
    std::uint64_t left = count;
    while (left > 0) {
        const std::size_t chunk = static_cast<std::size_t>(std::min<std::uint64_t>(left, 4096));
        buf.resize(chunk * 32);
        if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
            std::ostringstream os;
            os << "QTN1: truncated payload (expected " << count << " entries)";
            throw ParseError(ParseError::Kind::truncated, os.str());
        }
        for (std::size_t e = 0; e < chunk; ++e) {
            double c[4];
            for (int p = 0; p < 4; ++p) {
                std::uint64_t v = 0;
                for (int i = 7; i >= 0; --i) v = (v << 8) | buf[e * 32 + p * 8 + i];
                c[p] = std::bit_cast<double>(v);
            }
            data.emplace_back(c[0], c[1], c[2], c[3]);
        }
        left -= chunk;
    }
    return QTensor(std::move(dims), std::move(data));
}

void write_tensor_file(const QTensor& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_tensor(t, out);
    out.close();
    if (!out) throw IoError("cannot write '" + path + "'");
}

QTensor read_tensor_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return read_tensor(in);
}

namespace {

// Next whitespace-delimited PPM header token, skipping '#' comments.
std::string ppm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

std::size_t ppm_number(std::istream& in, const char* what) {
    const std::string tok = ppm_token(in);
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char ch) { return ch >= '0' && ch <= '9'; }) ||
        tok.size() > 9) {
        throw DataError(std::string("PPM: bad ") + what);
    }
    return static_cast<std::size_t>(std::stoul(tok));
}

}  // namespace

Image read_ppm(std::istream& in) {
    if (ppm_token(in) != "P6") throw DataError("PPM: not a binary P6 file");
    Image img;
    img.width = ppm_number(in, "width");
    img.height = ppm_number(in, "height");
    const std::size_t maxval = ppm_number(in, "maxval");
    if (img.width == 0 || img.height == 0) throw DataError("PPM: zero image size");
    if (maxval != 255) throw DataError("PPM: only maxval 255 is supported");
    // ppm_token consumed exactly one whitespace byte after maxval.
    img.rgb.resize(3 * img.width * img.height);
    if (!in.read(reinterpret_cast<char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()))) {
        throw DataError("PPM: truncated pixel data");
    }
    return img;
}

Image read_ppm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return read_ppm(in);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_ppm(const Image& img, std::ostream& out) {
    if (img.rgb.size() != 3 * img.width * img.height) throw ShapeError("write_ppm: pixel buffer size mismatch");
    out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
    if (!out) throw IoError("write_ppm: write failed");
}

void write_ppm_file(const Image& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_ppm(img, out);
}

QTensor frames_to_tensor(const std::vector<Image>& frames) {
    if (frames.empty()) throw DataError("frames_to_tensor: no frames");
    const std::size_t h = frames[0].height;
    const std::size_t w = frames[0].width;
    const std::size_t f = frames.size();
    QTensor t({f, h, w});
    for (std::size_t n = 0; n < f; ++n) {
        const Image& img = frames[n];
        if (img.height != h || img.width != w) throw DataError("frames_to_tensor: frames differ in size");
        if (img.rgb.size() != 3 * w * h) throw DataError("frames_to_tensor: pixel buffer size mismatch");
        for (std::size_t r = 0; r < h; ++r) {
            for (std::size_t c = 0; c < w; ++c) {
                const std::uint8_t* p = &img.rgb[3 * (r * w + c)];
                t({n, r, c}) = Quaternion{0.0, p[0] / 255.0, p[1] / 255.0, p[2] / 255.0};
            }
        }
    }
    return t;
}

namespace {

std::uint8_t to_channel(double v) {
    const double s = std::clamp(v, 0.0, 1.0) * 255.0;
    return static_cast<std::uint8_t>(std::nearbyint(s));
}

}  // namespace

std::vector<Image> tensor_to_frames(const QTensor& t) {
    if (t.order() != 3) throw ShapeError("tensor_to_frames: tensor must have order 3 (frames, rows, cols)");
    const std::size_t f = t.dims()[0];
    const std::size_t h = t.dims()[1];
    const std::size_t w = t.dims()[2];
    std::vector<Image> frames(f);
    for (std::size_t n = 0; n < f; ++n) {
        Image& img = frames[n];
        img.width = w;
        img.height = h;
        img.rgb.resize(3 * w * h);
        for (std::size_t r = 0; r < h; ++r) {
            for (std::size_t c = 0; c < w; ++c) {
                const Quaternion& q = t({n, r, c});
                std::uint8_t* p = &img.rgb[3 * (r * w + c)];
                p[0] = to_channel(q.x);
                p[1] = to_channel(q.y);
                p[2] = to_channel(q.z);
            }
        }
    }
    return frames;
}

std::vector<Image> load_frame_directory(const std::string& dir) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError("'" + dir + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".ppm") files.push_back(entry.path());
    }
    if (ec) throw IoError("cannot list '" + dir + "'");
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    if (files.empty()) throw IoError("no .ppm frames in '" + dir + "'");
    std::vector<Image> frames;
    for (const auto& p : files) frames.push_back(read_ppm_file(p.string()));
    return frames;
}

void write_frame_directory(const std::vector<Image>& frames, const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir + "'");
    for (std::size_t n = 0; n < frames.size(); ++n) {
        std::ostringstream name;
        name << "frame_" << std::setw(4) << std::setfill('0') << n << ".ppm";
        write_ppm_file(frames[n], (fs::path(dir) / name.str()).string());
    }
}

std::vector<Image> synthetic_gradient_video(std::size_t frames, std::size_t height, std::size_t width) {
    if (frames == 0 || height == 0 || width == 0) throw ShapeError("synthetic_gradient_video: zero size");
    constexpr double tau = 2.0 * std::numbers::pi;
    std::vector<Image> out(frames);
    for (std::size_t n = 0; n < frames; ++n) {
        Image& img = out[n];
        img.width = width;
        img.height = height;
        img.rgb.resize(3 * width * height);
        const double phase = static_cast<double>(n) / static_cast<double>(frames);
        for (std::size_t r = 0; r < height; ++r) {
            const double y = static_cast<double>(r) / static_cast<double>(height);
            for (std::size_t c = 0; c < width; ++c) {
                const double x = static_cast<double>(c) / static_cast<double>(width);
                const double red = 0.5 + 0.4 * std::sin(tau * (x + phase));
                const double green = 0.5 + 0.4 * std::cos(tau * (y - 0.5 * phase));
                const double blue = 0.5 + 0.25 * std::sin(tau * (x + y + phase)) + 0.15 * std::cos(3.0 * tau * x * y);
                std::uint8_t* p = &img.rgb[3 * (r * width + c)];
                p[0] = to_channel(red);
                p[1] = to_channel(green);
                p[2] = to_channel(blue);
            }
        }
    }
    return out;
}

}  // namespace qhosvd
