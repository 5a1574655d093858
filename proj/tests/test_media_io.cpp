#include <gtest/gtest.h>

#include <bit>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qhosvd/decomposition.hpp"
#include "qhosvd/errors.hpp"
#include "qhosvd/media_io.hpp"

using namespace qhosvd;
namespace fs = std::filesystem;

namespace {

using Dims = std::vector<std::size_t>;

std::string serialize(const QTensor& t) {
    std::ostringstream os(std::ios::binary);
    write_tensor(t, os);
    return os.str();
}

QTensor deserialize(const std::string& bytes) {
    std::istringstream is(bytes, std::ios::binary);
    return read_tensor(is);
}

ParseError::Kind parse_kind(const std::string& bytes) {
    try {
        (void)deserialize(bytes);
    } catch (const ParseError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no ParseError";
    return ParseError::Kind::bad_header;
}

std::string le64(std::uint64_t v) {
    std::string s(8, '\0');
    for (int i = 0; i < 8; ++i) s[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
    return s;
}

bool bit_identical(const QTensor& a, const QTensor& b) {
    if (a.dims() != b.dims()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& p = a.data()[i];
        const auto& q = b.data()[i];
        for (auto [x, y] : {std::pair{p.w, q.w}, {p.x, q.x}, {p.y, q.y}, {p.z, q.z}}) {
            if (std::bit_cast<std::uint64_t>(x) != std::bit_cast<std::uint64_t>(y)) return false;
        }
    }
    return true;
}

Image solid(std::size_t w, std::size_t h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    Image img{w, h, {}};
    for (std::size_t i = 0; i < w * h; ++i) img.rgb.insert(img.rgb.end(), {r, g, b});
    return img;
}

class TempDir {
public:
    explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / name) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    [[nodiscard]] const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

}  // namespace

TEST(Qtn1, RoundTripIsBitExact) {
    std::mt19937_64 rng(1);
    QTensor t = random_qtensor({3, 2, 4, 2}, rng);
    t.data()[0] = Quaternion{-0.0, 1e-310, -1e300, 0.1};
    EXPECT_TRUE(bit_identical(t, deserialize(serialize(t))));
}

TEST(Qtn1, OneByOneFileSize) {
    const std::string bytes = serialize(QTensor(Dims{1, 1}, {Quaternion{1, 2, 3, 4}}));
    EXPECT_EQ(bytes.size(), 4u + 1 + 2 * 8 + 32);
    const std::string vec = serialize(QTensor(Dims{1}, {Quaternion{1, 2, 3, 4}}));
    EXPECT_EQ(vec.size(), 4u + 1 + 8 + 32);
}

TEST(Qtn1, ByteLayoutIsLittleEndian) {
    const std::string bytes = serialize(QTensor(Dims{2}, {Quaternion{1.0}, Quaternion{0, 0, 0, -2.0}}));
    std::string expected = "QTN1";
    expected += '\x01';
    expected += le64(2);
    expected += le64(std::bit_cast<std::uint64_t>(1.0)) + le64(0) + le64(0) + le64(0);
    expected += le64(0) + le64(0) + le64(0) + le64(std::bit_cast<std::uint64_t>(-2.0));
    EXPECT_EQ(bytes, expected);
}

TEST(Qtn1, EachMalformationHasItsOwnKind) {
    const std::string good = serialize(QTensor(Dims{2, 2}));

    std::string magic = good;
    magic[3] = '2';
    EXPECT_EQ(parse_kind(magic), ParseError::Kind::bad_magic);
    try {
        (void)deserialize(magic);
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("QTN2"), std::string::npos) << e.what();
    }

    EXPECT_EQ(parse_kind(good.substr(0, good.size() - 1)), ParseError::Kind::truncated);
    EXPECT_EQ(parse_kind(good.substr(0, 9)), ParseError::Kind::truncated);
    EXPECT_EQ(parse_kind("QT"), ParseError::Kind::truncated);
    EXPECT_EQ(parse_kind(std::string("QTN1") + '\0'), ParseError::Kind::zero_order);
    EXPECT_EQ(parse_kind(std::string("QTN1") + '\x02' + le64(1ULL << 40) + le64(1ULL << 40)),
              ParseError::Kind::dimension_overflow);
    EXPECT_EQ(parse_kind(std::string("QTN1") + '\x01' + le64(~0ULL)), ParseError::Kind::dimension_overflow);
    EXPECT_EQ(parse_kind(std::string("QTN1") + '\x01' + le64(0)), ParseError::Kind::bad_header);
    // A forged header for a large but representable tensor fails on the
    // payload, not on allocation.
    EXPECT_EQ(parse_kind(std::string("QTN1") + '\x01' + le64(1ULL << 36)), ParseError::Kind::truncated);
}

TEST(Qtn1, FileRoundTrip) {
    TempDir dir("qhosvd_qtn_test");
    std::mt19937_64 rng(2);
    const QTensor t = random_qtensor({2, 3, 2}, rng);
    const std::string path = (dir.path() / "t.qtn").string();
    write_tensor_file(t, path);
    EXPECT_TRUE(bit_identical(t, read_tensor_file(path)));
    EXPECT_THROW((void)read_tensor_file((dir.path() / "missing.qtn").string()), IoError);
    EXPECT_THROW(write_tensor_file(t, (dir.path() / "no/such/dir/t.qtn").string()), IoError);
}

TEST(Ppm, RoundTripAndHeaderComments) {
    Image img{3, 2, {}};
    for (std::uint8_t i = 0; i < 18; ++i) img.rgb.push_back(static_cast<std::uint8_t>(i * 14));
    std::ostringstream os(std::ios::binary);
    write_ppm(img, os);
    std::istringstream is(os.str(), std::ios::binary);
    EXPECT_EQ(read_ppm(is), img);

    std::string bytes = "P6\n# made by hand\n3 2\n255\n" + std::string(img.rgb.begin(), img.rgb.end());
    std::istringstream commented(bytes, std::ios::binary);
    EXPECT_EQ(read_ppm(commented), img);
}

TEST(Ppm, RejectsUnsupportedInput) {
    auto parse = [](const std::string& s) {
        std::istringstream is(s, std::ios::binary);
        return read_ppm(is);
    };
    EXPECT_THROW((void)parse("P3\n1 1\n255\n0 0 0\n"), DataError);
    EXPECT_THROW((void)parse("P6\n1 1\n65535\n"), DataError);
    EXPECT_THROW((void)parse("P6\n2 2\n255\nabc"), DataError);
    EXPECT_THROW((void)parse("P6\n0 2\n255\n"), DataError);
    EXPECT_THROW((void)parse("P6\n-1 2\n255\n"), DataError);
}

TEST(Frames, WhiteFrameIsAllImaginaryOnes) {
    const QTensor t = frames_to_tensor({solid(2, 2, 255, 255, 255)});
    EXPECT_EQ(t.dims(), (Dims{1, 2, 2}));
    for (const auto& q : t.data()) EXPECT_EQ(q, (Quaternion{0, 1, 1, 1}));
    EXPECT_TRUE(t.is_pure());
}

TEST(Frames, LayoutIsFrameRowColumn) {
    Image a = solid(3, 2, 0, 0, 0);
    a.rgb[3 * (1 * 3 + 2) + 1] = 51;  // row 1, column 2, green
    const QTensor t = frames_to_tensor({solid(3, 2, 0, 0, 0), a});
    EXPECT_EQ(t.dims(), (Dims{2, 2, 3}));
    EXPECT_EQ(t({1, 1, 2}), (Quaternion{0, 0, 0.2, 0}));
    EXPECT_EQ(fro_norm(t), 0.2);
}

TEST(Frames, RoundTripIsPixelExact) {
    const auto frames = synthetic_gradient_video(4, 5, 7);
    EXPECT_EQ(tensor_to_frames(frames_to_tensor(frames)), frames);
}

TEST(Frames, ClampAndRoundHalfToEven) {
    QTensor t(Dims{1, 1, 3});
    t({0, 0, 0}) = Quaternion{0, 1.2, -0.1, 0.5};
    t({0, 0, 1}) = Quaternion{7, 2.5 / 255, 3.5 / 255, 0.5000001};
    const Image img = tensor_to_frames(t)[0];
    EXPECT_EQ(img.rgb[0], 255);
    EXPECT_EQ(img.rgb[1], 0);
    EXPECT_EQ(img.rgb[2], 128);
    EXPECT_EQ(img.rgb[3], 2);
    EXPECT_EQ(img.rgb[4], 4);
    EXPECT_EQ(img.rgb[5], 128);
    EXPECT_EQ(img.rgb[6], 0);  // zero entry is black
}

TEST(Frames, ErrorCases) {
    EXPECT_THROW((void)frames_to_tensor({}), DataError);
    EXPECT_THROW((void)frames_to_tensor({solid(2, 2, 0, 0, 0), solid(2, 3, 0, 0, 0)}), DataError);
    EXPECT_THROW((void)tensor_to_frames(QTensor(Dims{2, 2})), ShapeError);
}

TEST(Frames, DirectoryOrderIsLexicographic) {
    TempDir dir("qhosvd_frames_test");
    write_ppm_file(solid(2, 1, 10, 0, 0), (dir.path() / "b.ppm").string());
    write_ppm_file(solid(2, 1, 20, 0, 0), (dir.path() / "a.ppm").string());
    write_ppm_file(solid(2, 1, 30, 0, 0), (dir.path() / "a10.ppm").string());
    std::ofstream(dir.path() / "notes.txt") << "ignored";
    const auto frames = load_frame_directory(dir.path().string());
    ASSERT_EQ(frames.size(), 3u);
    EXPECT_EQ(frames[0].rgb[0], 20);
    EXPECT_EQ(frames[1].rgb[0], 30);
    EXPECT_EQ(frames[2].rgb[0], 10);

    const fs::path out = dir.path() / "out";
    write_frame_directory(frames, out.string());
    EXPECT_TRUE(fs::exists(out / "frame_0000.ppm"));
    EXPECT_EQ(load_frame_directory(out.string()), frames);

    EXPECT_THROW((void)load_frame_directory((dir.path() / "missing").string()), IoError);
    TempDir empty("qhosvd_frames_empty");
    EXPECT_THROW((void)load_frame_directory(empty.path().string()), IoError);
}

TEST(Frames, FullRankCompressionReproducesTheFrames) {
    const auto frames = synthetic_gradient_video(6, 8, 10);
    const QTensor t = frames_to_tensor(frames);
    for (auto v : {Variant::ts, Variant::l, Variant::r}) {
        const QTensor back = reconstruct(decompose(v, t, TruncationSpec::from_ratios({1.0, 1.0, 1.0})));
        EXPECT_LE(max_abs_diff(back, t), 1e-10);
        EXPECT_EQ(tensor_to_frames(back), frames) << to_string(v);
    }
}

TEST(Frames, SyntheticVideoIsDeterministicAndMoves) {
    const auto a = synthetic_gradient_video(3, 4, 4);
    EXPECT_EQ(a, synthetic_gradient_video(3, 4, 4));
    EXPECT_NE(a[0], a[1]);
    EXPECT_THROW((void)synthetic_gradient_video(0, 4, 4), ShapeError);
}
