#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qhosvd/decomposition.hpp"
#include "qhosvd/errors.hpp"
#include "qhosvd/fixture.hpp"
#include "qhosvd/media_io.hpp"
#include "qhosvd/parallel.hpp"
#include "qhosvd/verify.hpp"

namespace qhosvd::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Thrown for bad flag combinations detected after parsing.
struct UsageError : Error {
    using Error::Error;
};

struct Options {
    unsigned threads = 1;
    std::string report = "text";

    std::string input;
    std::string variant = "ts";
    std::vector<std::size_t> ranks;
    std::vector<double> ratios;
    std::string out;
    std::uint64_t seed = 7;
    std::vector<std::size_t> random_dims;
    std::vector<std::size_t> synthetic;

    bool paper_examples = false;
    bool random = false;
    std::size_t count = 20;
    std::string fixture;
};

class Stopwatch {
public:
    [[nodiscard]] double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::string join_dims(const std::vector<std::size_t>& v, char sep = 'x') {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

std::string join_ratios(const std::vector<double>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ";" : "") << v[i];
    return os.str();
}

// A single value stands for every mode.
template <class T>
std::vector<T> broadcast(std::vector<T> v, std::size_t order) {
    if (v.size() == 1 && order > 1) v.assign(order, v.front());
    return v;
}

TruncationSpec make_spec(const Options& o, std::size_t order) {
    if (!o.ranks.empty()) return TruncationSpec::from_ranks(broadcast(o.ranks, order));
    if (!o.ratios.empty()) return TruncationSpec::from_ratios(broadcast(o.ratios, order));
    return TruncationSpec::full();
}

std::vector<double> resolved_ratios(const Options& o, const std::vector<std::size_t>& dims) {
    if (!o.ratios.empty()) return broadcast(o.ratios, dims.size());
    const auto ranks = make_spec(o, dims.size()).resolve(dims);
    std::vector<double> r;
    for (std::size_t k = 0; k < dims.size(); ++k) r.push_back(static_cast<double>(ranks[k]) / static_cast<double>(dims[k]));
    return r;
}

json spectra_json(const Decomposition& d) {
    json arr = json::array();
    for (const auto& s : d.spectra) {
        arr.push_back({{"mode", s.mode}, {"side", s.side == Side::left ? "left" : "right"}, {"sigma", s.sigma}});
    }
    return arr;
}

json error_json(const ErrorReport& e) {
    json tails = json::array();
    for (const auto& t : e.per_mode_tails) tails.push_back({{"mode", t.mode}, {"energy", t.energy}});
    return {{"abs_error", e.abs_error},   {"rel_error", e.rel_error},       {"sq_error", e.sq_error},
            {"tail_bound", e.tail_bound}, {"within_bound", e.within_bound}, {"per_mode_tails", tails}};
}

void print_error_report(const ErrorReport& e, const Decomposition& d, const std::string& format, std::ostream& out) {
    if (format == "json") {
        json j = {{"variant", to_string(d.variant)}, {"dims", d.original_dims}, {"ranks", d.ranks}};
        j.update(error_json(e));
        out << j.dump() << '\n';
    } else if (format == "csv") {
        out << "variant,dims,ranks,abs_error,rel_error,sq_error,tail_bound,within_bound\n"
            << to_string(d.variant) << ',' << join_dims(d.original_dims) << ',' << join_dims(d.ranks) << ','
            << std::setprecision(17) << e.abs_error << ',' << e.rel_error << ',' << e.sq_error << ','
            << e.tail_bound << ',' << (e.within_bound ? "true" : "false") << '\n';
    } else {
        out << std::setprecision(10);
        out << "variant       " << to_string(d.variant) << '\n'
            << "dims          " << join_dims(d.original_dims) << '\n'
            << "ranks         " << join_dims(d.ranks) << '\n'
            << "abs_error     " << e.abs_error << '\n'
            << "rel_error     " << e.rel_error << '\n'
            << "sq_error      " << e.sq_error << '\n'
            << "tail_bound    " << e.tail_bound << '\n'
            << "within_bound  " << (e.within_bound ? "yes" : "no") << '\n';
        for (const auto& t : e.per_mode_tails) out << "tail mode " << t.mode << "   " << t.energy << '\n';
    }
}

QTensor load_input(const Options& o) {
    if (!o.random_dims.empty()) {
        if (!o.input.empty()) throw UsageError("give either an input file or --random-dims, not both");
        std::mt19937_64 rng(o.seed);
        return random_qtensor(o.random_dims, rng);
    }
    if (o.input.empty()) throw UsageError("missing input file");
    return read_tensor_file(o.input);
}

QTensor matrix_tensor(const QMatrix& m) { return QTensor::from_matrix(m); }

int cmd_decompose(const Options& o, std::ostream& out, std::ostream& err) {
    Stopwatch sw;
    const QTensor t = load_input(o);
    const double ingest = sw.lap();

    PhaseTimes times;
    const Decomposition d = decompose(parse_variant(o.variant), t, make_spec(o, t.order()), &times);
    (void)sw.lap();
    const ErrorReport e = error_report(t, d);
    (void)sw.lap();

    double emit = 0.0;
    if (!o.out.empty()) {
        std::error_code ec;
        fs::create_directories(o.out, ec);
        if (ec) throw IoError("cannot create '" + o.out + "'");
        const fs::path dir(o.out);
        write_tensor_file(d.core, (dir / "core.qtn").string());
        json factors = json::array();
        for (std::size_t k = 1; k <= d.order(); ++k) {
            const std::string name = "factor_" + std::to_string(k) + ".qtn";
            write_tensor_file(matrix_tensor(d.factor(k)), (dir / name).string());
            factors.push_back({{"mode", k}, {"side", d.factor_side(k) == Side::left ? "left" : "right"}, {"file", name}});
        }
        emit = sw.lap();
        json manifest = {{"variant", to_string(d.variant)},
                         {"original_dims", d.original_dims},
                         {"ranks", d.ranks},
                         {"core", "core.qtn"},
                         {"factors", factors},
                         {"spectra", spectra_json(d)},
                         {"error", error_json(e)},
                         {"timings",
                          {{"ingest_seconds", ingest},
                           {"svd_seconds", times.svd_seconds},
                           {"product_seconds", times.product_seconds},
                           {"emit_seconds", emit}}},
                         {"threads", o.threads}};
        std::ofstream mf(dir / "manifest.json");
        mf << manifest.dump(2) << '\n';
        if (!mf) throw IoError("cannot write manifest in '" + o.out + "'");
    }

    print_error_report(e, d, o.report, out);
    if (!e.within_bound) err << "warning: squared error exceeds the tail-energy bound\n";
    return kOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
    bool examples = o.paper_examples || !o.fixture.empty();
    bool random = o.random;
    if (!examples && !random) examples = random = true;

    std::vector<PropertyReport> reports;
    if (examples) {
        const QTensor fixture = o.fixture.empty() ? appendix_tensor() : load_appendix_fixture(o.fixture);
        for (auto& r : run_example1(fixture)) reports.push_back(std::move(r));
        for (auto& r : run_example2(fixture)) reports.push_back(std::move(r));
    }
    if (random) {
        for (auto& r : run_random_battery(o.seed, o.count)) reports.push_back(std::move(r));
    }

    if (o.report == "json") {
        for (const auto& r : reports) out << to_json_line(r) << '\n';
    } else if (o.report == "csv") {
        out << "property,pass,residual,tolerance,value\n" << std::setprecision(17);
        for (const auto& r : reports) {
            out << r.name << ',' << (r.pass ? "true" : "false") << ',' << r.residual << ',' << r.tolerance << ',';
            if (r.value) out << *r.value;
            out << '\n';
        }
    } else {
        for (const auto& r : reports) out << to_text(r) << '\n';
    }

    std::size_t failed = 0;
    const PropertyReport* worst = nullptr;
    for (const auto& r : reports) {
        if (r.pass) continue;
        ++failed;
        const double excess = r.tolerance > 0 ? r.residual / r.tolerance : r.residual;
        if (!worst || excess > (worst->tolerance > 0 ? worst->residual / worst->tolerance : worst->residual)) worst = &r;
    }
    if (o.report == "text") out << reports.size() << " properties, " << failed << " failed\n";
    if (failed) {
        err << "verification failed: " << failed << " of " << reports.size() << " properties; worst " << worst->name
            << " residual " << std::scientific << std::setprecision(3) << worst->residual << " (tol "
            << worst->tolerance << ")\n";
        return kVerificationFailed;
    }
    return kOk;
}

struct CompressRow {
    std::string variant;
    std::string ratios;
    std::string ranks;
    ErrorReport error;
    double seconds = 0.0;
    double ingest = 0.0;
    PhaseTimes phases;
    double emit = 0.0;
};

const char* kCsvHeader =
    "variant,ratios,ranks,rel_error,sq_error,tail_bound,seconds,ingest_seconds,svd_seconds,product_seconds,"
    "emit_seconds";

void csv_row(const CompressRow& r, std::ostream& out) {
    out << r.variant << ',' << r.ratios << ',' << r.ranks << ',' << std::setprecision(10) << r.error.rel_error << ','
        << r.error.sq_error << ',' << r.error.tail_bound << ',' << std::setprecision(6) << r.seconds << ','
        << r.ingest << ',' << r.phases.svd_seconds << ',' << r.phases.product_seconds << ',' << r.emit << '\n';
}

int cmd_compress(const Options& o, std::ostream& out, std::ostream& err) {
    Stopwatch sw;
    QTensor t;
    bool frames = true;
    if (!o.synthetic.empty()) {
        if (!o.input.empty()) throw UsageError("give either an input or --synthetic, not both");
        if (o.synthetic.size() != 3) throw UsageError("--synthetic expects FRAMES,HEIGHT,WIDTH");
        t = frames_to_tensor(synthetic_gradient_video(o.synthetic[0], o.synthetic[1], o.synthetic[2]));
    } else if (o.input.empty()) {
        throw UsageError("missing input (frame directory, .qtn file or --synthetic)");
    } else if (fs::is_directory(o.input)) {
        t = frames_to_tensor(load_frame_directory(o.input));
    } else {
        t = read_tensor_file(o.input);
        frames = t.order() == 3;
    }
    const double ingest = sw.lap();

    std::vector<Variant> variants;
    if (o.variant == "all") {
        variants = {Variant::ts, Variant::l, Variant::r};
    } else {
        variants = {parse_variant(o.variant)};
    }
    const TruncationSpec spec = make_spec(o, t.order());
    const auto ranks = spec.resolve(t.dims());
    const std::string ratio_text = join_ratios(resolved_ratios(o, t.dims()));

    std::vector<CompressRow> rows;
    for (auto v : variants) {
        CompressRow row;
        row.variant = to_string(v);
        row.ratios = ratio_text;
        row.ranks = join_dims(ranks, ';');
        row.ingest = ingest;
        Stopwatch run;
        const Decomposition d = decompose(v, t, spec, &row.phases);
        const QTensor back = reconstruct(d);
        row.error = error_report(t, d);
        row.seconds = run.lap();
        if (!o.out.empty()) {
            const fs::path dir = fs::path(o.out) / row.variant;
            if (frames) {
                write_frame_directory(tensor_to_frames(back), dir.string());
            } else {
                std::error_code ec;
                fs::create_directories(dir, ec);
                if (ec) throw IoError("cannot create '" + dir.string() + "'");
                write_tensor_file(back, (dir / "reconstructed.qtn").string());
            }
            row.emit = run.lap();
        }
        if (!row.error.within_bound) err << "warning: " << row.variant << " squared error exceeds the tail bound\n";
        rows.push_back(std::move(row));
    }

    if (!o.out.empty()) {
        std::ofstream csv(fs::path(o.out) / "results.csv");
        csv << kCsvHeader << '\n';
        for (const auto& r : rows) csv_row(r, csv);
        if (!csv) throw IoError("cannot write results.csv in '" + o.out + "'");
    }

    if (o.report == "json") {
        for (const auto& r : rows) {
            json j = {{"variant", r.variant}, {"ratios", r.ratios}, {"ranks", r.ranks}};
            j.update(error_json(r.error));
            j["seconds"] = r.seconds;
            j["timings"] = {{"ingest_seconds", r.ingest},
                            {"svd_seconds", r.phases.svd_seconds},
                            {"product_seconds", r.phases.product_seconds},
                            {"emit_seconds", r.emit}};
            out << j.dump() << '\n';
        }
    } else if (o.report == "csv") {
        out << kCsvHeader << '\n';
        for (const auto& r : rows) csv_row(r, out);
    } else {
        out << "dims " << join_dims(t.dims()) << "  ranks " << join_dims(ranks) << '\n';
        for (const auto& r : rows) {
            out << std::left << std::setw(3) << r.variant << std::right << "  err=" << std::setprecision(6)
                << r.error.rel_error << "  sq_error=" << r.error.sq_error << "  bound=" << r.error.tail_bound
                << "  seconds=" << std::setprecision(4) << r.seconds << '\n';
        }
    }
    return kOk;
}

int cmd_info(const Options& o, std::ostream& out) {
    if (o.input.empty()) throw UsageError("missing input file");
    const QTensor t = read_tensor_file(o.input);
    const auto bytes = fs::file_size(o.input);
    if (o.report == "json") {
        json j = {{"file", o.input},          {"order", t.order()},        {"dims", t.dims()},
                  {"entries", t.size()},      {"bytes", bytes},            {"fro_norm", fro_norm(t)},
                  {"pure", t.is_pure()}};
        out << j.dump() << '\n';
    } else if (o.report == "csv") {
        out << "file,order,dims,entries,bytes,fro_norm,pure\n"
            << o.input << ',' << t.order() << ',' << join_dims(t.dims()) << ',' << t.size() << ',' << bytes << ','
            << std::setprecision(17) << fro_norm(t) << ',' << (t.is_pure() ? "true" : "false") << '\n';
    } else {
        out << "order     " << t.order() << '\n'
            << "dims      " << join_dims(t.dims()) << '\n'
            << "entries   " << t.size() << '\n'
            << "bytes     " << bytes << '\n'
            << "fro_norm  " << std::setprecision(10) << fro_norm(t) << '\n'
            << "pure      " << (t.is_pure() ? "yes" : "no") << '\n';
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Quaternion higher-order SVD toolkit"};
    app.name("qhosvd");
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
        sub->add_option("--report", o.report, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));
    };
    auto add_truncation = [&](CLI::App* sub) {
        auto* ranks = sub->add_option("--ranks", o.ranks, "Per-mode ranks a,b,... (one value for all modes)")
                          ->delimiter(',')
                          ->allow_extra_args(false);
        auto* ratios = sub->add_option("--ratios", o.ratios, "Per-mode ratios in (0,1] (one value for all modes)")
                           ->delimiter(',')
                           ->allow_extra_args(false);
        ranks->excludes(ratios);
        ratios->excludes(ranks);
    };

    auto* decompose_cmd = app.add_subcommand("decompose", "Decompose a QTN1 tensor");
    decompose_cmd->add_option("input", o.input, "QTN1 input file");
    decompose_cmd->add_option("--variant", o.variant, "ts, l or r")->check(CLI::IsMember({"ts", "l", "r"}));
    add_truncation(decompose_cmd);
    decompose_cmd->add_option("--out", o.out, "Directory for core, factors and manifest.json");
    decompose_cmd->add_option("--random-dims", o.random_dims, "Use a random tensor of these dims instead of a file")
        ->delimiter(',')
        ->allow_extra_args(false);
    decompose_cmd->add_option("--seed", o.seed, "Seed for --random-dims");
    add_common(decompose_cmd);

    auto* verify_cmd = app.add_subcommand("verify", "Check decomposition properties");
    verify_cmd->add_flag("--paper-examples", o.paper_examples, "Run the worked examples on the embedded fixture");
    verify_cmd->add_flag("--random", o.random, "Run the random property battery");
    verify_cmd->add_option("--seed", o.seed, "Seed for --random");
    verify_cmd->add_option("--count", o.count, "Number of random tensors")->check(CLI::Range(1, 100000));
    verify_cmd->add_option("--fixture", o.fixture, "Run the worked examples on this fixture file");
    add_common(verify_cmd);

    auto* compress_cmd = app.add_subcommand("compress", "Compress frames with a truncated decomposition");
    compress_cmd->add_option("input", o.input, "Directory of .ppm frames or QTN1 file");
    compress_cmd->add_option("--variant", o.variant, "ts, l, r or all")->check(CLI::IsMember({"ts", "l", "r", "all"}));
    add_truncation(compress_cmd);
    compress_cmd->add_option("--out", o.out, "Directory for reconstructed frames and results.csv");
    compress_cmd->add_option("--synthetic", o.synthetic, "Use a generated gradient video FRAMES,HEIGHT,WIDTH")
        ->delimiter(',')
        ->allow_extra_args(false);
    add_common(compress_cmd);

    auto* info_cmd = app.add_subcommand("info", "Describe a QTN1 file");
    info_cmd->add_option("input", o.input, "QTN1 file")->required();
    info_cmd->add_option("--report", o.report, "Output format")->check(CLI::IsMember({"text", "csv", "json"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    set_thread_count(o.threads);
    try {
        if (*decompose_cmd) return cmd_decompose(o, out, err);
        if (*verify_cmd) return cmd_verify(o, out, err);
        if (*compress_cmd) return cmd_compress(o, out, err);
        return cmd_info(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const SpecError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << " (residual " << e.residual() << ")\n";
        return kNumerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    }
}

}  // namespace qhosvd::cli
