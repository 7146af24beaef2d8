#include "osmlelm/model_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "osmlelm/error.hpp"

namespace osmlelm {
namespace {

constexpr const char* kMagic = "osmlelm-model";
constexpr int kVersion = 1;

std::string real17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_row(std::ostream& out, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) out << (i ? " " : "") << real17(values[i]);
    out << '\n';
}

void write_matrix(std::ostream& out, const char* tag, const Matrix& m) {
    out << tag << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) write_row(out, m.row(r));
}

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::string token() {
        std::string t;
        if (!(in_ >> t)) fail("unexpected end of file");
        return t;
    }

    void expect(const std::string& tag) {
        const auto t = token();
        if (t != tag) fail("expected '" + tag + "', found '" + t + "'");
    }

    std::size_t count() {
        const auto t = token();
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) fail("bad count '" + t + "'");
        return v;
    }

    double real() {
        const auto t = token();
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) fail("bad real '" + t + "'");
        return v;
    }

    std::size_t keyed_count(const std::string& key) {
        expect(key);
        return count();
    }

    double keyed_real(const std::string& key) {
        expect(key);
        return real();
    }

    Matrix matrix(const std::string& tag, std::size_t rows, std::size_t cols) {
        expect(tag);
        const std::size_t r = count();
        const std::size_t c = count();
        if (r != rows || c != cols) {
            fail(tag + " is " + std::to_string(r) + "x" + std::to_string(c) + ", expected " +
                 std::to_string(rows) + "x" + std::to_string(cols));
        }
        std::vector<double> data(r * c);
        for (double& v : data) v = real();
        return Matrix(r, c, std::move(data));
    }

    std::vector<double> vector(std::size_t n) {
        std::vector<double> v(n);
        for (double& x : v) x = real();
        return v;
    }

    [[noreturn]] void fail(const std::string& what) const { throw DataError("model file: " + what); }

private:
    std::istream& in_;
};

}  // namespace

void write_model(std::ostream& out, const ModelFile& file) {
    const auto& m = file.model;
    out << kMagic << ' ' << kVersion << '\n';
    out << "activation " << to_string(m.hidden.activation()) << '\n';
    out << "input_dim " << m.input_dim() << '\n';
    out << "hidden_count " << m.hidden_count() << '\n';
    out << "label_count " << m.label_count() << '\n';
    out << "ridge " << real17(m.ridge) << '\n';
    out << "threshold " << real17(m.threshold) << '\n';
    out << "samples_seen " << m.samples_seen << '\n';
    out << "blocks_seen " << m.blocks_seen << '\n';
    write_matrix(out, "weights", m.hidden.weights());
    out << "biases " << m.hidden.biases().size() << '\n';
    write_row(out, m.hidden.biases());
    write_matrix(out, "m", m.m);
    write_matrix(out, "beta", m.beta);
    if (file.normalizer) {
        out << "normalizer " << file.normalizer->feature_count() << '\n';
        write_row(out, file.normalizer->lo);
        write_row(out, file.normalizer->hi);
    } else {
        out << "normalizer 0\n";
    }
    out << "end\n";
}

ModelFile read_model(std::istream& in) {
    Reader r(in);
    r.expect(kMagic);
    if (const auto version = r.count(); version != kVersion) {
        r.fail("unsupported version " + std::to_string(version));
    }
    r.expect("activation");
    Activation activation = Activation::sigmoid;
    try {
        activation = parse_activation(r.token());
    } catch (const ConfigError& e) {
        r.fail(e.what());
    }
    const std::size_t input_dim = r.keyed_count("input_dim");
    const std::size_t hidden = r.keyed_count("hidden_count");
    const std::size_t labels = r.keyed_count("label_count");

    ModelFile file;
    auto& m = file.model;
    m.ridge = r.keyed_real("ridge");
    m.threshold = r.keyed_real("threshold");
    m.samples_seen = r.keyed_count("samples_seen");
    m.blocks_seen = r.keyed_count("blocks_seen");
    Matrix weights = r.matrix("weights", hidden, input_dim);
    if (r.keyed_count("biases") != hidden) r.fail("bias count does not match hidden_count");
    std::vector<double> biases = r.vector(hidden);
    m.hidden = HiddenLayer(std::move(weights), std::move(biases), activation);
    m.m = r.matrix("m", hidden, hidden);
    m.beta = r.matrix("beta", hidden, labels);
    if (const std::size_t d = r.keyed_count("normalizer"); d > 0) {
        if (d != input_dim) r.fail("normalizer width does not match input_dim");
        Normalizer norm;
        norm.lo = r.vector(d);
        norm.hi = r.vector(d);
        file.normalizer = std::move(norm);
    }
    r.expect("end");
    return file;
}

void save_model(const std::filesystem::path& path, const ModelFile& file) {
    std::ostringstream buf;
    write_model(buf, file);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file '" + path.string() + "'");
    out << buf.str();
    if (!out) throw DataError("failed writing model file '" + path.string() + "'");
}

ModelFile load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file '" + path.string() + "'");
    return read_model(in);
}

}  // namespace osmlelm
