#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "osmlelm/error.hpp"
#include "osmlelm/model.hpp"
#include "osmlelm/model_io.hpp"
#include "support.hpp"

using namespace osmlelm;
using namespace osmlelm::testing;

namespace {

std::vector<std::size_t> span_of(std::size_t begin, std::size_t end) {
    std::vector<std::size_t> idx(end - begin);
    std::iota(idx.begin(), idx.end(), begin);
    return idx;
}

ModelFile trained(std::uint64_t seed, Activation act = Activation::sigmoid) {
    const auto ds = synthetic_dataset(80, 5, 3, 17);
    ModelFile f;
    f.normalizer = fit_normalizer(ds, 0, 20);
    const Matrix x = apply_normalizer(*f.normalizer, ds.features);
    const auto head = span_of(0, 20);
    f.model = init_phase(init_hidden(5, 9, act, seed), x.select_rows(head), to_bipolar(ds.labels.select_rows(head)));
    for (std::size_t i = 20; i < 80; i += 15) {
        const auto idx = span_of(i, std::min<std::size_t>(i + 15, 80));
        update(f.model, x.select_rows(idx), to_bipolar(ds.labels.select_rows(idx)));
    }
    f.model.threshold = -0.123456789012345678;
    return f;
}

std::string serialized(const ModelFile& f) {
    std::ostringstream out;
    write_model(out, f);
    return out.str();
}

}  // namespace

TEST_CASE("model file round trip is bit-exact") {
    for (auto act : {Activation::sigmoid, Activation::sine, Activation::hardlim}) {
        const ModelFile f = trained(3, act);
        std::istringstream in(serialized(f));
        const ModelFile back = read_model(in);
        CHECK(back == f);
        CHECK(serialized(back) == serialized(f));
    }
    SUBCASE("without a normalizer, and with awkward values") {
        ModelFile f = trained(4);
        f.normalizer.reset();
        f.model.beta(0, 0) = std::numeric_limits<double>::denorm_min();
        f.model.beta(1, 1) = -0.0;
        f.model.beta(2, 2) = 1.0 / 3.0;
        std::istringstream in(serialized(f));
        const ModelFile back = read_model(in);
        CHECK(back == f);
        CHECK(std::signbit(back.model.beta(1, 1)));
    }
    SUBCASE("through the filesystem") {
        ScratchDir dir("model");
        const ModelFile f = trained(5);
        save_model(dir / "m.txt", f);
        CHECK(load_model(dir / "m.txt") == f);
    }
}

TEST_CASE("same seed and stream give identical serializations") {
    CHECK(serialized(trained(9)) == serialized(trained(9)));
    CHECK(serialized(trained(9)) != serialized(trained(10)));
}

TEST_CASE("malformed model files") {
    const std::string good = serialized(trained(6));
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_model(in);
    };
    CHECK_THROWS_AS(parse(""), DataError);
    CHECK_THROWS_AS(parse("not-a-model 1\n"), DataError);
    CHECK_THROWS_AS(parse(good.substr(0, good.size() / 2)), DataError);
    std::string wrong_version = good;
    wrong_version.replace(wrong_version.find(" 1\n"), 3, " 7\n");
    CHECK_THROWS_AS(parse(wrong_version), DataError);
    std::string bad_act = good;
    bad_act.replace(bad_act.find("sigmoid"), 7, "relu");
    CHECK_THROWS_AS(parse(bad_act), DataError);
    CHECK_THROWS_AS(load_model("/nonexistent/model.txt"), DataError);
}
