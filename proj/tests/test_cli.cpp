#include <doctest.h>

#include <cstdlib>
#include <string>
#include <sys/wait.h>

#include "support.hpp"

using namespace osmlelm;
using namespace osmlelm::testing;

namespace {

int run(const std::string& args, const std::filesystem::path& log) {
    const std::string cmd = std::string("\"") + OSMLELM_CLI + "\" " + args + " >\"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("cli exit codes and outputs") {
    ScratchDir dir("cli");
    const auto all = synthetic_dataset(300, 6, 3, 12, 0.1);
    save_csv(dir / "train.csv", all.row_block(0, 200));
    save_csv(dir / "test.csv", all.row_block(200, 100));
    const auto d = dir.path().string();
    const auto log = dir / "log.txt";

    const std::string train = "train --train " + d + "/train.csv --labels 3 --hidden 20 --block 10 --out " + d + "/m.txt";
    REQUIRE(run(train, log) == 0);
    CHECK(read_file(log).find("blocks processed: ") != std::string::npos);

    SUBCASE("eval writes a tab-separated metrics file") {
        REQUIRE(run("eval --model " + d + "/m.txt --test " + d + "/test.csv --out " + d + "/metrics.tsv", log) == 0);
        const std::string kv = read_file(dir / "metrics.tsv");
        CHECK(kv.starts_with("hamming_loss\t0."));
        const MetricsReport r = parse_key_value(kv);
        CHECK(r.hamming_loss < 0.2);
    }
    SUBCASE("identical runs write identical model files") {
        REQUIRE(run(train + "2", log) == 0);
        CHECK(read_file(dir / "m.txt") == read_file(dir / "m.txt2"));
    }
    SUBCASE("flags override the config file") {
        write_file(dir / "run.conf", "hidden = 7\nseed = 3\nlabels = 3\n");
        REQUIRE(run("--config " + d + "/run.conf train --train " + d + "/train.csv --hidden 9 --out " + d + "/c.txt",
                    log) == 0);
        const auto m = load_model(dir / "c.txt");
        CHECK(m.model.hidden_count() == 9);
        REQUIRE(run("--config " + d + "/run.conf train --train " + d + "/train.csv --seed 3 --hidden 9 --out " + d +
                        "/c2.txt",
                    log) == 0);
        CHECK(read_file(dir / "c.txt") == read_file(dir / "c2.txt"));
    }
    SUBCASE("cv and bench") {
        CHECK(run("cv --data " + d + "/train.csv --labels 3 --hidden 15 --folds 4 --out " + d + "/cv.tsv", log) == 0);
        CHECK(read_file(log).find(" ± ") != std::string::npos);
        CHECK(run("bench --train " + d + "/train.csv --labels 3 --hidden 15 --block 30 --arrival-interval 1", log) == 0);
        CHECK(read_file(log).find("average time per block") != std::string::npos);
    }
    SUBCASE("usage errors exit 1") {
        CHECK(run("", log) == 1);
        CHECK(run("frobnicate", log) == 1);
        CHECK(run("train --train " + d + "/train.csv --labels 3 --hidden many --out " + d + "/x.txt", log) == 1);
        CHECK(run("train --train " + d + "/train.csv --labels 3 --out " + d + "/x.txt", log) == 1);
        CHECK(run("train --train " + d + "/train.csv --labels 3 --hidden 5 --activation relu --out " + d + "/x.txt",
                  log) == 1);
    }
    SUBCASE("data errors exit 2") {
        write_file(dir / "ragged.csv", "1,2,1\n1,0\n");
        CHECK(run("train --train " + d + "/ragged.csv --labels 1 --hidden 2 --out " + d + "/x.txt", log) == 2);
        CHECK(read_file(log).find("line 2") != std::string::npos);
        CHECK(run("train --train " + d + "/nothing.csv --labels 1 --hidden 2 --out " + d + "/x.txt", log) == 2);
        CHECK(run("eval --model " + d + "/train.csv --test " + d + "/test.csv", log) == 2);
    }
    SUBCASE("singular initial block exits 3") {
        CHECK(run("train --train " + d + "/train.csv --labels 3 --hidden 50 --init-block 10 --out " + d + "/x.txt",
                  log) == 3);
        CHECK(read_file(log).find("error: ") != std::string::npos);
    }
}
