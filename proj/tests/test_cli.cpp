#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "orbzeta/io.hpp"

using namespace orbzeta;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run(const std::string& cmdline) { return std::system(cmdline.c_str()); }

const std::string cli = ORBZETA_CLI_PATH;

} // namespace

TEST_CASE("config file parsing with sections and overrides") {
    const std::string path = "/tmp/orbzeta_test_config.cfg";
    {
        std::ofstream out(path);
        out << "# comment\n[run]\ngerm = model:k=1,rho=0\nx0 = 0.5\n\n[grid]\neps_min=1e-6\n";
    }
    RunConfig cfg = RunConfig::from_file(path);
    CHECK(cfg.get("germ", "") == "model:k=1,rho=0");
    CHECK(cfg.get_double("x0", 0.0) == 0.5);
    CHECK(cfg.get_double("eps_min", 0.0) == 1e-6);
    // defaulted keys are echoed through resolved()
    CHECK(cfg.get("missing", "fallback") == "fallback");
    CHECK(cfg.resolved().at("missing") == "fallback");
    CHECK_THROWS_AS(RunConfig::from_file("/nonexistent/file.cfg"), DomainError);
}

TEST_CASE("format_g17 round-trips binary64") {
    for (double v : {1.0 / 3.0, 1e-9, 0.1666666666666666, 123456.789}) {
        CHECK(std::stod(format_g17(v)) == v);
    }
}

TEST_CASE("cli: orbit rows and cache determinism") {
    const std::string out1 = "/tmp/orbzeta_orbit1.csv";
    const std::string out2 = "/tmp/orbzeta_orbit2.csv";
    run("rm -rf /tmp/orbzeta_cache");
    const std::string base = cli +
                             " orbit --germ model:k=1,rho=0 --x0 0.5 --cutoff 1e-4"
                             " --cache-dir /tmp/orbzeta_cache --out ";
    REQUIRE(run(base + out1) == 0);
    REQUIRE(run(base + out2) == 0);
    const std::string a = slurp(out1);
    CHECK(a == slurp(out2)); // cache hit is byte-identical
    // determinism also holds without the cache
    const std::string out3 = "/tmp/orbzeta_orbit3.csv";
    REQUIRE(run(cli + " orbit --germ model:k=1,rho=0 --x0 0.5 --cutoff 1e-4 --out " + out3) == 0);
    CHECK(a == slurp(out3));
    CHECK(a.find("j,x_j,ell_j") != std::string::npos);
    // first row: j=0, x=1/2, gap=1/6
    {
        const auto pos = a.find("\n0,");
        REQUIRE(pos != std::string::npos);
        std::stringstream row(a.substr(pos + 1, a.find('\n', pos + 1) - pos - 1));
        std::string tok;
        std::getline(row, tok, ',');
        std::getline(row, tok, ',');
        CHECK(std::stod(tok) == 0.5);
        std::getline(row, tok, ',');
        CHECK(std::stod(tok) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    }
    CHECK(a.find("# orbzeta") != std::string::npos);
    CHECK(a.find("# germ=model:k=1,rho=0") != std::string::npos);
}

TEST_CASE("cli: tube columns satisfy the bridge relation") {
    const std::string out = "/tmp/orbzeta_tube.csv";
    REQUIRE(run(cli + " tube --germ model:k=1,rho=0 --x0 0.5 --eps-min 1e-5 --eps-max 2e-1 "
                      "--eps-per-decade 40 --out " + out) == 0);
    std::ifstream in(out);
    std::string line;
    bool saw_flagged = false;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.rfind("# eps=", 0) == 0 && line.find("EpsTooLarge") != std::string::npos) {
            saw_flagged = true;
            continue;
        }
        if (line.empty() || line[0] == '#' || line[0] == 'e') continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> cols;
        while (std::getline(ss, tok, ',')) cols.push_back(std::stod(tok));
        REQUIRE(cols.size() == 6);
        // G column equals n_eps - tau_eps row-wise
        CHECK(std::abs(cols[5] - (cols[3] - cols[4])) < 1e-8);
        ++rows;
    }
    CHECK(rows > 50);
    CHECK(saw_flagged); // eps_max above eps_0 = 1/12 produces flagged rows
}

TEST_CASE("cli: tube oracle mode matches the default V column") {
    const std::string out_a = "/tmp/orbzeta_tube_a.csv";
    const std::string out_b = "/tmp/orbzeta_tube_b.csv";
    const std::string common =
        " tube --germ model:k=1,rho=0 --x0 0.5 --eps-min 1e-4 --eps-max 1e-2 "
        "--eps-per-decade 30 --out ";
    REQUIRE(run(cli + common + out_a) == 0);
    REQUIRE(run(cli + common + out_b + " --oracle union") == 0);
    std::ifstream a(out_a), b(out_b);
    std::string la, lb;
    int compared = 0;
    while (std::getline(a, la) && std::getline(b, lb)) {
        if (la.empty() || la[0] == '#' || la[0] == 'e') continue;
        std::stringstream sa(la), sb(lb);
        std::string ta, tb;
        std::getline(sa, ta, ',');
        std::getline(sb, tb, ',');
        std::getline(sa, ta, ',');
        std::getline(sb, tb, ',');
        CHECK(std::abs(std::stod(ta) - std::stod(tb)) < 1e-12);
        ++compared;
    }
    CHECK(compared > 30);
}

TEST_CASE("cli: hyperbolic orbit rows are geometric") {
    const std::string out = "/tmp/orbzeta_orbit_h.csv";
    REQUIRE(run(cli + " orbit --germ hyperbolic:a=0.5 --x0 0.8 --cutoff 0.05 --out " + out) == 0);
    std::ifstream in(out);
    std::string line;
    std::vector<double> xs;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'j') continue;
        std::stringstream ss(line);
        std::string tok;
        std::getline(ss, tok, ',');
        std::getline(ss, tok, ',');
        xs.push_back(std::stod(tok));
    }
    REQUIRE(xs.size() == 4);
    for (size_t j = 0; j < xs.size(); ++j)
        CHECK(xs[j] == doctest::Approx(0.8 * std::pow(0.5, static_cast<double>(j))).epsilon(1e-15));
}

TEST_CASE("cli: hyperbolic zeta near a nonreal pole is flagged") {
    const std::string out = "/tmp/orbzeta_zeta_pole.csv";
    // s_1 = 2 pi i / log(1/2) = -9.0647i; probe just next to it
    REQUIRE(run(cli + " zeta --germ hyperbolic:a=0.5 --x0 0.5 --s-grid 0:0:1@-9.0647 "
                      "--backend hyperbolic --out " + out) == 0);
    CHECK(slurp(out).find("near-pole") != std::string::npos);
}

TEST_CASE("cli: zeta grid with two backends reports the discrepancy") {
    const std::string out = "/tmp/orbzeta_zeta.csv";
    REQUIRE(run(cli + " zeta --germ model:k=1,rho=0 --x0 0.5 --s-grid 0.6:2:8 "
                      "--backend k1 --backend modelk --M 6 --out " + out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("re_s,im_s,re_val,im_val,backend") != std::string::npos);
    CHECK(text.find(",k1") != std::string::npos);
    CHECK(text.find(",modelk") != std::string::npos);
    const auto pos = text.find("# max_backend_discrepancy=");
    REQUIRE(pos != std::string::npos);
    const double disc = std::stod(text.substr(pos + 26));
    CHECK(disc < 1e-7);
    // s = 1 row evaluates to x0
    const auto one = text.find("\n1,0,");
    REQUIRE(one != std::string::npos);
    std::stringstream row(text.substr(one + 1, text.find('\n', one + 1) - one - 1));
    std::string tok;
    std::getline(row, tok, ',');
    std::getline(row, tok, ',');
    std::getline(row, tok, ',');
    CHECK(std::stod(tok) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("cli: dims report and formal-class recovery") {
    const std::string out = "/tmp/orbzeta_dims.csv";
    REQUIRE(run(cli + " dims --germ model:k=2,rho=0 --x0 0.5 --M 4 --window-left -1.4 "
                      "--recover-formal-class --out " + out) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("0.66666666666666663") != std::string::npos); // rightmost pole 2/3
    CHECK(text.find("recovered_formal_class k=2") != std::string::npos);

    // fit route for a rho != 0 model germ
    const std::string out2 = "/tmp/orbzeta_dims2.csv";
    REQUIRE(run(cli + " dims --germ model:k=1,rho=0.7 --x0 0.5 --recover-formal-class --out " +
                out2) == 0);
    const std::string t2 = slurp(out2);
    const auto rp = t2.find("rho=");
    REQUIRE(rp != std::string::npos);
    const double rho = std::stod(t2.substr(rp + 4));
    CHECK(std::abs(rho - 0.7) < 0.02);
}

TEST_CASE("tube series CSV serialization") {
    TubeSeries s;
    s.kind = TubeKind::Vc;
    s.eps = {1e-3, 1e-2};
    s.value = {0.1, 0.25};
    const std::string csv = tube_series_csv(s);
    CHECK(csv.find("eps,value,kind") == 0);
    CHECK(csv.find("0.001,0.10000000000000001,Vc") != std::string::npos);
    s.kind = TubeKind::Primitive;
    s.primitive_order = 2;
    CHECK(tube_series_csv(s).find("Primitive(2)") != std::string::npos);
}

TEST_CASE("cli: zeta --delta appends the tube-zeta consistency line") {
    const std::string out = "/tmp/orbzeta_zeta_delta.csv";
    REQUIRE(run(cli + " zeta --germ model:k=1,rho=0 --x0 0.5 --s-grid 0.8:0.8:1 "
                      "--backend k1 --M 4 --delta 1 --out " + out) == 0);
    const std::string text = slurp(out);
    const auto pos = text.find("tube_zeta_consistency");
    REQUIRE(pos != std::string::npos);
    const auto eq = text.find("|=", pos);
    REQUIRE(eq != std::string::npos);
    CHECK(std::stod(text.substr(eq + 2)) < 1e-6);
}

TEST_CASE("cli: exit codes") {
    CHECK(run(cli + " orbit --germ nonsense:a=1 --out /tmp/orbzeta_x.csv 2>/dev/null") / 256 == 2);
    CHECK(run(cli + " tube --germ model:k=1,rho=0 --x0 0.5 --eps-min 1e-3 --eps-max 1e-2 "
                    "--eps-per-decade -5 --out /tmp/orbzeta_x.csv 2>/dev/null") / 256 != 0);
}
