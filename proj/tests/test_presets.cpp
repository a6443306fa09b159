#include <doctest.h>

#include "afcsim/presets.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace afcsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig fast_config() {
    ExperimentConfig c = default_config();
    c.detector.trials = 4000;
    c.snr.noise_reference_trials = 16000;
    c.visibility.trials_per_point = 2000;
    c.visibility.bootstrap_resamples = 40;
    return c;
}

}  // namespace

TEST_CASE("preset listing covers the documented presets") {
    const auto presets = list_presets();
    auto has = [&presets](const std::string& name) {
        for (const auto& [n, d] : presets)
            if (n == name) return true;
        return false;
    };
    CHECK(has("fig2-storage"));
    CHECK(has("fig2d-snr"));
    CHECK(has("fig3-visibility"));
    CHECK(has("bright-characterization"));
    CHECK(has("noise-budget"));
}

TEST_CASE("unknown preset is rejected") {
    TempDir dir("afcsim_test_unknown");
    CHECK_THROWS_AS(run_preset("nope", default_config(), dir.path.string()),
                    std::invalid_argument);
}

TEST_CASE("noise budget preset writes a reproducible bundle") {
    const ExperimentConfig config = default_config();
    TempDir dir_a("afcsim_test_budget_a");
    TempDir dir_b("afcsim_test_budget_b");
    const PresetResult a = run_preset("noise-budget", config, dir_a.path.string());
    const PresetResult b = run_preset("noise-budget", config, dir_b.path.string());

    CHECK(a.summary["total_noise_floor"].get<double>() > 4.8e-3);
    CHECK(a.summary["total_noise_floor"].get<double>() < 9.4e-3);
    CHECK(a.summary["total_noise_floor_without_fp"].get<double>() >
          10.0 * a.summary["total_noise_floor"].get<double>());

    REQUIRE(a.files_written.size() == b.files_written.size());
    for (std::size_t i = 0; i < a.files_written.size(); ++i) {
        const std::string fa = slurp(a.files_written[i]);
        CHECK(!fa.empty());
        // identical config + seed reproduce identical bytes
        CHECK(fa == slurp(b.files_written[i]));
    }
    // every table embeds the seed and config echo
    for (const auto& f : a.files_written) {
        if (f.ends_with(".csv") || f.ends_with(".txt")) {
            const std::string text = slurp(f);
            CHECK(text.rfind("# seed: ", 0) == 0);
            CHECK(text.find("# config: {") != std::string::npos);
            CHECK(text.find("# config_hash: ") != std::string::npos);
        }
    }
}

TEST_CASE("bright characterization summary carries the headline physics") {
    TempDir dir("afcsim_test_bright");
    const PresetResult r = run_preset("bright-characterization", default_config(),
                                      dir.path.string());
    const auto& s = r.summary;
    // blurred comb lands above the 5% echo the bright pulses showed
    CHECK(s["afc_echo_efficiency"].get<double>() > 0.05);
    CHECK(s["afc_echo_efficiency"].get<double>() < 0.08);
    CHECK(s["afc_echo_efficiency_numeric_ideal"].get<double>() ==
          doctest::Approx(s["afc_echo_efficiency_analytic"].get<double>()).epsilon(0.05));
    CHECK(s["afc_echo_time_us"].get<double>() == doctest::Approx(6.0).epsilon(0.02));
    // spin-wave echo near 1% at T_S = 18 us
    CHECK(s["spinwave_echo_efficiency"].get<double>() > 0.008);
    CHECK(s["spinwave_echo_efficiency"].get<double>() < 0.015);
    CHECK(s["spinwave_echo_time_us"].get<double>() == doctest::Approx(24.0).epsilon(0.01));
    CHECK(s["memory_time_1e_us"].get<double>() == doctest::Approx(46.85).epsilon(1e-3));

    bool has_lifetime = false;
    for (const auto& f : r.files_written) has_lifetime |= f.ends_with("lifetime_scan.csv");
    CHECK(has_lifetime);
}

TEST_CASE("snr preset fits a line through (0,1)") {
    TempDir dir("afcsim_test_snr");
    ExperimentConfig config = fast_config();
    const PresetResult r = run_preset("fig2d-snr", config, dir.path.string());
    const auto& s = r.summary;
    CHECK(s["r_squared"].get<double>() > 0.9);
    const double k = s["slope"].get<double>();
    const double expected = s["expected_slope_eta_over_pnoise"].get<double>();
    CHECK(std::abs(k - expected) / expected < 0.25);  // loose, few trials here
}

TEST_CASE("fig2 storage preset reports SNR per photon number") {
    TempDir dir("afcsim_test_fig2");
    const PresetResult r = run_preset("fig2-storage", fast_config(), dir.path.string());
    REQUIRE(r.summary["runs"].size() == 2);
    CHECK(r.summary["runs"][0]["nbar"].get<double>() == 2.5);
    CHECK(r.summary["runs"][0]["snr"].get<double>() > 1.2);
    CHECK(r.summary["runs"][1]["snr"].get<double>() >
          r.summary["runs"][0]["snr"].get<double>());
    bool has_noise_trace = false;
    for (const auto& f : r.files_written) has_noise_trace |= f.ends_with("_noise.csv");
    CHECK(has_noise_trace);
}

TEST_CASE("fig3 visibility preset reproduces both paper bands") {
    TempDir dir("afcsim_test_fig3");
    ExperimentConfig config = fast_config();
    config.visibility.trials_per_point = 6000;
    const PresetResult r = run_preset("fig3-visibility", config, dir.path.string());
    REQUIRE(r.summary["runs"].size() == 2);
    const double v176 = r.summary["runs"][0]["visibility"].get<double>();
    const double v51 = r.summary["runs"][1]["visibility"].get<double>();
    CHECK(v176 > 0.81);
    CHECK(v176 < 0.93);
    CHECK(v51 > 0.61);
    CHECK(v51 < 0.81);
    CHECK(r.summary["runs"][0]["visibility_err"].get<double>() > 0.0);
}

TEST_CASE("presets do not mutate the configuration they are given") {
    const ExperimentConfig config = fast_config();
    const std::string before = canonical_serialization(config);
    TempDir dir("afcsim_test_immutable");
    run_preset("noise-budget", config, dir.path.string());
    run_preset("bright-characterization", config, (dir.path / "b").string());
    CHECK(canonical_serialization(config) == before);
}
