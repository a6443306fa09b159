#include "afcsim/presets.hpp"

#include "afcsim/echo.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace afcsim {

namespace {

using nlohmann::json;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

class ReportWriter {
public:
    ReportWriter(const ExperimentConfig& config, const std::string& out_dir, PresetResult& result)
        : config_(config), out_dir_(out_dir), result_(result) {
        std::filesystem::create_directories(out_dir_);
        header_ = "# seed: " + std::to_string(config.detector.seed) + "\n" +
                  "# config_hash: " + config_hash_hex(config) + "\n" +
                  "# config: " + canonical_serialization(config) + "\n";
    }

    std::ofstream open(const std::string& name) {
        const auto path = (std::filesystem::path(out_dir_) / name).string();
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write " + path);
        os << header_;
        result_.files_written.push_back(path);
        return os;
    }

    void write_summary() {
        json doc;
        doc["preset"] = result_.preset;
        doc["seed"] = config_.detector.seed;
        doc["config_hash"] = config_hash_hex(config_);
        doc["config"] = to_json(config_);
        doc["results"] = result_.summary;
        const auto path = (std::filesystem::path(out_dir_) / "summary.json").string();
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write " + path);
        os << doc.dump(2) << "\n";
        result_.files_written.push_back(path);
    }

private:
    const ExperimentConfig& config_;
    std::string out_dir_;
    PresetResult& result_;
    std::string header_;
};

void write_histogram_csv(std::ofstream os, const CountHistogram& hist) {
    os << "time_us,counts,counts_per_trial\n";
    for (std::size_t i = 0; i < hist.bins(); ++i) {
        os << num(hist.bin_center(i)) << "," << hist.counts[i] << ","
           << num(static_cast<double>(hist.counts[i]) / static_cast<double>(hist.trials)) << "\n";
    }
}

// ---- physics pipeline pieces ------------------------------------------------

struct BrightRun {
    double afc_efficiency_analytic = 0.0;
    double afc_efficiency_numeric_ideal = 0.0;
    double afc_efficiency_numeric = 0.0;  // with the tooth blur applied
    double afc_echo_time_us = 0.0;
    double spinwave_efficiency = 0.0;
    double spinwave_echo_time_us = 0.0;
    TemporalEnvelope output;
};

BrightRun run_bright_cycle(const ExperimentConfig& config, double t_s_us) {
    const SpectralGrid grid = make_grid(config);
    const CombParams comb = comb_params(config);
    const SpectralProfile ideal = prepare_comb(comb, grid);
    const SpectralProfile blurred = blur_profile(ideal, config.comb.blur_sigma_khz * 1e-3);

    const TemporalEnvelope input = gaussian_pulse(grid, config.pulse.center_us, config.pulse.fwhm_us,
                                                  std::max(config.bright.input_nbar, 1e-12),
                                                  config.pulse.carrier_detuning_mhz);
    const double halfwidth = default_echo_halfwidth(config.pulse.fwhm_us, grid.time_step());

    const TemporalEnvelope out_ideal = propagate(input, build_transfer(ideal, config.comb.pass_count));
    const TemporalEnvelope out_blur = propagate(input, build_transfer(blurred, config.comb.pass_count));

    const EchoReport echo_ideal =
        extract_echo(input, out_ideal, config.pulse.center_us + config.comb.afc_delay_us, halfwidth);
    const EchoReport echo_blur =
        extract_echo(input, out_blur, config.pulse.center_us + config.comb.afc_delay_us, halfwidth);

    const ProtocolTimeline tl = schedule(config.comb.afc_delay_us, t_s_us,
                                         config.timeline.t_c1_offset_us, config.pulse.center_us);
    TemporalEnvelope retrieved = apply_write_read(out_blur, tl, config.spin);
    const EchoReport spin_echo = extract_echo(input, retrieved, tl.t_echo_us, halfwidth);

    BrightRun run{analytic_afc_efficiency(comb),
                  echo_ideal.echo_efficiency,
                  echo_blur.echo_efficiency,
                  echo_blur.echo_time_us,
                  spin_echo.echo_efficiency,
                  spin_echo.echo_time_us,
                  std::move(retrieved)};
    return run;
}

// ---- presets ----------------------------------------------------------------

void preset_bright(const ExperimentConfig& config, ReportWriter& writer, PresetResult& result) {
    const BrightRun run = run_bright_cycle(config, config.bright.t_s_us);

    json& r = result.summary;
    r["afc_echo_efficiency_analytic"] = run.afc_efficiency_analytic;
    r["afc_echo_efficiency_numeric_ideal"] = run.afc_efficiency_numeric_ideal;
    r["afc_echo_efficiency"] = run.afc_efficiency_numeric;
    r["afc_echo_time_us"] = run.afc_echo_time_us;
    r["spinwave_storage_time_us"] = config.bright.t_s_us;
    r["spinwave_echo_efficiency"] = run.spinwave_efficiency;
    r["spinwave_echo_time_us"] = run.spinwave_echo_time_us;
    r["transfer_efficiency"] = config.spin.transfer_efficiency;
    r["spin_dephasing_factor"] = spin_dephasing(config.spin.gamma_spin_khz, config.bright.t_s_us);
    r["memory_time_1e_us"] = memory_time_1e(config.spin.gamma_spin_khz);
    r["end_to_end_efficiency_composed"] =
        end_to_end_efficiency(run.afc_efficiency_numeric, config.spin.transfer_efficiency,
                              config.spin.gamma_spin_khz, config.bright.t_s_us);

    {
        const SpectralGrid grid = make_grid(config);
        const SpectralProfile profile =
            blur_profile(prepare_comb(comb_params(config), grid), config.comb.blur_sigma_khz * 1e-3);
        auto os = writer.open("comb_profile.csv");
        write_profile_csv(os, profile);
    }
    {
        auto os = writer.open("retrieved_envelope.csv");
        write_envelope_csv(os, run.output);
    }

    auto os = writer.open("lifetime_scan.csv");
    os << "t_s_us,spinwave_efficiency\n";
    for (int i = 0; i <= 30; ++i) {
        const double ts = 2.0 * static_cast<double>(i);
        os << num(ts) << ","
           << num(end_to_end_efficiency(run.afc_efficiency_numeric, config.spin.transfer_efficiency,
                                        config.spin.gamma_spin_khz, ts))
           << "\n";
    }
}

void preset_fig2_storage(const ExperimentConfig& config, ReportWriter& writer,
                         PresetResult& result) {
    const auto [w0, w1] = detection_window(config);
    const ProtocolTimeline tl = standard_timeline(config);
    const TimeAxis axis = standard_time_axis(config);
    const ChainResult chain = standard_noise_chain(config);

    const double readout0 = axis.t0_us;
    const double readout1 = axis.t0_us + axis.dt_us * static_cast<double>(axis.n);

    json runs = json::array();
    const std::vector<double> nbars = {2.5, 11.2};
    for (std::size_t i = 0; i < nbars.size(); ++i) {
        const double nbar = nbars[i];

        auto fluxes = chain.detector_fluxes;
        fluxes.push_back(signal_flux(axis, tl.t_echo_us, config.pulse.fwhm_us, nbar,
                                     config.snr.effective_efficiency));
        const CountHistogram echo_hist = simulate_counts(
            fluxes, config.detector, readout0, readout1, fnv1a64("fig2-echo", 100 + i));
        const CountHistogram noise_hist =
            simulate_counts(chain.detector_fluxes, config.detector, readout0, readout1,
                            fnv1a64("fig2-noise", 200 + i));
        const CountHistogram dark_hist = simulate_counts(
            {}, config.detector, readout0, readout1, fnv1a64("fig2-dark", 300 + i));
        const CountHistogram input_hist = simulate_counts(
            {signal_flux(axis, tl.t_input_us, config.pulse.fwhm_us, nbar, 1.0)}, config.detector,
            readout0, readout1, fnv1a64("fig2-input", 400 + i));

        const SnrEstimate snr = estimate_snr(echo_hist, w0, w1, noise_hist, w0, w1);

        const std::string tag = "nbar" + num(nbar);
        write_histogram_csv(writer.open("fig2_" + tag + "_echo.csv"), echo_hist);
        write_histogram_csv(writer.open("fig2_" + tag + "_noise.csv"), noise_hist);
        write_histogram_csv(writer.open("fig2_" + tag + "_dark.csv"), dark_hist);
        write_histogram_csv(writer.open("fig2_" + tag + "_input_reference.csv"), input_hist);

        json jr;
        jr["nbar"] = nbar;
        jr["snr"] = snr.snr;
        jr["snr_err"] = snr.err;
        jr["signal_window_counts"] = snr.signal_counts;
        jr["noise_window_counts_scaled"] = snr.noise_counts_scaled;
        runs.push_back(jr);
    }

    writer.open("noise_budget.txt") << chain.budget.report();

    result.summary["runs"] = runs;
    result.summary["noise_floor_photons_per_mode"] = chain.budget.total_noise_floor;
    result.summary["echo_window_us"] = {w0, w1};
    result.summary["timeline"] = {{"t_input_us", tl.t_input_us}, {"t_c1_us", tl.t_c1_us},
                                  {"t_c2_us", tl.t_c2_us},       {"t_echo_us", tl.t_echo_us},
                                  {"t_oreo_us", tl.t_oreo_us}};
}

void preset_fig2d_snr(const ExperimentConfig& config, ReportWriter& writer, PresetResult& result) {
    const ProtocolTimeline tl = standard_timeline(config);
    const ChainResult chain = standard_noise_chain(config);

    SnrCycleConfig cycle;
    cycle.noise_fluxes = chain.detector_fluxes;
    cycle.echo_center_us = tl.t_echo_us;
    cycle.echo_fwhm_us = config.pulse.fwhm_us;
    cycle.effective_efficiency = config.snr.effective_efficiency;
    cycle.window_halfwidth_us = config.snr.window_halfwidth_us;
    const TimeAxis axis = standard_time_axis(config);
    cycle.readout_start_us = axis.t0_us;
    cycle.readout_end_us = axis.t0_us + axis.dt_us * static_cast<double>(axis.n);
    cycle.noise_reference_trials = config.snr.noise_reference_trials;

    const SnrScanResult scan = snr_scan(config.snr.nbar_list, cycle, config.detector);

    auto os = writer.open("snr_scan.csv");
    os << "nbar,snr,snr_err\n";
    for (std::size_t i = 0; i < scan.nbar.size(); ++i)
        os << num(scan.nbar[i]) << "," << num(scan.snr[i]) << "," << num(scan.err[i]) << "\n";

    const double p_noise = chain.budget.total_noise_floor;
    result.summary["slope"] = scan.slope;
    result.summary["slope_err"] = scan.slope_err;
    result.summary["r_squared"] = scan.r_squared;
    result.summary["noise_floor_photons_per_mode"] = p_noise;
    result.summary["expected_slope_eta_over_pnoise"] =
        p_noise > 0.0 ? config.snr.effective_efficiency / p_noise : 0.0;
    result.summary["points"] = {{"nbar", scan.nbar}, {"snr", scan.snr}, {"snr_err", scan.err}};
    writer.open("noise_budget.txt") << chain.budget.report();
}

void preset_fig3_visibility(const ExperimentConfig& config, ReportWriter& writer,
                            PresetResult& result) {
    json runs = json::array();
    for (std::size_t i = 0; i < config.visibility.nbar_list.size(); ++i) {
        TimebinConfig tb;
        tb.nbar = config.visibility.nbar_list[i];
        tb.eta_s = config.visibility.eta_s;
        tb.bin_separation_us = config.visibility.bin_separation_us;
        tb.sigma_f_khz = config.visibility.sigma_f_khz;
        tb.afc_delay_us = config.visibility.afc_delay_us;
        tb.bin_noise_floor = config.visibility.bin_noise_floor;
        tb.phase_points = config.visibility.phase_points;
        tb.trials_per_point = config.visibility.trials_per_point;
        tb.seed = mix_seed(config.detector.seed, 500 + i);
        tb.bootstrap_resamples = config.visibility.bootstrap_resamples;

        const PhaseScanData scan = timebin_phase_scan(tb);
        const VisibilityResult fit =
            fit_visibility(scan, tb.bootstrap_resamples, mix_seed(tb.seed, 77));

        auto os = writer.open("visibility_scan_nbar" + num(tb.nbar) + ".csv");
        os << "phase_rad,middle_mean,early_mean,late_mean\n";
        for (std::size_t p = 0; p < scan.phases.size(); ++p)
            os << num(scan.phases[p]) << "," << num(scan.middle_mean[p]) << ","
               << num(scan.early_mean[p]) << "," << num(scan.late_mean[p]) << "\n";

        const double v_coh =
            coherence_visibility(tb.sigma_f_khz, tb.bin_separation_us);
        const double s = tb.eta_s * tb.nbar;
        json jr;
        jr["nbar"] = tb.nbar;
        jr["visibility"] = fit.v;
        jr["visibility_err"] = fit.v_err;
        jr["v_coh"] = v_coh;
        jr["expected_visibility"] = v_coh * s / (s + 2.0 * tb.bin_noise_floor);
        runs.push_back(jr);
    }
    result.summary["runs"] = runs;
    result.summary["sigma_f_khz"] = config.visibility.sigma_f_khz;
    result.summary["bin_separation_us"] = config.visibility.bin_separation_us;
}

void preset_noise_budget(const ExperimentConfig& config, ReportWriter& writer,
                         PresetResult& result) {
    const ChainResult with_fp = standard_noise_chain(config);
    ExperimentConfig no_fp_cfg = config;
    no_fp_cfg.filter.fp_enabled = false;
    const ChainResult no_fp = standard_noise_chain(no_fp_cfg);

    writer.open("noise_budget.txt") << with_fp.budget.report();
    writer.open("noise_budget_no_fp.txt") << no_fp.budget.report();

    json rows = json::array();
    for (const auto& r : with_fp.budget.rows) {
        rows.push_back({{"source", r.source},
                        {"at_crystal", r.at_crystal},
                        {"spatial_factor", r.spatial_factor},
                        {"grating_factor", r.grating_factor},
                        {"fp_factor", r.fp_factor},
                        {"at_detector", r.at_detector}});
    }
    result.summary["rows"] = rows;
    result.summary["dark_contribution"] = with_fp.budget.dark_contribution;
    result.summary["total_noise_floor"] = with_fp.budget.total_noise_floor;
    result.summary["total_noise_floor_without_fp"] = no_fp.budget.total_noise_floor;
}

}  // namespace

ProtocolTimeline standard_timeline(const ExperimentConfig& config) {
    return schedule(config.comb.afc_delay_us, config.timeline.t_s_us,
                    config.timeline.t_c1_offset_us, config.pulse.center_us);
}

TimeAxis standard_time_axis(const ExperimentConfig& config) {
    const ProtocolTimeline tl = standard_timeline(config);
    TimeAxis axis;
    axis.t0_us = tl.t_input_us - 5.0;
    axis.dt_us = 0.01;
    const double t_end = tl.t_oreo_us + 14.0;
    axis.n = static_cast<std::size_t>(std::ceil((t_end - axis.t0_us) / axis.dt_us));
    return axis;
}

std::pair<double, double> detection_window(const ExperimentConfig& config) {
    const ProtocolTimeline tl = standard_timeline(config);
    return {tl.t_echo_us - config.snr.window_halfwidth_us,
            tl.t_echo_us + config.snr.window_halfwidth_us};
}

ChainResult standard_noise_chain(const ExperimentConfig& config, bool with_input_cycle_c1) {
    const ProtocolTimeline tl = standard_timeline(config);
    const TimeAxis axis = standard_time_axis(config);
    const auto [w0, w1] = detection_window(config);
    const auto fluxes = emit_noise(tl, config.noise, axis, {with_input_cycle_c1, true});
    return apply_chain(fluxes, filter_chain(config, w0, w1), w0, w1,
                       config.detector.dark_rate_per_us);
}

std::vector<std::pair<std::string, std::string>> list_presets() {
    return {
        {"bright-characterization",
         "bright-pulse memory characterization: AFC echo, spin-wave echo, lifetime"},
        {"fig2-storage", "weak-pulse storage traces and SNR at nbar = 2.5 and 11.2"},
        {"fig2d-snr", "SNR vs mean photon number with the linear fit through (0,1)"},
        {"fig3-visibility", "double-write time-bin interference and visibility fits"},
        {"noise-budget", "per-source noise budget through the filter chain"},
    };
}

PresetResult run_preset(const std::string& name, const ExperimentConfig& config,
                        const std::string& out_dir) {
    bool known = false;
    for (const auto& [preset_name, blurb] : list_presets()) known |= preset_name == name;
    if (!known) throw std::invalid_argument("unknown preset: " + name);

    PresetResult result;
    result.preset = name;
    ReportWriter writer(config, out_dir, result);

    if (name == "bright-characterization") {
        preset_bright(config, writer, result);
    } else if (name == "fig2-storage") {
        preset_fig2_storage(config, writer, result);
    } else if (name == "fig2d-snr") {
        preset_fig2d_snr(config, writer, result);
    } else if (name == "fig3-visibility") {
        preset_fig3_visibility(config, writer, result);
    } else if (name == "noise-budget") {
        preset_noise_budget(config, writer, result);
    }

    writer.write_summary();
    return result;
}

}  // namespace afcsim
