// efm: sliced elastic distance toolkit for gridded spatiotemporal fields.
//
// Subcommands: climatology, distance, timing-bias, simulate, convert.
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include "efm/climatology.hpp"
#include "efm/errors.hpp"
#include "efm/event_timing.hpp"
#include "efm/field_io.hpp"
#include "efm/map_output.hpp"
#include "efm/parallel.hpp"
#include "efm/simulation.hpp"
#include "efm/sliced_distance.hpp"
#include "efm/trend_filter.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string file_digest(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw efm::ValidationError("cannot open " + path.string());
    uLong crc = crc32(0L, nullptr, 0);
    char buf[65536];
    while (is.read(buf, sizeof(buf)) || is.gcount() > 0)
        crc = crc32(crc, reinterpret_cast<const Bytef*>(buf),
                    static_cast<uInt>(is.gcount()));
    char hex[16];
    std::snprintf(hex, sizeof(hex), "crc32:%08lx", static_cast<unsigned long>(crc));
    return hex;
}

void write_manifest(const fs::path& outdir, const std::string& subcommand,
                    const json& params, const std::vector<fs::path>& inputs) {
    json m;
    m["tool"] = "efm";
    m["version"] = kVersion;
    m["subcommand"] = subcommand;
    m["parameters"] = params;
    json digests = json::object();
    for (const fs::path& p : inputs) digests[p.filename().string()] = file_digest(p);
    m["input_digests"] = digests;
    std::ofstream os(outdir / "manifest.json");
    os << m.dump(2) << "\n";
}

fs::path prepare_outdir(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

efm::SliceLocationSet centers_for(const std::string& spec, const efm::Field& ref) {
    if (spec == "ref") return efm::SliceLocationSet::from_grid(ref.grid());
    const auto x = spec.find('x');
    if (x == std::string::npos)
        throw efm::ValidationError("--centers must be 'ref' or 'NLATxNLON'");
    const std::size_t nlat = std::stoul(spec.substr(0, x));
    const std::size_t nlon = std::stoul(spec.substr(x + 1));
    return efm::SliceLocationSet::from_grid(efm::SpatialGrid::uniform(nlat, nlon));
}

// One year of daily data as FGRID1: ntime 365, or 366 with Feb 29 dropped.
efm::DailyStack load_year(const fs::path& path) {
    const efm::Field f = efm::read_field(path);
    efm::DailyStack stack{f.grid(), {}, {}};
    const std::size_t ncell = f.grid().size();
    if (f.ntime() == 365) {
        stack.values = f.values();
        for (int d = 1; d <= 365; ++d) stack.day_of_year.push_back(d);
    } else if (f.ntime() == 366) {
        stack.values.reserve(365 * ncell);
        for (std::size_t k = 0; k < 366; ++k) {
            if (k == 59) continue; // Feb 29
            stack.values.insert(stack.values.end(),
                                f.values().begin() + static_cast<std::ptrdiff_t>(k * ncell),
                                f.values().begin() + static_cast<std::ptrdiff_t>((k + 1) * ncell));
        }
        for (int d = 1; d <= 365; ++d) stack.day_of_year.push_back(d);
    } else {
        throw efm::ValidationError(path.string() +
                                   ": yearly input must have 365 or 366 days");
    }
    return stack;
}

int cmd_climatology(const std::vector<std::string>& inputs, double lambda,
                    bool no_smooth, const std::string& out, std::size_t threads,
                    bool verbose) {
    std::vector<efm::DailyStack> years;
    std::vector<fs::path> paths;
    for (const std::string& in : inputs) {
        paths.emplace_back(in);
        years.push_back(load_year(in));
    }
    efm::Field clim = efm::daily_climatology(years);
    if (!no_smooth && lambda > 0.0) {
        efm::SmootherConfig cfg;
        cfg.lambda = lambda;
        if (verbose) std::cerr << "smoothing with lambda=" << lambda << "\n";
        clim = efm::smooth_field(clim, cfg, threads);
    }
    const fs::path outdir = prepare_outdir(out);
    efm::write_field(clim, outdir / "climatology.fgrid");
    write_manifest(outdir, "climatology",
                   {{"lambda", no_smooth ? 0.0 : lambda},
                    {"no_smooth", no_smooth},
                    {"threads", efm::resolve_threads(threads)}},
                   paths);
    return 0;
}

int cmd_distance(const std::string& ref_path,
                 const std::vector<std::string>& model_paths, double range_km,
                 const std::string& centers_spec, bool unnormalized,
                 const std::string& rank_by, const std::string& bias_mode,
                 const std::string& out, std::size_t threads) {
    const efm::Field ref = efm::read_field(ref_path);
    const efm::SliceLocationSet centers = centers_for(centers_spec, ref);
    efm::KernelConfig kcfg;
    kcfg.range_km = range_km;
    kcfg.normalize = !unnormalized;

    struct Row {
        std::string name;
        efm::SlicedElasticDistance d;
        double rmse_v, mae_v, bias_v;
    };
    std::vector<Row> rows;
    const fs::path outdir = prepare_outdir(out);

    for (const std::string& mp : model_paths) {
        efm::Field model = efm::read_field(mp);
        const std::string name = fs::path(mp).stem().string();
        efm::SlicedDistanceResult res;
        try {
            res = efm::sliced_elastic_distance(ref, model, centers, kcfg, {},
                                               threads);
        } catch (const std::exception& e) {
            throw efm::NumericalError(name + ": " + e.what());
        }
        Row row{name, res.distance, efm::rmse(ref, model), efm::mae(ref, model),
                0.0};
        if (bias_mode == "annual-mean") {
            // Area-weighted annual-mean bias, substituted for d_st.
            const auto w = efm::cell_area_weights(ref.grid());
            double num = 0, den = 0;
            for (std::size_t k = 0; k < ref.ntime(); ++k)
                for (std::size_t c = 0; c < ref.grid().size(); ++c) {
                    num += w[c] * (model.values()[k * ref.grid().size() + c] -
                                   ref.values()[k * ref.grid().size() + c]);
                    den += w[c];
                }
            row.bias_v = num / den;
        }
        rows.push_back(row);
        efm::write_local_distance_csv(res.local, outdir / (name + "_local.csv"));
        efm::write_map_png(centers, res.local.d_amplitude,
                           outdir / (name + "_amplitude.png"), false);
        efm::write_map_png(centers, res.local.d_phase,
                           outdir / (name + "_phase.png"), false);
    }

    auto key = [&](const Row& r) {
        if (rank_by == "d_sp") return r.d.d_sp;
        if (rank_by == "d_st") return r.d.d_st;
        if (rank_by == "rmse") return r.rmse_v;
        if (rank_by == "mae") return r.mae_v;
        return r.d.d_sa;
    };
    std::stable_sort(rows.begin(), rows.end(),
                     [&](const Row& a, const Row& b) { return key(a) < key(b); });

    std::ofstream os(outdir / "ranking.csv");
    os << "rank,model,d_sa,d_sp,"
       << (bias_mode == "annual-mean" ? "bias_annual_mean" : "d_st")
       << ",rmse,mae\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        os << (i + 1) << "," << r.name << "," << fmt(r.d.d_sa) << ","
           << fmt(r.d.d_sp) << ","
           << fmt(bias_mode == "annual-mean" ? r.bias_v : r.d.d_st) << ","
           << fmt(r.rmse_v) << "," << fmt(r.mae_v) << "\n";
    }

    std::vector<fs::path> inputs{ref_path};
    for (const auto& mp : model_paths) inputs.emplace_back(mp);
    write_manifest(outdir, "distance",
                   {{"range_km", range_km},
                    {"centers", centers_spec},
                    {"normalize", !unnormalized},
                    {"rank_by", rank_by},
                    {"bias_mode", bias_mode},
                    {"threads", efm::resolve_threads(threads)}},
                   inputs);
    return 0;
}

int cmd_timing_bias(const std::string& ref_path, const std::string& model_path,
                    const std::vector<double>& region, double threshold,
                    const std::string& events, double range_km,
                    const std::string& out, std::size_t threads) {
    const efm::Field ref = efm::read_field(ref_path);
    const efm::Field model = efm::read_field(model_path);
    efm::EventConfig ecfg;
    ecfg.threshold_fraction = threshold;
    if (!region.empty()) {
        if (region.size() != 4)
            throw efm::ValidationError("--region needs latmin,latmax,lonmin,lonmax");
        ecfg.region = {region[0], region[1], region[2], region[3]};
    }
    efm::KernelConfig kcfg;
    kcfg.range_km = range_km;

    const efm::EventBiasResult res =
        efm::event_timing_bias(ref, model, ecfg, kcfg, {}, threads);
    const fs::path outdir = prepare_outdir(out);
    efm::write_event_csv(res.reference_dates, res.onset_bias, res.retreat_bias,
                         outdir / "events.csv");
    if (events.find("onset") != std::string::npos)
        efm::write_map_png(res.onset_bias.locations, res.onset_bias.bias_days,
                           outdir / "onset_bias.png", true);
    if (events.find("retreat") != std::string::npos)
        efm::write_map_png(res.retreat_bias.locations, res.retreat_bias.bias_days,
                           outdir / "retreat_bias.png", true);

    write_manifest(outdir, "timing-bias",
                   {{"region", {ecfg.region.lat_min, ecfg.region.lat_max,
                                ecfg.region.lon_min, ecfg.region.lon_max}},
                    {"threshold", threshold},
                    {"events", events},
                    {"range_km", range_km},
                    {"threads", efm::resolve_threads(threads)}},
                   {ref_path, model_path});
    return 0;
}

int cmd_simulate(const std::string& base, const std::vector<double>& ranges,
                 std::uint64_t seed, std::size_t nlat, std::size_t nlon,
                 std::size_t ntime, double t_event, const std::string& out,
                 std::size_t threads) {
    efm::Field f = base == "synthetic"
                       ? efm::synthetic_base_field(nlat, nlon, ntime, seed)
                       : efm::read_field(base);

    efm::ExperimentGrid grid;
    if (!ranges.empty()) grid.ranges_km = ranges;

    const auto rows = efm::run_disentanglement_experiment(
        f, grid, efm::simulation_dp_config(), threads);
    const fs::path outdir = prepare_outdir(out);
    {
        std::ofstream os(outdir / "disentanglement.csv");
        os << "i,j,range_km,d_sa,d_sp,d_st,rmse\n";
        for (const auto& r : rows)
            os << r.amp_index << "," << r.phase_index << "," << fmt(r.range_km)
               << "," << fmt(r.distance.d_sa) << "," << fmt(r.distance.d_sp)
               << "," << fmt(r.distance.d_st) << "," << fmt(r.rmse_value) << "\n";
    }

    efm::KernelConfig kcfg;
    kcfg.range_km = grid.ranges_km.front();
    std::vector<efm::ModificationField> mods = {{0, 1}, {0, 2}, {0, 3}};
    const auto recovery =
        efm::run_bias_recovery_experiment(f, mods, t_event, kcfg, {}, 3.0, threads);
    {
        std::ofstream os(outdir / "bias_recovery.csv");
        os << "i,j,fraction_within_3d,spatial_correlation\n";
        for (const auto& r : recovery) {
            os << r.amp_index << "," << r.phase_index << ","
               << fmt(r.fraction_within_tol) << "," << fmt(r.spatial_correlation)
               << "\n";
            const std::string tag =
                "j" + std::to_string(r.phase_index);
            efm::write_map_png(r.estimated.locations, r.estimated.bias_days,
                               outdir / ("bias_estimated_" + tag + ".png"), true);
            efm::write_map_png(r.estimated.locations, r.true_bias_days,
                               outdir / ("bias_true_" + tag + ".png"), true);
        }
    }

    std::vector<fs::path> inputs;
    if (base != "synthetic") inputs.emplace_back(base);
    write_manifest(outdir, "simulate",
                   {{"base", base},
                    {"ranges_km", grid.ranges_km},
                    {"seed", seed},
                    {"nlat", nlat},
                    {"nlon", nlon},
                    {"ntime", ntime},
                    {"t_event", t_event},
                    {"threads", efm::resolve_threads(threads)}},
                   inputs);
    return 0;
}

int cmd_convert(const std::string& in, const std::string& out) {
    const fs::path src(in), dst(out);
    if (src.extension() == ".csv") {
        efm::write_field(efm::read_field_csv(src), dst);
    } else if (dst.extension() == ".csv") {
        efm::write_field_csv(efm::read_field(src), dst);
    } else {
        throw efm::ValidationError("convert: one side must be a .csv file");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sliced elastic distance for gridded spatiotemporal fields"};
    app.require_subcommand(1);

    std::size_t threads = 0; // 0: EFM_THREADS env or 1
    bool verbose = false;
    app.add_option("--threads", threads, "Worker threads (default: EFM_THREADS or 1)");
    app.add_flag("--verbose", verbose, "Verbose progress output");

    // climatology
    auto* clim = app.add_subcommand("climatology",
                                    "Stack yearly daily fields into a smoothed climatology");
    std::vector<std::string> clim_inputs;
    double lambda = 1250.0;
    bool no_smooth = false;
    std::string clim_out = "climatology_out";
    clim->add_option("inputs", clim_inputs, "Yearly FGRID1 files")->required();
    clim->add_option("--lambda", lambda, "Trend-filter penalty");
    clim->add_flag("--no-smooth", no_smooth, "Skip trend filtering");
    clim->add_option("-o,--output-dir", clim_out, "Output directory");

    // distance
    auto* dist = app.add_subcommand("distance",
                                    "Sliced elastic distance from models to a reference");
    std::string ref_path;
    std::vector<std::string> model_paths;
    double range_km = 750.0;
    std::string centers_spec = "180x360";
    bool unnormalized = false;
    std::string rank_by = "d_sa";
    std::string bias_mode = "d_st";
    std::string dist_out = "distance_out";
    dist->add_option("reference", ref_path, "Reference FGRID1")->required();
    dist->add_option("models", model_paths, "Model FGRID1 files")->required();
    dist->add_option("--range-km", range_km, "Wendland kernel range");
    dist->add_option("--centers", centers_spec, "'NLATxNLON' or 'ref'");
    dist->add_flag("--unnormalized-kernel", unnormalized,
                   "Use the raw kernel integral instead of a local mean");
    dist->add_option("--rank-by", rank_by, "d_sa|d_sp|d_st|rmse|mae");
    dist->add_option("--bias-mode", bias_mode, "d_st|annual-mean");
    dist->add_option("-o,--output-dir", dist_out, "Output directory");

    // timing-bias
    auto* tb = app.add_subcommand("timing-bias",
                                  "Onset/retreat timing bias maps over a region");
    std::string tb_ref, tb_model;
    std::vector<double> tb_region;
    double tb_threshold = 0.5;
    std::string tb_events = "onset,retreat";
    double tb_range = 750.0;
    std::string tb_out = "timing_bias_out";
    tb->add_option("reference", tb_ref, "Reference FGRID1")->required();
    tb->add_option("model", tb_model, "Model FGRID1")->required();
    tb->add_option("--region", tb_region,
                   "latmin,latmax,lonmin,lonmax (default: Monsoon Core Region)")
        ->delimiter(',');
    tb->add_option("--threshold", tb_threshold, "Exceedance fraction of max");
    tb->add_option("--events", tb_events, "Comma list of onset,retreat");
    tb->add_option("--range-km", tb_range, "Wendland kernel range");
    tb->add_option("-o,--output-dir", tb_out, "Output directory");

    // simulate
    auto* sim = app.add_subcommand("simulate",
                                   "Synthetic disentanglement and bias-recovery study");
    std::string sim_base = "synthetic";
    std::vector<double> sim_ranges;
    std::uint64_t sim_seed = 0;
    std::size_t sim_nlat = 36, sim_nlon = 72, sim_ntime = 365;
    double sim_t_event = 0.5;
    std::string sim_out = "simulate_out";
    sim->add_option("--base", sim_base, "'synthetic' or an FGRID1 climatology");
    sim->add_option("--ranges", sim_ranges, "Kernel ranges in km")->delimiter(',');
    sim->add_option("--seed", sim_seed, "Base-field seed");
    sim->add_option("--nlat", sim_nlat, "Synthetic grid latitudes");
    sim->add_option("--nlon", sim_nlon, "Synthetic grid longitudes");
    sim->add_option("--ntime", sim_ntime, "Synthetic time steps");
    sim->add_option("--t-event", sim_t_event, "Bias-recovery event time");
    sim->add_option("-o,--output-dir", sim_out, "Output directory");

    // convert
    auto* conv = app.add_subcommand("convert", "Convert between FGRID1 and CSV");
    std::string conv_in, conv_out;
    conv->add_option("input", conv_in, "Input file")->required();
    conv->add_option("output", conv_out, "Output file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (clim->parsed())
            return cmd_climatology(clim_inputs, lambda, no_smooth, clim_out,
                                   threads, verbose);
        if (dist->parsed())
            return cmd_distance(ref_path, model_paths, range_km, centers_spec,
                                unnormalized, rank_by, bias_mode, dist_out,
                                threads);
        if (tb->parsed())
            return cmd_timing_bias(tb_ref, tb_model, tb_region, tb_threshold,
                                   tb_events, tb_range, tb_out, threads);
        if (sim->parsed())
            return cmd_simulate(sim_base, sim_ranges, sim_seed, sim_nlat,
                                sim_nlon, sim_ntime, sim_t_event, sim_out,
                                threads);
        if (conv->parsed()) return cmd_convert(conv_in, conv_out);
    } catch (const efm::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const efm::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
