#include "pdg/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "pdg/baselines.hpp"
#include "pdg/config.hpp"
#include "pdg/engine.hpp"
#include "pdg/gridmap.hpp"
#include "pdg/metrics.hpp"

namespace pdg {

namespace {

const char* const kVersion = "pdg 0.1.0";

const char* const kUsage = R"(usage: pdg <command> [--key value ...] [--config FILE]

Scattered scalar-field interpolation: diffusion model with step-scheduled
receptive fields and a variogram-matching loss, plus classical baselines.

commands:
  synth        generate a synthetic survey dataset (CSV lon,lat,value)
                 --out PATH  [--n 6000 --step-len 0.012 --turn-sigma 0.35
                  --noise-sigma 25 --seed 7 --trend-a 48000 --trend-b 150
                  --trend-c -120 --anomalies "cx,cy,amp,width;..."]
  train        train a model on a dataset
                 --data CSV --out CKPT  [--loss-log CSV --epochs 60
                  --instances-per-epoch 100 --instance-size 256
                  --cond-fraction 0.5 --lr 0.001 --lambda 0.1 --k-v 8
                  --k-min 32 --k-max 1000 --timesteps 1000
                  --beta-start 0.0001 --beta-end 0.02 --width 64 --seed 1
                  --disable-mask --disable-kriging --quiet]
  interpolate  predict target values from observed conditions
                 --checkpoint CKPT --conditions CSV --targets CSV --out CSV
                 [--steps 10 --seed 1]
  eval         compare predictions against ground truth, print metrics JSON
                 --pred CSV --truth CSV  [--out JSON]
  ablate       train and score model variants (full, no-mask, no-kriging)
                 --data CSV  [--out CSV --variants full,no-mask,no-kriging
                  --test-fraction 0.1 --split-seed 1 --eval-cond-fraction 0.5
                  --steps 10 --sample-seed 1 + train options]
  sweep-steps  score one checkpoint across sampling-step counts
                 --checkpoint CKPT --data CSV  [--out CSV --cond-fraction 0.5
                  --steps-list 5,10,20,30,40,50 --seed 1]
  sweep-k      train and score across receptive-field ramp endpoints
                 --data CSV  [--out CSV --k-max-list 500,1000,1500
                  --k-min-list 32,64 --test-fraction 0.1 --split-seed 1
                  --eval-cond-fraction 0.5 --steps 10 --sample-seed 1
                  + train options]
  render       rasterize an interpolated map to CSV and 16-bit PGM
                 --conditions CSV --out-prefix PATH  [--method idw|kriging|
                  rbf|pdg --bbox 0,1,0,1 --nx 128 --ny 128 --idw-power 2
                  --rbf-width 0.08 --vario-bins 12 --vario-max-range 0.7
                  --checkpoint CKPT --steps 10 --seed 1]

Config files hold the same keys as flat `key = value` lines; flags override
the file, the file overrides built-in defaults. Every file-writing run also
writes a `<output>.manifest.txt` recording the effective configuration.
)";

std::string num(double v) {
    char b[64];
    std::snprintf(b, sizeof(b), "%.17g", v);
    return b;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

double parse_double(const std::string& raw, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0')
        throw ConfigError(what + ": not a number: '" + raw + "'");
    return v;
}

std::vector<int> parse_int_list(const std::string& raw, const std::string& what) {
    std::vector<int> out;
    for (const std::string& p : split(raw, ',')) {
        char* end = nullptr;
        const long v = std::strtol(p.c_str(), &end, 10);
        if (end == p.c_str() || *end != '\0')
            throw ConfigError(what + ": not an integer: '" + p + "'");
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) throw ConfigError(what + ": empty list");
    return out;
}

std::vector<GaussianAnomaly> parse_anomalies(const std::string& raw) {
    std::vector<GaussianAnomaly> out;
    if (raw.empty()) return out;
    for (const std::string& part : split(raw, ';')) {
        if (part.empty()) continue;
        const std::vector<std::string> f = split(part, ',');
        if (f.size() != 4)
            throw ConfigError("anomalies: expected cx,cy,amp,width but got '" + part + "'");
        GaussianAnomaly a;
        a.center = {parse_double(f[0], "anomalies"), parse_double(f[1], "anomalies")};
        a.amplitude = parse_double(f[2], "anomalies");
        a.width = parse_double(f[3], "anomalies");
        out.push_back(a);
    }
    return out;
}

BBox parse_bbox(const std::string& raw) {
    const std::vector<std::string> f = split(raw, ',');
    if (f.size() != 4)
        throw ConfigError("bbox: expected lon_min,lon_max,lat_min,lat_max but got '" + raw + "'");
    return {parse_double(f[0], "bbox"), parse_double(f[1], "bbox"), parse_double(f[2], "bbox"),
            parse_double(f[3], "bbox")};
}

Config parse_flags(const std::vector<std::string>& args, std::size_t start,
                   std::string* config_path) {
    Config c;
    for (std::size_t i = start; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--", 0) != 0)
            throw ConfigError("unexpected argument: '" + a + "' (options start with --)");
        const std::string body = a.substr(2);
        if (body.empty()) throw ConfigError("bad flag: --");
        std::string key, value;
        const std::size_t eq = body.find('=');
        if (eq != std::string::npos) {
            key = body.substr(0, eq);
            value = body.substr(eq + 1);
        } else {
            key = body;
            if (i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0) {
                value = args[++i];
            } else {
                value = "true"; // bare flag, boolean switch
            }
        }
        if (key == "config") {
            *config_path = value;
            continue;
        }
        c.set(key, value);
    }
    return c;
}

void check_known(const Config& cfg, const std::set<std::string>& allowed,
                 const std::string& cmd) {
    for (const auto& [k, v] : cfg.entries())
        if (allowed.count(k) == 0) throw ConfigError(cmd + ": unknown option --" + k);
}

void require_keys(const Config& cfg, std::initializer_list<const char*> keys,
                  const std::string& cmd) {
    for (const char* k : keys)
        if (!cfg.has(k)) throw ConfigError(cmd + ": missing required --" + std::string(k));
}

void write_manifest(const std::string& out_path, const std::string& cmd, const Config& cfg) {
    const std::string path = out_path + ".manifest.txt";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write manifest: " + path);
    out << "# " << kVersion << "\n";
    out << "command = " << cmd << "\n";
    out << cfg.dump();
    if (!out) throw DataError("manifest write failed: " + path);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path);
    out << text;
    if (!out) throw DataError("write failed for " + path);
}

Config train_defaults() {
    const TrainConfig d;
    Config c;
    c.set("epochs", std::to_string(d.epochs));
    c.set("instances-per-epoch", std::to_string(d.instances_per_epoch));
    c.set("instance-size", std::to_string(d.instance_size));
    c.set("cond-fraction", num(d.cond_fraction));
    c.set("lr", num(d.lr));
    c.set("lambda", num(d.lambda));
    c.set("k-v", std::to_string(d.k_v));
    c.set("k-min", std::to_string(d.k_min));
    c.set("k-max", std::to_string(d.k_max));
    c.set("timesteps", std::to_string(d.T));
    c.set("beta-start", num(d.beta_start));
    c.set("beta-end", num(d.beta_end));
    c.set("width", std::to_string(d.d));
    c.set("seed", "1");
    c.set("disable-mask", "false");
    c.set("disable-kriging", "false");
    return c;
}

std::set<std::string> train_keys() {
    return {"epochs",     "instances-per-epoch", "instance-size",  "cond-fraction",
            "lr",         "lambda",              "k-v",            "k-min",
            "k-max",      "timesteps",           "beta-start",     "beta-end",
            "width",      "seed",                "disable-mask",   "disable-kriging"};
}

TrainConfig train_config_from(const Config& cfg) {
    TrainConfig tc;
    tc.epochs = static_cast<int>(cfg.get_int("epochs"));
    tc.instances_per_epoch = static_cast<int>(cfg.get_int("instances-per-epoch"));
    tc.instance_size = static_cast<int>(cfg.get_int("instance-size"));
    tc.cond_fraction = cfg.get_double("cond-fraction");
    tc.lr = cfg.get_double("lr");
    tc.lambda = cfg.get_double("lambda");
    tc.k_v = static_cast<int>(cfg.get_int("k-v"));
    tc.k_min = static_cast<int>(cfg.get_int("k-min"));
    tc.k_max = static_cast<int>(cfg.get_int("k-max"));
    tc.T = static_cast<int>(cfg.get_int("timesteps"));
    tc.beta_start = cfg.get_double("beta-start");
    tc.beta_end = cfg.get_double("beta-end");
    tc.d = static_cast<int>(cfg.get_int("width"));
    tc.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
    tc.disable_mask = cfg.get_bool("disable-mask");
    tc.disable_kriging = cfg.get_bool("disable-kriging");
    return tc;
}

EpochCallback progress_printer(const Config& cfg, int total_epochs) {
    if (cfg.get_bool_or("quiet", false)) return {};
    return [total_epochs](int epoch, double mean_loss) {
        std::fprintf(stderr, "epoch %d/%d mean loss %.6f\n", epoch, total_epochs, mean_loss);
    };
}

std::string metrics_csv_row(const MetricsRecord& m) {
    return num(m.rmse) + "," + num(m.mae) + "," + num(m.mape) + "," + num(m.mse);
}

// --- subcommands ------------------------------------------------------------

int cmd_synth(const Config& cfg) {
    require_keys(cfg, {"out"}, "synth");
    SynthFieldSpec spec;
    spec.trend_a = cfg.get_double("trend-a");
    spec.trend_b = cfg.get_double("trend-b");
    spec.trend_c = cfg.get_double("trend-c");
    spec.anomalies = parse_anomalies(cfg.get_string("anomalies"));
    spec.noise_sigma = cfg.get_double("noise-sigma");
    spec.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));

    const auto samples =
        sample_trajectory(spec, static_cast<int>(cfg.get_int("n")), cfg.get_double("step-len"),
                          cfg.get_double("turn-sigma"), spec.seed);
    const std::string out = cfg.get_string("out");
    save_csv(out, samples);
    write_manifest(out, "synth", cfg);
    return 0;
}

int cmd_train(const Config& cfg) {
    require_keys(cfg, {"data", "out"}, "train");
    const auto samples = load_csv(cfg.get_string("data"));
    const TrainConfig tc = train_config_from(cfg);
    const TrainResult result = train(samples, tc, progress_printer(cfg, tc.epochs));
    const std::string out = cfg.get_string("out");
    save_checkpoint(out, result.checkpoint);
    if (cfg.has("loss-log")) save_loss_log(cfg.get_string("loss-log"), result.log);
    write_manifest(out, "train", cfg);
    return 0;
}

int cmd_interpolate(const Config& cfg) {
    require_keys(cfg, {"checkpoint", "conditions", "targets", "out"}, "interpolate");
    const Checkpoint ckpt = load_checkpoint(cfg.get_string("checkpoint"));
    const auto cond = load_csv(cfg.get_string("conditions"));
    const auto targ = load_csv(cfg.get_string("targets"));
    SampleConfig scfg;
    scfg.steps = static_cast<int>(cfg.get_int("steps"));
    scfg.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));

    const std::vector<double> pred =
        interpolate(locations_of(cond), values_of(cond), locations_of(targ), ckpt, scfg);

    std::vector<FieldSample> out_samples = targ;
    for (std::size_t i = 0; i < pred.size(); ++i) out_samples[i].value = pred[i];
    const std::string out = cfg.get_string("out");
    save_csv(out, out_samples);
    write_manifest(out, "interpolate", cfg);
    return 0;
}

int cmd_eval(const Config& cfg) {
    require_keys(cfg, {"pred", "truth"}, "eval");
    const auto pred = load_csv(cfg.get_string("pred"));
    const auto truth = load_csv(cfg.get_string("truth"));
    if (pred.size() != truth.size()) throw DataError("eval: row count mismatch");
    for (std::size_t i = 0; i < pred.size(); ++i)
        if (distance(pred[i].location, truth[i].location) > 1e-9)
            throw DataError("eval: location mismatch at row " + std::to_string(i + 1));

    const MetricsRecord rec = compute_metrics(values_of(truth), values_of(pred));
    const std::string line = metrics_json(rec);
    std::cout << line << "\n";
    if (cfg.has("out")) {
        const std::string out = cfg.get_string("out");
        write_text(out, line + "\n");
        write_manifest(out, "eval", cfg);
    }
    return 0;
}

int cmd_ablate(const Config& cfg) {
    require_keys(cfg, {"data"}, "ablate");
    const auto samples = load_csv(cfg.get_string("data"));
    const double tf = cfg.get_double("test-fraction");
    if (!(tf > 0.0 && tf < 1.0)) throw ConfigError("ablate: test-fraction must lie in (0, 1)");
    SplitRatios ratios;
    ratios.train = 1.0 - tf;
    ratios.val = 0.0;
    ratios.test = tf;
    const DataSplit ds =
        split_dataset(samples, ratios, static_cast<std::uint64_t>(cfg.get_int("split-seed")));

    std::vector<std::string> variants;
    for (const std::string& v : split(cfg.get_string("variants"), ','))
        if (!v.empty()) variants.push_back(v);

    AblationConfig acfg;
    acfg.base = train_config_from(cfg);
    acfg.sample.steps = static_cast<int>(cfg.get_int("steps"));
    acfg.sample.seed = static_cast<std::uint64_t>(cfg.get_int("sample-seed"));
    acfg.eval_cond_fraction = cfg.get_double("eval-cond-fraction");

    const auto rows =
        ablate(ds.train, ds.test, variants, acfg, progress_printer(cfg, acfg.base.epochs));

    std::string table = "variant,rmse,mae,mape,mse\n";
    for (const auto& r : rows) table += r.name + "," + metrics_csv_row(r.metrics) + "\n";
    std::cout << table;
    if (cfg.has("out")) {
        const std::string out = cfg.get_string("out");
        write_text(out, table);
        write_manifest(out, "ablate", cfg);
    }
    return 0;
}

int cmd_sweep_steps(const Config& cfg) {
    require_keys(cfg, {"checkpoint", "data"}, "sweep-steps");
    const Checkpoint ckpt = load_checkpoint(cfg.get_string("checkpoint"));
    const auto samples = load_csv(cfg.get_string("data"));
    const auto counts = parse_int_list(cfg.get_string("steps-list"), "steps-list");

    const auto rows = sweep_steps(ckpt, samples, cfg.get_double("cond-fraction"), counts,
                                  static_cast<std::uint64_t>(cfg.get_int("seed")));

    std::string table = "steps,rmse,mae,mape,mse,seconds\n";
    for (const auto& r : rows)
        table += std::to_string(r.steps) + "," + metrics_csv_row(r.metrics) + "," +
                 num(r.seconds) + "\n";
    std::cout << table;
    if (cfg.has("out")) {
        const std::string out = cfg.get_string("out");
        write_text(out, table);
        write_manifest(out, "sweep-steps", cfg);
    }
    return 0;
}

int cmd_sweep_k(const Config& cfg) {
    require_keys(cfg, {"data"}, "sweep-k");
    const auto samples = load_csv(cfg.get_string("data"));
    const double tf = cfg.get_double("test-fraction");
    if (!(tf > 0.0 && tf < 1.0)) throw ConfigError("sweep-k: test-fraction must lie in (0, 1)");
    SplitRatios ratios;
    ratios.train = 1.0 - tf;
    ratios.val = 0.0;
    ratios.test = tf;
    const DataSplit ds =
        split_dataset(samples, ratios, static_cast<std::uint64_t>(cfg.get_int("split-seed")));

    const auto kmax = parse_int_list(cfg.get_string("k-max-list"), "k-max-list");
    const auto kmin = parse_int_list(cfg.get_string("k-min-list"), "k-min-list");
    const TrainConfig base = train_config_from(cfg);
    SampleConfig sample;
    sample.steps = static_cast<int>(cfg.get_int("steps"));
    sample.seed = static_cast<std::uint64_t>(cfg.get_int("sample-seed"));

    const auto rows = sweep_k(ds.train, ds.test, kmax, kmin, base, sample,
                              cfg.get_double("eval-cond-fraction"),
                              progress_printer(cfg, base.epochs));

    std::string table = "k_max,k_min,rmse,mae,mape,mse\n";
    for (const auto& r : rows)
        table += std::to_string(r.k_max) + "," + std::to_string(r.k_min) + "," +
                 metrics_csv_row(r.metrics) + "\n";
    std::cout << table;
    if (cfg.has("out")) {
        const std::string out = cfg.get_string("out");
        write_text(out, table);
        write_manifest(out, "sweep-k", cfg);
    }
    return 0;
}

int cmd_render(const Config& cfg) {
    require_keys(cfg, {"conditions", "out-prefix"}, "render");
    const auto cond = load_csv(cfg.get_string("conditions"));
    const std::string method = cfg.get_string("method");

    Interpolator interp;
    if (method == "idw") {
        const double power = cfg.get_double("idw-power");
        interp = [power](const std::vector<GeoPoint>& m_co, const std::vector<double>& x_co,
                         const std::vector<GeoPoint>& m_ta) {
            return idw(m_co, x_co, m_ta, power);
        };
    } else if (method == "kriging") {
        const VariogramModel vm =
            fit_variogram(cond, static_cast<int>(cfg.get_int("vario-bins")),
                          cfg.get_double("vario-max-range"));
        interp = [vm](const std::vector<GeoPoint>& m_co, const std::vector<double>& x_co,
                      const std::vector<GeoPoint>& m_ta) {
            return ordinary_kriging(m_co, x_co, m_ta, vm).predictions;
        };
    } else if (method == "rbf") {
        const double width = cfg.get_double("rbf-width");
        interp = [width](const std::vector<GeoPoint>& m_co, const std::vector<double>& x_co,
                         const std::vector<GeoPoint>& m_ta) {
            return rbf_interpolate(m_co, x_co, m_ta, width);
        };
    } else if (method == "pdg") {
        require_keys(cfg, {"checkpoint"}, "render");
        const Checkpoint ckpt = load_checkpoint(cfg.get_string("checkpoint"));
        SampleConfig scfg;
        scfg.steps = static_cast<int>(cfg.get_int("steps"));
        scfg.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
        interp = [ckpt, scfg](const std::vector<GeoPoint>& m_co, const std::vector<double>& x_co,
                              const std::vector<GeoPoint>& m_ta) {
            return interpolate(m_co, x_co, m_ta, ckpt, scfg);
        };
    } else {
        throw ConfigError("render: unknown method '" + method +
                          "' (expected idw, kriging, rbf, or pdg)");
    }

    const GridMap grid =
        render_grid(interp, locations_of(cond), values_of(cond), parse_bbox(cfg.get_string("bbox")),
                    static_cast<int>(cfg.get_int("nx")), static_cast<int>(cfg.get_int("ny")));
    const std::string prefix = cfg.get_string("out-prefix");
    save_grid_csv(grid, prefix + ".csv");
    save_grid_pgm(grid, prefix + ".pgm");
    write_manifest(prefix, "render", cfg);
    return 0;
}

struct Command {
    Config defaults;
    std::set<std::string> keys;
    int (*handler)(const Config&);
};

Command command_table(const std::string& name) {
    if (name == "synth") {
        Config d;
        d.set("n", "6000");
        d.set("step-len", "0.012");
        d.set("turn-sigma", "0.35");
        d.set("noise-sigma", "25");
        d.set("seed", "7");
        d.set("trend-a", "48000");
        d.set("trend-b", "150");
        d.set("trend-c", "-120");
        d.set("anomalies",
              "0.3,0.7,180,0.15;0.75,0.25,-140,0.12;0.2,0.2,90,0.08;0.65,0.8,-110,0.2");
        return {d,
                {"out", "n", "step-len", "turn-sigma", "noise-sigma", "seed", "trend-a",
                 "trend-b", "trend-c", "anomalies"},
                cmd_synth};
    }
    if (name == "train") {
        Config d = train_defaults();
        std::set<std::string> k = train_keys();
        k.insert({"data", "out", "loss-log", "quiet"});
        return {d, k, cmd_train};
    }
    if (name == "interpolate") {
        Config d;
        d.set("steps", "10");
        d.set("seed", "1");
        return {d, {"checkpoint", "conditions", "targets", "out", "steps", "seed"},
                cmd_interpolate};
    }
    if (name == "eval") {
        return {Config{}, {"pred", "truth", "out"}, cmd_eval};
    }
    if (name == "ablate") {
        Config d = train_defaults();
        d.set("variants", "full,no-mask,no-kriging");
        d.set("test-fraction", "0.1");
        d.set("split-seed", "1");
        d.set("eval-cond-fraction", "0.5");
        d.set("steps", "10");
        d.set("sample-seed", "1");
        std::set<std::string> k = train_keys();
        k.insert({"data", "out", "variants", "test-fraction", "split-seed", "eval-cond-fraction",
                  "steps", "sample-seed", "quiet"});
        return {d, k, cmd_ablate};
    }
    if (name == "sweep-steps") {
        Config d;
        d.set("cond-fraction", "0.5");
        d.set("steps-list", "5,10,20,30,40,50");
        d.set("seed", "1");
        return {d, {"checkpoint", "data", "out", "cond-fraction", "steps-list", "seed"},
                cmd_sweep_steps};
    }
    if (name == "sweep-k") {
        Config d = train_defaults();
        d.set("k-max-list", "500,1000,1500");
        d.set("k-min-list", "32,64");
        d.set("test-fraction", "0.1");
        d.set("split-seed", "1");
        d.set("eval-cond-fraction", "0.5");
        d.set("steps", "10");
        d.set("sample-seed", "1");
        std::set<std::string> k = train_keys();
        k.insert({"data", "out", "k-max-list", "k-min-list", "test-fraction", "split-seed",
                  "eval-cond-fraction", "steps", "sample-seed", "quiet"});
        return {d, k, cmd_sweep_k};
    }
    if (name == "render") {
        Config d;
        d.set("method", "idw");
        d.set("bbox", "0,1,0,1");
        d.set("nx", "128");
        d.set("ny", "128");
        d.set("idw-power", "2");
        d.set("rbf-width", "0.08");
        d.set("vario-bins", "12");
        d.set("vario-max-range", "0.7");
        d.set("steps", "10");
        d.set("seed", "1");
        return {d,
                {"conditions", "out-prefix", "method", "bbox", "nx", "ny", "idw-power",
                 "rbf-width", "vario-bins", "vario-max-range", "checkpoint", "steps", "seed"},
                cmd_render};
    }
    throw ConfigError("unknown command: " + name);
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    try {
        if (args.empty()) {
            std::cerr << kUsage;
            return 1;
        }
        const std::string& cmd = args[0];
        if (cmd == "--help" || cmd == "help" || cmd == "-h") {
            std::cout << kUsage;
            return 0;
        }
        if (cmd == "--version" || cmd == "version") {
            std::cout << kVersion << "\n";
            return 0;
        }

        const Command spec = command_table(cmd);
        std::string config_path;
        const Config flags = parse_flags(args, 1, &config_path);
        check_known(flags, spec.keys, cmd);

        Config merged = spec.defaults;
        if (!config_path.empty()) {
            const Config file_cfg = load_config(config_path);
            check_known(file_cfg, spec.keys, cmd);
            merged.merge_from(file_cfg);
        }
        merged.merge_from(flags);
        return spec.handler(merged);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\nrun 'pdg --help' for usage\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        // DimensionError, NumericError, and any other library failure
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace pdg
