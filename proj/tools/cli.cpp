// Copyright 2026 The tcdiff Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>

#include "tcdiff/binary_io.hpp"
#include "tcdiff/c2f.hpp"
#include "tcdiff/errors.hpp"
#include "tcdiff/fastmri.hpp"
#include "tcdiff/fft.hpp"
#include "tcdiff/mask.hpp"
#include "tcdiff/metrics.hpp"
#include "tcdiff/oracle.hpp"
#include "tcdiff/phantom.hpp"
#include "tcdiff/png_writer.hpp"
#include "tcdiff/schedule.hpp"
#include "tcdiff/unet.hpp"

namespace tcdiff::cli {

namespace fs = std::filesystem;

namespace {

// Relative tolerance on the final data-consistency residual.
constexpr double kResidualTolerance = 1e-5;

struct Common {
  std::uint64_t seed = 0;
  std::string config;  // consumed before parsing; registered so it is accepted
  std::string out_dir = ".";
  int threads = 1;
};

struct MaskOptions {
  std::size_t height = 320;
  std::size_t width = 320;
  double acceleration = 4.0;
  std::optional<double> center_fraction;
  std::string output = "mask.mask";
};

struct SimulateOptions {
  std::string input;  // FastMRI HDF5; empty selects the phantom
  std::size_t slice = 0;
  std::size_t height = 64;
  std::size_t width = 64;
  double acceleration = 4.0;
  std::optional<double> center_fraction;
};

struct ReconstructOptions {
  std::string observation = "x_obs.cplx";
  std::string mask = "mask.mask";
  int stride = 40;
  int num_samples = 4;
  int refine_steps = 200;
  int tc_repeats = 3;
  int steps = 4000;
  std::optional<double> beta_min;
  std::optional<double> beta_max;

  std::string denoiser = "oracle";
  std::string prior_mean;  // CPLX file; empty uses prior_constant
  double prior_constant = 0.0;
  double prior_std = 1.0;

  std::string weights;
  bool modulation = true;
  double backbone_scale = 1.2;
  double skip_scale = 0.9;
  double skip_radius = 1.0;
  std::vector<int> modulated_blocks{0, 1};
};

struct EvaluateOptions {
  std::vector<std::string> references;
  std::vector<std::string> reconstructions;
  std::vector<std::size_t> slices;
  double acceleration = 0.0;
  std::string output = "metrics.csv";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--config", c.config, "key=value config file; flags override it");
  cmd->add_option("--out-dir", c.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads for parallel chains")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
}

fs::path prepare_out_dir(const Common& c) {
  const fs::path dir(c.out_dir);
  fs::create_directories(dir);
  return dir;
}

std::string format_db(double db) {
  if (std::isinf(db)) return "inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << db;
  return os.str();
}

int cmd_mask(const Common& c, const MaskOptions& o, std::ostream& out) {
  const double cf = o.center_fraction.value_or(default_center_fraction(o.acceleration));
  const SamplingMask m = make_mask(o.height, o.width, o.acceleration, cf, c.seed);
  const fs::path path = prepare_out_dir(c) / o.output;
  save_mask(path, m);
  out << "mask: " << path.string() << "\n"
      << "sampled_columns: " << m.sampled_columns() << "/" << m.width() << "\n"
      << "sampled_fraction: " << std::fixed << std::setprecision(6) << m.sampled_fraction()
      << "\n";
  return kOk;
}

int cmd_simulate(const Common& c, const SimulateOptions& o, std::ostream& out) {
  KSpaceGrid full;
  if (o.input.empty()) {
    full = fft2c(to_complex(shepp_logan(o.height, o.width)));
  } else {
    Volume vol = read_fastmri_volume(o.input);
    if (o.slice >= vol.slices())
      throw ArgumentError("simulate: slice " + std::to_string(o.slice) + " out of range (" +
                          std::to_string(vol.slices()) + " slices)");
    full = vol.kspace[o.slice];
  }
  // The reference is the fully sampled zero-filled image, so a full mask
  // reproduces it exactly.
  const ComplexImage truth = zero_fill(full);

  const double cf = o.center_fraction.value_or(default_center_fraction(o.acceleration));
  const SamplingMask m = make_mask(full.height(), full.width(), o.acceleration, cf, c.seed);
  const KSpaceGrid x_obs = apply_mask(full, m);
  const ComplexImage zf = zero_fill(x_obs);

  const fs::path dir = prepare_out_dir(c);
  save_cplx(dir / "truth.cplx", truth);
  save_cplx(dir / "x_obs.cplx", x_obs);
  save_cplx(dir / "zf.cplx", zf);
  save_mask(dir / "mask.mask", m);
  const RealImage truth_mag = magnitude(truth);
  const RealImage zf_mag = magnitude(zf);
  write_png(dir / "truth.png", truth_mag);
  write_png(dir / "zf.png", zf_mag);

  const double db = psnr(truth_mag, zf_mag, peak_value(truth_mag));
  out << "observation: " << (dir / "x_obs.cplx").string() << "\n"
      << "sampled_fraction: " << std::fixed << std::setprecision(6) << m.sampled_fraction()
      << "\n"
      << "zf_psnr_db: " << format_db(db) << "\n";
  return kOk;
}

std::unique_ptr<Denoiser> make_denoiser(const ReconstructOptions& o, const NoiseSchedule& s,
                                        std::size_t h, std::size_t w) {
  if (o.denoiser == "oracle") {
    ComplexImage mean(h, w);
    if (!o.prior_mean.empty()) {
      mean = load_cplx<ImageDomain>(o.prior_mean);
      if (mean.height() != h || mean.width() != w)
        throw FormatError(o.prior_mean + ": prior mean shape does not match the observation");
    } else {
      for (auto& v : mean.values()) v = o.prior_constant;
    }
    return std::make_unique<GaussianDenoiser>(GaussianPrior::uniform(std::move(mean), o.prior_std),
                                              s);
  }
  if (o.denoiser == "unet") {
    if (o.weights.empty()) throw ArgumentError("reconstruct: --weights is required for unet");
    std::optional<ModulationConfig> mod;
    if (o.modulation) {
      ModulationConfig cfg;
      cfg.blocks.assign(arch::kDecoderBlocks,
                        BlockModulation{o.backbone_scale, o.skip_scale, o.skip_radius});
      cfg.affected.insert(o.modulated_blocks.begin(), o.modulated_blocks.end());
      cfg.validate(arch::kDecoderBlocks);
      mod = cfg;
    }
    return std::make_unique<UNetDenoiser>(load_weights(o.weights), mod);
  }
  throw ArgumentError("reconstruct: unknown denoiser '" + o.denoiser + "'");
}

int cmd_reconstruct(const Common& c, const ReconstructOptions& o, std::ostream& out) {
  const NoiseSchedule s =
      NoiseSchedule::linear(o.steps, o.beta_min.value_or(default_beta_min(o.steps)),
                            o.beta_max.value_or(default_beta_max(o.steps)));
  ReconstructionConfig cfg;
  cfg.stride = o.stride;
  cfg.num_samples = o.num_samples;
  cfg.refine_steps = o.refine_steps;
  cfg.repeats = o.tc_repeats;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  cfg.validate(s);

  const KSpaceGrid x_obs = load_cplx<FrequencyDomain>(o.observation);
  const SamplingMask m = load_mask(o.mask);
  if (m.height() != x_obs.height() || m.width() != x_obs.width())
    throw FormatError(o.mask + ": mask shape does not match the observation");
  const auto denoiser = make_denoiser(o, s, x_obs.height(), x_obs.width());

  const C2fResult r = c2f_run(*denoiser, x_obs, m, cfg, s);
  const double residual = consistency_residual(r.reconstruction, x_obs, m);
  const double bound = kResidualTolerance * max_abs(x_obs.values());

  const fs::path dir = prepare_out_dir(c);
  save_cplx(dir / "recon.cplx", r.reconstruction);
  write_png(dir / "recon.png", magnitude(r.reconstruction));

  std::ostringstream log;
  log << std::setprecision(6);
  log << "denoiser: " << o.denoiser << "\n"
      << "image: " << x_obs.height() << "x" << x_obs.width() << "\n"
      << "steps: " << o.steps << "\n"
      << "stride: " << cfg.stride << "\n"
      << "num_samples: " << cfg.num_samples << "\n"
      << "refine_steps: " << cfg.refine_steps << "\n"
      << "tc_repeats: " << cfg.repeats << "\n"
      << "seed: " << cfg.seed << "\n"
      << "threads: " << cfg.threads << "\n"
      << "coarse_seconds: " << r.times.coarse_seconds << "\n"
      << "average_seconds: " << r.times.average_seconds << "\n"
      << "refine_seconds: " << r.times.refine_seconds << "\n"
      << "dc_residual: " << residual << "\n"
      << "dc_bound: " << bound << "\n";
  std::ofstream(dir / "reconstruct.log") << log.str();
  out << log.str();

  if (!(residual <= bound))
    throw NumericalError("reconstruct: data-consistency residual " + std::to_string(residual) +
                         " exceeds " + std::to_string(bound));
  return kOk;
}

int cmd_evaluate(const Common& c, const EvaluateOptions& o, std::ostream& out) {
  if (o.references.size() != o.reconstructions.size())
    throw ArgumentError("evaluate: " + std::to_string(o.references.size()) + " references but " +
                        std::to_string(o.reconstructions.size()) + " reconstructions");
  if (!o.slices.empty() && o.slices.size() != o.references.size())
    throw ArgumentError("evaluate: --slice must be given once per pair");

  std::ostringstream csv;
  csv << "file,slice,af,psnr_db,ssim\n";
  for (std::size_t i = 0; i < o.references.size(); ++i) {
    const RealImage ref = magnitude(load_cplx<ImageDomain>(o.references[i]));
    const RealImage rec = magnitude(load_cplx<ImageDomain>(o.reconstructions[i]));
    if (ref.height != rec.height || ref.width != rec.width)
      throw FormatError(o.reconstructions[i] + ": shape does not match " + o.references[i]);
    const double peak = peak_value(ref);
    std::ostringstream row;
    row << o.reconstructions[i] << "," << (o.slices.empty() ? i : o.slices[i]) << ","
        << o.acceleration << "," << format_db(psnr(ref, rec, peak)) << "," << std::fixed
        << std::setprecision(6) << ssim(ref, rec, peak) << "\n";
    csv << row.str();
  }

  std::ofstream(prepare_out_dir(c) / o.output) << csv.str();
  out << csv.str();
  return kOk;
}

// Inserts config-file arguments right after the subcommand so that explicit
// flags, which come later, win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (!path || args.empty() || args[0].starts_with("-")) return args;
  std::vector<std::string> out{args[0]};
  for (auto& a : read_config(*path)) out.push_back(std::move(a));
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open config file");
  std::vector<std::string> args;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ArgumentError(path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config")
      throw ArgumentError(path + ":" + std::to_string(lineno) + ": invalid key");
    std::replace(key.begin(), key.end(), '_', '-');
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Undersampled MRI reconstruction with a diffusion sampler", "tcdiff"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  Common common;
  MaskOptions mask_opts;
  SimulateOptions sim_opts;
  ReconstructOptions rec_opts;
  EvaluateOptions eval_opts;

  auto* mask_cmd = app.add_subcommand("mask", "generate a random Cartesian undersampling mask");
  add_common(mask_cmd, common);
  mask_cmd->add_option("--height", mask_opts.height)->capture_default_str();
  mask_cmd->add_option("--width", mask_opts.width)->capture_default_str();
  mask_cmd->add_option("--acceleration", mask_opts.acceleration)->capture_default_str();
  mask_cmd->add_option("--center-fraction", mask_opts.center_fraction,
                       "default depends on the acceleration");
  mask_cmd->add_option("--output", mask_opts.output, "file name inside --out-dir")
      ->capture_default_str();

  auto* sim_cmd = app.add_subcommand("simulate", "undersample a phantom or FastMRI slice");
  add_common(sim_cmd, common);
  sim_cmd->add_option("--input", sim_opts.input, "FastMRI single-coil HDF5 file");
  sim_cmd->add_option("--slice", sim_opts.slice)->capture_default_str();
  sim_cmd->add_option("--height", sim_opts.height, "phantom height")->capture_default_str();
  sim_cmd->add_option("--width", sim_opts.width, "phantom width")->capture_default_str();
  sim_cmd->add_option("--acceleration", sim_opts.acceleration)->capture_default_str();
  sim_cmd->add_option("--center-fraction", sim_opts.center_fraction);

  auto* rec_cmd = app.add_subcommand("reconstruct", "run coarse-to-fine sampling");
  add_common(rec_cmd, common);
  rec_cmd->add_option("--observation", rec_opts.observation, "undersampled k-space (CPLX)")
      ->capture_default_str();
  rec_cmd->add_option("--mask", rec_opts.mask, "MASK file")->capture_default_str();
  rec_cmd->add_option("--stride", rec_opts.stride)->capture_default_str();
  rec_cmd->add_option("--num-samples", rec_opts.num_samples)->capture_default_str();
  rec_cmd->add_option("--refine-steps", rec_opts.refine_steps)->capture_default_str();
  rec_cmd->add_option("--tc-repeats", rec_opts.tc_repeats)->capture_default_str();
  rec_cmd->add_option("--steps", rec_opts.steps, "diffusion steps T")->capture_default_str();
  rec_cmd->add_option("--beta-min", rec_opts.beta_min, "default 1e-4 * 1000 / T");
  rec_cmd->add_option("--beta-max", rec_opts.beta_max, "default 0.02 * 1000 / T");
  rec_cmd->add_option("--denoiser", rec_opts.denoiser)
      ->capture_default_str()
      ->check(CLI::IsMember({"oracle", "unet"}));
  rec_cmd->add_option("--prior-mean", rec_opts.prior_mean, "oracle prior mean (CPLX)");
  rec_cmd->add_option("--prior-constant", rec_opts.prior_constant)->capture_default_str();
  rec_cmd->add_option("--prior-std", rec_opts.prior_std)->capture_default_str();
  rec_cmd->add_option("--weights", rec_opts.weights, "U-Net weight file");
  rec_cmd->add_option("--modulation", rec_opts.modulation)->capture_default_str();
  rec_cmd->add_option("--backbone-scale", rec_opts.backbone_scale)->capture_default_str();
  rec_cmd->add_option("--skip-scale", rec_opts.skip_scale)->capture_default_str();
  rec_cmd->add_option("--skip-radius", rec_opts.skip_radius)->capture_default_str();
  rec_cmd->add_option("--modulated-blocks", rec_opts.modulated_blocks,
                      "decoder blocks to modulate, 0 = coarsest")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  auto* eval_cmd = app.add_subcommand("evaluate", "PSNR/SSIM of reconstructions as CSV");
  add_common(eval_cmd, common);
  eval_cmd->add_option("--reference", eval_opts.references, "reference CPLX, once per pair")
      ->required()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  eval_cmd->add_option("--reconstruction", eval_opts.reconstructions, "reconstruction CPLX")
      ->required()
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  eval_cmd->add_option("--slice", eval_opts.slices, "slice label per pair")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  eval_cmd->add_option("--acceleration", eval_opts.acceleration, "af column label");
  eval_cmd->add_option("--output", eval_opts.output)->capture_default_str();

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }

  try {
    if (mask_cmd->parsed()) return cmd_mask(common, mask_opts, out);
    if (sim_cmd->parsed()) return cmd_simulate(common, sim_opts, out);
    if (rec_cmd->parsed()) return cmd_reconstruct(common, rec_opts, out);
    return cmd_evaluate(common, eval_opts, out);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    // Format problems, unreadable or unwritable files.
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace tcdiff::cli
