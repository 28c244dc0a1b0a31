// dualmark: command-line front end for the dual watermarking pipeline.

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dualmark/attacks.hpp"
#include "dualmark/chaos_cipher.hpp"
#include "dualmark/errors.hpp"
#include "dualmark/imageio.hpp"
#include "dualmark/metrics.hpp"
#include "dualmark/side_info_io.hpp"
#include "dualmark/watermark.hpp"

namespace {

using namespace dualmark;

std::string fmt6(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double ncc_or_nan(const imageio::GrayImage& a, const imageio::GrayImage& b) {
    try {
        return metrics::ncc(a, b);
    } catch (const UndefinedCorrelationError&) {
        return std::nan("");
    }
}

const std::vector<std::string> kDefaultSuite{
    "median:3", "average:3", "gauss:10:42", "resize:512x512", "rotate:80", "none",
};

struct WaveletFlags {
    std::string primary_kind = "haar";
    int primary_levels = 1;
    std::string host_kind = "daubechies4";
    int host_levels = 2;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--primary-wavelet", primary_kind, "Wavelet for the secondary-into-primary stage")
            ->capture_default_str();
        cmd->add_option("--primary-levels", primary_levels, "Decomposition levels for the primary stage")
            ->capture_default_str();
        cmd->add_option("--host-wavelet", host_kind, "Wavelet for the payload-into-host stage")
            ->capture_default_str();
        cmd->add_option("--host-levels", host_levels, "Decomposition levels for the host stage")
            ->capture_default_str();
    }
};

watermark::EmbedParams make_params(double alpha, double beta, const WaveletFlags& w) {
    watermark::EmbedParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.primary_wavelet = {wavelet::parse_wavelet_kind(w.primary_kind), w.primary_levels};
    p.host_wavelet = {wavelet::parse_wavelet_kind(w.host_kind), w.host_levels};
    watermark::validate(p);
    return p;
}

int run_keygen(const std::string& out, std::optional<double> b, std::optional<double> x0, unsigned warmup) {
    std::random_device entropy;
    std::mt19937_64 gen((static_cast<std::uint64_t>(entropy()) << 32) ^ entropy());
    chaos::ChaosKey key{
        b ? *b : std::uniform_real_distribution<double>(3.6, 3.999)(gen),
        x0 ? *x0 : std::uniform_real_distribution<double>(0.01, 0.99)(gen),
        warmup,
    };
    chaos::validate(key);
    // Reject keys whose orbit collapses before they are written.
    (void)chaos::keystream_bytes(key, 1024);
    chaos::write_key(key, out);
    return 0;
}

struct EmbedArgs {
    std::string host, primary, secondary, key, out, sideinfo;
    double alpha = 0.1;
    double beta = 0.05;
    WaveletFlags wavelets;
};

int run_embed(const EmbedArgs& a) {
    const auto host = imageio::read_pgm(a.host);
    const auto primary = imageio::read_pgm(a.primary);
    const auto secondary = imageio::read_pgm(a.secondary);
    const auto key = chaos::read_key(a.key);
    const auto sealed = watermark::seal(host, primary, secondary, key, make_params(a.alpha, a.beta, a.wavelets));
    imageio::write_pgm(sealed.watermarked_host, a.out);
    watermark::write_side_info(sealed.side_info, a.sideinfo);
    std::cout << "psnr_db=" << fmt6(metrics::psnr(host, sealed.watermarked_host)) << "\n";
    return 0;
}

struct ExtractArgs {
    std::string watermarked, host, primary, key, sideinfo, out_primary, out_secondary;
};

int run_extract(const ExtractArgs& a) {
    const auto info = watermark::read_side_info(a.sideinfo);
    const auto marked = imageio::read_pgm(a.watermarked);
    const auto host = imageio::read_pgm(a.host);
    const auto primary = imageio::read_pgm(a.primary);
    const auto key = chaos::read_key(a.key);

    const auto rec = watermark::unseal(marked, host, primary, key, info);
    imageio::write_pgm(rec.primary, a.out_primary);
    imageio::write_pgm(rec.secondary, a.out_secondary);

    const auto primary_ref = watermark::embedded_primary(primary, info);
    const auto& ps = info.primary_stage;
    const auto secondary_ref = imageio::from_matrix(
        linalg::reconstruct(linalg::SvdFactors{ps.secondary_u, ps.secondary_s, ps.secondary_v}));
    std::cout << "ncc_primary=" << fmt6(ncc_or_nan(rec.primary, primary_ref)) << "\n";
    std::cout << "ncc_secondary=" << fmt6(ncc_or_nan(rec.secondary, secondary_ref)) << "\n";
    return 0;
}

int run_attack(const std::string& in, const std::string& spec, const std::string& out) {
    const auto parsed = attacks::parse_attack(spec);
    imageio::write_pgm(attacks::apply(imageio::read_pgm(in), parsed), out);
    return 0;
}

struct EvaluateArgs {
    std::string host, primary, secondary, key, suite = "default", report;
    double alpha = 0.1;
    double beta = 0.05;
    WaveletFlags wavelets;
};

int run_evaluate(const EvaluateArgs& a) {
    if (a.suite != "default") throw CLI::ValidationError("--suite", "unknown suite '" + a.suite + "'");
    const auto host = imageio::read_pgm(a.host);
    const auto primary = imageio::read_pgm(a.primary);
    const auto secondary = imageio::read_pgm(a.secondary);
    const auto key = chaos::read_key(a.key);
    const auto sealed = watermark::seal(host, primary, secondary, key, make_params(a.alpha, a.beta, a.wavelets));

    std::string csv = "attack,ncc_primary,ncc_secondary,psnr_db\n";
    for (const auto& name : kDefaultSuite) {
        const auto attacked = attacks::apply(sealed.watermarked_host, attacks::parse_attack(name));
        const auto rec = watermark::unseal(attacked, host, primary, key, sealed.side_info);
        csv += name + "," + fmt6(ncc_or_nan(rec.primary, sealed.watermarked_primary)) + "," +
               fmt6(ncc_or_nan(rec.secondary, secondary)) + "," + fmt6(metrics::psnr(host, attacked)) + "\n";
    }
    std::ofstream out(a.report, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + a.report + "' for writing");
    out << csv;
    if (!out) throw std::runtime_error("failed writing '" + a.report + "'");
    std::cout << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dual image watermarking: DWT-SVD embedding with a chaotic stream cipher"};
    app.require_subcommand(1);

    std::string key_out;
    std::optional<double> key_b;
    std::optional<double> key_x0;
    unsigned key_warmup = chaos::kDefaultWarmup;
    auto* keygen = app.add_subcommand("keygen", "Write a chaos key file");
    keygen->add_option("--out", key_out, "Key file to write")->required();
    keygen->add_option("--b", key_b, "First-map control parameter in [3.57, 4.0]");
    keygen->add_option("--x0", key_x0, "Initial state in (0, 1)");
    keygen->add_option("--warmup", key_warmup, "Iterations before the hash value")->capture_default_str();

    EmbedArgs embed;
    auto* embed_cmd = app.add_subcommand("embed", "Embed secondary -> primary -> host");
    embed_cmd->add_option("--host", embed.host, "Host image (P5 PGM)")->required()->check(CLI::ExistingFile);
    embed_cmd->add_option("--primary", embed.primary, "Primary watermark")->required()->check(CLI::ExistingFile);
    embed_cmd->add_option("--secondary", embed.secondary, "Secondary watermark")->required()->check(CLI::ExistingFile);
    embed_cmd->add_option("--key", embed.key, "Chaos key file")->required()->check(CLI::ExistingFile);
    embed_cmd->add_option("--alpha", embed.alpha, "Secondary strength")->capture_default_str();
    embed_cmd->add_option("--beta", embed.beta, "Host strength")->capture_default_str();
    embed_cmd->add_option("--out", embed.out, "Watermarked host to write")->required();
    embed_cmd->add_option("--sideinfo", embed.sideinfo, "Side information file to write")->required();
    embed.wavelets.add_to(embed_cmd);

    ExtractArgs extract;
    auto* extract_cmd = app.add_subcommand("extract", "Recover both watermarks (non-blind)");
    extract_cmd->add_option("--watermarked", extract.watermarked, "Received image")->required()->check(CLI::ExistingFile);
    extract_cmd->add_option("--host", extract.host, "Original host")->required()->check(CLI::ExistingFile);
    extract_cmd->add_option("--primary", extract.primary, "Original primary")->required()->check(CLI::ExistingFile);
    extract_cmd->add_option("--key", extract.key, "Chaos key file")->required()->check(CLI::ExistingFile);
    extract_cmd->add_option("--sideinfo", extract.sideinfo, "Side information file")->required()->check(CLI::ExistingFile);
    extract_cmd->add_option("--out-primary", extract.out_primary, "Recovered primary to write")->required();
    extract_cmd->add_option("--out-secondary", extract.out_secondary, "Recovered secondary to write")->required();

    std::string attack_in, attack_spec, attack_out;
    auto* attack_cmd = app.add_subcommand("attack", "Apply one degradation");
    attack_cmd->add_option("--in", attack_in, "Input image")->required()->check(CLI::ExistingFile);
    attack_cmd->add_option("--spec", attack_spec,
                           "none | median:K | average:K | gauss:SIGMA:SEED | resize:WxH | rotate:DEG | crop:X,Y,W,H")
        ->required();
    attack_cmd->add_option("--out", attack_out, "Output image")->required();

    EvaluateArgs evaluate;
    auto* eval_cmd = app.add_subcommand("evaluate", "Seal, attack, extract and report correlations");
    eval_cmd->add_option("--host", evaluate.host, "Host image")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--primary", evaluate.primary, "Primary watermark")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--secondary", evaluate.secondary, "Secondary watermark")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--key", evaluate.key, "Chaos key file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--alpha", evaluate.alpha, "Secondary strength")->capture_default_str();
    eval_cmd->add_option("--beta", evaluate.beta, "Host strength")->capture_default_str();
    eval_cmd->add_option("--suite", evaluate.suite, "Attack suite")->capture_default_str();
    eval_cmd->add_option("--report", evaluate.report, "CSV report to write")->required();
    evaluate.wavelets.add_to(eval_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*keygen) return run_keygen(key_out, key_b, key_x0, key_warmup);
        if (*embed_cmd) return run_embed(embed);
        if (*extract_cmd) return run_extract(extract);
        if (*attack_cmd) return run_attack(attack_in, attack_spec, attack_out);
        if (*eval_cmd) return run_evaluate(evaluate);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
