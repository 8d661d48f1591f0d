#include "deblur/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "deblur/errors.hpp"
#include "deblur/kernel.hpp"
#include "deblur/noise.hpp"
#include "deblur/synthetic.hpp"

namespace deblur {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

bool parse_bool(const std::string& text, bool& out) {
    if (text == "true" || text == "1" || text == "yes") return out = true, true;
    if (text == "false" || text == "0" || text == "no") return out = false, true;
    return false;
}

struct SolverSection {
    SolverConfig base;
    std::vector<unsigned> n_values;
    std::size_t line = 0;
};

class Parser {
public:
    void global(const std::string& key, const std::string& value, std::size_t line) {
        bool ok = true;
        if (key == "image") spec_.image = value;
        else if (key == "kernel") spec_.kernel = value;
        else if (key == "noise_var") ok = parse_number(value, spec_.noise_variance);
        else if (key == "seed") ok = parse_number(value, spec_.seed);
        else if (key == "output_dir") spec_.output_dir = value;
        else if (key == "threads") ok = parse_number(value, spec_.threads);
        else if (key == "fixed_clock") ok = parse_bool(value, spec_.fixed_clock);
        else if (key == "dynamic_range") ok = parse_number(value, spec_.metrics.dynamic_range);
        else if (key == "psnr_mode") guarded(line, [&] { spec_.metrics.psnr_mode = parse_psnr_mode(value); });
        else if (key == "ssim_mode") guarded(line, [&] { spec_.metrics.ssim_mode = parse_ssim_mode(value); });
        else return error(line, "unknown key '" + key + "'");
        if (!ok) error(line, "bad value for '" + key + "': '" + value + "'");
    }

    void solver(SolverSection& s, const std::string& key, const std::string& value, std::size_t line) {
        bool ok = true;
        if (key == "method") guarded(line, [&] { s.base.method = parse_method(value); });
        else if (key == "reg") guarded(line, [&] { s.base.reg.kind = parse_regularizer_kind(value); });
        else if (key == "lambda") ok = parse_number(value, s.base.reg.lambda);
        else if (key == "iters") ok = parse_number(value, s.base.max_iters);
        else if (key == "time_limit") ok = parse_number(value, s.base.max_seconds);
        else if (key == "tol") ok = parse_number(value, s.base.tol_threshold);
        else if (key == "n") {
            s.n_values.clear();
            std::stringstream list(value);
            std::string item;
            while (std::getline(list, item, ',')) {
                unsigned n = 0;
                if (!parse_number(trim(item), n)) ok = false;
                else s.n_values.push_back(n);
            }
            if (s.n_values.empty()) ok = false;
        } else {
            return error(line, "unknown solver key '" + key + "'");
        }
        if (!ok) error(line, "bad value for '" + key + "': '" + value + "'");
    }

    ExperimentSpec finish(std::vector<SolverSection>& sections) {
        for (auto& s : sections) {
            if (s.n_values.empty()) s.n_values.push_back(s.base.weighting_n);
            for (unsigned n : s.n_values) {
                SolverConfig cfg = s.base;
                cfg.weighting_n = n;
                spec_.solvers.push_back(cfg);
            }
        }
        for (auto& e : spec_.validation_errors()) errors_.push_back(std::move(e));
        if (!errors_.empty()) {
            std::string msg = "experiment spec invalid:";
            for (const auto& e : errors_) msg += "\n  " + e;
            throw ParameterError(msg);
        }
        return spec_;
    }

    void error(std::size_t line, const std::string& what) { errors_.push_back("line " + std::to_string(line) + ": " + what); }

private:
    template <typename F>
    void guarded(std::size_t line, F&& f) {
        try {
            f();
        } catch (const ParameterError& e) {
            error(line, e.what());
        }
    }

    ExperimentSpec spec_;
    std::vector<std::string> errors_;
};

} // namespace

std::vector<std::string> ExperimentSpec::validation_errors() const {
    std::vector<std::string> errors;
    if (image.empty()) errors.emplace_back("image is required");
    if (kernel.empty()) {
        errors.emplace_back("kernel is required");
    } else {
        try {
            (void)parse_kernel_spec(kernel);
        } catch (const ParameterError& e) {
            errors.emplace_back(e.what());
        }
    }
    if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) errors.emplace_back("noise_var must be >= 0");
    if (threads == 0) errors.emplace_back("threads must be >= 1");
    try {
        metrics.validate();
    } catch (const ParameterError& e) {
        errors.emplace_back(e.what());
    }
    if (solvers.empty()) errors.emplace_back("at least one [solver] section is required");
    for (std::size_t i = 0; i < solvers.size(); ++i) {
        try {
            solvers[i].validate();
        } catch (const ParameterError& e) {
            errors.push_back("solver " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return errors;
}

void ExperimentSpec::validate() const {
    const auto errors = validation_errors();
    if (errors.empty()) return;
    std::string msg = "experiment spec invalid:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ParameterError(msg);
}

ExperimentSpec parse_experiment(std::istream& in) {
    Parser parser;
    std::vector<SolverSection> sections;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        if (text == "[solver]") {
            sections.push_back({SolverConfig{}, {}, line});
            continue;
        }
        if (text.front() == '[') {
            parser.error(line, "unknown section '" + text + "'");
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            parser.error(line, "expected key = value");
            continue;
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (sections.empty()) parser.global(key, value, line);
        else parser.solver(sections.back(), key, value, line);
    }
    return parser.finish(sections);
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open experiment spec '" + path.string() + "'");
    return parse_experiment(in);
}

Problem assemble_problem(const ExperimentSpec& spec) {
    ImageGrid truth = load_image_source(spec.image);
    auto op = build_operator(parse_kernel_spec(spec.kernel), truth.height(), truth.width());
    ImageGrid observation = add_gaussian_noise(op->forward(truth), spec.noise_variance, spec.seed);
    return make_problem(std::move(op), std::move(observation), std::move(truth));
}

} // namespace deblur
