#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "degen/algebra.hpp"

namespace degen::cli {

/// Effective configuration after layering defaults < --config file < flags.
struct CliConfig {
    std::string subcommand;           // periods | kernel | constants | sweep | verify
    std::string family = "node";      // node | cusp1 | cusp2 | custom
    int genus = 2;
    std::vector<Complex> proots;      // roots of P (custom: all branch points)
    std::optional<Complex> a, b;      // genus-2 shorthand for P = (x - a)(x - b)
    std::string lambda = "1e-4";      // single literal or START:END:PER_DECADE
    std::vector<Complex> z{Complex{0.3, 0.0}};
    int order = 256;
    std::string out;                  // empty: standard output
    std::string format = "json";      // csv | json
    std::string suite = "full";       // verify selector
    int threads = 0;
};

/// Complex literal: "re", "re+imi", "re-imi", "imi" with optional exponents.
Complex parse_complex(const std::string& text);
std::string format_complex(Complex v);

/// Lambda values described by a single literal or a START:END:PER_DECADE range.
std::vector<Complex> parse_lambda(const std::string& text);

std::string config_to_json(const CliConfig& cfg);
/// Applies the fields present in `json_text` on top of `cfg`.
void apply_config_json(CliConfig& cfg, const std::string& json_text);

/// Exit status: 0 success, 1 failed verdicts or numerical failure, 2 argument errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace degen::cli
