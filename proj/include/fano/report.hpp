#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fano/gamma.hpp"
#include "fano/moduli.hpp"
#include "fano/qperiod.hpp"
#include "fano/spectrum.hpp"
#include "fano/toric.hpp"

namespace fano {

using ojson = nlohmann::ordered_json;

inline constexpr const char* kSchema = "fano-spectra/v1";

struct RunConfig {
    std::string command;
    std::string family = "xn";  // xn | xnp, ignored when fan_path is set
    int n = 2;
    std::string fan_path;
    double q1 = 1.0, q2 = 1.0;
    int terms = 400;            // period coefficients
    unsigned digits = 60;       // working digits of the J-series
    std::uint64_t seed = 1;
    std::string out_path;
    std::string csv_path;
    double tol = 1e-6;          // equality band; the strictness band is min(1e-9, tol / 1000)
    // scan / tropical
    double q2_lo = 1e-3, q2_hi = 1e3;
    int grid = 40;
    double lambda = 1.0;
    double T_lo = 1e-5, T_hi = 1e-2;
    std::vector<double> t_schedule;  // empty: default_t_schedule()
};

struct CommandResult {
    ojson report;
    std::string csv;      // written to csv_path when non-empty
    std::string message;  // for stderr
    int exit_code = 0;    // 0 ok, 2 indeterminate, 1 error
};

Tolerances tolerances_from(const RunConfig& cfg);
ToricFanoModel model_from_config(const RunConfig& cfg);
QPoint q_from_config(const RunConfig& cfg, const ToricFanoModel& model);

struct ModelAnalysis {
    ToricFanoModel model;
    QPoint q;
    CriticalSearch search;
    CriticalPoint conifold;
    SpectrumReport spectrum;
    std::optional<GrowthFit> period_fit;  // only at q = (1, ..., 1)
    double batyrev_distance = -1.0;       // X_n only
};

ModelAnalysis analyze_model(const ToricFanoModel& model, const QPoint& q, const Tolerances& tol,
                            std::uint64_t seed, int terms);

ojson to_json(cplx z);
ojson to_json(const Flag& f);
ojson to_json(const SpectrumReport& r);
ojson to_json(const RunConfig& cfg);
ojson to_json(const PrincipalLimit& lim);

CommandResult cmd_analyze(const RunConfig& cfg);
CommandResult cmd_scan(const RunConfig& cfg);
CommandResult cmd_tropical(const RunConfig& cfg);
CommandResult cmd_period(const RunConfig& cfg);
CommandResult cmd_gamma_limit(const RunConfig& cfg);
CommandResult cmd_validate_fan(const RunConfig& cfg);
// Dispatches on cfg.command; errors become exit code 1 with a message.
CommandResult run_command(const RunConfig& cfg);

// Writes through a temporary file and a rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace fano
