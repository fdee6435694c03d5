#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace conformal {

// Everything a run needs, filled from flags and/or a JSON config file
// (flags win). Empty strings and zero sizes mean "use the default".
struct RunConfig {
    std::string command;         // classify | regress | online | batch | icp | bayes-compare
    std::string data_path;
    std::string test_path;
    std::string out_path;
    std::string config_path;

    std::string measure;          // knn | ridge; empty = per-command default
    int k = 1;
    double ridge_a = 1.0;
    std::string kernel;           // "" = default (linear for knn, none for ridge)
    std::vector<double> eps;
    bool smoothed = false;
    std::string teacher = "immediate";
    std::uint64_t seed = 0;
    long long split_m = 0;        // 0 = ceil(2l/3)
    std::string label_column;     // "" = last column
    std::vector<std::string> classes;

    // bayes-compare experiment
    std::vector<double> a_assumed = {1.0, 1000.0, 10000.0};
    std::size_t trials = 10;
    std::size_t train_size = 100;
    std::size_t test_size = 100;
    std::size_t dim = 5;
    double a_true = 1.0;
    std::vector<double> levels;
};

// Executes one command; output files are only written once the whole run has
// succeeded. Throws UsageError/DataError/NumericError.
int run(const RunConfig& config);

// Parse argv (plus optional config file), dispatch, and map errors onto exit
// codes: 0 ok, 1 usage, 2 data, 3 numerical.
int run_cli(int argc, const char* const* argv);

}  // namespace conformal
