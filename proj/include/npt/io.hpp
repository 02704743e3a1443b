#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "npt/lattice.hpp"
#include "npt/nanopteron.hpp"
#include "npt/ripple.hpp"

namespace npt::io {

using json = nlohmann::json;

const char* version();

// %.17g
std::string fmt(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<double>& values);

private:
    std::ofstream out_;
    std::size_t cols_;
};

void write_json(const std::filesystem::path& path, const json& j);

json to_json(const SolveReport& r);
json to_json(const RippleSolution& r);
json to_json(const SimResult& r);
json to_json(const CompositeResidual& c);

// (X, theta1, theta2, eta1, eta2) on the grid
void write_profile_csv(const std::filesystem::path& path, const NanopteronSolver& solver,
                       const NanopteronState& s);
// (j, p, velocity) per site parity over [-half, half]
void write_lattice_csv(const std::filesystem::path& path, const LatticeWaveProfile& prof, int half);
void write_sim_csv(const std::filesystem::path& path, const SimResult& r);

}  // namespace npt::io
