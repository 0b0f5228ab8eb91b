#pragma once

#include "horse/error.hpp"
#include "horse/multichannel.hpp"
#include "horse/potential.hpp"

#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace horse::cli {

// Output file could not be created or written.
class IoError : public Error {
public:
    using Error::Error;
};

enum class Mode { single, coulomb, multichannel, pmatrix_scan, plateau_scan, oracle_compare };

std::string to_string(Mode m);

// Named potential: zero, square-well, woods-saxon or tabulated.
struct PotentialSpec {
    std::string kind = "woods-saxon";
    double depth = -53.0;               // MeV
    std::optional<double> radius;       // fm; Woods-Saxon default 1.25 A^{1/3}
    double diffuseness = 0.65;          // fm
    double spin_orbit = 15.0;           // MeV fm^2
    double mass_number = 15.0;          // target A for the Woods-Saxon radius
    std::optional<double> j;            // total angular momentum for the spin-orbit term
    std::string file;                   // tabulated (r, V) table

    RadialPotential build(int l) const;
};

struct EnergyGrid {
    double min = 0.5;  // MeV
    double max = 30.0;
    int count = 60;
    bool log = false;

    std::vector<double> points() const;
};

struct ChannelSpec {
    Channel channel;
    std::optional<double> b;  // channel radius for Coulomb channels, fm
};

struct CouplingSpec {
    int row = 0;  // zero-based channel indices, row <= col
    int col = 0;
    PotentialSpec potential;
};

struct RunConfig {
    Mode mode = Mode::single;
    std::string output;  // file name inside the output directory

    // Single-channel basis and interaction.
    double hbar_omega = 18.0;     // MeV
    double mu = 0.0;              // MeV/c^2, from [basis] mu or mass_numbers (default 1 15)
    int l = 0;
    int N = 10;
    bool smoothing = false;
    PotentialSpec potential;

    // Charged channel.
    double z1z2 = 0.0;
    std::optional<double> b;  // cut radius (coulomb) or matching radius (pmatrix-scan); natural radius by default

    EnergyGrid energy;
    std::vector<int> coefficients;  // n for which a_n^2 columns are written

    // plateau-scan
    double plateau_energy = 10.0;
    double b_min = 3.0, b_max = 12.0;
    int b_count = 91;
    double plateau_tolerance = 0.02;

    // multichannel
    std::vector<ChannelSpec> channels;
    std::vector<CouplingSpec> couplings;

    // Every input in a fixed order, defaults included, for the provenance header.
    std::vector<std::pair<std::string, std::string>> describe() const;
};

// Parses the [section] key = value format; throws ConfigError naming the field on any
// unknown key, malformed value or violated physical constraint.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

// Checks constraints and fills derived defaults (mu, output name); throws ConfigError.
void validate(RunConfig& c);

} // namespace horse::cli
