#pragma once

// Planted-signal benchmark generator.
//
//   planted:m=200,n=500,k=2,informative=10,shift=2.0,seed=1
//
// Labels are balanced (sample i has class i mod k). Informative features are
// N(shift * class, 1); the rest are N(0, 1). Informative columns are placed at
// seeded random positions and named informative_<i>; noise columns are named
// noise_<i>.

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "bomgene/dataset.hpp"
#include "bomgene/error.hpp"
#include "bomgene/random.hpp"

namespace bomgene::cli {

struct PlantedSpec {
    std::size_t m = 200;
    std::size_t n = 500;
    std::size_t k = 2;
    std::size_t informative = 10;
    double shift = 2.0;
    std::uint64_t seed = 1;

    /// Canonical text form; parse_planted_spec(to_string()) round-trips.
    std::string to_string() const {
        std::ostringstream os;
        os << "planted:m=" << m << ",n=" << n << ",k=" << k << ",informative=" << informative
           << ",shift=" << format_double(shift) << ",seed=" << seed;
        return os.str();
    }

    static std::string format_double(double v) {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, ptr);
    }
};

inline PlantedSpec parse_planted_spec(const std::string& text) {
    const std::string prefix = "planted:";
    if (text.rfind(prefix, 0) != 0) {
        throw Error(ErrorKind::Usage, "synthetic spec must start with 'planted:' (got '" + text + "')");
    }
    PlantedSpec spec;
    std::stringstream body(text.substr(prefix.size()));
    std::string item;
    while (std::getline(body, item, ',')) {
        if (item.empty()) {
            continue;
        }
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::Usage, "synthetic spec: expected key=value, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        auto as_uint = [&](auto& out) {
            std::uint64_t v = 0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc() || ptr != value.data() + value.size()) {
                throw Error(ErrorKind::Usage, "synthetic spec: '" + key + "' needs a non-negative integer");
            }
            out = static_cast<std::remove_reference_t<decltype(out)>>(v);
        };
        if (key == "m") {
            as_uint(spec.m);
        } else if (key == "n") {
            as_uint(spec.n);
        } else if (key == "k") {
            as_uint(spec.k);
        } else if (key == "informative") {
            as_uint(spec.informative);
        } else if (key == "seed") {
            as_uint(spec.seed);
        } else if (key == "shift") {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
            if (ec != std::errc() || ptr != value.data() + value.size()) {
                throw Error(ErrorKind::Usage, "synthetic spec: 'shift' needs a number");
            }
            spec.shift = v;
        } else {
            throw Error(ErrorKind::Usage, "synthetic spec: unknown key '" + key + "'");
        }
    }
    if (spec.k < 2 || spec.m < spec.k || spec.n < 1 || spec.informative > spec.n) {
        throw Error(ErrorKind::Usage, "synthetic spec: need k >= 2, m >= k, n >= 1, informative <= n");
    }
    return spec;
}

struct PlantedData {
    PlantedSpec spec;
    /// Row-major m x n.
    std::vector<std::vector<double>> rows;
    std::vector<std::string> feature_names;
    std::vector<std::string> labels;
    /// Column positions of the informative features, ascending.
    std::vector<std::size_t> informative_columns;
};

inline PlantedData generate_planted(const PlantedSpec& spec) {
    PlantedData out;
    out.spec = spec;
    const RandomSource root{spec.seed, 0};

    // Column position -> generator slot (slots < informative are informative).
    std::vector<std::size_t> slot_at(spec.n);
    for (std::size_t j = 0; j < spec.n; ++j) {
        slot_at[j] = j;
    }
    Rng placement(root.child(0));
    shuffle(std::span<std::size_t>(slot_at), placement);

    out.feature_names.resize(spec.n);
    for (std::size_t j = 0; j < spec.n; ++j) {
        const std::size_t slot = slot_at[j];
        if (slot < spec.informative) {
            out.feature_names[j] = "informative_" + std::to_string(slot);
            out.informative_columns.push_back(j);
        } else {
            out.feature_names[j] = "noise_" + std::to_string(slot - spec.informative);
        }
    }

    out.labels.resize(spec.m);
    std::vector<std::size_t> code(spec.m);
    for (std::size_t i = 0; i < spec.m; ++i) {
        code[i] = i % spec.k;
        out.labels[i] = "class" + std::to_string(code[i]);
    }

    out.rows.assign(spec.m, std::vector<double>(spec.n));
    for (std::size_t j = 0; j < spec.n; ++j) {
        const std::size_t slot = slot_at[j];
        Rng rng(root.child(1).child(slot));
        const bool informative = slot < spec.informative;
        for (std::size_t i = 0; i < spec.m; ++i) {
            const double mean = informative ? spec.shift * static_cast<double>(code[i]) : 0.0;
            out.rows[i][j] = mean + rng.normal();
        }
    }
    return out;
}

inline std::pair<Dataset, Labels> to_dataset(const PlantedData& data) {
    return validate_dataset(data.rows, data.feature_names, data.labels);
}

/// CSV with a leading '# <spec>' comment, a header row, and a trailing label column.
/// Values use the shortest round-trip decimal form.
inline void write_planted_csv(const PlantedData& data, std::ostream& out) {
    out << "# " << data.spec.to_string() << '\n';
    for (const auto& name : data.feature_names) {
        out << name << ',';
    }
    out << "label\n";
    char buf[64];
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        for (double v : data.rows[i]) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
            out.write(buf, ptr - buf);
            out << ',';
        }
        out << data.labels[i] << '\n';
    }
}

} // namespace bomgene::cli
