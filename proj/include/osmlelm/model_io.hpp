#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "osmlelm/dataset.hpp"
#include "osmlelm/model.hpp"

namespace osmlelm {

/// A trained model plus the feature normalizer it was trained behind.
struct ModelFile {
    OselmModel model;
    std::optional<Normalizer> normalizer;

    friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

/// Line-oriented text format, tagged sections, reals at 17 significant
/// digits. Reading back what was written reproduces every value bit for bit.
void write_model(std::ostream& out, const ModelFile& file);
ModelFile read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const ModelFile& file);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace osmlelm
