#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "smotepipe/model.hpp"

namespace smotepipe {

inline constexpr int kModelFormatVersion = 1;

/// Versioned `key = value` text. Matrices are written row-major as
/// comma-separated decimals with 17 significant digits, so a reloaded model
/// predicts exactly as the original. Trees are a preorder node list.
std::string serialize_estimator(const Estimator& model);
Estimator parse_estimator(std::string_view content, const std::string& source = "<memory>");

/// Voting models are written as a manifest next to one file per member,
/// named `<stem>.member<j>.<name>.txt`; the manifest refers to them by
/// relative file name.
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace smotepipe
