#pragma once

#include <filesystem>
#include <string>

#include "esrtwin/config.hpp"
#include "esrtwin/sensitivity.hpp"
#include "esrtwin/sweep.hpp"

namespace esrtwin {

/// Columns axis1[,axis2],B0_mT,freq_GHz,I_V,Q_V. Excitation axes in %, frequency axes in GHz.
std::string sweep_csv(const Spectrum& s);

/// Dense I matrix of a 2D sweep: header row of frequencies (GHz), then one row
/// per excitation starting with the excitation value.
std::string matrix_csv(const Spectrum& s);

/// Header B0_T,<T1>,<T2>,... and cells in 2-significant-digit scientific notation
/// (or full precision when `full` is set).
std::string sensitivity_csv(const SensitivityTable& t, bool full = false);

/// Everything needed to reproduce an output: the resolved config, seed, software
/// version and run flags. Contains no timestamps or host details.
std::string manifest_json(const RunConfig& cfg, const std::string& command,
                          const std::vector<std::string>& flags = {});

void write_text(const std::filesystem::path& p, const std::string& content);

}  // namespace esrtwin
