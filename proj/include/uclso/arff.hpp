#pragma once

#include "uclso/dataset.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace uclso {

/// Reads the label attribute names listed in a Mulan XML file (`<label name="...">` elements, nesting allowed).
[[nodiscard]] std::vector<std::string> read_mulan_labels(const std::filesystem::path &xml_path);
[[nodiscard]] std::vector<std::string> parse_mulan_labels(std::istream &in, const std::string &source = "<xml>");

/// Loads a Mulan dataset: the ARFF data file plus the XML file naming its label attributes.
///
/// Dense and sparse rows are accepted. Numeric attributes become one feature column each;
/// nominal attributes are one-hot encoded into one column per declared value, named
/// `attribute=value`. Label attributes must hold only 0/1. Missing values (`?`) are rejected.
/// Errors carry the file name and line number.
[[nodiscard]] MultiLabelDataset load_mulan(const std::filesystem::path &arff_path, const std::filesystem::path &xml_path);

[[nodiscard]] MultiLabelDataset parse_arff(std::istream &in, const std::vector<std::string> &label_names,
                                           const std::string &source = "<arff>");

/// Writes features as numeric attributes (shortest round-trip decimal form) followed by
/// the labels as {0,1} attributes. Reloading with the matching XML reproduces the matrices bit for bit.
void write_arff(std::ostream &out, const MultiLabelDataset &ds, const std::string &relation = "dataset");
void write_mulan_xml(std::ostream &out, const MultiLabelDataset &ds);

}  // namespace uclso
