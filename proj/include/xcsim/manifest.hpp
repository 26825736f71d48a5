#pragma once

#include <map>
#include <string>
#include <vector>

namespace xcsim {

// Reproducibility record written next to every command's primary output:
// identical input digests plus identical flags must imply identical output
// bytes.
struct RunManifest {
    std::string command;
    std::string version;
    std::map<std::string, std::string> input_paths;    // role -> path
    std::map<std::string, std::string> input_digests;  // role -> fnv1a64 hex
    std::map<std::string, std::string> flags;          // resolved flag values
    std::vector<std::string> output_paths;

    // Records the path and its content digest under `role`.
    void add_input(const std::string& role, const std::string& path);

    std::string to_json() const;
};

// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
std::string fnv1a64_file(const std::string& path);

// Writes content to `path` via a temp file in the same directory plus an
// atomic rename.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace xcsim
