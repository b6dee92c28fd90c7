#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ridgekit/errors.hpp"
#include "ridgekit/io.hpp"

namespace ridgekit::cli {

inline std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Everything needed to rerun a command: argv, resolved parameters, seed and input hashes.
class Manifest {
public:
    Manifest(std::string command, std::vector<std::string> argv) {
        doc_["tool"] = "ridgekit";
        doc_["version"] = library_version();
        doc_["command"] = std::move(command);
        doc_["argv"] = std::move(argv);
        doc_["started_utc"] = utc_now();
        doc_["parameters"] = nlohmann::json::object();
        doc_["inputs"] = nlohmann::json::array();
        doc_["outputs"] = nlohmann::json::array();
    }

    nlohmann::json& params() { return doc_["parameters"]; }
    void seed(std::uint64_t s) { doc_["seed"] = s; }

    void input(const std::string& path) {
        doc_["inputs"].push_back({{"path", path}, {"fnv1a64", fnv1a_file(path)}});
    }
    void output(const std::string& path) {
        doc_["outputs"].push_back({{"path", path}, {"fnv1a64", fnv1a_file(path)}});
    }
    void outputs(const std::vector<std::string>& paths) {
        for (const auto& p : paths) output(p);
    }

    std::string write(const std::string& path) {
        doc_["finished_utc"] = utc_now();
        std::ofstream out(path);
        if (!out) throw IoError("cannot write " + path);
        out << doc_.dump(2) << '\n';
        return path;
    }

private:
    nlohmann::json doc_;
};

}  // namespace ridgekit::cli
