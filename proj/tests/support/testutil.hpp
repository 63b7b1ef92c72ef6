#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace datl::testing {

namespace fs = std::filesystem;

// Fresh directory under the system temp root; caller owns cleanup (tests
// leave it for post-mortems, the OS temp reaper handles the rest).
inline fs::path make_temp_dir(const std::string& tag) {
    static int counter = 0;
    fs::path dir = fs::temp_directory_path() /
                   ("datl-" + tag + "-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
    fs::create_directories(dir);
    return dir;
}

inline std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CommandResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

// Runs a shell command, capturing combined output.
inline CommandResult run_command(const std::string& command) {
    fs::path out_file = make_temp_dir("cmd") / "out.txt";
    std::string full = command + " > " + out_file.string() + " 2>&1";
    int status = std::system(full.c_str());
    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.output = read_file(out_file);
    return result;
}

// Relative path -> file bytes for every regular file under root.
inline std::map<std::string, std::string> snapshot_tree(const fs::path& root) {
    std::map<std::string, std::string> tree;
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file())
            tree[fs::relative(entry.path(), root).string()] = read_file(entry.path());
    return tree;
}

} // namespace datl::testing
