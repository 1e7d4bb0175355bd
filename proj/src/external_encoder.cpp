// SPDX-License-Identifier: Apache-2.0
#include "drastic/encoder_backend.hpp"

#include "drastic/table_io.hpp"

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <regex>
#include <sstream>

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace drastic {

namespace {

constexpr std::string_view kModule = "encoder_backend";
constexpr std::array<std::string_view, 3> kRequiredPlaceholders{"{cfg}", "{input}", "{frames}"};

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
    std::size_t n = 0;
    for (auto pos = haystack.find(needle); pos != std::string_view::npos;
         pos = haystack.find(needle, pos + needle.size()))
        ++n;
    return n;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
    for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
}

int status_to_exit_code(int status) {
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
    return 1;
}

} // namespace

void EncoderAdapterSpec::validate() const {
    for (auto p : kRequiredPlaceholders) {
        const auto n = count_occurrences(command_template, p);
        if (n != 1)
            throw InvalidArgument(std::string(kModule),
                                  "command template must contain " + std::string(p) +
                                      " exactly once (found " + std::to_string(n) + ")");
    }
    try {
        std::regex re(summary_pattern);
        const auto groups = static_cast<int>(re.mark_count());
        if (bitrate_group < 1 || psnr_group < 1 || bitrate_group > groups || psnr_group > groups ||
            bitrate_group == psnr_group)
            throw InvalidArgument(std::string(kModule),
                                  "summary pattern must capture distinct psnr and bitrate groups");
    } catch (const std::regex_error& e) {
        throw InvalidArgument(std::string(kModule), std::string("bad summary pattern: ") + e.what());
    }
}

EncoderAdapterSpec EncoderAdapterSpec::from_environment(std::string fallback) {
    EncoderAdapterSpec spec;
    const char* env = std::getenv("DRASTIC_ENCODER_CMD");
    spec.command_template = (env && *env) ? std::string(env) : std::move(fallback);
    return spec;
}

std::vector<std::string> split_command(std::string_view command) {
    std::vector<std::string> argv;
    std::string word;
    bool in_word = false;
    char quote = 0;
    for (char c : command) {
        if (quote) {
            if (c == quote) {
                quote = 0;
            } else {
                word.push_back(c);
            }
            continue;
        }
        if (c == '\'' || c == '"') {
            quote = c;
            in_word = true;
        } else if (c == ' ' || c == '\t' || c == '\n') {
            if (in_word) argv.push_back(std::move(word));
            word.clear();
            in_word = false;
        } else {
            word.push_back(c);
            in_word = true;
        }
    }
    if (quote) throw InvalidArgument(std::string(kModule), "unbalanced quote in command");
    if (in_word) argv.push_back(std::move(word));
    return argv;
}

ProcessResult run_process(const std::vector<std::string>& argv) {
    if (argv.empty()) throw AdapterFailure("empty command", "");

    int fds[2];
    if (pipe2(fds, O_CLOEXEC) != 0) throw AdapterFailure(std::string("pipe: ") + std::strerror(errno), "");

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&actions, fds[1], STDERR_FILENO);
    posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);

    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
    cargv.push_back(nullptr);

    const auto start = std::chrono::steady_clock::now();
    pid_t pid{};
    const int rc = posix_spawnp(&pid, cargv[0], &actions, nullptr, cargv.data(), environ);
    posix_spawn_file_actions_destroy(&actions);
    close(fds[1]);
    if (rc != 0) {
        close(fds[0]);
        throw AdapterFailure("cannot start '" + argv.front() + "': " + std::strerror(rc), "");
    }

    ProcessResult result;
    char buf[4096];
    for (;;) {
        const auto n = read(fds[0], buf, sizeof buf);
        if (n > 0) {
            result.output.append(buf, static_cast<std::size_t>(n));
        } else if (n == 0 || errno != EINTR) {
            break;
        }
    }
    close(fds[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {}
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.exit_code = status_to_exit_code(status);
    return result;
}

// Holds one of the pool's child-process slots for its lifetime.
class ExternalEncoderBackend::Slot {
public:
    explicit Slot(const ExternalEncoderBackend& b) : b_(b) {
        std::unique_lock lock(b_.mutex_);
        b_.cv_.wait(lock, [&] { return b_.running_ < b_.pool_size_; });
        ++b_.running_;
    }
    ~Slot() {
        {
            std::lock_guard lock(b_.mutex_);
            --b_.running_;
        }
        b_.cv_.notify_one();
    }
    Slot(const Slot&) = delete;
    Slot& operator=(const Slot&) = delete;

private:
    const ExternalEncoderBackend& b_;
};

ExternalEncoderBackend::ExternalEncoderBackend(EncoderAdapterSpec spec,
                                               std::filesystem::path input_path,
                                               std::filesystem::path work_dir,
                                               std::size_t pool_size, GopTemplates templates)
    : spec_(std::move(spec)), input_path_(std::move(input_path)), work_dir_(std::move(work_dir)),
      templates_(std::move(templates)), pool_size_(pool_size == 0 ? 1 : pool_size) {
    spec_.validate();
}

Measurement ExternalEncoderBackend::measure(const GopConfiguration& config,
                                            const VideoSegment& segment) const {
    validate(segment);
    if (!std::filesystem::exists(input_path_))
        throw AdapterFailure("input file not found: " + input_path_.string(), "");

    std::filesystem::create_directories(work_dir_);
    const auto cfg_path = work_dir_ / (config.id + "_" + segment.video_id + ".cfg");
    table_io::write_file(cfg_path, emit_cfg_text(config, templates_));

    auto argv = split_command(spec_.command_template);
    for (auto& arg : argv) {
        replace_all(arg, "{cfg}", cfg_path.string());
        replace_all(arg, "{input}", input_path_.string());
        replace_all(arg, "{frames}", std::to_string(segment.frame_count()));
        replace_all(arg, "{skip}", std::to_string(segment.start_frame - 1));
    }

    ProcessResult result;
    {
        Slot slot(*this);
        result = run_process(argv);
    }
    if (result.exit_code != 0)
        throw AdapterFailure("encoder exited with status " + std::to_string(result.exit_code),
                             result.output, result.exit_code);

    const std::regex re(spec_.summary_pattern);
    std::istringstream lines(result.output);
    std::string line;
    while (std::getline(lines, line)) {
        std::smatch m;
        if (!std::regex_search(line, m, re)) continue;
        Measurement out{config.id, segment.video_id, 0, result.wall_seconds, 0};
        try {
            out.psnr_db = std::stod(m[static_cast<std::size_t>(spec_.psnr_group)].str());
            out.bitrate_kbps = std::stod(m[static_cast<std::size_t>(spec_.bitrate_group)].str());
        } catch (const std::exception&) {
            throw AdapterFailure("summary line has non-numeric fields: " + line, result.output,
                                 result.exit_code);
        }
        try {
            validate(out);
        } catch (const InvalidArgument& e) {
            throw AdapterFailure(e.what(), result.output, result.exit_code);
        }
        return out;
    }
    throw AdapterFailure("no summary line matched the pattern", result.output, result.exit_code);
}

} // namespace drastic
