#pragma once

#include <memory>
#include <optional>
#include <string>

#include "henon_rings/io.hpp"

namespace hr {

enum class JobKind { Solve, Floquet, Iterate, FindExotic, FindHerman, ReproduceAppendix };
std::string to_string(JobKind k);

struct JobRecord {
    std::string job_id;
    JobKind kind = JobKind::Solve;
    std::string status;  // running | done | failed
    json result;
    json error;
};

// Local HTTP/NDJSON front end with an in-memory job registry.
class Service {
public:
    Service();
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    // port 0 picks a free port; returns the bound port or -1
    int bind(const std::string& host, int port);
    // blocks until stop()
    bool run();
    void stop();
    void wait_until_ready() const;

    std::optional<JobRecord> job(const std::string& id) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace hr
