#include "henon_rings/service.hpp"

#include <future>
#include <map>
#include <mutex>
#include <random>
#include <sstream>

#include "httplib.h"

#include "henon_rings/pipeline.hpp"

namespace hr {

std::string to_string(JobKind k) {
    switch (k) {
        case JobKind::Solve: return "Solve";
        case JobKind::Floquet: return "Floquet";
        case JobKind::Iterate: return "Iterate";
        case JobKind::FindExotic: return "FindExotic";
        case JobKind::FindHerman: return "FindHerman";
        case JobKind::ReproduceAppendix: return "ReproduceAppendix";
    }
    return "";
}

namespace {

struct HttpError {
    int status;
    json body;
};

// maps an in-flight exception to (status, body)
HttpError classify(std::exception_ptr ep) {
    try {
        std::rethrow_exception(ep);
    } catch (const NumericalError& e) {
        return {422, error_json(e.kind(), e.what())};
    } catch (const json::exception& e) {
        return {400, error_json("SchemaViolation", e.what())};
    } catch (const std::invalid_argument& e) {
        return {400, error_json("SchemaViolation", e.what())};
    } catch (const std::exception& e) {
        return {500, error_json("Internal", e.what())};
    }
}

json job_json(const JobRecord& r) {
    json j = {{"schema_version", schema_version}, {"job_id", r.job_id}, {"kind", to_string(r.kind)},
              {"status", r.status}};
    if (r.status == "done") j["result"] = r.result;
    if (r.status == "failed") j["error"] = r.error.value("error", json(nullptr));
    return j;
}

}  // namespace

struct Service::Impl {
    httplib::Server server;
    mutable std::mutex mu;
    std::map<std::string, JobRecord> jobs;
    std::map<std::string, std::shared_future<void>> running;
    std::mt19937_64 rng{std::random_device{}()};

    std::string new_id() {
        std::ostringstream os;
        os << std::hex << rng();
        return os.str();
    }

    // registers the job, runs it on its own executor and returns its id and completion handle
    std::pair<std::string, std::shared_future<void>> submit(JobKind kind, std::function<json()> fn) {
        std::string id;
        {
            std::lock_guard lock(mu);
            id = new_id();
            jobs[id] = JobRecord{id, kind, "running", nullptr, nullptr};
        }
        auto fut = std::async(std::launch::async, [this, id, fn = std::move(fn)] {
            json result, error;
            bool ok = true;
            try {
                result = fn();
            } catch (...) {
                ok = false;
                error = classify(std::current_exception()).body;
            }
            std::lock_guard lock(mu);
            JobRecord& r = jobs[id];
            r.status = ok ? "done" : "failed";
            r.result = std::move(result);
            r.error = std::move(error);
        }).share();
        std::lock_guard lock(mu);
        running[id] = fut;
        return {id, fut};
    }

    JobRecord record(const std::string& id) const {
        std::lock_guard lock(mu);
        return jobs.at(id);
    }

    static json parse_body(const httplib::Request& req) {
        try {
            return json::parse(req.body);
        } catch (const json::parse_error& e) {
            throw SchemaError(std::string("malformed JSON: ") + e.what());
        }
    }

    static void send(httplib::Response& res, int status, const json& body) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    }

    // validates synchronously (400 before any job is created), then runs the job
    void handle(const httplib::Request& req, httplib::Response& res, JobKind kind,
                const std::function<std::function<json()>(const json&)>& prepare) {
        std::function<json()> fn;
        try {
            fn = prepare(parse_body(req));
        } catch (...) {
            const HttpError e = classify(std::current_exception());
            send(res, e.status, e.body);
            return;
        }
        auto [id, fut] = submit(kind, std::move(fn));
        if (req.has_param("async") && req.get_param_value("async") == "1") {
            send(res, 202, {{"schema_version", schema_version}, {"job_id", id}, {"status", "running"}});
            return;
        }
        fut.wait();
        const JobRecord r = record(id);
        if (r.status == "done") {
            json body = r.result;
            body["job_id"] = id;
            send(res, 200, body);
        } else {
            json body = r.error;
            body["job_id"] = id;
            const std::string k = r.error["error"].value("kind", "");
            send(res, k == "SchemaViolation" ? 400 : k == "Internal" ? 500 : 422, body);
        }
    }

    FourierOrbit orbit_for_floquet(const json& j) {
        if (!j.is_object()) throw SchemaError("request body must be a JSON object");
        if (j.contains("orbit")) return orbit_from_json(j.at("orbit"));
        if (j.contains("job_id")) {
            if (!j.at("job_id").is_string()) throw SchemaError("'job_id' must be a string");
            const std::string id = j.at("job_id").get<std::string>();
            std::shared_future<void> fut;
            {
                std::lock_guard lock(mu);
                auto it = running.find(id);
                if (it == running.end()) throw SchemaError("unknown job '" + id + "'");
                fut = it->second;
            }
            fut.wait();
            const JobRecord r = record(id);
            if (r.kind != JobKind::Solve || r.status != "done")
                throw SchemaError("job '" + id + "' is not a completed solve");
            return orbit_from_json(r.result.at("orbit"));
        }
        return orbit_from_json(solve_response(solve_request_from_json(j)).at("orbit"));
    }

    void routes() {
        server.Post("/api/solve", [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res, JobKind::Solve, [](const json& j) {
                const SolveRequest r = solve_request_from_json(j);
                return std::function<json()>([r] { return solve_response(r); });
            });
        });
        server.Post("/api/floquet", [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res, JobKind::Floquet, [this](const json& j) {
                if (!j.is_object()) throw SchemaError("request body must be a JSON object");
                return std::function<json()>([this, j] { return floquet_response(orbit_for_floquet(j)); });
            });
        });
        server.Post(R"(/api/search/(exotic|herman))", [this](const httplib::Request& req, httplib::Response& res) {
            const bool exotic = req.matches[1] == "exotic";
            handle(req, res, exotic ? JobKind::FindExotic : JobKind::FindHerman, [exotic](const json& j) {
                if (!j.is_object()) throw SchemaError("request body must be a JSON object");
                const char* need[] = {"delta", exotic ? "mbeta" : "mbeta0"};
                for (const char* k : need)
                    if (!j.contains(k)) throw SchemaError(std::string("missing field '") + k + "'");
                if (!exotic && (!j.contains("phi") || !j.contains("tau_guess")))
                    throw SchemaError("herman search needs phi and tau_guess");
                return std::function<json()>(
                    [exotic, j] { return exotic ? exotic_response(j) : herman_response(j); });
            });
        });
        server.Post("/api/iterate", [this](const httplib::Request& req, httplib::Response& res) {
            IterateRequest r;
            std::shared_ptr<OrbitTrace> trace;
            try {
                r = iterate_request_from_json(parse_body(req));
                trace = std::make_shared<OrbitTrace>(run_iterate(r));
            } catch (...) {
                const HttpError e = classify(std::current_exception());
                send(res, e.status, e.body);
                return;
            }
            auto [id, fut] = submit(JobKind::Iterate, [trace, r] { return iterate_summary(*trace, r.symmetry_order); });
            fut.wait();
            const JobRecord rec = record(id);
            auto summary = std::make_shared<json>(rec.status == "done" ? rec.result : rec.error);
            (*summary)["job_id"] = id;
            json header = {{"schema_version", schema_version}, {"type", "header"}, {"job_id", id},
                           {"map", to_string(r.map)},          {"params", to_json(r.params)},
                           {"seed", to_json(r.seed)},          {"n", r.n}};
            auto head = std::make_shared<std::string>(header.dump() + "\n");
            res.set_chunked_content_provider(
                "application/x-ndjson", [trace, summary, head, next = std::size_t(0), started = false](
                                            std::size_t, httplib::DataSink& sink) mutable {
                    if (!started) {
                        started = true;
                        sink.write(head->data(), head->size());
                        return true;
                    }
                    if (next < trace->points.size()) {
                        std::string chunk;
                        const std::size_t end = std::min(trace->points.size(), next + 100);
                        for (; next < end; ++next) {
                            const PlanarPoint& p = trace->points[next];
                            chunk += json({{"step", next},
                                           {"re_z", p(0).real()},
                                           {"im_z", p(0).imag()},
                                           {"re_w", p(1).real()},
                                           {"im_w", p(1).imag()}})
                                         .dump();
                            chunk += '\n';
                        }
                        sink.write(chunk.data(), chunk.size());
                        return true;
                    }
                    json tail = *summary;
                    tail["type"] = "summary";
                    tail["schema_version"] = schema_version;
                    const std::string s = tail.dump() + "\n";
                    sink.write(s.data(), s.size());
                    sink.done();
                    return true;
                });
        });
        server.Get("/api/presets", [this](const httplib::Request&, httplib::Response& res) {
            try {
                json all = load_presets_json();
                all["schema_version"] = schema_version;
                send(res, 200, all);
            } catch (...) {
                const HttpError e = classify(std::current_exception());
                send(res, e.status, e.body);
            }
        });
        server.Get(R"(/api/jobs/([0-9a-f]+))", [this](const httplib::Request& req, httplib::Response& res) {
            std::lock_guard lock(mu);
            auto it = jobs.find(req.matches[1]);
            if (it == jobs.end()) {
                send(res, 404, error_json("UnknownJob", "no job " + std::string(req.matches[1])));
                return;
            }
            send(res, 200, job_json(it->second));
        });
        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.body.empty()) {
                res.set_content(error_json(res.status == 404 ? "NotFound" : "HttpError",
                                           "HTTP status " + std::to_string(res.status))
                                    .dump(),
                                "application/json");
            }
        });
    }
};

Service::Service() : impl_(std::make_unique<Impl>()) { impl_->routes(); }

Service::~Service() {
    stop();
    std::map<std::string, std::shared_future<void>> pending;
    {
        std::lock_guard lock(impl_->mu);
        pending = impl_->running;
    }
    for (auto& [id, f] : pending) f.wait();
}

int Service::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::run() { return impl_->server.listen_after_bind(); }

void Service::stop() { impl_->server.stop(); }

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

std::optional<JobRecord> Service::job(const std::string& id) const {
    std::lock_guard lock(impl_->mu);
    auto it = impl_->jobs.find(id);
    if (it == impl_->jobs.end()) return std::nullopt;
    return it->second;
}

}  // namespace hr
