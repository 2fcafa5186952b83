#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace segscore::net {

struct HttpResponse {
    int status = 0;
    std::string body;
};

struct Timeouts {
    std::chrono::milliseconds connect{650};
    std::chrono::milliseconds read{10000};
    std::chrono::milliseconds write{10000};
};

// Throws Error(ProviderUnavailable) when no response was received at all.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse post(const std::string& url, std::string_view body, const std::string& content_type) = 0;
};

class HttplibTransport final : public HttpTransport {
public:
    explicit HttplibTransport(Timeouts timeouts = {}) : timeouts_(timeouts) {}
    HttpResponse post(const std::string& url, std::string_view body, const std::string& content_type) override;

private:
    Timeouts timeouts_;
};

// Plain GET with redirects followed. Throws Error(InvalidArgument) for
// unsupported URLs and Error(StorageFailure) for fetch failures.
std::string fetch_url(const std::string& url, std::chrono::seconds timeout = std::chrono::seconds(30));

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;    // path and query, at least "/"
};

// Throws Error(InvalidArgument) unless the URL is http:// or https://.
ParsedUrl split_url(const std::string& url);

}  // namespace segscore::net
