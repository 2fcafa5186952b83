#include "segscore/net/http.hpp"

#include <httplib.h>

#include "segscore/error.hpp"

namespace segscore::net {

ParsedUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error(ErrorCode::InvalidArgument, "not an absolute URL: " + url);
    const std::string scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") {
        throw Error(ErrorCode::InvalidArgument, "unsupported URL scheme: " + url);
    }
    const auto path_begin = url.find_first_of("/?#", scheme_end + 3);
    ParsedUrl out;
    out.origin = url.substr(0, path_begin);
    if (out.origin.size() <= scheme_end + 3) throw Error(ErrorCode::InvalidArgument, "URL has no host: " + url);
    out.path = path_begin == std::string::npos ? "/" : url.substr(path_begin);
    out.path = out.path.substr(0, out.path.find('#'));
    if (out.path.empty() || out.path.front() != '/') out.path.insert(0, "/");
    return out;
}

HttpResponse HttplibTransport::post(const std::string& url, std::string_view body, const std::string& content_type) {
    const ParsedUrl parts = split_url(url);
    httplib::Client client(parts.origin);
    client.set_connection_timeout(timeouts_.connect);
    client.set_read_timeout(timeouts_.read);
    client.set_write_timeout(timeouts_.write);
    auto res = client.Post(parts.path, body.data(), body.size(), content_type);
    if (!res) {
        throw Error(ErrorCode::ProviderUnavailable, "POST " + url + " failed: " + httplib::to_string(res.error()));
    }
    return {res->status, res->body};
}

std::string fetch_url(const std::string& url, std::chrono::seconds timeout) {
    const ParsedUrl parts = split_url(url);
    httplib::Client client(parts.origin);
    client.set_follow_location(true);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    auto res = client.Get(parts.path);
    if (!res) throw Error(ErrorCode::StorageFailure, "GET " + url + " failed: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300) {
        throw Error(ErrorCode::StorageFailure, "GET " + url + " returned HTTP " + std::to_string(res->status));
    }
    return res->body;
}

}  // namespace segscore::net
