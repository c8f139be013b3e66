#include "meditools/net/replay_transport.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace meditools::net {

namespace {

using Params = std::vector<std::pair<std::string, std::string>>;

Params comparable_params(std::string_view url)
{
    Params params = parse_query(url);
    const auto& hidden = ReplayTransport::credential_params();
    std::erase_if(params, [&](const auto& p) { return hidden.count(p.first) != 0; });
    std::sort(params.begin(), params.end());
    return params;
}

std::string strip_query(std::string_view url)
{
    const auto q = url.find('?');
    return std::string(url.substr(0, q));
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw TransportError("cannot read fixture file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string redact_url(std::string_view url)
{
    const auto& hidden = ReplayTransport::credential_params();
    Params params = parse_query(url);
    std::erase_if(params, [&](const auto& p) { return hidden.count(p.first) != 0; });
    std::string out = strip_query(url);
    if (!params.empty())
        out += "?" + build_query(params);
    return out;
}

} // namespace

const std::set<std::string>& ReplayTransport::credential_params()
{
    static const std::set<std::string> names{"api_key", "token", "key", "apikey", "access_token"};
    return names;
}

ReplayTransport::ReplayTransport(std::vector<RecordedExchange> exchanges)
    : exchanges_(std::move(exchanges))
{
}

namespace {

void load_index(ReplayTransport& transport, const std::filesystem::path& dir)
{
    const auto index_path = dir / "index.json";
    nlohmann::json index;
    try {
        index = nlohmann::json::parse(read_file(index_path));
    } catch (const nlohmann::json::exception& e) {
        throw TransportError("invalid fixture index " + index_path.string() + ": " + e.what());
    }

    for (const auto& entry : index.at("exchanges")) {
        RecordedExchange ex;
        ex.method = entry.value("method", "GET");
        ex.url = entry.at("url").get<std::string>();
        ex.body_contains = entry.value("body_contains", "");
        ex.status = entry.value("status", 200);
        ex.content_type = entry.value("content_type", "");
        if (entry.contains("body_file"))
            ex.body = read_file(dir / entry.at("body_file").get<std::string>());
        else
            ex.body = entry.value("body", "");
        if (entry.contains("error"))
            ex.transport_error = entry.at("error").get<std::string>();
        transport.add(std::move(ex));
    }
}

} // namespace

std::shared_ptr<ReplayTransport> ReplayTransport::from_directory(const std::filesystem::path& dir)
{
    auto transport = std::make_shared<ReplayTransport>();
    std::error_code ec;
    if (std::filesystem::exists(dir / "index.json", ec)) {
        load_index(*transport, dir);
        return transport;
    }
    std::vector<std::filesystem::path> subdirs;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
        if (entry.is_directory(ec) && std::filesystem::exists(entry.path() / "index.json", ec))
            subdirs.push_back(entry.path());
    if (subdirs.empty())
        throw TransportError("no fixture index under " + dir.string());
    std::sort(subdirs.begin(), subdirs.end());
    for (const auto& sub : subdirs)
        load_index(*transport, sub);
    return transport;
}

void ReplayTransport::add(RecordedExchange exchange)
{
    std::lock_guard lock(mutex_);
    exchanges_.push_back(std::move(exchange));
}

HttpResponse ReplayTransport::send(const HttpRequest& request)
{
    ++calls_;
    const std::string base = strip_query(request.url);
    const Params params = comparable_params(request.url);

    std::lock_guard lock(mutex_);
    for (const auto& ex : exchanges_) {
        if (ex.method != request.method || strip_query(ex.url) != base)
            continue;
        if (comparable_params(ex.url) != params)
            continue;
        if (!ex.body_contains.empty() && request.body.find(ex.body_contains) == std::string::npos)
            continue;
        if (ex.transport_error)
            throw TransportError(*ex.transport_error);
        HttpResponse response;
        response.status = ex.status;
        response.body = ex.body;
        if (!ex.content_type.empty())
            response.headers.emplace("Content-Type", ex.content_type);
        return response;
    }
    throw TransportError("no recorded exchange for " + request.method + " " + redact_url(request.url));
}

RecordingTransport::RecordingTransport(std::shared_ptr<HttpTransport> inner, std::filesystem::path dir)
    : inner_(std::move(inner)), dir_(std::move(dir))
{
    std::filesystem::create_directories(dir_);
}

HttpResponse RecordingTransport::send(const HttpRequest& request)
{
    HttpResponse response = inner_->send(request);

    std::lock_guard lock(mutex_);
    const auto index_path = dir_ / "index.json";
    nlohmann::json index = {{"exchanges", nlohmann::json::array()}};
    if (std::filesystem::exists(index_path))
        index = nlohmann::json::parse(read_file(index_path));

    const std::string body_file = "exchange-" + std::to_string(index["exchanges"].size() + counter_++) + ".body";
    std::ofstream(dir_ / body_file, std::ios::binary) << response.body;
    index["exchanges"].push_back({{"method", request.method},
                                  {"url", redact_url(request.url)},
                                  {"status", response.status},
                                  {"content_type", header_value(response.headers, "Content-Type")},
                                  {"body_file", body_file}});
    std::ofstream(index_path) << index.dump(2) << '\n';
    return response;
}

} // namespace meditools::net
