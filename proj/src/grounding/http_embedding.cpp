// Copyright 2026 The Ambisim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>

#include <httplib.h>

#include "ambisim/grounding.hpp"

namespace ambisim::grounding {

using nlohmann::json;

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string url, std::string api_key)
    : api_key_(std::move(api_key)) {
  constexpr std::string_view scheme = "http://";
  if (url.rfind(scheme, 0) != 0) {
    throw GroundingError("embedding url must start with http:// (got '" + url + "')");
  }
  std::string rest = url.substr(scheme.size());
  const auto slash = rest.find('/');
  std::string authority = rest.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : rest.substr(slash);
  const auto colon = authority.rfind(':');
  if (colon != std::string::npos) {
    host_ = authority.substr(0, colon);
    port_ = std::stoi(authority.substr(colon + 1));
  } else {
    host_ = authority;
  }
  if (host_.empty()) throw GroundingError("embedding url has no host: '" + url + "'");
}

std::unique_ptr<HttpEmbeddingProvider> HttpEmbeddingProvider::from_environment() {
  const char* url = std::getenv("AMBISIM_EMBEDDING_URL");
  if (!url || !*url) return nullptr;
  const char* key = std::getenv("AMBISIM_EMBEDDING_KEY");
  return std::make_unique<HttpEmbeddingProvider>(url, key ? key : "");
}

std::vector<Embedding> HttpEmbeddingProvider::embed_batch(const std::vector<std::string>& texts) {
  httplib::Client client(host_, port_);
  client.set_connection_timeout(10);
  client.set_read_timeout(60);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  const json body = {{"input", texts}};
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    throw GroundingError("embedding request failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw GroundingError("embedding service returned HTTP " + std::to_string(res->status));
  }
  json reply;
  try {
    reply = json::parse(res->body);
  } catch (const json::parse_error& e) {
    throw GroundingError(std::string("embedding reply is not JSON: ") + e.what());
  }
  auto it = reply.find("embeddings");
  if (it == reply.end() || !it->is_array() || it->size() != texts.size()) {
    throw GroundingError("embedding reply lacks one vector per input");
  }
  std::vector<Embedding> out;
  for (const auto& row : *it) {
    if (!row.is_array() || row.empty()) throw GroundingError("embedding reply has an empty vector");
    Embedding v;
    for (const auto& x : row) {
      if (!x.is_number()) throw GroundingError("embedding reply has a non-numeric component");
      v.push_back(x.get<double>());
    }
    if (dimension_ == 0) dimension_ = v.size();
    if (v.size() != dimension_) throw GroundingError("embedding dimension changed between calls");
    out.push_back(std::move(v));
  }
  return out;
}

Embedding HttpEmbeddingProvider::embed(std::string_view text) {
  std::string key(text);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  auto v = std::move(embed_batch({key}).front());
  cache_.emplace(std::move(key), v);
  return v;
}

std::size_t HttpEmbeddingProvider::dimension() const { return dimension_; }

}  // namespace ambisim::grounding
