#include "tbn/learn/trace.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "tbn/errors.hpp"

namespace tbn::learn {

TraceRecord& TraceRecord::add(std::string key, std::string value) {
  fields.emplace_back(std::move(key), std::move(value));
  return *this;
}

TraceRecord& TraceRecord::add(std::string key, double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return add(std::move(key), std::string(buf));
}

TraceRecord& TraceRecord::add(std::string key, std::int64_t value) {
  return add(std::move(key), std::to_string(value));
}

TraceRecord& TraceRecord::add(std::string key, std::size_t value) {
  return add(std::move(key), std::to_string(value));
}

std::optional<std::string> TraceRecord::get(const std::string& key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return v;
  }
  return std::nullopt;
}

double TraceRecord::number(const std::string& key) const {
  const auto text = get(key);
  if (!text) throw ParseError("trace record " + std::to_string(step) + " lacks '" + key + "'");
  double x = 0.0;
  const char* end = text->data() + text->size();
  const auto [ptr, ec] = std::from_chars(text->data(), end, x);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("trace field '" + key + "' is not numeric: '" + *text + "'");
  }
  return x;
}

void LearnTrace::append(const LearnTrace& other) {
  for (TraceRecord r : other.records) {
    r.step = records.size();
    records.push_back(std::move(r));
  }
}

void LearnTrace::write(std::ostream& out) const {
  for (const auto& r : records) {
    out << "step=" << r.step << " restart=" << r.restart << " event=" << r.event;
    for (const auto& [k, v] : r.fields) out << ' ' << k << '=' << v;
    out << '\n';
  }
}

LearnTrace LearnTrace::read(std::istream& in) {
  LearnTrace trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream f(line);
    std::string token;
    TraceRecord r;
    bool have_step = false;
    bool have_restart = false;
    while (f >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) throw ParseError("expected key=value, got '" + token + "'", line_no);
      std::string key = token.substr(0, eq);
      std::string value = token.substr(eq + 1);
      try {
        if (key == "step" && !have_step) {
          r.step = std::stoull(value);
          have_step = true;
        } else if (key == "restart" && !have_restart) {
          r.restart = std::stoull(value);
          have_restart = true;
        } else if (key == "event" && r.event.empty()) {
          r.event = value;
        } else {
          r.fields.emplace_back(std::move(key), std::move(value));
        }
      } catch (const std::logic_error&) {
        throw ParseError("bad value for '" + key + "'", line_no);
      }
    }
    if (!have_step && !have_restart && r.event.empty() && r.fields.empty()) continue;
    if (!have_step || !have_restart || r.event.empty()) {
      throw ParseError("trace record needs step, restart and event", line_no);
    }
    trace.records.push_back(std::move(r));
  }
  return trace;
}

void LearnTrace::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  write(out);
}

LearnTrace LearnTrace::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "' for reading");
  return read(in);
}

}  // namespace tbn::learn
