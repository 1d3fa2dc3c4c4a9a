#include "ccrlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ccrlab {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvBuilder::CsvBuilder(std::vector<std::string> header) : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ += ',';
    out_ += header[i];
  }
  out_ += '\n';
}

void CsvBuilder::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::invalid_argument("CsvBuilder: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ += ',';
    out_ += cells[i];
  }
  out_ += '\n';
}

namespace {
constexpr double kWidth = 1024.0;
constexpr double kHeight = 768.0;
constexpr double kMargin = 48.0;
}  // namespace

SvgCanvas::SvgCanvas(double xmin, double xmax, double ymin, double ymax)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax) {
  if (!(xmax_ > xmin_)) xmax_ = xmin_ + 1.0;
  if (!(ymax_ > ymin_)) ymax_ = ymin_ + 1.0;
}

double SvgCanvas::mapx(double x) const {
  return kMargin + (x - xmin_) / (xmax_ - xmin_) * (kWidth - 2.0 * kMargin);
}

double SvgCanvas::mapy(double y) const {
  return kHeight - kMargin - (y - ymin_) / (ymax_ - ymin_) * (kHeight - 2.0 * kMargin);
}

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& stroke, double width) {
  if (pts.empty()) return;
  std::ostringstream os;
  os.precision(6);
  os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width
     << "\" points=\"";
  for (const auto& [x, y] : pts) os << mapx(x) << ',' << mapy(y) << ' ';
  os << "\"/>\n";
  body_ += os.str();
}

void SvgCanvas::point(double x, double y, const std::string& fill, double radius) {
  std::ostringstream os;
  os.precision(6);
  os << "<circle cx=\"" << mapx(x) << "\" cy=\"" << mapy(y) << "\" r=\"" << radius
     << "\" fill=\"" << fill << "\"/>\n";
  body_ += os.str();
}

std::string SvgCanvas::finish() const {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1024 768\">\n"
     << "<rect width=\"1024\" height=\"768\" fill=\"white\"/>\n"
     << body_ << "</svg>\n";
  return os.str();
}

KeyValues parse_config_text(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto ktrim = key.find_last_not_of(" \t");
    key = key.substr(0, ktrim == std::string::npos ? 0 : ktrim + 1);
    const auto vtrim = value.find_first_not_of(" \t");
    value = vtrim == std::string::npos ? "" : value.substr(vtrim);
    if (key.empty())
      throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key");
    kv[key].push_back(value);
  }
  return kv;
}

KeyValues load_config_file(const std::string& path) {
  return parse_config_text(read_text(path));
}

std::string manifest_text(const std::string& command,
                          const std::vector<std::pair<std::string, std::string>>& resolved) {
  std::string out = "command=" + command + "\n";
  for (const auto& [k, v] : resolved) out += k + "=" + v + "\n";
  return out;
}

}  // namespace ccrlab
