#pragma once

#include <map>
#include <string>
#include <vector>

namespace ccrlab {

// 17 significant digits; doubles survive a text round trip bit-for-bit.
std::string format_double(double v);

// Write via a temp file in the same directory, then rename.
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

// RFC-4180-style CSV: header row, '.' decimal separator, no quoting needed
// for the numeric payloads emitted here.
class CsvBuilder {
 public:
  explicit CsvBuilder(std::vector<std::string> header);
  void add_row(const std::vector<std::string>& cells);
  std::string str() const { return out_; }

 private:
  std::size_t columns_;
  std::string out_;
};

// Minimal standalone SVG canvas, fixed 1024x768 viewbox, data coordinates
// mapped linearly into a margined frame.
class SvgCanvas {
 public:
  SvgCanvas(double xmin, double xmax, double ymin, double ymax);
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                double width = 1.0);
  void point(double x, double y, const std::string& fill, double radius = 1.5);
  std::string finish() const;

 private:
  double mapx(double x) const;
  double mapy(double y) const;
  double xmin_, xmax_, ymin_, ymax_;
  std::string body_;
};

// Flat key=value configuration, '#' starts a comment; keys may repeat only
// for list-valued options (the last value wins otherwise).
using KeyValues = std::map<std::string, std::vector<std::string>>;

KeyValues parse_config_text(const std::string& text);
KeyValues load_config_file(const std::string& path);

// Manifest echoing the resolved configuration; loadable as a config file.
// Keys may repeat (e.g. param=).
std::string manifest_text(const std::string& command,
                          const std::vector<std::pair<std::string, std::string>>& resolved);

}  // namespace ccrlab
