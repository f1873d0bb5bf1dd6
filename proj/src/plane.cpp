#include "pdtk/plane.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>

#include "pdtk/errors.hpp"
#include "pdtk/tradeoff.hpp"

namespace pdtk {

namespace {

void validate_records(const std::vector<AlgorithmRecord>& records) {
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (r.name.empty()) fail(ErrorCode::InvalidArgument, "record with an empty name");
    if (!seen.insert(r.name).second)
      fail(ErrorCode::DuplicateName, "duplicate record name: " + r.name);
    if (!std::isfinite(r.distortion) || !std::isfinite(r.perception))
      fail(ErrorCode::InvalidArgument, "record " + r.name + " has a non-finite score");
  }
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_score(const std::string& field, std::size_t line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || end != begin + field.size())
    fail(ErrorCode::InvalidArgument,
         "line " + std::to_string(line_no) + ": not a number: " + field);
  if (!std::isfinite(v))
    fail(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": non-finite score");
  return v;
}

}  // namespace

bool dominates(const AlgorithmRecord& a, const AlgorithmRecord& b, bool weak) {
  if (weak)
    return a.distortion <= b.distortion && a.perception <= b.perception &&
           (a.distortion < b.distortion || a.perception < b.perception);
  return a.distortion < b.distortion && a.perception < b.perception;
}

std::vector<AlgorithmRecord> admissible_set(const std::vector<AlgorithmRecord>& records) {
  validate_records(records);
  std::vector<AlgorithmRecord> out;
  for (const auto& r : records) {
    bool dominated = false;
    for (const auto& other : records) {
      if (&other == &r) continue;
      if (dominates(other, r)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(r);
  }
  return out;
}

std::vector<AlgorithmRecord> pareto_front(const std::vector<AlgorithmRecord>& records) {
  validate_records(records);
  std::vector<AlgorithmRecord> sorted = records;
  std::sort(sorted.begin(), sorted.end(), [](const AlgorithmRecord& a, const AlgorithmRecord& b) {
    if (a.distortion != b.distortion) return a.distortion < b.distortion;
    if (a.perception != b.perception) return a.perception < b.perception;
    return a.name < b.name;
  });
  std::vector<AlgorithmRecord> front;
  for (auto& r : sorted) {
    if (front.empty() || r.perception < front.back().perception) front.push_back(std::move(r));
  }
  return front;
}

void emit_scatter(const std::vector<AlgorithmRecord>& records, std::ostream& out) {
  const std::vector<AlgorithmRecord> admissible = admissible_set(records);
  const std::vector<AlgorithmRecord> front = pareto_front(records);

  double dlo = 0.0, dhi = 0.0, plo = 0.0, phi = 0.0;
  if (!records.empty()) {
    dlo = dhi = records[0].distortion;
    plo = phi = records[0].perception;
    for (const auto& r : records) {
      dlo = std::min(dlo, r.distortion);
      dhi = std::max(dhi, r.distortion);
      plo = std::min(plo, r.perception);
      phi = std::max(phi, r.perception);
    }
  }
  if (dhi - dlo <= 0.0) {
    dlo -= 1.0;
    dhi += 1.0;
  }
  if (phi - plo <= 0.0) {
    plo -= 1.0;
    phi += 1.0;
  }

  const double left = 70.0, right = 620.0, top = 20.0, bottom = 430.0;
  auto xpix = [&](double d) { return left + (d - dlo) / (dhi - dlo) * (right - left); };
  auto ypix = [&](double p) { return bottom - (p - plo) / (phi - plo) * (bottom - top); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" "
         "height=\"480\" viewBox=\"0 0 640 480\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"#ffffff\"/>\n";
  out << "<g stroke=\"#000000\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << fmt2(left) << "\" y1=\"" << fmt2(bottom) << "\" x2=\"" << fmt2(right)
      << "\" y2=\"" << fmt2(bottom) << "\"/>\n";
  out << "<line x1=\"" << fmt2(left) << "\" y1=\"" << fmt2(top) << "\" x2=\"" << fmt2(left)
      << "\" y2=\"" << fmt2(bottom) << "\"/>\n";
  out << "</g>\n";

  for (int i = 0; i < 5; ++i) {
    const double t = static_cast<double>(i) / 4.0;
    const double d = dlo + t * (dhi - dlo);
    const double p = plo + t * (phi - plo);
    const double x = xpix(d);
    const double y = ypix(p);
    out << "<line x1=\"" << fmt2(x) << "\" y1=\"" << fmt2(bottom) << "\" x2=\"" << fmt2(x)
        << "\" y2=\"" << fmt2(bottom + 5.0) << "\" stroke=\"#000000\"/>\n";
    out << "<text x=\"" << fmt2(x) << "\" y=\"" << fmt2(bottom + 18.0)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << fmt6(d)
        << "</text>\n";
    out << "<line x1=\"" << fmt2(left - 5.0) << "\" y1=\"" << fmt2(y) << "\" x2=\"" << fmt2(left)
        << "\" y2=\"" << fmt2(y) << "\" stroke=\"#000000\"/>\n";
    out << "<text x=\"" << fmt2(left - 8.0) << "\" y=\"" << fmt2(y + 4.0)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt6(p)
        << "</text>\n";
  }

  out << "<text x=\"" << fmt2((left + right) / 2.0)
      << "\" y=\"468.00\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\">Distortion</text>\n";
  out << "<text x=\"16.00\" y=\"" << fmt2((top + bottom) / 2.0)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16.00 "
      << fmt2((top + bottom) / 2.0) << ")\">Perceptual index</text>\n";

  if (front.size() >= 2) {
    out << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < front.size(); ++i) {
      if (i) out << ' ';
      out << fmt2(xpix(front[i].distortion)) << ',' << fmt2(ypix(front[i].perception));
    }
    out << "\"/>\n";
  }

  auto is_admissible = [&](const AlgorithmRecord& r) {
    for (const auto& a : admissible)
      if (a.name == r.name) return true;
    return false;
  };
  for (const auto& r : records) {
    const double x = xpix(r.distortion);
    const double y = ypix(r.perception);
    if (is_admissible(r)) {
      out << "<circle cx=\"" << fmt2(x) << "\" cy=\"" << fmt2(y)
          << "\" r=\"4\" fill=\"#1f77b4\">";
    } else {
      out << "<circle cx=\"" << fmt2(x) << "\" cy=\"" << fmt2(y)
          << "\" r=\"4\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\">";
    }
    out << "<title>" << xml_escape(r.name) << "</title></circle>\n";
  }
  out << "</svg>\n";
}

void emit_table(const std::vector<AlgorithmRecord>& records, std::ostream& out) {
  const std::vector<AlgorithmRecord> admissible = admissible_set(records);
  auto is_admissible = [&](const AlgorithmRecord& r) {
    for (const auto& a : admissible)
      if (a.name == r.name) return true;
    return false;
  };
  out << "name,distortion,perception,admissible\n";
  for (const auto& r : records)
    out << csv_field(r.name) << ',' << fmt17(r.distortion) << ',' << fmt17(r.perception) << ','
        << (is_admissible(r) ? '1' : '0') << '\n';
}

std::vector<AlgorithmRecord> ingest_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<AlgorithmRecord> records;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (!saw_header) {
      if (fields.size() < 3 || fields[0] != "name" || fields[1] != "distortion" ||
          fields[2] != "perception")
        fail(ErrorCode::InvalidArgument,
             "expected a header starting with name,distortion,perception");
      saw_header = true;
      continue;
    }
    if (fields.size() < 3)
      fail(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": need 3 fields");
    AlgorithmRecord r;
    r.name = fields[0];
    r.distortion = parse_score(fields[1], line_no);
    r.perception = parse_score(fields[2], line_no);
    records.push_back(std::move(r));
  }
  if (!saw_header) fail(ErrorCode::InvalidArgument, "empty table: no header line");
  return records;
}

}  // namespace pdtk
