#include "dqm/cli.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace dqm::cli {

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move output into place at " + path.string() + ": " + ec.message());
  }
}

std::string render(const std::vector<ReproEntry>& rows, Format f) {
  std::ostringstream os;
  if (f == Format::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
      arr.push_back({{"group", r.group},
                     {"label", r.label},
                     {"value", r.value},
                     {"printed", r.printed},
                     {"tolerance", r.tolerance},
                     {"pass", r.pass()}});
    os << arr.dump(2) << '\n';
    return os.str();
  }
  os << "group,label,value,printed,tolerance,status\n";
  for (const auto& r : rows) {
    os << '"' << r.group << "\",\"" << r.label << "\"," << std::setprecision(10) << r.value << ','
       << r.printed << ',' << r.tolerance << ',' << (r.pass() ? "PASS" : "FAIL") << '\n';
  }
  return os.str();
}

}  // namespace dqm::cli
