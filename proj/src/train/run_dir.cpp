#include "vof/train/run_dir.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace vof::train {

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("run dir: cannot open " + tmp + " for writing");
    }
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("run dir: write to " + tmp + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw std::runtime_error("run dir: rename to " + path + " failed: " +
                             ec.message());
  }
}

RunWriter::RunWriter(std::string dir, int checkpoint_every)
    : dir_(std::move(dir)), checkpoint_every_(checkpoint_every) {
  std::filesystem::create_directories(dir_);
  trace_ = "epoch,mean_loss,mean_lambda,mean_nu,seconds\n";
}

void RunWriter::write_config_snapshot(const std::string& text) {
  write_file_atomic(dir_ + "/config.txt", text);
}

void RunWriter::on_epoch(int epoch, const EpochStats& stats,
                         const forecast::ForecastModel& model,
                         const FeatureScaler& scaler) {
  char row[192];
  std::snprintf(row, sizeof(row), "%d,%.17g,%.17g,%.17g,%.6f\n", epoch,
                stats.mean_loss, stats.mean_lambda, stats.mean_nu,
                stats.seconds);
  trace_ += row;
  if (checkpoint_every_ > 0 && (epoch + 1) % checkpoint_every_ == 0) {
    char name[64];
    std::snprintf(name, sizeof(name), "/ckpt_%06d.txt", epoch + 1);
    std::ostringstream buf;
    model.save(buf, scaler);
    write_file_atomic(dir_ + name, buf.str());
  }
}

void RunWriter::finish(const forecast::ForecastModel& model,
                       const FeatureScaler& scaler) {
  write_file_atomic(dir_ + "/trace.csv", trace_);
  std::ostringstream buf;
  model.save(buf, scaler);
  write_file_atomic(dir_ + "/model.ckpt", buf.str());
}

}  // namespace vof::train
