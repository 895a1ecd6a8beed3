#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "memmo/task.hpp"
#include "memmo/trajectory.hpp"

namespace memmo {

enum class SampleSource { Heuristic, Optimized };

std::string to_string(SampleSource source);
SampleSource source_from_string(const std::string& s);

/// One single-step motion: the task, the 7-D configuration trajectory
/// (root x/y/yaw, swing x/y/yaw, swing height), the control trajectory with
/// one knot per interval, its cost under the step problem, and where it came
/// from.
struct MotionSample {
  Task task;
  Trajectory q;  // D_q x T
  Trajectory u;  // D_u x (T-1)
  double cost = 0.0;
  SampleSource source = SampleSource::Heuristic;

  bool operator==(const MotionSample& other) const = default;
};

enum class DatabaseSide { Left, Right, Mixed };

std::string to_string(DatabaseSide side);
DatabaseSide database_side_from_string(const std::string& s);

struct DatabaseMeta {
  int format_version = 1;
  double dt = 0.01;
  Eigen::Index T = 100;
  Eigen::Index D_q = 7;
  Eigen::Index D_u = 7;
  DatabaseSide side = DatabaseSide::Mixed;
  std::uint64_t generator_hash = 0;

  bool operator==(const DatabaseMeta& other) const = default;
};

/// A memory-of-motion database: samples sharing knot layout and time step.
/// `side` is Mixed when both legs are stored in one file; per-sample sides
/// stay with each task.
struct Database {
  DatabaseMeta meta;
  std::vector<MotionSample> samples;

  std::size_t size() const { return samples.size(); }

  /// Validates the shared-shape invariant and per-sample consistency.
  void validate() const;

  bool operator==(const Database& other) const = default;
};

struct DatasetVersionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DatasetFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DatasetDimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// JSON Lines persistence. Line 1 is the header object; every further line is
/// one sample. Doubles are written with shortest round-trip precision, so
/// load(save(db)) == db bit-exactly.
void save_database(const Database& db, const std::string& path);
Database load_database(const std::string& path);

/// Deterministic shuffle-split into (train, test). Requires
/// n_train + n_test <= db.size(); the two parts are disjoint.
std::pair<Database, Database> split_database(const Database& db, std::size_t n_train,
                                             std::size_t n_test, std::uint64_t seed);

/// Subset of one moving side; meta.side collapses accordingly.
Database filter_side(const Database& db, Side side);

/// Content hash over meta and sample payloads, used to tie trained models to
/// the exact split they saw.
std::uint64_t database_hash(const Database& db);

/// Ordered double-support contact states; consecutive entries differ in
/// exactly one foot.
struct ContactSequence {
  struct Step {
    FootPose left;
    FootPose right;
    bool operator==(const Step& other) const = default;
  };
  std::vector<Step> steps;

  /// Number of footsteps (transitions), i.e. steps.size() - 1.
  std::size_t footsteps() const { return steps.empty() ? 0 : steps.size() - 1; }

  /// Side that moves between entry i and i+1; throws if zero or both feet move.
  Side moving_side(std::size_t i) const;

  bool operator==(const ContactSequence& other) const = default;
};

void save_sequences(const std::vector<ContactSequence>& seqs, const std::string& path);
std::vector<ContactSequence> load_sequences(const std::string& path);

}  // namespace memmo
