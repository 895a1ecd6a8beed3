#include "memmo/database.hpp"

#include <fstream>
#include <sstream>

#include "memmo/json_io.hpp"
#include "memmo/rng.hpp"

namespace memmo {

using nlohmann::json;

std::string to_string(SampleSource source) {
  return source == SampleSource::Heuristic ? "heuristic" : "optimized";
}

SampleSource source_from_string(const std::string& s) {
  if (s == "heuristic") return SampleSource::Heuristic;
  if (s == "optimized") return SampleSource::Optimized;
  throw std::invalid_argument("unknown sample source: " + s);
}

std::string to_string(DatabaseSide side) {
  switch (side) {
    case DatabaseSide::Left: return "left";
    case DatabaseSide::Right: return "right";
    default: return "mixed";
  }
}

DatabaseSide database_side_from_string(const std::string& s) {
  if (s == "left") return DatabaseSide::Left;
  if (s == "right") return DatabaseSide::Right;
  if (s == "mixed") return DatabaseSide::Mixed;
  throw std::invalid_argument("unknown database side: " + s);
}

void Database::validate() const {
  for (const MotionSample& sample : samples) {
    if (sample.q.dims() != meta.D_q || sample.q.knots() != meta.T) {
      throw DatasetDimensionError("sample q shape does not match database meta");
    }
    if (sample.u.dims() != meta.D_u || sample.u.knots() != meta.T - 1) {
      throw DatasetDimensionError("sample u shape does not match database meta");
    }
    if (sample.q.dt != meta.dt || sample.u.dt != meta.dt) {
      throw DatasetDimensionError("sample dt does not match database meta");
    }
    if (meta.side == DatabaseSide::Left && sample.task.side != Side::Left) {
      throw DatasetDimensionError("left database contains a right-leg sample");
    }
    if (meta.side == DatabaseSide::Right && sample.task.side != Side::Right) {
      throw DatasetDimensionError("right database contains a left-leg sample");
    }
  }
}

namespace {

json task_to_json(const Task& task) {
  const auto v = task.vector();
  json arr = json::array();
  for (int i = 0; i < 9; ++i) arr.push_back(v[i]);
  return arr;
}

Task task_from_json(const json& arr, Side side) {
  if (!arr.is_array() || arr.size() != 9) throw DatasetFormatError("task must be 9 numbers");
  auto pose = [&](int off) {
    return FootPose(arr[off].get<double>(), arr[off + 1].get<double>(), arr[off + 2].get<double>());
  };
  Task task;
  task.left0 = pose(0);
  task.right0 = pose(3);
  task.goal = pose(6);
  task.side = side;
  return task;
}

json sample_to_json(const MotionSample& sample) {
  json j;
  j["task"] = task_to_json(sample.task);
  j["side"] = to_string(sample.task.side);
  j["q"] = matrix_to_json(sample.q.values);
  j["u"] = matrix_to_json(sample.u.values);
  j["cost"] = sample.cost;
  j["source"] = to_string(sample.source);
  return j;
}

MotionSample sample_from_json(const json& j, const DatabaseMeta& meta) {
  MotionSample sample;
  try {
    sample.task = task_from_json(j.at("task"), side_from_string(j.at("side").get<std::string>()));
    sample.cost = j.at("cost").get<double>();
    sample.source = source_from_string(j.at("source").get<std::string>());
    const json& q = j.at("q");
    const json& u = j.at("u");
    if (static_cast<Eigen::Index>(q.size()) != meta.D_q * meta.T ||
        static_cast<Eigen::Index>(u.size()) != meta.D_u * (meta.T - 1)) {
      throw DatasetDimensionError("sample trajectory length does not match header");
    }
    sample.q = Trajectory(matrix_from_json(q, meta.D_q, meta.T), meta.dt);
    sample.u = Trajectory(matrix_from_json(u, meta.D_u, meta.T - 1), meta.dt);
  } catch (const json::exception& e) {
    throw DatasetFormatError(std::string("malformed sample record: ") + e.what());
  }
  return sample;
}

}  // namespace

void save_database(const Database& db, const std::string& path) {
  db.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  json header;
  header["format_version"] = db.meta.format_version;
  header["dt"] = db.meta.dt;
  header["T"] = db.meta.T;
  header["D_q"] = db.meta.D_q;
  header["D_u"] = db.meta.D_u;
  header["side"] = to_string(db.meta.side);
  header["generator_hash"] = db.meta.generator_hash;
  out << header.dump() << "\n";
  for (const MotionSample& sample : db.samples) {
    out << sample_to_json(sample).dump() << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Database load_database(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw DatasetFormatError("empty dataset file: " + path);

  Database db;
  try {
    const json header = json::parse(line);
    const int version = header.at("format_version").get<int>();
    if (version != 1) {
      throw DatasetVersionError("unsupported dataset format version " + std::to_string(version));
    }
    db.meta.format_version = version;
    db.meta.dt = header.at("dt").get<double>();
    db.meta.T = header.at("T").get<Eigen::Index>();
    db.meta.D_q = header.at("D_q").get<Eigen::Index>();
    db.meta.D_u = header.at("D_u").get<Eigen::Index>();
    db.meta.side = database_side_from_string(header.at("side").get<std::string>());
    db.meta.generator_hash = header.at("generator_hash").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw DatasetFormatError(std::string("malformed dataset header: ") + e.what());
  }

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw DatasetFormatError(std::string("malformed sample line: ") + e.what());
    }
    db.samples.push_back(sample_from_json(j, db.meta));
  }
  db.validate();
  return db;
}

std::pair<Database, Database> split_database(const Database& db, std::size_t n_train,
                                             std::size_t n_test, std::uint64_t seed) {
  if (n_train + n_test > db.size()) {
    throw std::invalid_argument("split needs n_train + n_test <= database size");
  }
  std::vector<std::size_t> order(db.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {  // Fisher-Yates
    std::swap(order[i - 1], order[rng.below(i)]);
  }

  Database train;
  Database test;
  train.meta = db.meta;
  test.meta = db.meta;
  train.samples.reserve(n_train);
  test.samples.reserve(n_test);
  for (std::size_t i = 0; i < n_train; ++i) train.samples.push_back(db.samples[order[i]]);
  for (std::size_t i = 0; i < n_test; ++i) test.samples.push_back(db.samples[order[n_train + i]]);
  return {std::move(train), std::move(test)};
}

Database filter_side(const Database& db, Side side) {
  Database out;
  out.meta = db.meta;
  out.meta.side = side == Side::Left ? DatabaseSide::Left : DatabaseSide::Right;
  for (const MotionSample& sample : db.samples) {
    if (sample.task.side == side) out.samples.push_back(sample);
  }
  return out;
}

std::uint64_t database_hash(const Database& db) {
  std::ostringstream ss;
  ss.precision(17);
  ss << to_string(db.meta.side) << ':' << db.meta.dt << ':' << db.meta.T << ':' << db.meta.D_q
     << ':' << db.meta.D_u << ':' << db.meta.generator_hash << ';';
  for (const MotionSample& sample : db.samples) {
    const auto v = sample.task.vector();
    for (int i = 0; i < 9; ++i) ss << v[i] << ',';
    ss << to_string(sample.task.side) << ',' << sample.cost << ','
       << sample.q.values.sum() << ',' << sample.u.values.sum() << ';';
  }
  return fnv1a(ss.str());
}

Side ContactSequence::moving_side(std::size_t i) const {
  const Step& a = steps.at(i);
  const Step& b = steps.at(i + 1);
  const bool left_moved = !(a.left == b.left);
  const bool right_moved = !(a.right == b.right);
  if (left_moved == right_moved) {
    throw std::logic_error("contact sequence must change exactly one foot per step");
  }
  return left_moved ? Side::Left : Side::Right;
}

namespace {
json pose_to_json(const FootPose& p) { return json::array({p.x, p.y, p.yaw}); }
FootPose pose_from_json(const json& j) {
  return FootPose(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}
}  // namespace

void save_sequences(const std::vector<ContactSequence>& seqs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  json root;
  root["format_version"] = 1;
  json arr = json::array();
  for (const ContactSequence& seq : seqs) {
    json steps = json::array();
    for (const auto& step : seq.steps) {
      steps.push_back(json{{"left", pose_to_json(step.left)}, {"right", pose_to_json(step.right)}});
    }
    arr.push_back(steps);
  }
  root["sequences"] = arr;
  out << root.dump() << "\n";
}

std::vector<ContactSequence> load_sequences(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  json root;
  try {
    in >> root;
  } catch (const json::exception& e) {
    throw DatasetFormatError(std::string("malformed sequence file: ") + e.what());
  }
  if (root.value("format_version", 0) != 1) {
    throw DatasetVersionError("unsupported sequence format version");
  }
  std::vector<ContactSequence> seqs;
  for (const json& steps : root.at("sequences")) {
    ContactSequence seq;
    for (const json& step : steps) {
      seq.steps.push_back({pose_from_json(step.at("left")), pose_from_json(step.at("right"))});
    }
    seqs.push_back(std::move(seq));
  }
  return seqs;
}

}  // namespace memmo
