#include "mstat/lq_problem.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>
#include <utility>

namespace mstat {

namespace {

using nlohmann::json;

Dims dims_of(const Matrix& Q, const AffineBlock& g, const AffineBlock& h,
             const AffineBlock& G, const AffineBlock& H) {
  return {Q.rows(), g.rows(), h.rows(), G.rows()};
}

// Validates a block and gives empty ones a consistent 0 x n shape.
void check_block(AffineBlock& blk, Index n, const char* name) {
  if (blk.rows() == 0) {
    blk = AffineBlock::empty(n);
    return;
  }
  if (blk.A.cols() != n) {
    throw std::invalid_argument(std::string("block ") + name +
                                ": column count does not match n");
  }
  if (blk.b.size() != blk.rows()) {
    throw std::invalid_argument(std::string("block ") + name +
                                ": offset length does not match row count");
  }
}

// `where` names the enclosing object in error messages, e.g. "g.A".
Vector parse_vector(const json& j, const std::string& key,
                    const std::string& where, Index expected) {
  if (!j.contains(key)) {
    throw std::runtime_error("lq problem file: missing field '" + where + "'");
  }
  const auto& arr = j.at(key);
  if (!arr.is_array() || static_cast<Index>(arr.size()) != expected) {
    throw std::runtime_error("lq problem file: field '" + where + "' must be "
                             "an array of length " + std::to_string(expected));
  }
  Vector v(expected);
  for (Index i = 0; i < expected; ++i) {
    const auto& entry = arr.at(static_cast<std::size_t>(i));
    if (!entry.is_number()) {
      throw std::runtime_error("lq problem file: field '" + where +
                               "' entry " + std::to_string(i) +
                               " is not a number");
    }
    v(i) = entry.get<double>();
  }
  return v;
}

Matrix parse_matrix(const json& j, const std::string& key,
                    const std::string& where, Index rows, Index cols) {
  const Vector flat = parse_vector(j, key, where, rows * cols);
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = flat(r * cols + c);
  }
  return m;
}

AffineBlock parse_block(const json& j, const std::string& name, Index rows,
                        Index n) {
  if (!j.contains(name)) {
    throw std::runtime_error("lq problem file: missing block '" + name + "'");
  }
  const auto& blk = j.at(name);
  AffineBlock out;
  out.A = parse_matrix(blk, "A", name + ".A", rows, n);
  out.b = parse_vector(blk, "b", name + ".b", rows);
  return out;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json matrix_to_json(const Matrix& m) {
  json arr = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  }
  return arr;
}

json block_to_json(const AffineBlock& blk) {
  return json{{"A", matrix_to_json(blk.A)}, {"b", vector_to_json(blk.b)}};
}

}  // namespace

LinearQuadraticProblem::LinearQuadraticProblem(Matrix Q, Vector c, double c0,
                                               AffineBlock g, AffineBlock h,
                                               AffineBlock G, AffineBlock H)
    : MpccProblem(dims_of(Q, g, h, G, H), /*affine=*/true, /*quadratic=*/true),
      Q_(std::move(Q)),
      c_(std::move(c)),
      c0_(c0),
      g_(std::move(g)),
      h_(std::move(h)),
      G_(std::move(G)),
      H_(std::move(H)) {
  const Index n = Q_.rows();
  if (Q_.cols() != n) throw std::invalid_argument("Q must be square");
  if (c_.size() != n) throw std::invalid_argument("c length must equal n");
  check_block(g_, n, "g");
  check_block(h_, n, "h");
  check_block(G_, n, "G");
  check_block(H_, n, "H");
  if (G_.rows() != H_.rows()) {
    throw std::invalid_argument("G and H must have the same row count");
  }
}

double LinearQuadraticProblem::eval_f(const Vector& x) const {
  return 0.5 * x.dot(Q_ * x) + c_.dot(x) + c0_;
}

Vector LinearQuadraticProblem::grad_f(const Vector& x) const {
  return Q_ * x + c_;
}

Matrix LinearQuadraticProblem::hess_f(const Vector&) const { return Q_; }

std::shared_ptr<LinearQuadraticProblem> make_toy(double c) {
  if (!(c > 0.0)) {
    throw std::invalid_argument("toy problem requires c > 0");
  }
  const Index n = 3;
  Matrix Q = c * Matrix::Identity(n, n);
  Vector lin(n);
  lin << 1.0, 1.0, -1.0;

  AffineBlock g;
  g.A.resize(2, n);
  g.A << -4.0, 0.0, 1.0, 0.0, -4.0, 1.0;
  g.b = Vector::Zero(2);

  AffineBlock G;
  G.A = Matrix::Zero(1, n);
  G.A(0, 0) = 1.0;
  G.b = Vector::Zero(1);

  AffineBlock H;
  H.A = Matrix::Zero(1, n);
  H.A(0, 1) = 1.0;
  H.b = Vector::Zero(1);

  return std::make_shared<LinearQuadraticProblem>(
      std::move(Q), std::move(lin), 0.0, std::move(g), AffineBlock::empty(n),
      std::move(G), std::move(H));
}

std::shared_ptr<LinearQuadraticProblem> make_perturbed(double eps) {
  if (eps < 0.0) {
    throw std::invalid_argument("perturbed problem requires eps >= 0");
  }
  const Index n = 2;
  Matrix Q = Matrix::Identity(n, n);
  Vector lin(n);
  lin << -1.0, eps;  // 0.5 |x - (1, -eps)|^2 up to a constant
  const double c0 = 0.5 * (1.0 + eps * eps);

  AffineBlock G;
  G.A = Matrix::Zero(1, n);
  G.A(0, 0) = 1.0;
  G.b = Vector::Zero(1);

  AffineBlock H;
  H.A = Matrix::Zero(1, n);
  H.A(0, 1) = 1.0;
  H.b = Vector::Zero(1);

  return std::make_shared<LinearQuadraticProblem>(
      std::move(Q), std::move(lin), c0, AffineBlock::empty(n),
      AffineBlock::empty(n), std::move(G), std::move(H));
}

std::shared_ptr<LinearQuadraticProblem> make_obstacle(Index N) {
  if (N < 1) {
    throw std::invalid_argument("obstacle problem requires N >= 1");
  }
  const Index n = 3 * N;

  Matrix Q = Matrix::Zero(n, n);
  Q.topLeftCorner(N, N).setIdentity();
  Q.block(N, N, N, N).setIdentity();
  Vector lin = Vector::Zero(n);
  lin.head(N).setOnes();

  Matrix lap = Matrix::Zero(N, N);
  for (Index i = 0; i < N; ++i) {
    lap(i, i) = 2.0;
    if (i > 0) lap(i, i - 1) = -1.0;
    if (i + 1 < N) lap(i, i + 1) = -1.0;
  }

  AffineBlock g;  // -u <= 0
  g.A = Matrix::Zero(N, n);
  g.A.block(0, N, N, N) = -Matrix::Identity(N, N);
  g.b = Vector::Zero(N);

  AffineBlock h;  // A y - u + xi = 0
  h.A = Matrix::Zero(N, n);
  h.A.block(0, 0, N, N) = lap;
  h.A.block(0, N, N, N) = -Matrix::Identity(N, N);
  h.A.block(0, 2 * N, N, N) = Matrix::Identity(N, N);
  h.b = Vector::Zero(N);

  AffineBlock G;  // -y >= 0
  G.A = Matrix::Zero(N, n);
  G.A.block(0, 0, N, N) = -Matrix::Identity(N, N);
  G.b = Vector::Zero(N);

  AffineBlock H;  // xi >= 0
  H.A = Matrix::Zero(N, n);
  H.A.block(0, 2 * N, N, N) = Matrix::Identity(N, N);
  H.b = Vector::Zero(N);

  return std::make_shared<LinearQuadraticProblem>(
      std::move(Q), std::move(lin), 0.0, std::move(g), std::move(h),
      std::move(G), std::move(H));
}

std::shared_ptr<LinearQuadraticProblem> make_builtin(const std::string& name,
                                                     double param) {
  if (name == "toy") return make_toy(param);
  if (name == "perturbed") return make_perturbed(param);
  if (name == "obstacle") {
    const auto N = static_cast<Index>(param);
    if (static_cast<double>(N) != param) {
      throw std::invalid_argument("obstacle parameter must be an integer");
    }
    return make_obstacle(N);
  }
  throw std::invalid_argument("unknown builtin problem: " + name);
}

LoadedLqProblem load_lq_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open lq problem file: " + path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("lq problem file '" + path +
                             "': " + std::string(e.what()));
  }

  Index n = 0, l = 0, m = 0, p = 0;
  try {
    n = doc.at("n").get<Index>();
    l = doc.at("l").get<Index>();
    m = doc.at("m").get<Index>();
    p = doc.at("p").get<Index>();
  } catch (const json::exception& e) {
    throw std::runtime_error("lq problem file '" + path +
                             "': bad dimension fields: " + e.what());
  }
  if (n < 1 || l < 0 || m < 0 || p < 0) {
    throw std::runtime_error("lq problem file '" + path +
                             "': invalid dimensions");
  }

  Matrix Q = parse_matrix(doc, "Q", "Q", n, n);
  const Vector c = parse_vector(doc, "c", "c", n);
  if (!doc.contains("c0") || !doc.at("c0").is_number()) {
    throw std::runtime_error("lq problem file '" + path +
                             "': missing or non-numeric field 'c0'");
  }
  const double c0 = doc.at("c0").get<double>();

  LoadedLqProblem out;
  if (!Q.isApprox(Q.transpose(), 0.0)) {
    Q = 0.5 * (Q + Q.transpose()).eval();
    out.symmetrized_q = true;
  }

  const AffineBlock g = parse_block(doc, "g", l, n);
  const AffineBlock h = parse_block(doc, "h", m, n);
  const AffineBlock G = parse_block(doc, "G", p, n);
  const AffineBlock H = parse_block(doc, "H", p, n);

  out.problem = std::make_shared<LinearQuadraticProblem>(std::move(Q), c, c0,
                                                         g, h, G, H);
  return out;
}

void save_lq_problem(const LinearQuadraticProblem& problem,
                     const std::string& path) {
  const Dims& d = problem.dims();
  json doc;
  doc["n"] = d.n;
  doc["l"] = d.l;
  doc["m"] = d.m;
  doc["p"] = d.p;
  doc["Q"] = matrix_to_json(problem.quadratic_term());
  doc["c"] = vector_to_json(problem.linear_term());
  doc["c0"] = problem.constant_term();
  doc["g"] = block_to_json(problem.block_g());
  doc["h"] = block_to_json(problem.block_h());
  doc["G"] = block_to_json(problem.block_G());
  doc["H"] = block_to_json(problem.block_H());

  std::ofstream outfile(path);
  if (!outfile) {
    throw std::runtime_error("cannot write lq problem file: " + path);
  }
  outfile << doc.dump(1) << '\n';
}

}  // namespace mstat
