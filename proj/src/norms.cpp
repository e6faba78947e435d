#include "nwidths/norms.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nwidths/lp.hpp"

namespace nwidths {
namespace {

double lp_value(const Vec& y, double p) {
  if (y.size() == 0) return 0.0;
  const double m = y.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  if (p == kInf) return m;
  if (p == 1.0) return y.cwiseAbs().sum();
  if (p == 2.0) return y.norm();
  double s = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) s += abs_pow(std::abs(y(i)) / m, p);
  return m * abs_pow(s, 1.0 / p);
}

// Duality map for l_p: y -> z with ||z||_{p'} = 1, <y, z> = ||y||_p.
Vec lp_duality_map(const Vec& y, double p) {
  Vec z = Vec::Zero(y.size());
  const double ny = lp_value(y, p);
  if (ny == 0.0) return z;
  if (p == kInf) {
    Eigen::Index i = 0;
    y.cwiseAbs().maxCoeff(&i);
    z(i) = y(i) > 0 ? 1.0 : -1.0;
    return z;
  }
  if (p == 1.0) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      z(i) = y(i) > 0 ? 1.0 : (y(i) < 0 ? -1.0 : 0.0);
    }
    return z;
  }
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double a = std::abs(y(i)) / ny;
    z(i) = (y(i) >= 0 ? 1.0 : -1.0) * abs_pow(a, p - 1.0);
  }
  return z;
}

void check_dim(const Norm& n, const Vec& x) {
  if (x.size() != n.dim()) {
    throw std::invalid_argument("norm: dimension mismatch (expected " +
                                std::to_string(n.dim()) + ", got " +
                                std::to_string(x.size()) + ")");
  }
}

// Gauge of conv(facets) at phi and the maximizing primal point.
lp::Solution polytope_gauge(const Mat& facets, const Vec& phi) {
  const Vec cost = Vec::Ones(facets.rows());
  lp::Solution sol = lp::solve_standard_form(cost, facets.transpose(), phi);
  if (sol.status != lp::Status::Optimal) {
    throw std::runtime_error("polytope dual norm: facets do not span the dual space");
  }
  return sol;
}

}  // namespace

double conjugate_exponent(double p) {
  if (p == 1.0) return kInf;
  if (p == kInf) return 1.0;
  if (!(p > 1.0)) throw std::invalid_argument("conjugate_exponent: p must be >= 1");
  return p / (p - 1.0);
}

Norm Norm::lp(double p, int dim) { return scaled_lp(p, Vec::Ones(dim)); }

Norm Norm::weighted_lp(double p, const Vec& weights) {
  if ((weights.array() <= 0.0).any()) {
    throw std::invalid_argument("weighted_lp: weights must be positive");
  }
  Vec scale = weights;
  if (p != kInf) scale = weights.array().pow(1.0 / p).matrix();
  return scaled_lp(p, scale);
}

Norm Norm::scaled_lp(double p, const Vec& scale) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp norm: p must be in [1, inf]");
  if (scale.size() == 0) throw std::invalid_argument("lp norm: empty dimension");
  if ((scale.array() <= 0.0).any() || !scale.allFinite()) {
    throw std::invalid_argument("lp norm: scale entries must be positive and finite");
  }
  Norm n;
  n.kind_ = Kind::Lp;
  n.dim_ = static_cast<int>(scale.size());
  n.p_ = p;
  n.scale_ = scale;
  return n;
}

Norm Norm::polytope(const Mat& facets) {
  if (facets.rows() == 0 || facets.cols() == 0) {
    throw std::invalid_argument("polytope norm: empty facet set");
  }
  if (!facets.allFinite()) throw std::invalid_argument("polytope norm: non-finite facet");
  // Symmetry: every facet must have its negation in the set.
  for (Eigen::Index i = 0; i < facets.rows(); ++i) {
    bool found = false;
    for (Eigen::Index j = 0; j < facets.rows() && !found; ++j) {
      found = (facets.row(i) + facets.row(j)).cwiseAbs().maxCoeff() <=
              1e-12 * (1.0 + facets.row(i).cwiseAbs().maxCoeff());
    }
    if (!found) {
      throw std::invalid_argument("polytope norm: facet set is not closed under negation");
    }
  }
  Eigen::FullPivLU<Mat> lu(facets);
  if (lu.rank() < facets.cols()) {
    throw std::invalid_argument("polytope norm: facets do not span the dual space");
  }
  Norm n;
  n.kind_ = Kind::Polytope;
  n.dim_ = static_cast<int>(facets.cols());
  n.p_ = kInf;
  n.facets_ = facets;
  return n;
}

double Norm::value(const Vec& x) const {
  check_dim(*this, x);
  if (kind_ == Kind::Polytope) return std::max(0.0, (facets_ * x).maxCoeff());
  return lp_value(scale_.cwiseProduct(x), p_);
}

double Norm::dual_value(const Vec& phi) const {
  check_dim(*this, phi);
  if (kind_ == Kind::Polytope) {
    if (phi.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    return polytope_gauge(facets_, phi).objective;
  }
  return lp_value(phi.cwiseQuotient(scale_), conjugate_exponent(p_));
}

Vec Norm::norming_functional(const Vec& x) const {
  check_dim(*this, x);
  if (kind_ == Kind::Polytope) {
    if (x.cwiseAbs().maxCoeff() == 0.0) return Vec::Zero(dim_);
    Eigen::Index i = 0;
    (facets_ * x).maxCoeff(&i);
    return facets_.row(i).transpose();
  }
  return lp_duality_map(scale_.cwiseProduct(x), p_).cwiseProduct(scale_);
}

Vec Norm::dual_norming_vector(const Vec& phi) const {
  check_dim(*this, phi);
  if (phi.cwiseAbs().maxCoeff() == 0.0) return Vec::Zero(dim_);
  if (kind_ == Kind::Polytope) return polytope_gauge(facets_, phi).dual;
  const Vec g = phi.cwiseQuotient(scale_);
  return lp_duality_map(g, conjugate_exponent(p_)).cwiseQuotient(scale_);
}

Norm Norm::dual() const {
  if (kind_ == Kind::Polytope) {
    throw std::logic_error("dual(): polytope duals are handled through the facet LP");
  }
  return scaled_lp(conjugate_exponent(p_), scale_.cwiseInverse());
}

Mat Norm::polytope_facets() const {
  if (kind_ == Kind::Polytope) return facets_;
  if (p_ == kInf) {
    Mat f = Mat::Zero(2 * dim_, dim_);
    for (int i = 0; i < dim_; ++i) {
      f(2 * i, i) = scale_(i);
      f(2 * i + 1, i) = -scale_(i);
    }
    return f;
  }
  if (p_ == 1.0) {
    if (dim_ > 20) throw std::invalid_argument("l1 facet enumeration: dimension too large");
    const long count = 1L << dim_;
    Mat f(count, dim_);
    for (long s = 0; s < count; ++s) {
      for (int i = 0; i < dim_; ++i) f(s, i) = ((s >> i) & 1L) ? -scale_(i) : scale_(i);
    }
    return f;
  }
  throw std::logic_error("polytope_facets(): smooth l_p norm has no facets");
}

double Norm::euclidean_lower_constant() const { return euclidean_lower_constant(dim_); }

double Norm::euclidean_lower_constant(int k) const {
  if (k < 1 || k > dim_) throw std::invalid_argument("euclidean_lower_constant: bad k");
  if (kind_ == Kind::Polytope) {
    double r = 0.0;
    for (int i = 0; i < k; ++i) r = std::max(r, dual_value(Vec::Unit(dim_, i)));
    return 1.0 / (std::sqrt(static_cast<double>(k)) * r);
  }
  const double smin = scale_.head(k).minCoeff();
  if (p_ <= 2.0) return smin;
  const double e = (p_ == kInf) ? -0.5 : 1.0 / p_ - 0.5;
  return smin * std::pow(static_cast<double>(k), e);
}

double Norm::box_radius() const {
  if (kind_ == Kind::Lp) return scale_.cwiseInverse().maxCoeff();
  double r = 0.0;
  for (int i = 0; i < dim_; ++i) r = std::max(r, dual_value(Vec::Unit(dim_, i)));
  return r;
}

std::string Norm::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::Polytope) {
    os << "polytope(d=" << dim_ << ", facets=" << facets_.rows() << ")";
  } else {
    os << "lp(p=" << (p_ == kInf ? std::string("inf") : std::to_string(p_)) << ", d=" << dim_
       << ")";
  }
  return os.str();
}

}  // namespace nwidths
