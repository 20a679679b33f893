#include "nplab/mpoly.hpp"

#include <sstream>

#include "nplab/error.hpp"

namespace nplab {

static u64 norm(long c, u64 p) {
  long r = c % (long)p;
  return r < 0 ? (u64)(r + (long)p) : (u64)r;
}

MPoly MPoly::constant(u64 p, int nvars, long c) {
  MPoly r(p, nvars);
  r.add_term(Exps(nvars, 0), norm(c, p));
  return r;
}

MPoly MPoly::var(u64 p, int nvars, int i, int power) {
  Exps e(nvars, 0);
  e[i] = power;
  return monomial(p, e, 1);
}

MPoly MPoly::monomial(u64 p, const Exps& e, long c) {
  MPoly r(p, (int)e.size());
  r.add_term(e, norm(c, p));
  return r;
}

void MPoly::add_term(const Exps& e, u64 c) {
  if (!c) return;
  auto it = t_.find(e);
  if (it == t_.end()) {
    t_.emplace(e, c);
    return;
  }
  it->second = (it->second + c) % p_;
  if (!it->second) t_.erase(it);
}

int MPoly::total_degree() const {
  if (literal()) return lit_ ? 0 : -1;
  int d = -1;
  for (const auto& [e, c] : t_) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

int MPoly::degree_in(int v) const {
  int d = 0;
  for (const auto& [e, c] : t_) d = std::max(d, e[v]);
  return d;
}

u64 MPoly::coeff(const Exps& e) const {
  auto it = t_.find(e);
  return it == t_.end() ? 0 : it->second;
}

bool MPoly::homogeneous(const std::vector<std::vector<long>>& grading, std::vector<long>* grade) const {
  bool first = true;
  std::vector<long> g0;
  for (const auto& [e, c] : t_) {
    std::vector<long> g(grading.empty() ? 0 : grading[0].size(), 0);
    for (int v = 0; v < nvars_; ++v)
      for (size_t j = 0; j < g.size(); ++j) g[j] += e[v] * grading[v][j];
    if (first) {
      g0 = g;
      first = false;
    } else if (g != g0) {
      return false;
    }
  }
  if (grade) *grade = g0;
  return true;
}

void MPoly::adopt(const MPoly& o) {
  p_ = o.p_;
  nvars_ = o.nvars_;
  long c = lit_;
  t_.clear();
  add_term(Exps(nvars_, 0), norm(c, p_));
}

static void check_same(const MPoly& a, const MPoly& b) {
  if (a.p() != b.p() || a.nvars() != b.nvars()) throw Error(ErrorCode::MixedModulus, "polynomial rings differ");
}

MPoly& MPoly::operator+=(const MPoly& o) {
  if (o.literal()) {
    if (literal()) {
      lit_ += o.lit_;
    } else {
      add_term(Exps(nvars_, 0), norm(o.lit_, p_));
    }
    return *this;
  }
  if (literal()) adopt(o);
  check_same(*this, o);
  for (const auto& [e, c] : o.t_) add_term(e, c);
  return *this;
}

MPoly MPoly::operator-() const {
  if (literal()) return MPoly(-lit_);
  MPoly r(p_, nvars_);
  for (const auto& [e, c] : t_) r.t_.emplace(e, p_ - c);
  return r;
}

MPoly& MPoly::operator-=(const MPoly& o) { return *this += -o; }

MPoly& MPoly::operator*=(const MPoly& o) {
  if (o.literal()) {
    if (literal()) {
      lit_ *= o.lit_;
      return *this;
    }
    return *this = scale(norm(o.lit_, p_));
  }
  if (literal()) {
    long c = lit_;
    return *this = o.scale(norm(c, o.p_));
  }
  check_same(*this, o);
  MPoly r(p_, nvars_);
  Exps e(nvars_);
  for (const auto& [ea, ca] : t_)
    for (const auto& [eb, cb] : o.t_) {
      for (int v = 0; v < nvars_; ++v) e[v] = ea[v] + eb[v];
      r.add_term(e, mulmod(ca, cb, p_));
    }
  return *this = std::move(r);
}

bool operator==(const MPoly& a, const MPoly& b) {
  if (a.literal() && b.literal()) return a.lit_ == b.lit_;
  return (a - b).is_zero();
}

MPoly MPoly::pow(int e) const {
  MPoly r(1), b = *this;
  while (e) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

MPoly MPoly::scale(u64 c) const {
  if (literal()) return MPoly(lit_ * (long)c);
  MPoly r(p_, nvars_);
  c %= p_;
  if (!c) return r;
  for (const auto& [e, x] : t_) r.t_.emplace(e, mulmod(x, c, p_));
  return r;
}

MPoly MPoly::rename(const std::vector<int>& target, int new_nvars) const {
  if (literal()) return *this;
  MPoly r(p_, new_nvars);
  for (const auto& [e, c] : t_) {
    Exps ne(new_nvars, 0);
    bool keep = true;
    for (int v = 0; v < nvars_; ++v) {
      if (!e[v]) continue;
      if (target[v] < 0) {
        keep = false;
        break;
      }
      ne[target[v]] += e[v];
    }
    if (keep) r.add_term(ne, c);
  }
  return r;
}

std::string MPoly::str(const std::vector<std::string>& names) const {
  if (literal()) return std::to_string(lit_);
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // highest terms first reads better
  for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    bool any = false;
    std::ostringstream mon;
    for (int v = 0; v < nvars_; ++v) {
      if (!it->first[v]) continue;
      if (any) mon << "*";
      any = true;
      mon << (v < (int)names.size() ? names[v] : "x" + std::to_string(v + 1));
      if (it->first[v] > 1) mon << "^" << it->first[v];
    }
    if (!any) {
      os << it->second;
    } else if (it->second == 1) {
      os << mon.str();
    } else {
      os << it->second << "*" << mon.str();
    }
  }
  return os.str();
}

}  // namespace nplab
