#include "spinstrata/algebra.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace spinstrata {

Rational::Rational(long p, long q) : q_(p, q) {
    if (q == 0) throw std::domain_error("zero denominator");
    q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    q_ /= o.q_;
    return *this;
}

Rational Rational::parse(const std::string& s) {
    auto slash = s.find('/');
    mpq_class q;
    try {
        if (slash == std::string::npos) {
            q = mpq_class(mpz_class(s));
        } else {
            mpz_class n(s.substr(0, slash)), d(s.substr(slash + 1));
            if (d == 0) throw std::domain_error("zero denominator");
            q = mpq_class(n, d);
        }
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad rational: " + s);
    }
    q.canonicalize();
    return Rational(q);
}

std::string Rational::str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational pow(const Rational& base, unsigned e) {
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), base.raw().get_num_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), base.raw().get_den_mpz_t(), e);
    return Rational(mpq_class(n, d));
}

Rational factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

Rational binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return Rational(0);
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rational(b);
}

// ---- UniPoly

UniPoly::UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

UniPoly UniPoly::constant(const Rational& c) { return UniPoly({c}); }
UniPoly UniPoly::x() { return UniPoly({Rational(0), Rational(1)}); }

void UniPoly::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rational UniPoly::operator()(const Rational& at) const {
    Rational acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * at + *it;
    return acc;
}

UniPoly& UniPoly::operator+=(const UniPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

UniPoly& UniPoly::operator*=(const Rational& s) {
    for (auto& c : c_) c *= s;
    trim();
    return *this;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return UniPoly(std::move(out));
}

std::string UniPoly::str(const std::string& var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << c_[i].str() << ")";
        if (i == 1) os << "*" << var;
        if (i > 1) os << "*" << var << "^" << i;
    }
    return os.str();
}

UniPoly lagrange_interpolate(const std::vector<std::pair<Rational, Rational>>& points) {
    if (points.empty()) throw std::invalid_argument("no interpolation nodes");
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            if (points[i].first == points[j].first) throw std::invalid_argument("degenerate nodes");
    // Newton divided differences, then expand.
    std::size_t n = points.size();
    std::vector<Rational> dd(n);
    for (std::size_t i = 0; i < n; ++i) dd[i] = points[i].second;
    for (std::size_t lvl = 1; lvl < n; ++lvl)
        for (std::size_t i = n - 1; i >= lvl; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (points[i].first - points[i - lvl].first);
            if (i == lvl) break;
        }
    UniPoly acc = UniPoly::constant(dd[n - 1]);
    for (std::size_t i = n - 1; i-- > 0;) {
        acc = acc * UniPoly({-points[i].first, Rational(1)});
        acc += UniPoly::constant(dd[i]);
    }
    return acc;
}

// ---- RatMatrix

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols) {
    RatMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = rows[r][c];
    }
    return m;
}

std::vector<Rational> RatMatrix::row(std::size_t r) const {
    return {e_.begin() + static_cast<long>(r * cols_), e_.begin() + static_cast<long>((r + 1) * cols_)};
}

std::vector<Rational> RatMatrix::apply(const std::vector<Rational>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("dimension mismatch");
    std::vector<Rational> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            if (!at(r, c).is_zero() && !v[c].is_zero()) out[r] += at(r, c) * v[c];
    return out;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
    return t;
}

RatMatrix RatMatrix::rref(std::vector<std::size_t>* pivots) const {
    RatMatrix m = *this;
    std::vector<std::size_t> piv;
    std::size_t lead = 0;
    for (std::size_t c = 0; c < cols_ && lead < rows_; ++c) {
        std::size_t p = lead;
        while (p < rows_ && m.at(p, c).is_zero()) ++p;
        if (p == rows_) continue;
        if (p != lead)
            for (std::size_t k = 0; k < cols_; ++k) std::swap(m.at(p, k), m.at(lead, k));
        Rational inv = Rational(1) / m.at(lead, c);
        for (std::size_t k = c; k < cols_; ++k) m.at(lead, k) *= inv;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == lead || m.at(r, c).is_zero()) continue;
            Rational f = m.at(r, c);
            for (std::size_t k = c; k < cols_; ++k)
                if (!m.at(lead, k).is_zero()) m.at(r, k) -= f * m.at(lead, k);
        }
        piv.push_back(c);
        ++lead;
    }
    if (pivots) *pivots = piv;
    return m;
}

std::size_t RatMatrix::rank() const {
    std::vector<std::size_t> piv;
    rref(&piv);
    return piv.size();
}

std::vector<std::vector<Rational>> RatMatrix::kernel() const {
    std::vector<std::size_t> piv;
    RatMatrix r = rref(&piv);
    std::vector<bool> is_piv(cols_, false);
    for (auto p : piv) is_piv[p] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t f = 0; f < cols_; ++f) {
        if (is_piv[f]) continue;
        std::vector<Rational> v(cols_);
        v[f] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -r.at(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

SolveResult solve_rational_system(const RatMatrix& a, const std::vector<Rational>& b) {
    if (b.size() != a.rows()) throw std::invalid_argument("dimension mismatch");
    RatMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug.at(r, c) = a.at(r, c);
        aug.at(r, a.cols()) = b[r];
    }
    std::vector<std::size_t> piv;
    RatMatrix red = aug.rref(&piv);
    SolveResult res;
    if (!piv.empty() && piv.back() == a.cols()) {
        res.status = SolveResult::Status::NoSolution;
        return res;
    }
    res.solution.assign(a.cols(), Rational(0));
    for (std::size_t i = 0; i < piv.size(); ++i) res.solution[piv[i]] = red.at(i, a.cols());
    if (piv.size() == a.cols()) {
        res.status = SolveResult::Status::Unique;
    } else {
        res.status = SolveResult::Status::NonUnique;
        res.kernel = a.kernel();
    }
    return res;
}

std::uint64_t lcm_list(const std::vector<long>& values) {
    std::uint64_t acc = 1;
    for (long v : values) {
        if (v <= 0) throw std::invalid_argument("lcm_list: non-positive entry");
        acc = std::lcm(acc, static_cast<std::uint64_t>(v));
    }
    return acc;
}

}  // namespace spinstrata
