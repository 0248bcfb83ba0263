#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spinstrata {

class Rational {
public:
    Rational() = default;
    Rational(long v) : q_(v) {}
    Rational(int v) : q_(v) {}
    Rational(long p, long q);
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }
    explicit Rational(const mpz_class& z) : q_(z) {}

    static Rational parse(const std::string& s);
    std::string str() const;

    const mpq_class& raw() const { return q_; }
    mpz_class num() const { return q_.get_num(); }
    mpz_class den() const { return q_.get_den(); }
    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const { return Rational(mpq_class(-q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

private:
    mpq_class q_;
};

Rational pow(const Rational& base, unsigned e);
Rational factorial(unsigned n);
Rational binomial(long n, long k);

// Ascending coefficients, no trailing zeros.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs);
    static UniPoly constant(const Rational& c);
    static UniPoly x();

    const std::vector<Rational>& coeffs() const { return c_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    Rational operator()(const Rational& at) const;
    Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }

    UniPoly& operator+=(const UniPoly& o);
    UniPoly& operator*=(const Rational& s);
    friend UniPoly operator+(UniPoly a, const UniPoly& b) { return a += b; }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

    std::string str(const std::string& var = "r") const;

private:
    void trim();
    std::vector<Rational> c_;
};

UniPoly lagrange_interpolate(const std::vector<std::pair<Rational, Rational>>& points);

class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}
    static RatMatrix identity(std::size_t n);
    static RatMatrix from_rows(const std::vector<std::vector<Rational>>& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Rational& at(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }
    std::vector<Rational> row(std::size_t r) const;
    std::vector<Rational> apply(const std::vector<Rational>& v) const;
    RatMatrix transpose() const;

    std::size_t rank() const;
    // Reduced row echelon form; pivots receives the pivot column of each nonzero row.
    RatMatrix rref(std::vector<std::size_t>* pivots = nullptr) const;
    // Basis of {x : A x = 0}.
    std::vector<std::vector<Rational>> kernel() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> e_;
};

struct SolveResult {
    enum class Status { Unique, NoSolution, NonUnique };
    Status status = Status::NoSolution;
    std::vector<Rational> solution;              // unique solution, or a particular one when NonUnique
    std::vector<std::vector<Rational>> kernel;   // filled when NonUnique
};

SolveResult solve_rational_system(const RatMatrix& a, const std::vector<Rational>& b);

std::uint64_t lcm_list(const std::vector<long>& values);

}  // namespace spinstrata
