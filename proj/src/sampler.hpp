#pragma once

#include <cstddef>

#include "tomokit/grid.hpp"

namespace tomokit::detail {

// Hot-loop multilinear evaluation of a real field; zero outside the box.
class Sampler {
public:
    explicit Sampler(const ScalarField& f) : v_(f.values.data()), dim_(f.geometry.dim) {
        const Geometry& g = f.geometry;
        for (int a = 0; a < 3; ++a) {
            n_[a] = g.shape[a];
            o_[a] = g.origin[a];
            ih_[a] = 1.0 / g.spacing[a];
            top_[a] = static_cast<double>(g.shape[a] - 1);
        }
        s0_ = n_[1] * n_[2];
        s1_ = n_[2];
    }

    double operator()(double x, double y = 0.0, double z = 0.0) const {
        if (dim_ == 2) return eval2(x, y);
        if (dim_ == 3) return eval3(x, y, z);
        return eval1(x);
    }
    double operator()(const Vec3& p) const { return (*this)(p[0], p[1], p[2]); }

    double eval1(double x) const {
        double u = (x - o_[0]) * ih_[0];
        if (!(u >= 0.0 && u <= top_[0])) return 0.0;
        std::size_t i = locate(u, 0);
        double t = u - static_cast<double>(i);
        return (1 - t) * v_[i] + t * v_[i + 1];
    }

    double eval2(double x, double y) const {
        double u = (x - o_[0]) * ih_[0];
        double w = (y - o_[1]) * ih_[1];
        if (!(u >= 0.0 && u <= top_[0] && w >= 0.0 && w <= top_[1])) return 0.0;
        std::size_t i = locate(u, 0), j = locate(w, 1);
        double tu = u - static_cast<double>(i), tw = w - static_cast<double>(j);
        const double* p = v_ + i * s0_ + j;
        double a = (1 - tw) * p[0] + tw * p[1];
        double b = (1 - tw) * p[s0_] + tw * p[s0_ + 1];
        return (1 - tu) * a + tu * b;
    }

    double eval3(double x, double y, double z) const {
        double u = (x - o_[0]) * ih_[0];
        double w = (y - o_[1]) * ih_[1];
        double s = (z - o_[2]) * ih_[2];
        if (!(u >= 0.0 && u <= top_[0] && w >= 0.0 && w <= top_[1] && s >= 0.0 && s <= top_[2])) return 0.0;
        std::size_t i = locate(u, 0), j = locate(w, 1), k = locate(s, 2);
        double tu = u - static_cast<double>(i), tw = w - static_cast<double>(j), ts = s - static_cast<double>(k);
        const double* p = v_ + i * s0_ + j * s1_ + k;
        auto edge = [&](const double* q) { return (1 - ts) * q[0] + ts * q[1]; };
        double a = (1 - tw) * edge(p) + tw * edge(p + s1_);
        double b = (1 - tw) * edge(p + s0_) + tw * edge(p + s0_ + s1_);
        return (1 - tu) * a + tu * b;
    }

private:
    std::size_t locate(double u, int a) const {
        auto i = static_cast<std::size_t>(u);
        return i >= n_[a] - 1 ? n_[a] - 2 : i;
    }

    const double* v_;
    int dim_;
    std::size_t n_[3];
    double o_[3], ih_[3], top_[3];
    std::size_t s0_, s1_;
};

}  // namespace tomokit::detail
