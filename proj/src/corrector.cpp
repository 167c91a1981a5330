#include "bt/corrector.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <atomic>
#include <memory>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <thread>

#include "bt/errors.hpp"

namespace bt {

namespace {

using Trip = Eigen::Triplet<double>;

// Lagrange basis on nodes i/ncol, values and derivatives at x.
void lagrange(int ncol, double x, Eigen::RowVectorXd& val, Eigen::RowVectorXd& der) {
    const int m = ncol + 1;
    val.resize(m);
    der.resize(m);
    for (int i = 0; i < m; ++i) {
        const double xi = double(i) / ncol;
        double v = 1, d = 0;
        for (int k = 0; k < m; ++k) {
            if (k == i) continue;
            const double xk = double(k) / ncol, den = xi - xk;
            d = d * (x - xk) / den + v / den;
            v *= (x - xk) / den;
        }
        val[i] = v;
        der[i] = d;
    }
}

// Orthonormal Q whose first columns span the eigenvectors selected by pick.
Mat invariant_basis(const Mat& A, bool unstable, int& count) {
    Eigen::EigenSolver<Mat> es(A);
    const auto& lam = es.eigenvalues();
    const auto& V = es.eigenvectors();
    const int n = A.rows();
    Mat B(n, 0);
    for (int i = 0; i < n; ++i) {
        double re = lam[i].real();
        if ((re > 0) != unstable || re == 0) continue;
        if (lam[i].imag() < 0) continue;  // conjugate handled with its partner
        if (lam[i].imag() == 0) {
            B.conservativeResize(n, B.cols() + 1);
            B.col(B.cols() - 1) = V.col(i).real();
        } else {
            B.conservativeResize(n, B.cols() + 2);
            B.col(B.cols() - 2) = V.col(i).real();
            B.col(B.cols() - 1) = V.col(i).imag();
        }
    }
    count = B.cols();
    if (count == 0) return Mat::Identity(n, n);
    Eigen::HouseholderQR<Mat> qr(B);
    return qr.householderQ() * Mat::Identity(n, n);
}

// T22 Y - Y T11 + T21 - Y T12 Y with T = Q^T A Q split after m rows.
Mat riccati(const Mat& Q, int m, const Mat& Y, const Mat& A) {
    const int n = A.rows(), r = n - m;
    Mat T = Q.transpose() * A * Q;
    Mat T11 = T.topLeftCorner(m, m), T12 = T.topRightCorner(m, r), T21 = T.bottomLeftCorner(r, m),
        T22 = T.bottomRightCorner(r, r);
    return T22 * Y - Y * T11 + T21 - Y * T12 * Y;
}

Mat perp_basis(const Mat& Q, int m, const Mat& Y) {
    const int n = Q.rows(), r = n - m;
    Mat M(n, r);
    M.topRows(m) = -Y.transpose();
    M.bottomRows(r) = Mat::Identity(r, r);
    return Q * M;
}

struct View {
    const HomBvp& p;
    const Vec& z;
    Eigen::Map<const Vec> x(int i) const { return Eigen::Map<const Vec>(z.data() + p.ix(i), p.n); }
    Vec s0() const { return z.segment(p.is0(), p.n); }
    Vec2 alpha() const { return z.segment<2>(p.ialpha()); }
    Mat YU() const { return Eigen::Map<const Mat>(z.data() + p.iYU(), p.nS, p.nU); }
    Mat YS() const { return Eigen::Map<const Mat>(z.data() + p.iYS(), p.nU, p.nS); }
    double eps(int k) const { return z[p.ieps() + k]; }
    Vec xg(int j, int c) const {
        Vec v = Vec::Zero(p.n);
        for (int i = 0; i <= p.mesh.ncol; ++i) v += p.Lv(c, i) * x(j * p.mesh.ncol + i);
        return v;
    }
    Vec dxg(int j, int c) const {
        Vec v = Vec::Zero(p.n);
        for (int i = 0; i <= p.mesh.ncol; ++i) v += p.Ld(c, i) * x(j * p.mesh.ncol + i);
        return v * p.mesh.ntst;
    }
};

void check_size(const HomBvp& p, const Vec& z) {
    if (z.size() != p.unknowns())
        throw std::invalid_argument("unknown vector has size " + std::to_string(z.size()) + ", expected " +
                                    std::to_string(p.unknowns()));
}

double max_norm(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

HomBvp build_bvp(const OdeModel& model, const HomPredictor& pred) {
    HomBvp p;
    p.model = model;
    p.mesh = pred.mesh;
    p.n = model.dim;
    p.T = pred.T;
    const int nc = p.mesh.ncol, nt = p.mesh.ntst;
    if (int(pred.orbit.size()) != p.mesh.npoints()) throw std::invalid_argument("predictor does not match its mesh");
    p.Lv.resize(nc, nc + 1);
    p.Ld.resize(nc, nc + 1);
    for (int c = 0; c < nc; ++c) {
        Eigen::RowVectorXd lv, ld;
        lagrange(nc, p.mesh.gauss[c], lv, ld);
        p.Lv.row(c) = lv;
        p.Ld.row(c) = ld;
    }

    Mat A = jacobian_x(model, pred.s0, pred.alpha);
    p.Q0 = invariant_basis(A, true, p.nU);
    p.QS0 = invariant_basis(A, false, p.nS);
    if (p.nU + p.nS != p.n || p.nU == 0 || p.nS == 0)
        throw NumericError("predicted saddle is not hyperbolic with both stable and unstable directions");

    p.ref_g.clear();
    p.ref_dot_g.clear();
    for (int j = 0; j < nt; ++j)
        for (int c = 0; c < nc; ++c) {
            Vec v = Vec::Zero(p.n), d = Vec::Zero(p.n);
            for (int i = 0; i <= nc; ++i) {
                v += p.Lv(c, i) * pred.orbit[j * nc + i];
                d += p.Ld(c, i) * pred.orbit[j * nc + i];
            }
            p.ref_g.push_back(v);
            p.ref_dot_g.push_back(d * nt);
        }
    return p;
}

Vec predictor_unknowns(const HomBvp& p, const HomPredictor& pred) {
    Vec z = Vec::Zero(p.unknowns());
    for (int i = 0; i < p.npts(); ++i) z.segment(p.ix(i), p.n) = pred.orbit[i];
    z.segment(p.is0(), p.n) = pred.s0;
    z.segment<2>(p.ialpha()) = pred.alpha;
    z[p.ieps()] = pred.eps0;
    z[p.ieps() + 1] = pred.eps1;
    return z;
}

std::vector<Vec> bvp_orbit(const HomBvp& p, const Vec& z) {
    check_size(p, z);
    std::vector<Vec> o(p.npts());
    for (int i = 0; i < p.npts(); ++i) o[i] = z.segment(p.ix(i), p.n);
    return o;
}

Vec2 bvp_alpha(const HomBvp& p, const Vec& z) { return z.segment<2>(p.ialpha()); }
Vec bvp_saddle(const HomBvp& p, const Vec& z) { return z.segment(p.is0(), p.n); }

Vec bvp_residual(const HomBvp& p, const Vec& z) {
    check_size(p, z);
    View v{p, z};
    const int n = p.n, nc = p.mesh.ncol, nt = p.mesh.ntst, N = p.npts() - 1;
    const Vec2 al = v.alpha();
    const Vec s0 = v.s0();
    Vec F(p.equations());
    int r = 0;
    for (int j = 0; j < nt; ++j)
        for (int c = 0; c < nc; ++c, r += n) F.segment(r, n) = v.dxg(j, c) - 2 * p.T * eval_rhs(p.model, v.xg(j, c), al);
    F.segment(r, n) = eval_rhs(p.model, s0, al);
    r += n;
    double ph = 0;
    for (int j = 0; j < nt; ++j)
        for (int c = 0; c < nc; ++c)
            ph += p.mesh.gauss_w[c] / nt * p.ref_dot_g[j * nc + c].dot(v.xg(j, c) - p.ref_g[j * nc + c]);
    F[r++] = ph;
    const Mat YU = v.YU(), YS = v.YS();
    const Vec r0 = v.x(0) - s0, r1 = v.x(N) - s0;
    F.segment(r, p.nS) = perp_basis(p.Q0, p.nU, YU).transpose() * r0;
    r += p.nS;
    F.segment(r, p.nU) = perp_basis(p.QS0, p.nS, YS).transpose() * r1;
    r += p.nU;
    const Mat A = jacobian_x(p.model, s0, al);
    Mat RU = riccati(p.Q0, p.nU, YU, A), RS = riccati(p.QS0, p.nS, YS, A);
    F.segment(r, RU.size()) = Eigen::Map<const Vec>(RU.data(), RU.size());
    r += RU.size();
    F.segment(r, RS.size()) = Eigen::Map<const Vec>(RS.data(), RS.size());
    r += RS.size();
    F[r++] = r0.norm() - v.eps(0);
    F[r++] = r1.norm() - v.eps(1);
    return F;
}

SpMat bvp_jacobian(const HomBvp& p, const Vec& z) {
    check_size(p, z);
    View v{p, z};
    const int n = p.n, nc = p.mesh.ncol, nt = p.mesh.ntst, N = p.npts() - 1;
    const Vec2 al = v.alpha();
    const Vec s0 = v.s0();
    std::vector<Trip> t;
    t.reserve(size_t(nt) * nc * n * (n * (nc + 1) + 2) + 64 * n * n);
    auto block = [&](int r0, int c0, const Mat& M) {
        for (int j = 0; j < M.cols(); ++j)
            for (int i = 0; i < M.rows(); ++i)
                if (M(i, j) != 0) t.emplace_back(r0 + i, c0 + j, M(i, j));
    };
    int r = 0;
    const Mat I = Mat::Identity(n, n);
    for (int j = 0; j < nt; ++j)
        for (int c = 0; c < nc; ++c, r += n) {
            Vec xg = v.xg(j, c);
            Mat Ax = jacobian_x(p.model, xg, al), Aa = jacobian_alpha(p.model, xg, al);
            for (int i = 0; i <= nc; ++i) block(r, p.ix(j * nc + i), p.Ld(c, i) * nt * I - 2 * p.T * p.Lv(c, i) * Ax);
            block(r, p.ialpha(), -2 * p.T * Aa);
        }
    const Mat A0 = jacobian_x(p.model, s0, al);
    block(r, p.is0(), A0);
    block(r, p.ialpha(), jacobian_alpha(p.model, s0, al));
    r += n;
    {
        Vec row = Vec::Zero(p.npts() * n);
        for (int j = 0; j < nt; ++j)
            for (int c = 0; c < nc; ++c)
                for (int i = 0; i <= nc; ++i)
                    row.segment((j * nc + i) * n, n) += p.mesh.gauss_w[c] / nt * p.Lv(c, i) * p.ref_dot_g[j * nc + c];
        for (int k = 0; k < row.size(); ++k)
            if (row[k] != 0) t.emplace_back(r, k, row[k]);
        ++r;
    }
    const Mat YU = v.YU(), YS = v.YS();
    const Vec r0 = v.x(0) - s0, r1 = v.x(N) - s0;
    {
        Mat P = perp_basis(p.Q0, p.nU, YU).transpose();
        block(r, p.ix(0), P);
        block(r, p.is0(), -P);
        Vec q = (p.Q0.transpose() * r0).head(p.nU);
        for (int l = 0; l < p.nU; ++l)
            for (int k = 0; k < p.nS; ++k) t.emplace_back(r + k, p.iYU() + l * p.nS + k, -q[l]);
        r += p.nS;
    }
    {
        Mat P = perp_basis(p.QS0, p.nS, YS).transpose();
        block(r, p.ix(N), P);
        block(r, p.is0(), -P);
        Vec q = (p.QS0.transpose() * r1).head(p.nS);
        for (int l = 0; l < p.nS; ++l)
            for (int k = 0; k < p.nU; ++k) t.emplace_back(r + k, p.iYS() + l * p.nU + k, -q[l]);
        r += p.nU;
    }
    // Riccati rows: analytic in Y, central differences in (s0, alpha)
    auto ric_rows = [&](const Mat& Q, int m, const Mat& Y, int iY) {
        const int rows = Y.size();
        Mat T = Q.transpose() * A0 * Q;
        const int rr = n - m;
        Mat T11 = T.topLeftCorner(m, m), T12 = T.topRightCorner(m, rr), T22 = T.bottomRightCorner(rr, rr);
        for (int l = 0; l < m; ++l)
            for (int k = 0; k < rr; ++k) {
                Mat E = Mat::Zero(rr, m);
                E(k, l) = 1;
                Mat D = T22 * E - E * T11 - E * T12 * Y - Y * T12 * E;
                for (int q = 0; q < rows; ++q)
                    if (D.data()[q] != 0) t.emplace_back(r + q, iY + l * rr + k, D.data()[q]);
            }
        for (int k = 0; k < n + 2; ++k) {
            Vec sp = s0, sm = s0;
            Vec2 ap = al, am = al;
            double h;
            if (k < n) {
                h = 1e-4 * (1 + std::abs(s0[k]));
                sp[k] += h;
                sm[k] -= h;
            } else {
                h = 1e-4 * (1 + std::abs(al[k - n]));
                ap[k - n] += h;
                am[k - n] -= h;
            }
            Mat D = (riccati(Q, m, Y, jacobian_x(p.model, sp, ap)) - riccati(Q, m, Y, jacobian_x(p.model, sm, am))) /
                    (2 * h);
            int col = k < n ? p.is0() + k : p.ialpha() + k - n;
            for (int q = 0; q < rows; ++q)
                if (D.data()[q] != 0) t.emplace_back(r + q, col, D.data()[q]);
        }
        r += rows;
    };
    ric_rows(p.Q0, p.nU, YU, p.iYU());
    ric_rows(p.QS0, p.nS, YS, p.iYS());
    for (int e = 0; e < 2; ++e, ++r) {
        const Vec& d = e == 0 ? r0 : r1;
        const int pt = e == 0 ? 0 : N;
        double nd = d.norm();
        if (nd > 0) {
            block(r, p.ix(pt), (d / nd).transpose());
            block(r, p.is0(), -(d / nd).transpose());
        }
        t.emplace_back(r, p.ieps() + e, -1.0);
    }
    SpMat J(p.equations(), p.unknowns());
    J.setFromTriplets(t.begin(), t.end());
    return J;
}

namespace {

// [J; c^T] as a square sparse matrix.
SpMat bordered(const SpMat& J, const Vec& c) {
    std::vector<Trip> t;
    t.reserve(J.nonZeros() + c.size());
    for (int k = 0; k < J.outerSize(); ++k)
        for (SpMat::InnerIterator it(J, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    for (int k = 0; k < c.size(); ++k)
        if (c[k] != 0) t.emplace_back(J.rows(), k, c[k]);
    SpMat M(J.cols(), J.cols());
    M.setFromTriplets(t.begin(), t.end());
    return M;
}

struct Factor {
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    bool ok = false;
    Factor(const SpMat& M) {
        lu.analyzePattern(M);
        lu.factorize(M);
        ok = lu.info() == Eigen::Success;
    }
};

Vec null_vector(const SpMat& J, const Vec& c, Factor*& out, std::unique_ptr<Factor>& hold) {
    hold = std::make_unique<Factor>(bordered(J, c));
    out = hold.get();
    if (!hold->ok) throw NoConvergence("singular bordered Jacobian");
    Vec rhs = Vec::Zero(J.cols());
    rhs[J.rows()] = 1;
    Vec v = hold->lu.solve(rhs);
    if (!v.allFinite()) throw NoConvergence("non-finite null vector");
    return v.normalized();
}

}  // namespace

NewtonResult newton_correct(const HomBvp& p, const Vec& z0, const NewtonOptions& o) {
    check_size(p, z0);
    NewtonResult res;
    Vec z = z0;
    Vec F = bvp_residual(p, z);
    double fn = max_norm(F);
    if (!std::isfinite(fn)) throw NoConvergence("non-finite residual at the initial guess");
    // initial border: the alpha1 direction, falling back to alpha2
    Vec c = Vec::Zero(p.unknowns());
    c[p.ialpha()] = 1;
    Vec tangent;
    for (int it = 1; it <= o.max_iter; ++it) {
        SpMat J = bvp_jacobian(p, z);
        std::unique_ptr<Factor> hold;
        Factor* fac = nullptr;
        try {
            tangent = null_vector(J, c, fac, hold);
        } catch (const NoConvergence&) {
            if (it > 1) throw;
            c.setZero();
            c[p.ialpha() + 1] = 1;
            tangent = null_vector(J, c, fac, hold);
        }
        // step orthogonal to the current null vector
        Factor step(bordered(J, tangent));
        if (!step.ok) throw NoConvergence("singular Moore-Penrose system");
        Vec rhs(p.unknowns());
        rhs.head(F.size()) = -F;
        rhs[F.size()] = 0;
        Vec dz = step.lu.solve(rhs);
        if (!dz.allFinite()) throw NoConvergence("non-finite Newton step");
        double lam = 1;
        Vec zn = z + dz, Fn = bvp_residual(p, zn);
        double fnn = max_norm(Fn);
        while (!(fnn < fn) && lam > 1.0 / 64 && fn > o.tol) {
            lam /= 2;
            zn = z + lam * dz;
            Fn = bvp_residual(p, zn);
            fnn = max_norm(Fn);
        }
        z = zn;
        F = Fn;
        fn = fnn;
        c = tangent;
        res.iterations = it;
        if (fn <= o.tol && lam == 1) {
            SpMat Jf = bvp_jacobian(p, z);
            std::unique_ptr<Factor> h2;
            Factor* f2 = nullptr;
            res.tangent = null_vector(Jf, tangent, f2, h2);
            res.z = z;
            res.residual = fn;
            return res;
        }
        if (!std::isfinite(fn)) break;
    }
    char msg[96];
    std::snprintf(msg, sizeof msg, "Newton did not reach residual %.1e (last %.3e)", o.tol, fn);
    throw NoConvergence(msg);
}

Vec oriented_tangent(const HomBvp& p, const NewtonResult& r, const CmExpansion& cm, const PredictorOptions& opt,
                     double eps) {
    int s = tangent_orientation(r.tangent[p.ialpha()], cm, opt, eps);
    return s * r.tangent;
}

HomSolution predict_and_correct(const OdeModel& model, const CmExpansion& cm, const PredictorOptions& opt,
                                const AutoCorrectOptions& ao) {
    double eps = ao.eps;
    std::string last;
    for (int tries = 0; tries < ao.max_tries; ++tries, eps /= 2) {
        try {
            HomSolution s;
            s.predictor = sample_predictor(cm, opt, eps, ao.mesh, ao.k_factor * eps);
            s.bvp = build_bvp(model, s.predictor);
            s.newton = newton_correct(s.bvp, predictor_unknowns(s.bvp, s.predictor), ao.newton);
            s.tangent = oriented_tangent(s.bvp, s.newton, cm, opt, eps);
            s.halvings = tries;
            return s;
        } catch (const NumericError& e) {
            last = e.what();
        } catch (const DomainError& e) {
            last = e.what();
        } catch (const std::invalid_argument& e) {
            last = e.what();
        }
    }
    throw NoConvergence("no eps in the retry sequence was corrected: " + last);
}

double relative_orbit_error(const std::vector<Vec>& pred, const std::vector<Vec>& corr) {
    if (pred.size() != corr.size()) throw std::invalid_argument("orbit sizes differ");
    double num = 0, den = 0;
    for (size_t i = 0; i < pred.size(); ++i) {
        num += (pred[i] - corr[i]).squaredNorm();
        den += corr[i].squaredNorm();
    }
    return std::sqrt(num / den);
}

std::vector<ConvergenceRecord> convergence_study(const OdeModel& model, const CmExpansion& cm,
                                                 const std::vector<StudyCell>& cells,
                                                 const std::vector<double>& amplitudes, const StudyOptions& so) {
    for (double A : amplitudes)
        if (!(A > 0)) throw std::invalid_argument("amplitudes must be positive");
    struct Job {
        size_t cell, amp;
    };
    std::vector<Job> jobs;
    for (size_t c = 0; c < cells.size(); ++c)
        for (size_t a = 0; a < amplitudes.size(); ++a) jobs.push_back({c, a});
    std::vector<ConvergenceRecord> out(jobs.size());
    auto run = [&](size_t k) {
        const StudyCell& cell = cells[jobs[k].cell];
        ConvergenceRecord& rec = out[k];
        rec.model = model.name;
        rec.method = cell.label;
        rec.variant = variant_name(cm.variant);
        rec.order = cell.options.order;
        rec.amplitude = amplitudes[jobs[k].amp];
        rec.eps = amplitude_to_eps(rec.amplitude, cm.a, cm.b, cm.variant);
        rec.delta = std::nan("");
        try {
            HomPredictor pr = sample_predictor(cm, cell.options, rec.eps, so.mesh, so.k_ratio * rec.amplitude);
            HomBvp bvp = build_bvp(model, pr);
            NewtonResult nr = newton_correct(bvp, predictor_unknowns(bvp, pr), so.newton);
            rec.delta = relative_orbit_error(pr.orbit, bvp_orbit(bvp, nr.z));
            rec.iterations = nr.iterations;
            rec.converged = true;
        } catch (const NumericError&) {
            rec.converged = false;
        } catch (const DomainError&) {
            rec.converged = false;
        }
    };
    unsigned nth = so.threads > 0 ? so.threads : std::max(1u, std::thread::hardware_concurrency());
    nth = std::min<unsigned>(nth, jobs.size());
    if (nth <= 1) {
        for (size_t k = 0; k < jobs.size(); ++k) run(k);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < nth; ++i)
            pool.emplace_back([&] {
                for (size_t k; (k = next++) < jobs.size();) run(k);
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

void write_convergence_csv(std::ostream& os, const std::vector<ConvergenceRecord>& recs) {
    os << "model,method,variant,order,amplitude,eps,delta,iterations,converged\n";
    os << std::setprecision(17);
    for (const auto& r : recs)
        os << r.model << ',' << r.method << ',' << r.variant << ',' << r.order << ',' << r.amplitude << ',' << r.eps
           << ',' << r.delta << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
}

double fitted_slope(const std::vector<ConvergenceRecord>& recs) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& r : recs) {
        if (!r.converged || !(r.delta > 0)) continue;
        double x = std::log(r.amplitude), y = std::log(r.delta);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return std::nan("");
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace bt
