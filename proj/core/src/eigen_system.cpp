#include "fdrec/eigen_system.hpp"

#include <Eigen/Dense>
#include <string>

#include "fdrec/errors.hpp"

namespace fdrec {

namespace {

// Largest coefficient of non-negligible magnitude decides the sign, so equal
// subspaces computed along different routes serialize identically.
void fix_column_signs(Eigen::MatrixXd& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        const double scale = vectors.col(j).cwiseAbs().maxCoeff();
        if (scale == 0.0) {
            continue;
        }
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            const double v = vectors(i, j);
            if (std::abs(v) > 1e-12 * scale) {
                if (v < 0.0) {
                    vectors.col(j) = -vectors.col(j);
                }
                break;
            }
        }
    }
}

void clamp_eigenvalues(Eigen::VectorXd& values) {
    if (values.size() == 0) {
        return;
    }
    const double floor = kEigenClampRel * std::max(values[0], 0.0);
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values[i] < floor) {
            values[i] = 0.0;
        }
    }
}

}  // namespace

SymEigen sym_eigen(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) {
        throw InvalidInput("sym_eigen: matrix is " + std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()) + ", expected square");
    }
    if (!m.allFinite()) {
        throw InvalidInput("sym_eigen: matrix contains non-finite values");
    }
    const double scale = m.size() > 0 ? m.cwiseAbs().maxCoeff() : 0.0;
    const double asym = m.size() > 0 ? (m - m.transpose()).cwiseAbs().maxCoeff() : 0.0;
    if (asym > 1e-8 * std::max(scale, 1e-300)) {
        throw InvalidInput("sym_eigen: matrix asymmetry " + std::to_string(asym) +
                           " exceeds tolerance");
    }

    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw InvalidInput("sym_eigen: eigensolver failed to converge");
    }

    // Solver returns ascending order; flip to descending.
    SymEigen out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    fix_column_signs(out.vectors);
    return out;
}

Eigen::Index EigenSystem::positive_count() const {
    Eigen::Index count = 0;
    while (count < eigenvalues.size() && eigenvalues[count] > 0.0) {
        ++count;
    }
    return count;
}

Eigen::MatrixXd EigenSystem::projector(Eigen::Index k) const {
    if (k < 0 || k > eigenvectors.cols()) {
        throw InvalidInput("projector: k out of range");
    }
    return eigenvectors.leftCols(k) * eigenvectors.leftCols(k).transpose();
}

EigenSystem gram_eigen(const Panel& panel) {
    const Eigen::Index t = panel.num_curves();
    const Eigen::Index p = panel.num_points();
    if (t < 1) {
        throw InvalidInput("gram_eigen: panel has no curves");
    }
    const Eigen::MatrixXd& y = panel.values();

    EigenSystem out;
    out.panel_width = p;

    if (t <= p) {
        // Direct decomposition in sample space.
        const Eigen::MatrixXd gram = (y * y.transpose()) / static_cast<double>(t);
        SymEigen se = sym_eigen(gram);
        clamp_eigenvalues(se.values);
        out.eigenvalues = std::move(se.values);
        out.eigenvectors = std::move(se.vectors);
    } else {
        // Work on the p x p side and map eigenvectors across: if w solves
        // (Y^T Y / T) w = g w, then v = Y w / |Y w| solves (Y Y^T / T) v = g v.
        const Eigen::MatrixXd gram = (y.transpose() * y) / static_cast<double>(t);
        SymEigen se = sym_eigen(gram);
        clamp_eigenvalues(se.values);

        const Eigen::Index rank = [&] {
            Eigen::Index r = 0;
            while (r < se.values.size() && se.values[r] > 0.0) ++r;
            return r;
        }();

        // The system carries min(T,p) = p columns in the T-dimensional space.
        out.eigenvalues = se.values;
        out.eigenvectors = Eigen::MatrixXd::Zero(t, p);
        for (Eigen::Index i = 0; i < rank; ++i) {
            Eigen::VectorXd v = y * se.vectors.col(i);
            const double norm = v.norm();
            if (norm == 0.0) {
                throw SingularEigenvalue("gram_eigen: zero image for positive eigenvalue " +
                                         std::to_string(i));
            }
            out.eigenvectors.col(i) = v / norm;
        }

        // Columns for zero eigenvalues cannot be mapped through Y (the image
        // vanishes); fill them deterministically by orthonormalizing standard
        // basis vectors against the columns collected so far. Anything
        // orthogonal to the column span of Y is a valid eigenvector for
        // eigenvalue zero.
        Eigen::Index filled = rank;
        for (Eigen::Index k = 0; k < t && filled < p; ++k) {
            Eigen::VectorXd cand = Eigen::VectorXd::Unit(t, k);
            // Two Gram-Schmidt passes keep orthogonality near machine precision.
            for (int pass = 0; pass < 2; ++pass) {
                cand -= out.eigenvectors.leftCols(filled) *
                        (out.eigenvectors.leftCols(filled).transpose() * cand);
            }
            const double norm = cand.norm();
            if (norm > 1e-4) {
                out.eigenvectors.col(filled++) = cand / norm;
            }
        }
        if (filled < p) {
            throw SingularEigenvalue("gram_eigen: basis completion failed");
        }
        fix_column_signs(out.eigenvectors);
    }

    out.scaled = out.eigenvalues / static_cast<double>(p);
    return out;
}

}  // namespace fdrec
