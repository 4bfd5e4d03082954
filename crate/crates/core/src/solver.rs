//! The parametric linear system for the coefficients of the DR class.
//!
//! Coefficient matrices are rational and independent of `d`; only the
//! right-hand sides depend on `d`. The system is solved exactly at a set of
//! integer sample points and each coordinate is interpolated back to a
//! polynomial, after which every row is re-checked as a polynomial identity.

use serde::Serialize;

use crate::arith::{PolyQ, Rational};
use crate::chow::{TautBasis, TautClass2, TAUT_DIM};
use crate::class::Basis;
use crate::error::{Error, Result};
use crate::linalg::{rank, row_dependencies, solve_unique, Matrix, SolveFailure};
use crate::surfaces::{full_system_rows, EquationRow, SurfaceModel, SurfaceSet};

/// Right-hand sides have degree at most this in `d`.
pub const RHS_DEGREE_BOUND: usize = 4;

pub const MIN_SAMPLES: usize = RHS_DEGREE_BOUND + 2;

pub fn default_samples() -> Vec<Rational> {
    (2..=7).map(Rational::integer).collect()
}

#[derive(Clone, Debug)]
pub struct ParamSystem {
    pub rows: Vec<EquationRow>,
    pub unknowns: &'static [&'static str],
}

impl ParamSystem {
    pub fn new(rows: Vec<EquationRow>) -> Self {
        ParamSystem {
            rows,
            unknowns: TautBasis::NAMES,
        }
    }

    /// Ten surface rows, three symmetry rows and three push-forward rows.
    pub fn from_surfaces(surfaces: &[SurfaceModel]) -> Result<Self> {
        Ok(Self::new(full_system_rows(surfaces)?))
    }

    pub fn builtin() -> Self {
        Self::from_surfaces(&SurfaceSet::builtin().surfaces)
            .expect("builtin surfaces are symmetric")
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_rows(self.rows.iter().map(|r| r.coefficients.clone()).collect())
    }

    pub fn rhs_at(&self, d: &Rational) -> Vec<Rational> {
        self.rows.iter().map(|r| r.rhs.eval(d)).collect()
    }

    pub fn rank(&self) -> usize {
        rank(&self.matrix())
    }

    pub fn without_row(&self, i: usize) -> Self {
        let mut rows = self.rows.clone();
        rows.remove(i);
        Self::new(rows)
    }

    pub fn select(&self, indices: &[usize]) -> Self {
        Self::new(indices.iter().map(|&i| self.rows[i].clone()).collect())
    }

    pub fn row_index(&self, label: &str) -> Option<usize> {
        self.rows.iter().position(|r| r.label == label)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RowResidual {
    pub label: String,
    pub residual: PolyQ,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveCertificate {
    pub solution: TautClass2,
    pub rank: usize,
    pub consistent: bool,
    pub residuals: Vec<RowResidual>,
    pub samples: Vec<Rational>,
}

impl SolveCertificate {
    pub fn max_degree(&self) -> Option<usize> {
        self.solution
            .coeffs()
            .iter()
            .filter_map(PolyQ::degree)
            .max()
    }
}

pub fn solve_parametric(sys: &ParamSystem) -> Result<SolveCertificate> {
    solve_with_samples(sys, &default_samples())
}

pub fn solve_with_samples(sys: &ParamSystem, samples: &[Rational]) -> Result<SolveCertificate> {
    let a = sys.matrix();
    let r = rank(&a);
    if r < TAUT_DIM {
        return Err(Error::UnderDetermined {
            rank: r,
            unknowns: TAUT_DIM,
        });
    }
    if samples.len() < MIN_SAMPLES {
        return Err(Error::Domain(format!(
            "need at least {MIN_SAMPLES} sample points, got {}",
            samples.len()
        )));
    }

    let mut values: Vec<Vec<(Rational, Rational)>> = (0..TAUT_DIM)
        .map(|_| Vec::with_capacity(samples.len()))
        .collect();
    for d in samples {
        let x = solve_unique(&a, &sys.rhs_at(d)).map_err(|f| match f {
            SolveFailure::UnderDetermined { rank } => Error::UnderDetermined {
                rank,
                unknowns: TAUT_DIM,
            },
            SolveFailure::Inconsistent { row } => Error::Inconsistent {
                row,
                label: sys.rows[row].label.clone(),
            },
        })?;
        for (k, v) in x.into_iter().enumerate() {
            values[k].push((d.clone(), v));
        }
    }
    let coeffs = values
        .iter()
        .map(|pts| PolyQ::interpolate(pts))
        .collect::<Result<Vec<_>>>()?;
    let solution = TautClass2::from_coeffs(coeffs);

    let residuals: Vec<RowResidual> = sys
        .rows
        .iter()
        .map(|row| RowResidual {
            label: row.label.clone(),
            residual: row.residual(&solution),
        })
        .collect();
    if let Some(row) = residuals.iter().position(|r| !r.residual.is_zero()) {
        return Err(Error::Inconsistent {
            row,
            label: residuals[row].label.clone(),
        });
    }
    Ok(SolveCertificate {
        solution,
        rank: r,
        consistent: true,
        residuals,
        samples: samples.to_vec(),
    })
}

/// A row that is a rational combination of earlier independent rows.
#[derive(Clone, Debug, Serialize)]
pub struct RedundantRow {
    pub row: usize,
    pub label: String,
    pub combination: Vec<(String, Rational)>,
    /// Whether the right-hand sides satisfy the same combination.
    pub rhs_consistent: bool,
}

pub fn redundancy_report(sys: &ParamSystem) -> Vec<RedundantRow> {
    let (_, deps) = row_dependencies(&sys.matrix());
    deps.into_iter()
        .map(|dep| {
            let combined: PolyQ = dep
                .combination
                .iter()
                .map(|(j, c)| sys.rows[*j].rhs.scale(c))
                .sum();
            RedundantRow {
                row: dep.row,
                label: sys.rows[dep.row].label.clone(),
                rhs_consistent: combined == sys.rows[dep.row].rhs,
                combination: dep
                    .combination
                    .into_iter()
                    .map(|(j, c)| (sys.rows[j].label.clone(), c))
                    .collect(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::chow::{theorem1_class, theorem1_class_at};
    use crate::linalg::{rref, solve_particular};
    use crate::surfaces::symmetry_rows;

    #[test]
    fn builtin_system_recovers_the_class() {
        let sys = ParamSystem::builtin();
        assert_eq!(sys.rows.len(), 16);
        let cert = solve_parametric(&sys).unwrap();
        assert_eq!(cert.rank, 14);
        assert!(cert.consistent);
        assert!(cert.residuals.iter().all(|r| r.residual.is_zero()));
        assert_eq!(cert.solution, theorem1_class());
        assert_eq!(cert.max_degree(), Some(4));
        assert!(cert.solution.evaluate(&q(1, 1)).is_zero());
    }

    #[test]
    fn sample_independence() {
        let sys = ParamSystem::builtin();
        let a = solve_with_samples(&sys, &default_samples()).unwrap();
        let b =
            solve_with_samples(&sys, &(3..=8).map(Rational::integer).collect::<Vec<_>>()).unwrap();
        assert_eq!(a.solution, b.solution);
    }

    #[test]
    fn too_few_samples() {
        let sys = ParamSystem::builtin();
        let few: Vec<_> = (2..=5).map(Rational::integer).collect();
        assert!(matches!(
            solve_with_samples(&sys, &few),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn symmetry_rows_alone_are_under_determined() {
        let sys = ParamSystem::new(symmetry_rows());
        assert_eq!(sys.rank(), 3);
        assert!(matches!(
            solve_parametric(&sys),
            Err(Error::UnderDetermined {
                rank: 3,
                unknowns: 14
            })
        ));
    }

    #[test]
    fn corrupted_rhs_is_inconsistent() {
        let mut sys = ParamSystem::builtin();
        let i = sys.row_index("family01").unwrap();
        sys.rows[i].rhs = &sys.rows[i].rhs + &PolyQ::one();
        assert!(matches!(
            solve_parametric(&sys),
            Err(Error::Inconsistent { .. })
        ));

        // independent check at d = 2: the augmented matrix gains rank
        let d = q(2, 1);
        let b = sys.rhs_at(&d);
        assert!(solve_particular(&sys.matrix(), &b).is_none());
        let mut aug = sys.matrix().to_rows();
        for (row, v) in aug.iter_mut().zip(b) {
            row.push(v);
        }
        assert_eq!(rref(&Matrix::from_rows(aug)).rank(), 15);
    }

    #[test]
    fn two_redundant_rows() {
        let sys = ParamSystem::builtin();
        let report = redundancy_report(&sys);
        assert_eq!(report.len(), 2);
        assert!(report.iter().all(|r| r.rhs_consistent));
        for r in &report {
            let reduced = sys.without_row(r.row);
            assert_eq!(reduced.rank(), 14);
            assert_eq!(
                solve_parametric(&reduced).unwrap().solution,
                theorem1_class()
            );
        }
    }

    #[test]
    fn surface_rows_alone() {
        let sys = ParamSystem::builtin().select(&(0..10).collect::<Vec<_>>());
        let r = sys.rank();
        assert!(r <= 10);
        let report = redundancy_report(&sys);
        assert_eq!(report.len(), 10 - r);
        assert!(report.iter().all(|d| d.rhs_consistent));
    }

    #[test]
    fn single_row_has_no_dependencies() {
        let sys = ParamSystem::builtin().select(&[0]);
        assert!(redundancy_report(&sys).is_empty());
    }

    #[test]
    fn numeric_solve_matches_at_each_sample() {
        let sys = ParamSystem::builtin();
        for d in 2..=9 {
            let d = q(d, 1);
            let x = solve_unique(&sys.matrix(), &sys.rhs_at(&d)).unwrap();
            assert_eq!(TautClass2::from_rationals(x), theorem1_class_at(&d));
        }
    }
}
