//! Test surfaces as intersection lattices, and the linear equations they
//! impose on the coefficients of a degree-2 class.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{PolyQ, Rational};
use crate::chow::{
    basis_monomials, expand, slot, FormalExpr, Generator, Monomial2, TautBasis, TautClass2,
    TAUT_DIM,
};
use crate::class::Basis;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::m21;

/// On-disk form of a surface.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub family: u32,
    pub name: String,
    pub generators: Vec<String>,
    pub gram: Vec<Vec<Rational>>,
    #[serde(default)]
    pub restrictions: BTreeMap<String, Vec<Rational>>,
    pub rhs: PolyQ,
    pub rationale: String,
}

#[derive(Clone, Debug)]
pub struct SurfaceModel {
    pub family: u32,
    pub name: String,
    pub generators: Vec<String>,
    pub gram: Matrix,
    /// Indexed by [`Generator::index`]; absent generators restrict to zero.
    pub restrictions: Vec<Vec<Rational>>,
    pub rhs: PolyQ,
    pub rationale: String,
}

impl SurfaceModel {
    pub fn label(&self) -> String {
        format!("family{:02}", self.family)
    }

    pub fn from_file(file: SurfaceFile) -> Result<Self> {
        let n = file.generators.len();
        let label = format!("family{:02}", file.family);
        let bad = |reason: String| Error::MalformedSurface {
            surface: label.clone(),
            reason,
        };
        if n == 0 {
            return Err(bad("no generators".into()));
        }
        if file.gram.len() != n || file.gram.iter().any(|r| r.len() != n) {
            return Err(bad(format!("gram matrix must be {n}x{n}")));
        }
        let mut restrictions = vec![vec![Rational::zero(); n]; Generator::ALL.len()];
        for (key, v) in file.restrictions {
            let g = Generator::from_name(&key)
                .ok_or_else(|| bad(format!("unknown divisor generator {key:?}")))?;
            if v.len() != n {
                return Err(bad(format!(
                    "restriction of {key} has length {}, expected {n}",
                    v.len()
                )));
            }
            restrictions[g.index()] = v;
        }
        Ok(SurfaceModel {
            family: file.family,
            name: file.name,
            generators: file.generators,
            gram: Matrix::from_rows(file.gram),
            restrictions,
            rhs: file.rhs,
            rationale: file.rationale,
        })
    }

    pub fn to_file(&self) -> SurfaceFile {
        let restrictions = Generator::ALL
            .iter()
            .filter(|g| self.restrictions[g.index()].iter().any(|x| !x.is_zero()))
            .map(|g| (g.name().to_string(), self.restrictions[g.index()].clone()))
            .collect();
        SurfaceFile {
            family: self.family,
            name: self.name.clone(),
            generators: self.generators.clone(),
            gram: self.gram.to_rows(),
            restrictions,
            rhs: self.rhs.clone(),
            rationale: self.rationale.clone(),
        }
    }

    pub fn restriction(&self, g: Generator) -> &[Rational] {
        &self.restrictions[g.index()]
    }

    /// Intersection number of two restricted divisors.
    pub fn pair(&self, a: Generator, b: Generator) -> Rational {
        self.gram.bilinear(self.restriction(a), self.restriction(b))
    }

    pub fn pair_monomial(&self, m: Monomial2) -> Rational {
        let (a, b) = m.factors();
        self.pair(a, b)
    }

    /// Pairing extended linearly to formal degree-2 expressions.
    pub fn pair_formal(&self, e: &FormalExpr) -> PolyQ {
        let values: Vec<Rational> = Monomial2::all().map(|m| self.pair_monomial(m)).collect();
        e.coeffs()
            .iter()
            .zip(&values)
            .filter(|(_, v)| !v.is_zero())
            .map(|(p, v)| p.scale(v))
            .sum()
    }

    pub fn check_symmetric(&self) -> Result<()> {
        match self.gram.first_asymmetry() {
            None => Ok(()),
            Some((row, col)) => Err(Error::AsymmetricGram {
                surface: self.label(),
                row,
                col,
            }),
        }
    }
}

/// A linear functional on the degree-2 basis together with its target value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationRow {
    pub label: String,
    pub coefficients: Vec<Rational>,
    pub rhs: PolyQ,
}

impl EquationRow {
    pub fn new(label: impl Into<String>, coefficients: Vec<Rational>, rhs: PolyQ) -> Self {
        assert_eq!(coefficients.len(), TAUT_DIM);
        EquationRow {
            label: label.into(),
            coefficients,
            rhs,
        }
    }

    pub fn apply(&self, c: &TautClass2) -> PolyQ {
        c.pair(&self.coefficients)
    }

    pub fn residual(&self, c: &TautClass2) -> PolyQ {
        &self.apply(c) - &self.rhs
    }

    /// The row with its psi1/psi2-indexed slots exchanged.
    pub fn swapped(&self) -> Self {
        let mut coefficients = self.coefficients.clone();
        for (a, b) in [
            (slot::PSI1D11, slot::PSI2D11),
            (slot::PSI1D12, slot::PSI2D12),
            (slot::PSI1D0, slot::PSI2D0),
        ] {
            coefficients.swap(a, b);
        }
        EquationRow {
            label: self.label.clone(),
            coefficients,
            rhs: self.rhs.clone(),
        }
    }
}

impl fmt::Display for EquationRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, c) in TautBasis::NAMES.iter().zip(&self.coefficients) {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", c.abs())
            } else {
                ("+", c.clone())
            };
            match (first, sign) {
                (true, "-") => write!(f, "-")?,
                (true, _) => {}
                (false, s) => write!(f, " {s} ")?,
            }
            if mag.is_one() {
                write!(f, "A[{name}]")?;
            } else {
                write!(f, "{mag}*A[{name}]")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " = {}", self.rhs)
    }
}

pub fn equation_row(s: &SurfaceModel) -> Result<EquationRow> {
    s.check_symmetric()?;
    let coefficients = (0..TAUT_DIM)
        .map(|k| {
            basis_monomials(k)
                .into_iter()
                .map(|m| s.pair_monomial(m))
                .sum()
        })
        .collect();
    Ok(EquationRow::new(s.label(), coefficients, s.rhs.clone()))
}

pub fn symmetry_rows() -> Vec<EquationRow> {
    [
        ("symmetry:psi*d11", slot::PSI1D11, slot::PSI2D11),
        ("symmetry:psi*d12", slot::PSI1D12, slot::PSI2D12),
        ("symmetry:psi*d0", slot::PSI1D0, slot::PSI2D0),
    ]
    .into_iter()
    .map(|(label, a, b)| {
        let mut c = vec![Rational::zero(); TAUT_DIM];
        c[a] = Rational::one();
        c[b] = -Rational::one();
        EquationRow::new(label, c, PolyQ::zero())
    })
    .collect()
}

/// One row per coordinate of the push-forward to the 1-pointed space.
pub fn pushforward_rows() -> Vec<EquationRow> {
    let target = m21::expected_pushforward_class();
    let functionals = m21::pushforward_functionals();
    <m21::M21Basis as Basis>::NAMES
        .iter()
        .zip(functionals)
        .enumerate()
        .map(|(j, (name, f))| {
            EquationRow::new(format!("pushforward:{name}"), f, target.get(j).clone())
        })
        .collect()
}

/// Surface rows, then symmetry rows, then push-forward rows.
pub fn full_system_rows(surfaces: &[SurfaceModel]) -> Result<Vec<EquationRow>> {
    let mut rows = surfaces
        .iter()
        .map(equation_row)
        .collect::<Result<Vec<_>>>()?;
    rows.extend(symmetry_rows());
    rows.extend(pushforward_rows());
    Ok(rows)
}

/// Checks that the surface pairing respects a relation given as a formal
/// expression.
pub fn kills(s: &SurfaceModel, relation: &FormalExpr) -> bool {
    s.pair_formal(relation).is_zero()
}

/// Pairing of a reduced class with a surface, via its formal expansion.
pub fn pair_class(s: &SurfaceModel, c: &TautClass2) -> PolyQ {
    s.pair_formal(&expand(c))
}

/// Intersection numbers each family is known to have, as
/// `(family, a, b, a*b)`.
pub fn golden_numbers() -> Vec<(u32, Generator, Generator, Rational)> {
    use Generator::*;
    let table: &[(u32, Generator, Generator, i64)] = &[
        (1, Psi1, Psi1, 2),
        (1, Psi2, Psi2, 2),
        (1, Psi1, Psi2, 6),
        (1, Delta2, Delta2, -2),
        (2, Psi1, Psi2, 1),
        (2, Psi1, Delta11, -1),
        (2, Psi2, Delta11, -1),
        (2, Psi1, Delta12, 1),
        (2, Psi2, Delta12, 1),
        (3, Delta0, Delta0, 288),
        (3, Delta0, Delta12, -24),
        (4, Psi2, Delta12, -1),
        (4, Psi2, Delta0, 12),
        (4, Delta0, Delta11, -12),
        (4, Delta0, Delta12, 12),
        (5, Psi1, Psi1, 1),
        (5, Psi1, Delta11, -1),
        (5, Psi1, Delta0, 12),
        (5, Delta0, Delta12, 12),
        (5, Delta0, Delta11, -12),
        (6, Delta0, Delta12, 12),
        (6, Delta0, Delta0, -44),
        (7, Delta2, Delta2, 1),
        (7, Delta12, Delta2, 1),
        (7, Delta0, Delta2, -12),
        (8, Delta12, Delta2, 1),
        (8, Delta0, Delta2, -12),
        (9, Psi1, Delta12, -1),
        (9, Psi1, Delta0, 12),
        (9, Psi2, Delta12, -1),
        (9, Psi2, Delta0, 12),
        (10, Delta2, Delta2, 1),
        (10, Delta12, Delta2, -2),
        (10, Delta0, Delta2, 4),
    ];
    table
        .iter()
        .map(|&(n, a, b, v)| (n, a, b, Rational::integer(v)))
        .collect()
}

const BUILTIN: [(&str, &str); 10] = [
    (
        "family01.json",
        include_str!("../fixtures/surfaces/family01.json"),
    ),
    (
        "family02.json",
        include_str!("../fixtures/surfaces/family02.json"),
    ),
    (
        "family03.json",
        include_str!("../fixtures/surfaces/family03.json"),
    ),
    (
        "family04.json",
        include_str!("../fixtures/surfaces/family04.json"),
    ),
    (
        "family05.json",
        include_str!("../fixtures/surfaces/family05.json"),
    ),
    (
        "family06.json",
        include_str!("../fixtures/surfaces/family06.json"),
    ),
    (
        "family07.json",
        include_str!("../fixtures/surfaces/family07.json"),
    ),
    (
        "family08.json",
        include_str!("../fixtures/surfaces/family08.json"),
    ),
    (
        "family09.json",
        include_str!("../fixtures/surfaces/family09.json"),
    ),
    (
        "family10.json",
        include_str!("../fixtures/surfaces/family10.json"),
    ),
];

/// Loaded surfaces with the sha256 of each source document.
#[derive(Clone, Debug)]
pub struct SurfaceSet {
    pub surfaces: Vec<SurfaceModel>,
    pub checksums: BTreeMap<String, String>,
}

pub fn parse_surface(name: &str, text: &str) -> Result<SurfaceModel> {
    let file: SurfaceFile = serde_json::from_str(text).map_err(|source| Error::Fixture {
        name: name.to_string(),
        source,
    })?;
    SurfaceModel::from_file(file)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl SurfaceSet {
    fn from_sources<'a>(sources: impl IntoIterator<Item = (String, &'a str)>) -> Result<Self> {
        let mut surfaces = Vec::new();
        let mut checksums = BTreeMap::new();
        for (name, text) in sources {
            surfaces.push(parse_surface(&name, text)?);
            checksums.insert(name, sha256_hex(text.as_bytes()));
        }
        surfaces.sort_by_key(|s| s.family);
        Ok(SurfaceSet {
            surfaces,
            checksums,
        })
    }

    pub fn builtin() -> Self {
        Self::from_sources(BUILTIN.iter().map(|(n, t)| (n.to_string(), *t)))
            .expect("builtin surface fixtures parse")
    }

    /// Loads every `*.json` file in `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .map(|e| e.map(|e| e.path()))
            .collect::<std::io::Result<_>>()?;
        paths.retain(|p| p.extension().is_some_and(|e| e == "json"));
        paths.sort();
        if paths.is_empty() {
            return Err(Error::MalformedSurface {
                surface: dir.display().to_string(),
                reason: "no surface fixtures found".into(),
            });
        }
        let texts = paths
            .iter()
            .map(|p| {
                let name = p
                    .file_name()
                    .unwrap_or_default()
                    .to_string_lossy()
                    .into_owned();
                std::fs::read_to_string(p).map(|t| (name, t))
            })
            .collect::<std::io::Result<Vec<_>>>()?;
        Self::from_sources(texts.iter().map(|(n, t)| (n.clone(), t.as_str())))
    }
}

pub fn builtin_surfaces() -> Vec<SurfaceModel> {
    SurfaceSet::builtin().surfaces
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::q;
    use crate::chow::{relations, swap_markings, theorem1_class};
    use proptest::prelude::*;

    fn surface(n: u32) -> SurfaceModel {
        builtin_surfaces()
            .into_iter()
            .find(|s| s.family == n)
            .unwrap()
    }

    #[test]
    fn displayed_numbers() {
        let all = builtin_surfaces();
        for (n, a, b, v) in golden_numbers() {
            let s = all.iter().find(|s| s.family == n).unwrap();
            assert_eq!(s.pair(a, b), v, "family {n}: {a:?}*{b:?}");
        }
    }

    #[test]
    fn rows_of_selected_families() {
        let row = |n| equation_row(&surface(n)).unwrap();
        let mut r1 = vec![q(0, 1); TAUT_DIM];
        r1[slot::PSI1PSI2] = q(6, 1);
        r1[slot::PSI_SQ_SUM] = q(4, 1);
        r1[slot::D2SQ] = q(-2, 1);
        assert_eq!(row(1).coefficients, r1);
        assert_eq!(row(1).rhs, PolyQ::from_ints(&[-2, 0, 0, 0, 2]));

        let mut r3 = vec![q(0, 1); TAUT_DIM];
        r3[slot::D0SQ] = q(288, 1);
        r3[slot::D0D12] = q(-24, 1);
        assert_eq!(row(3).coefficients, r3);
        assert!(row(3).rhs.is_zero());

        let mut r9 = vec![q(0, 1); TAUT_DIM];
        r9[slot::PSI1D12] = q(-1, 1);
        r9[slot::PSI1D0] = q(12, 1);
        r9[slot::PSI2D12] = q(-1, 1);
        r9[slot::PSI2D0] = q(12, 1);
        assert_eq!(row(9).coefficients, r9);
    }

    #[test]
    fn surfaces_kill_relations() {
        for s in builtin_surfaces() {
            for r in relations() {
                assert!(kills(&s, &r.expr), "family {} vs {}", s.family, r.name);
            }
        }
    }

    #[test]
    fn every_row_holds_for_the_dr_class() {
        let c = theorem1_class();
        let rows = full_system_rows(&builtin_surfaces()).unwrap();
        assert_eq!(rows.len(), 16);
        for row in &rows {
            assert!(row.residual(&c).is_zero(), "{}: {row}", row.label);
        }
        // pairing through the formal expansion agrees with the row
        for s in builtin_surfaces() {
            assert_eq!(pair_class(&s, &c), s.rhs);
        }
    }

    #[test]
    fn pushforward_rows_match_m21() {
        let rows = pushforward_rows();
        assert_eq!(rows[0].coefficients[slot::PSI1PSI2], q(3, 1));
        assert_eq!(rows[0].coefficients[slot::PSI_SQ_SUM], q(2, 1));
        assert_eq!(rows[0].coefficients[slot::D2SQ], q(-1, 1));
        assert_eq!(rows[0].rhs, PolyQ::from_ints(&[-1, 0, 0, 0, 1]));
        assert_eq!(rows[1].coefficients[slot::PSI_SQ_SUM], q(1, 5));
        assert_eq!(rows[2].coefficients[slot::PSI_SQ_SUM], q(7, 5));
        let f = crate::chow::d2_minus_1() * PolyQ::from_ints(&[6, 0, 1]);
        assert_eq!(rows[1].rhs, f.scale(&q(-1, 60)));
        assert_eq!(rows[2].rhs, f.scale(&q(-1, 5)));
        // rows are the coordinate functionals of the push-forward
        for k in 0..TAUT_DIM {
            let img = m21::pushforward_pi(&TautClass2::unit(k), m21::Marking::First);
            for (j, row) in rows.iter().enumerate() {
                assert_eq!(PolyQ::constant(row.coefficients[k].clone()), *img.get(j));
            }
        }
    }

    #[test]
    fn symmetry_rows_shape() {
        let rows = symmetry_rows();
        assert_eq!(rows[0].coefficients[slot::PSI1D11], q(1, 1));
        assert_eq!(rows[0].coefficients[slot::PSI2D11], q(-1, 1));
        assert_eq!(rows[2].coefficients[slot::PSI2D0], q(-1, 1));
        assert!(rows.iter().all(|r| r.rhs.is_zero()));
    }

    #[test]
    fn asymmetric_gram_is_rejected() {
        let mut s = surface(1);
        s.gram.set(0, 1, q(2, 1));
        assert!(matches!(
            equation_row(&s),
            Err(Error::AsymmetricGram { row: 0, col: 1, .. })
        ));
    }

    #[test]
    fn malformed_files() {
        let mut f = surface(2).to_file();
        f.restrictions.insert("psi3".into(), vec![q(1, 1), q(0, 1)]);
        assert!(SurfaceModel::from_file(f).is_err());
        let mut f = surface(2).to_file();
        f.gram.pop();
        assert!(SurfaceModel::from_file(f).is_err());
        assert!(parse_surface("x", "{}").is_err());
    }

    #[test]
    fn file_round_trip() {
        for s in builtin_surfaces() {
            let back = SurfaceModel::from_file(s.to_file()).unwrap();
            assert_eq!(equation_row(&back).unwrap(), equation_row(&s).unwrap());
        }
    }

    #[test]
    fn directory_loading_matches_builtin() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/surfaces");
        let loaded = SurfaceSet::load_dir(&dir).unwrap();
        let builtin = SurfaceSet::builtin();
        assert_eq!(loaded.checksums, builtin.checksums);
        assert_eq!(loaded.checksums.len(), 10);
    }

    #[test]
    fn row_display() {
        let r = equation_row(&surface(1)).unwrap();
        assert_eq!(
            r.to_string(),
            "6*A[psi1psi2] + 4*A[psi1sq+psi2sq] - 2*A[d2sq] = 2*d^4 - 2"
        );
    }

    fn arb_class() -> impl Strategy<Value = TautClass2> {
        proptest::collection::vec(-20i64..20, TAUT_DIM)
            .prop_map(|v| TautClass2::from_rationals(v.into_iter().map(|x| q(x, 1)).collect()))
    }

    proptest! {
        #[test]
        fn symmetric_families_are_swap_invariant(c in arb_class()) {
            for n in [1, 2, 3, 9] {
                let row = equation_row(&surface(n)).unwrap();
                prop_assert_eq!(row.apply(&swap_markings(&c)), row.apply(&c));
                prop_assert_eq!(row.swapped().apply(&c), row.apply(&c));
            }
        }
    }
}
